# %% [markdown]
# Words, longest elements and finite quotients

# %%
from coxsplit import (cayley_enumerate, is_w0_central, longest_element, normalizer_evidence,
                      parse_coxeter_system, parse_word, format_word, search_quotients,
                      separate_element, shortlex_normal_form, tits_reduce_oracle)

h3 = parse_coxeter_system(open("demos/systems/h3.cox").read())
w = parse_word(h3, "s2 s1 s2 s1 s2 s3 s2 s3")
nf = shortlex_normal_form(h3, w)
print(format_word(h3, nf.letters), nf.length, tits_reduce_oracle(h3, w) == nf)

# %%
table = cayley_enumerate(h3, range(3))
w0 = longest_element(h3, range(3))
print(len(table), "elements; w0 has length", len(w0), "central:", is_w0_central(h3, range(3)))

# %% [markdown]
# The infinite dihedral group is residually finite: every nontrivial
# element survives in some permutation quotient.

# %%
dinf = parse_coxeter_system(open("demos/systems/infinite_dihedral.cox").read())
for text in ["s t", "s t s t", "s t s t s t"]:
    q = separate_element(dinf, parse_word(dinf, text), 6)
    print(f"{text:12} -> {q}")

# %%
for q in search_quotients(dinf, 3, max_count=20):
    ev = normalizer_evidence(dinf, [0], q)
    print(q, " |N| =", ev.result_order, "tight" if ev.tight else "")
