# %% [markdown]
# Gram matrices in Q(zeta_N)
#
# Entries -cos(pi/m) live in a cyclotomic field, so definiteness and
# degeneracy are decided exactly, with no floating-point threshold.

# %%
from fractions import Fraction

from coxsplit import (cos_pi_over, determinant, gram_matrix, is_positive_definite, nullity,
                      parse_coxeter_system, sign_of)

c = cos_pi_over(5)
print(c, float(c))
print(4 * c * c - 2 * c - 1 == 0)  # cos(pi/5) is (1 + sqrt 5) / 4

# %%
for name in ["h3", "affine_a2", "affine_b2", "universal3"]:
    s = parse_coxeter_system(open(f"demos/systems/{name}.cox").read())
    g = gram_matrix(s)
    print(f"{name:12} det {float(determinant(g)):+.6f}  PD {is_positive_definite(g)}  nullity {nullity(g)}")

# %% [markdown]
# Signs are certified by interval sums whose precision doubles until the
# interval leaves zero.  A high power of cos(pi/5) - 1/2 cancels badly in
# the polynomial basis and needs 256 bits.

# %%
x = (c - Fraction(1, 2)) ** 100
for bits in (64, 128, 256):
    lo, hi = x.interval(bits)
    print(bits, float(lo), float(hi))
print("sign", sign_of(x))
