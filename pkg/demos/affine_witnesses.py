# %% [markdown]
# Witnesses in affine and hyperbolic Coxeter groups
#
# For each maximal spherical subset T the parabolic W_T is a maximal finite
# subgroup; certify_bp records why it is an Aut-splitting witness.

# %%
from coxsplit import (certify_bp, classify_finite_type, enumerate_spherical_subsets,
                      maximal_spherical_subsets, order_of, parse_coxeter_system, verify_certificate)

affine = parse_coxeter_system(open("demos/systems/affine_a2.cox").read())
for t in enumerate_spherical_subsets(affine):
    d = classify_finite_type(affine, t)
    print(t, d, order_of(d))

# %% [markdown]
# The whole triangle is not spherical (its Gram matrix has a kernel), so the
# three edges are the maximal spherical subsets.

# %%
for t in maximal_spherical_subsets(affine):
    cert = certify_bp(affine, t)
    print(t, cert.overall, verify_certificate(affine, cert))

# %%
cert = certify_bp(affine, [0])
print(cert.overall, "at", cert.first_failure.condition_id)
print(cert.first_failure.evidence)

# %% [markdown]
# In the universal group every pair generates an infinite dihedral group,
# so the witnesses are exactly the single generators.

# %%
universal = parse_coxeter_system(open("demos/systems/universal3.cox").read())
for t in maximal_spherical_subsets(universal):
    print(t, certify_bp(universal, t).overall)
