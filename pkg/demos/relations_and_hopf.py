"""
Defining relations and Hopf structure on the level one Fock modules
===================================================================

Every check below is exact: series coefficients are rational functions of
q^{1/2} and nothing is evaluated numerically.
"""

from qvertex import verify_def21, verify_hopf, verify_rmatrix

# %%
# The Drinfeld relations for sl_2 acting on the vacuum sector, boson
# degree up to 2 and a window of two modes on each side.
rep = verify_def21(2, sector=0, D=2, M=2)
for c in rep.checks:
    print(f"{c.status:>6}  {c.name}")
print(rep.summary())

# %%
# Same for sl_3 but only the Serre relations, which are the slow ones.
rep = verify_def21(3, 0, 1, 1, only=lambda name: "Serre" in name)
print(rep.summary())

# %%
# Counit and antipode identities, then the coproduct pushed through the
# defining relations on F_0 (x) F_0 at the smallest useful truncation.
rep = verify_hopf(2, 1, 1, parts=("counit", "antipode"))
print(rep.summary())

# %%
# The R-matrix on the two dimensional evaluation representation intertwines
# the coproduct with its opposite mode by mode.
rep = verify_rmatrix(6, 2)
print(rep.summary())
