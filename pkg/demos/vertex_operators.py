"""
Vertex operators: normalization and normal ordering
===================================================

Builds the four families of level one vertex operators for sl_2 and sl_3,
checks their leading coefficients, then the product identities at K modes.
Some n=3 sign checks fail; they are reported, not hidden.
"""

from qvertex import verify_normalization, vo
from qvertex.intertwiners import thm35_report, verify_ope

# %%
# One component, written out: type I, sector 0, component j = 0.
op = vo("I", 0, 0, 2)
print(op)

# %%
for n in (2, 3):
    rep = verify_normalization(n)
    print(rep.summary())
    for c in rep.failures():
        print("   failing:", c.name)

# %%
# The normal-ordering identities.  n=2 passes; n=3 has a sign mismatch in
# one of the four identities.
for n in (2, 3):
    print(thm35_report(n, 20).summary())

# %%
# Commutation relations with the currents, type I operators, n=2.
rep = verify_ope(2, "typeI", 2, 2)
print(rep.summary())
