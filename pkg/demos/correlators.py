"""
Two-point functions for sl_2
============================

The highest-weight matrix element of Phi Phi is an infinite product in
z1/z2.  Here it is computed exactly to order 8 and compared with closed forms.
"""

from qvertex import vo
from qvertex.intertwiners import correlator, correlator_report

N = 8

# %%
ops = [(vo("I", 0, 1, 2), "z2"), (vo("I", 1, 0, 2), "z1")]
res = correlator(ops, N)
print("coefficient:", res.coefficient)
print("z powers:", dict(res.zpowers))
s = res.series[("z2", "z1")]
for k in range(5):
    print(f"  x^{k}:", s.coeff(k))

# %%
# Comparison with the closed forms.  A mismatch shows up as "fail", a known
# mismatch with a displayed formula as "discrepancy".
rep = correlator_report(N)
for c in rep.checks:
    print(f"{c.status:>11}  {c.name}")
