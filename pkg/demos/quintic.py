"""The quintic end to end: mirror map, its best root, and instanton numbers.

Run with ``python demos/quintic.py``.
"""
from gmpy2 import mpq

from mirrormaps.certify import empirical_max_root, root_report
from mirrormaps.maps import build_qN
from mirrormaps.series import reversion
from mirrormaps.yukawa import instanton_numbers

ORDER = 120

inst = build_qN(5, 1, ORDER)
print("q(z) = z + " + " + ".join(f"{inst.q[m]} z^{m}" for m in range(2, 5)) + " + ...")
print("integral to order", ORDER, ":", inst.q.is_integral())

# (q/z)^(1/10) is still integral; one more factor of any prime breaks it
unit = inst.normalized
print("1/10 root integral:", root_report(unit, mpq(1, 10)).passed)
for p in (2, 3, 5, 7, 11):
    rep = root_report(unit, mpq(1, 10 * p))
    print(f"  1/{10 * p:<3d} first bad index {rep.witness_index}")

best = empirical_max_root(unit, 13)
print("largest root found by search:", best.value, f"({best.label})")

z_of_q = reversion(inst.q)
print("inverse map z(q) starts", [str(c) for c in z_of_q.coeffs[:5]])

res = instanton_numbers((5,), 8)
for d, n in enumerate(res.n, start=1):
    print(f"n_{d} = {n}")
