"""Factorial-ratio families built from residues coprime to N.

Run with ``python demos/zudilin_maps.py``.
"""
from mirrormaps.certify import empirical_max_root
from mirrormaps.coefficients import bbN, divisor_vector, zudilin_data
from mirrormaps.maps import build_bold_q, build_qLN, build_qN, picard_fuchs_check

for N in (4, 6, 12, 30):
    d = zudilin_data(N)
    print(f"N={N}: phi={d.phi} C={d.C} alpha={d.alpha} beta={d.beta}")
    print("   first coefficients", [str(bbN(N, m)) for m in range(5)])

# a map over the full divisor vector coincides with the plain q_N
for N in (9, 12, 35):
    vec = divisor_vector(N)
    same = build_bold_q(vec, 20).q == build_qN(N, 1, 20).q
    print(f"divisor vector {vec}: equals q_{N} -> {same}")

print("roots of the (6) maps, L = 1..6:",
      [empirical_max_root(build_qLN((6,), L, 60, "zudilin").q, 13).value for L in range(1, 7)])

for vec in [(5,), (6,), (3, 3)]:
    print(f"differential operator for {vec}:", picard_fuchs_check(vec, 25).detail)
