"""Where harmonic numbers pick up powers of p.

Run with ``python demos/harmonic_scan.py``. The scan keeps p^e H_N modulo a
fixed power of p, so N up to a million takes a couple of seconds.
"""
import time

from mirrormaps.scanner import scan, scan_histogram, wolstenholme_scan

for p, shift in [(3, 0), (5, 0), (3, 1), (5, 1)]:
    hits = [h.N for h in scan(p, 100_000, shift, 1, 6)]
    label = "H_N" if shift == 0 else "H_N - 1"
    print(f"p={p}: v_p({label}) > 0 for N in {hits}")

t = time.perf_counter()
deep = [(h.N, h.valuation) for h in scan(11, 1_000_000, 0, 3, 8)]
print(f"p=11, N <= 10^6, valuation >= 3: {deep}  ({time.perf_counter() - t:.1f}s)")

print("v_7(H_N) histogram for N <= 5000:", scan_histogram(7, 5000))

t = time.perf_counter()
print("Wolstenholme primes below 20000:", wolstenholme_scan(20_000),
      f"({time.perf_counter() - t:.1f}s)")
