"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py            # default configurations
    python benchmarks/bench_kernels.py --repeat 5 --config 7:1,2,4:3

For each configuration the three stages (scan, operator construction, check
battery) are timed separately and the outputs of the two backends are
compared for equality.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from heckesym import _kernels
from heckesym.enumeration import kernel_pairs
from heckesym.field import GF

DEFAULT = ["5:1,2,4:2", "5:1,1,4:2", "7:1,2,4:3", "5:1,1,1:2"]
# the identity case has 465000 triples; the battery is timed on a slice of it
BATTERY_LIMIT = 20000


def parse_config(text: str):
    p, alphas, q = text.split(":")
    return int(p), tuple(int(a) for a in alphas.split(",")), int(q)


def best_of(repeat: int, fn):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench(p, alphas, q, repeat):
    pairs = kernel_pairs(GF(p))
    rows = {}
    for name in _kernels.available_backends():
        prev = _kernels.use_backend(name)
        try:
            t_scan, triples = best_of(repeat, lambda: _kernels.scan(p, alphas, q))
            sub = triples[:BATTERY_LIMIT]
            t_build, R = best_of(repeat, lambda: _kernels.build_R(p, q, sub))
            t_check, flags = best_of(repeat, lambda: _kernels.check_operators(p, alphas, q, R, pairs))
        finally:
            _kernels.use_backend(prev)
        rows[name] = (t_scan, t_build, t_check, len(triples), len(sub), triples, R, flags)
    if len(rows) == 2:
        a, b = rows["cython"], rows["numpy"]
        for k in (5, 6, 7):
            if not np.array_equal(a[k], b[k]):
                raise SystemExit(f"backends disagree on {p}:{alphas}:{q}")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", action="append", help="p:a1,a2,a3:q (repeatable)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    configs = [parse_config(c) for c in (args.config or DEFAULT)]
    print(f"backends: {', '.join(_kernels.available_backends())}")
    header = f"{'config':<16}{'backend':<9}{'triples':>9}{'checked':>9}{'scan s':>10}{'build s':>10}{'check s':>10}"
    print(header)
    print("-" * len(header))
    for p, alphas, q in configs:
        rows = bench(p, alphas, q, args.repeat)
        label = f"{p}:{','.join(map(str, alphas))}:{q}"
        for name, (ts, tb, tc, n, m, *_) in sorted(rows.items()):
            print(f"{label:<16}{name:<9}{n:>9}{m:>9}{ts:>10.4f}{tb:>10.4f}{tc:>10.4f}")
        if len(rows) == 2:
            c, f = rows["cython"], rows["numpy"]
            speed = [f[i] / c[i] if c[i] else float("inf") for i in range(3)]
            print(f"{'':<16}{'speedup':<9}{'':>18}{speed[0]:>9.1f}x{speed[1]:>9.1f}x{speed[2]:>9.1f}x")


if __name__ == "__main__":
    main()
