"""Compiled vs pure-Python kernels on level matrices and series products.

    python3 bench/benchmark.py [--repeat N]
"""

import argparse
import random
import time

from iwasawa_tower import kernels
from iwasawa_tower.groupring import expand_level, parse_presentation

CASES = [
    ("p=3 n=2 s=2 (81 cols)", "p=3; n=2; gens=1; rel: p; rel: y - 2*x + 1", 2),
    ("p=3 n=2 s=3 (729 cols)", "p=3; n=2; gens=1; rel: p; rel: y - 2*x + 1", 3),
    ("p=2 n=2 s=4 (256 cols)", "p=2; n=2; gens=1; rel: y - x^2 + x - 1", 4),
    ("p=5 n=2 s=2 (625 cols)", "p=5; n=2; gens=1; rel: x + x^-1 + y + y^-1 - 4", 2),
]


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the Python backend is available")
    original = kernels.BACKEND
    print(f"{'case':32} " + " ".join(f"{b:>12}" for b in backends) + "   speedup")

    for label, text, s in CASES:
        pres = parse_presentation(text)
        arr = expand_level(pres, s).matrix.mod_array(pres.p)
        times, ranks = [], []
        for b in backends:
            kernels.use_backend(b)
            dt, r = _time(lambda: kernels.rank_mod_p(arr, pres.p), args.repeat)
            times.append(dt)
            ranks.append(r)
        assert len(set(ranks)) == 1, ranks
        _row(f"rank {label}", times)

    rng = random.Random(0)
    for D, m in [(64, 3), (256, 3), (256, 5**8), (1024, 7)]:
        a = [rng.randrange(m) for _ in range(D)]
        b = [rng.randrange(m) for _ in range(D)]
        times, outs = [], []
        for be in backends:
            kernels.use_backend(be)
            dt, r = _time(lambda: list(kernels.series_mul_mod(a, b, D, m)), args.repeat)
            times.append(dt)
            outs.append(r)
        assert all(o == outs[0] for o in outs)
        _row(f"series_mul D={D} mod {m}", times)
    kernels.use_backend(original)


def _row(label, times):
    speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 and times[0] > 0 else ""
    print(f"{label:32} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
