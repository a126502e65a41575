"""Time the compiled reduction walks against the pure-Python twins.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R] [--seed S]
"""
from __future__ import annotations

import argparse
import random
import timeit

from so3zi import _kernels_py

try:
    from so3zi import _kernels
except ImportError:
    _kernels = None


def sample_points(n: int, seed: int) -> list[tuple[float, float, float]]:
    rng = random.Random(seed)
    return [(rng.uniform(-50, 50), rng.uniform(-50, 50), 10 ** rng.uniform(-4, 1)) for _ in range(n)]


def bench(points, repeat: int) -> dict[str, dict[str, float]]:
    eps, cap = 1e-9, 10_000
    walks = {
        "walk_gamma": lambda k: [k.walk_gamma(x1, x2, y, eps, cap) for x1, x2, y in points],
        "walk_picard": lambda k: [k.walk_picard(x1, x2, y, eps, cap) for x1, x2, y in points],
        "walk_gamma_int": lambda k: [k.walk_gamma_int(x1, y, eps, cap) for x1, _, y in points],
        "walk_gamma_batch": lambda k: k.walk_gamma_batch(points, eps, cap),
    }
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels
    out: dict[str, dict[str, float]] = {}
    for name, fn in walks.items():
        out[name] = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=repeat))
                     for b, k in backends.items()}
    return out


def check_agreement(points) -> float:
    """Largest coordinate difference between the two backends on the same inputs."""
    if _kernels is None:
        return 0.0
    worst = 0.0
    for x1, x2, y in points:
        a = _kernels_py.walk_gamma(x1, x2, y, 1e-9, 10_000)
        b = _kernels.walk_gamma(x1, x2, y, 1e-9, 10_000)
        if a[3] != b[3]:
            raise AssertionError(f"backends chose different words at {(x1, x2, y)}")
        worst = max(worst, *(abs(p - q) for p, q in zip(a[:3], b[:3])))
    return worst


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    points = sample_points(args.points, args.seed)
    print(f"{args.points} points, best of {args.repeat}")
    print(f"backend agreement: max coordinate gap {check_agreement(points):.2e}")
    print(f"{'kernel':<18}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, t in bench(points, args.repeat).items():
        py, cy = t["python"], t.get("cython")
        if cy is None:
            print(f"{name:<18}{py:>10.3f}{'-':>10}{'-':>9}")
        else:
            print(f"{name:<18}{py:>10.3f}{cy:>10.3f}{py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
