"""Compare the compiled and pure-Python exterior-algebra kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the comparison does not depend on
``NILHERM_PURE_PYTHON``.  Reports the best of ``repeat`` runs per kernel.
"""

from __future__ import annotations

import argparse
import random
import timeit

from nilherm import _kernels_py as py
from nilherm.forms import random_form

try:
    from nilherm import _kernels as cy
except ImportError:  # pragma: no cover
    cy = None


def _workload(seed: int = 7):
    rng = random.Random(seed)
    n = 3
    pairs = [(random_form(n, 2, 6, rng).terms, random_form(n, 2, 6, rng).terms) for _ in range(200)]
    images = [random_form(n, 2, 4, rng).terms for _ in range(2 * n)]
    forms3 = [random_form(n, 3, 8, rng).terms for _ in range(200)]
    return pairs, images, forms3


def _run(mod, pairs, images, forms3) -> dict[str, callable]:
    return {
        "wedge": lambda: [mod.wedge_terms(a, b) for a, b in pairs],
        "antiderivation": lambda: [mod.antiderivation_terms(f, images) for f in forms3],
        "merge_sign": lambda: [mod.merge_sign(a, b) for a in range(64) for b in range(64) if not a & b],
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    data = _workload()
    backends = {"python": _run(py, *data)}
    if cy is not None:
        backends["cython"] = _run(cy, *data)
        for name in backends["python"]:
            assert backends["python"][name]() == backends["cython"][name](), name
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + ("   speedup" if cy else ""))
    for name in backends["python"]:
        times = {b: min(timeit.repeat(fns[name], number=3, repeat=args.repeat)) / 3
                 for b, fns in backends.items()}
        row = f"{name:<16}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if cy is not None:
            row += f"{times['python'] / times['cython']:>9.2f}x"
        print(row)
    if cy is None:
        print("compiled extension not built; only the Python kernels were timed")


if __name__ == "__main__":
    main()
