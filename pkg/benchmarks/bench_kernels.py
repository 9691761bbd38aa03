"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Times each kernel on fixed random inputs and, end to end, the brute-force
solver and a branching backdoor search. Restriction results are cached
inside the model, so the search timing clears that cache first; language
membership verdicts stay cached, so that row mostly measures the search
bookkeeping, which is Python either way.
"""

from __future__ import annotations

import argparse
import random
import timeit

from vcsp_backdoor import _backend, _pykernels, brute_force_solve, detect_backdoor_branching
from vcsp_backdoor.generators import default_family, planted_backdoor
from vcsp_backdoor.model import _restrict


def kernel_cases(rng):
    d, arity = 3, 6
    positions, values = [1, 4], [2, 0]
    mask = [rng.random() < 0.7 for _ in range(3**4)]
    sub = [rng.randint(0, 9) for _ in range(2**6)]
    n, dom = 14, 2
    scopes, arities, offsets, vals = [], [], [], []
    for _ in range(20):
        scopes.extend(rng.sample(range(n), 2))
        arities.append(2)
        offsets.append(len(vals))
        vals.extend(rng.choice((-1, 0, 1, 2, 3)) for _ in range(4))
    return {
        "restrict_indices (d=3, arity 6)": lambda k: k.restrict_indices(arity, d, positions, values),
        "min_closed (d=3, arity 4)": lambda k: k.min_closed(mask, 4, 3),
        "submodular (arity 6)": lambda k: k.submodular(sub, 6),
        "brute_force (n=14, 20 binary)": lambda k: k.brute_force(n, dom, scopes, arities, offsets, vals),
    }


def end_to_end_cases(rng):
    inst, _ = planted_backdoor(3, n=14, k=2, background=10)
    fam = default_family()

    def brute():
        brute_force_solve(inst)

    def branching():
        _restrict.cache_clear()
        detect_backdoor_branching(inst, 2, fam)

    return {"brute_force_solve (n=14)": brute, "detect_backdoor_branching (n=14, k=2)": branching}


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = _backend.available_backends()
    if "native" not in backends:
        print("compiled extension not built; only the Python kernels are available")
    rng = random.Random(0)
    rows = []
    for name, case in kernel_cases(rng).items():
        times = {}
        for b in backends:
            module = _pykernels if b == "python" else _backend._BACKENDS[b]
            number = 1 if "brute" in name else 200
            times[b] = best_of(lambda: case(module), args.repeat, number)
        rows.append((name, times))
    for name, case in end_to_end_cases(rng).items():
        times = {}
        for b in backends:
            _backend.set_backend(b)
            times[b] = best_of(case, args.repeat, 1)
        rows.append((name, times))
    width = max(len(name) for name, _ in rows)
    print(f"{'case':<{width}}  " + "  ".join(f"{b:>12}" for b in backends) + ("  speedup" if len(backends) > 1 else ""))
    for name, times in rows:
        cells = "  ".join(f"{times[b] * 1e3:>10.3f}ms" for b in backends)
        extra = f"  {times['python'] / times['native']:>6.1f}x" if "native" in times else ""
        print(f"{name:<{width}}  {cells}{extra}")


if __name__ == "__main__":
    main()
