"""Compare the compiled and pure-Python normal-form kernels.

    python3 benchmarks/bench_kernel.py [--words 20000] [--repeat 3]

Times normal forms of random syllable words, Weyl distances between them and
a full isometry sweep over a ball, once per backend.
"""

import argparse
import random
import time

from rabuild import _pykernel
from rabuild.cli import load_fixture
from rabuild.geometry import ball

try:
    from rabuild import _ckernel
except ImportError:
    _ckernel = None


def random_words(spec, count, max_len, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(0, max_len)
        out.append([(t, rng.randrange(1, spec.q[t])) for t in (rng.randrange(spec.n) for _ in range(n))])
    return out


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench(impl, spec, words, members, repeat):
    q, comm, n = spec.q, spec.comm, spec.n
    normal = [tuple(impl.normal_form(w, q, comm, n)) for w in words]
    pairs = list(zip(normal, normal[1:]))
    rows = [x.word for x in members]
    return {
        "normal_form": best_of(repeat, lambda: [impl.normal_form(w, q, comm, n) for w in words]),
        "delta": best_of(repeat, lambda: [impl.delta_types(a, b, q, comm, n) for a, b in pairs]),
        "isometry_sweep": best_of(repeat, lambda: impl.isometry_violation(rows, rows, q, comm, n)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--fixture", default="pentagon")
    parser.add_argument("--words", type=int, default=20000)
    parser.add_argument("--max-len", type=int, default=12)
    parser.add_argument("--radius", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    spec = load_fixture(args.fixture).spec
    words = random_words(spec, args.words, args.max_len, seed=0)
    members = ball(spec, spec.identity, args.radius).sorted()
    print(f"{args.fixture}: {len(words)} words (length <= {args.max_len}), "
          f"sweep over {len(members)} chambers ({len(members) * (len(members) - 1) // 2} pairs)")

    backends = [("python", _pykernel)]
    if _ckernel is not None:
        backends.insert(0, ("cython", _ckernel))
    else:
        print("compiled kernel not built; timing the fallback only")
    results = {name: bench(impl, spec, words, members, args.repeat) for name, impl in backends}

    print(f"{'kernel':16}" + "".join(f"{name:>12}" for name, _ in backends) + ("     speedup" if len(backends) > 1 else ""))
    for key in results["python"]:
        row = f"{key:16}" + "".join(f"{results[name][key] * 1000:10.1f}ms" for name, _ in backends)
        if len(backends) > 1:
            row += f"{results['python'][key] / results['cython'][key]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
