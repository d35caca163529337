"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 20]

The end-to-end row runs a full daily estimate in a subprocess per backend,
selected with TRADEHURST_DISABLE_NUMBA.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tradehurst import _kernels

SESSION = 23400


def _time(fn, repeat):
    fn()  # warm-up (JIT compile for numba)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_cases():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(SESSION)
    times = np.sort(rng.uniform(34200, 57600, 200_000))
    vals = rng.integers(1, 10 ** 6, times.size).astype(float)
    draws = rng.integers(0, np.arange(SESSION, 1, -1))
    return [
        ("haar_pyramid (N=23400, J=14)",
         lambda: _kernels.haar_pyramid_numpy(x, 14), lambda: _kernels.haar_pyramid_numba(x, 14)),
        ("bucket_sum (200k trades)",
         lambda: _kernels.bucket_sum_numpy(times, vals, 34200.0, 1.0, SESSION),
         lambda: _kernels.bucket_sum_numba(times, vals, 34200.0, 1.0, SESSION)),
        ("fisher_yates (N=23400)",
         lambda: _kernels.fisher_yates_numpy(x, draws), lambda: _kernels.fisher_yates_numba(x, draws)),
    ]


_E2E = """
import timeit
from tradehurst import estimate_session, generate, SynthSpec, shuffle
x = generate(SynthSpec('fgn', 0.7, 23400, 1))
f = lambda: estimate_session(shuffle(x, 2))
f()
print(min(timeit.repeat(f, number=1, repeat={repeat})))
"""


def end_to_end(repeat):
    out = {}
    for backend, flag in (("numpy", "1"), ("numba", "0")):
        env = dict(os.environ, TRADEHURST_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", _E2E.format(repeat=repeat)], env=env,
                             capture_output=True, text=True, check=True)
        out[backend] = float(res.stdout)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")
    print(f"{'case':<34}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, np_fn, nb_fn in kernel_cases():
        a, b = _time(np_fn, args.repeat), _time(nb_fn, args.repeat)
        print(f"{name:<34}{a * 1e3:>12.3f}{b * 1e3:>12.3f}{a / b:>10.1f}")
    e2e = end_to_end(args.repeat)
    print(f"{'shuffle + estimate_session':<34}{e2e['numpy'] * 1e3:>12.3f}{e2e['numba'] * 1e3:>12.3f}"
          f"{e2e['numpy'] / e2e['numba']:>10.1f}")


if __name__ == "__main__":
    main()
