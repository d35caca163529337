"""Hot inner loops, each in a numba and a pure-numpy flavour.

The public names (``haar_pyramid``, ``bucket_sum``, ``fisher_yates``) point
at the numba kernels unless ``TRADEHURST_DISABLE_NUMBA`` is set to a truthy
value or numba cannot be imported.  Both flavours stay importable under
explicit names so they can be compared and benchmarked.
"""

import os

import numpy as np

_SQRT_HALF = np.sqrt(0.5)


def _flag_set(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _flag_set("TRADEHURST_DISABLE_NUMBA")
BACKEND = "numba" if USE_NUMBA else "numpy"


def octave_counts(n, max_octave):
    """Detail counts n_j = floor(n / 2**j) for j = 1..max_octave."""
    return np.array([n >> j for j in range(1, max_octave + 1)], dtype=np.int64)


# ---------------------------------------------------------------------------
# Haar pyramid
#
# Layout of the outputs (shared by both flavours):
#   details: flat float64 array, octave j occupies
#            details[offsets[j-1]:offsets[j]]
#   approx:  final approximation coefficients at octave max_octave
#   tails:   one entry per octave, the odd sample dropped from the
#            approximation path before pairing (0.0 when there was none),
#   has_tail: boolean mask for tails
# ---------------------------------------------------------------------------


def haar_pyramid_numpy(x, max_octave):
    x = np.asarray(x, dtype=np.float64)
    counts = octave_counts(x.shape[0], max_octave)
    offsets = np.zeros(max_octave + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(counts)
    details = np.empty(offsets[-1], dtype=np.float64)
    tails = np.zeros(max_octave, dtype=np.float64)
    has_tail = np.zeros(max_octave, dtype=np.bool_)
    a = x
    for j in range(max_octave):
        m = counts[j]
        if a.shape[0] % 2:
            tails[j] = a[-1]
            has_tail[j] = True
        even = a[0 : 2 * m : 2]
        odd = a[1 : 2 * m : 2]
        details[offsets[j] : offsets[j + 1]] = (even - odd) * _SQRT_HALF
        a = (even + odd) * _SQRT_HALF
    return details, offsets, a.copy(), tails, has_tail


def _haar_pyramid_loops(x, max_octave, counts, offsets):
    details = np.empty(offsets[-1], dtype=np.float64)
    tails = np.zeros(max_octave, dtype=np.float64)
    has_tail = np.zeros(max_octave, dtype=np.bool_)
    s = np.sqrt(0.5)
    a = x.copy()
    length = a.shape[0]
    for j in range(max_octave):
        m = counts[j]
        if length % 2 == 1:
            tails[j] = a[length - 1]
            has_tail[j] = True
        base = offsets[j]
        # in-place: a[k] only reads a[2k], a[2k+1], both >= k
        for k in range(m):
            e = a[2 * k]
            o = a[2 * k + 1]
            details[base + k] = (e - o) * s
            a[k] = (e + o) * s
        length = m
    return details, a[:length].copy(), tails, has_tail


if HAVE_NUMBA:
    _haar_pyramid_jit = numba.njit(cache=True)(_haar_pyramid_loops)

    def haar_pyramid_numba(x, max_octave):
        x = np.ascontiguousarray(x, dtype=np.float64)
        counts = octave_counts(x.shape[0], max_octave)
        offsets = np.zeros(max_octave + 1, dtype=np.int64)
        offsets[1:] = np.cumsum(counts)
        details, approx, tails, has_tail = _haar_pyramid_jit(x, max_octave, counts, offsets)
        return details, offsets, approx, tails, has_tail


# ---------------------------------------------------------------------------
# Bucket accumulation: values[b] += v for origin + b*dt <= t < origin + (b+1)*dt
# ---------------------------------------------------------------------------


def bucket_index_numpy(times, origin, delta_t):
    return np.floor((np.asarray(times, dtype=np.float64) - origin) / delta_t).astype(np.int64)


def bucket_sum_numpy(times, values, origin, delta_t, n_buckets):
    idx = bucket_index_numpy(times, origin, delta_t)
    keep = (idx >= 0) & (idx < n_buckets)
    out = np.bincount(idx[keep], weights=np.asarray(values, dtype=np.float64)[keep], minlength=n_buckets)
    return out[:n_buckets].astype(np.float64), int(keep.sum())


def _bucket_sum_loops(times, values, origin, delta_t, n_buckets):
    out = np.zeros(n_buckets, dtype=np.float64)
    covered = 0
    for i in range(times.shape[0]):
        b = np.int64(np.floor((times[i] - origin) / delta_t))
        if 0 <= b < n_buckets:
            out[b] += values[i]
            covered += 1
    return out, covered


if HAVE_NUMBA:
    _bucket_sum_jit = numba.njit(cache=True)(_bucket_sum_loops)

    def bucket_sum_numba(times, values, origin, delta_t, n_buckets):
        out, covered = _bucket_sum_jit(
            np.ascontiguousarray(times, dtype=np.float64),
            np.ascontiguousarray(values, dtype=np.float64),
            float(origin),
            float(delta_t),
            int(n_buckets),
        )
        return out, int(covered)


# ---------------------------------------------------------------------------
# Fisher-Yates: swap positions i and draws[n-1-i] for i = n-1 .. 1,
# with draws[n-1-i] uniform on [0, i].  Draws come from the caller so the
# random stream is identical across backends.
# ---------------------------------------------------------------------------


def _fisher_yates_loops(x, draws):
    out = x.copy()
    n = out.shape[0]
    for step in range(n - 1):
        i = n - 1 - step
        j = draws[step]
        tmp = out[i]
        out[i] = out[j]
        out[j] = tmp
    return out


def fisher_yates_numpy(x, draws):
    # sequential by construction; the loop runs over a numpy buffer
    return _fisher_yates_loops(np.array(x, dtype=np.float64), np.asarray(draws, dtype=np.int64))


if HAVE_NUMBA:
    _fisher_yates_jit = numba.njit(cache=True)(_fisher_yates_loops)

    def fisher_yates_numba(x, draws):
        return _fisher_yates_jit(
            np.ascontiguousarray(x, dtype=np.float64), np.ascontiguousarray(draws, dtype=np.int64)
        )


if USE_NUMBA:
    haar_pyramid = haar_pyramid_numba
    bucket_sum = bucket_sum_numba
    fisher_yates = fisher_yates_numba
else:
    haar_pyramid = haar_pyramid_numpy
    bucket_sum = bucket_sum_numpy
    fisher_yates = fisher_yates_numpy
