"""Trigamma (Hurwitz zeta at s=2) and digamma for positive real arguments.

Small arguments are shifted upward with the recurrences

    zeta(2, v) = 1/v**2 + zeta(2, v + 1)
    psi(v)     = psi(v + 1) - 1/v

until v >= SHIFT_TO, where the Euler-Maclaurin (Bernoulli) asymptotic series
is accurate to well below 1e-14 relative.
"""

import math

import numpy as np

SHIFT_TO = 16.0

# B_2k for k = 1..7
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def _trigamma_asymptotic(x):
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv * inv2  # x**-(2k+1) for k=1
    for b in _BERNOULLI:
        series += b * p
        p *= inv2
    return inv + 0.5 * inv2 + series


def hurwitz_zeta2(v):
    """zeta(2, v) = sum_{k>=0} 1/(v+k)**2 for v > 0."""
    v = float(v)
    if not v > 0:
        raise ValueError(f"hurwitz_zeta2 needs v > 0, got {v}")
    head = []
    while v < SHIFT_TO:
        head.append(1.0 / (v * v))
        v += 1.0
    head.append(_trigamma_asymptotic(v))
    return math.fsum(head)


trigamma = hurwitz_zeta2


def digamma(v):
    v = float(v)
    if not v > 0:
        raise ValueError(f"digamma needs v > 0, got {v}")
    head = []
    while v < SHIFT_TO:
        head.append(-1.0 / v)
        v += 1.0
    inv2 = 1.0 / (v * v)
    tail = 0.0
    p = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += b / (2 * k) * p
        p *= inv2
    head.append(math.log(v) - 0.5 / v - tail)
    return math.fsum(head)


def hurwitz_zeta2_array(v):
    return np.array([hurwitz_zeta2(x) for x in np.ravel(v)], dtype=np.float64).reshape(np.shape(v))
