"""Primitive vectors, their SL2(Z) completions, and integer-matrix ball counts."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

QUADRANT_DENSITY = 6 / math.pi**2  # zeta(2)^-1


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.flatnonzero(sieve).tolist()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % q for q in range(3, math.isqrt(n) + 1, 2))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    q = n + 1
    while not is_prime(q):
        q += 1
    return q


def is_primitive(n: int, m: int) -> bool:
    if n == 0 and m == 0:
        raise ValueError("the zero vector is not primitive or imprimitive")
    return math.gcd(n, m) == 1


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return (abs(x), 1 if x >= 0 else -1, 0)
    g, s, t = _ext_gcd(y, x % y)
    return g, t, s - (x // y) * t


def complete_primitive(n: int, m: int) -> tuple[int, int]:
    """Second column (a, b) with n*b - m*a = 1 and max(|a|, |b|) <= max(|n|, |m|).

    Solutions form the line (a0, b0) + k(n, m); among them return the one with
    the least max-norm, then least |a|, then least a.
    """
    if not is_primitive(n, m):
        raise ValueError(f"({n}, {m}) is not primitive")
    _, s, t = _ext_gcd(n, m)  # n*s + m*t = 1
    a0, b0 = -t, s

    def key(k: int) -> tuple[int, int, int]:
        a, b = a0 + k * n, b0 + k * m
        return (max(abs(a), abs(b)), abs(a), a)

    # the objective is convex and piecewise linear in k; its breakpoints are
    # where a coordinate vanishes or |a| = |b|
    breaks = []
    if n:
        breaks.append(Fraction(-a0, n))
    if m:
        breaks.append(Fraction(-b0, m))
    for sgn in (1, -1):
        if n - sgn * m:
            breaks.append(Fraction(sgn * b0 - a0, n - sgn * m))
    cands = {0}
    for x in breaks:
        f = math.floor(x)
        cands.update(range(f - 1, f + 3))
    k = min(cands, key=key)
    a, b = a0 + k * n, b0 + k * m
    assert n * b - m * a == 1
    return a, b


def mobius(k: int) -> int:
    if k < 1:
        raise ValueError("mobius is defined for k >= 1")
    sign = 1
    q = 2
    while q * q <= k:
        if k % q == 0:
            k //= q
            if k % q == 0:
                return 0
            sign = -sign
        q += 1
    return -sign if k > 1 else sign


def mobius_table(n: int) -> np.ndarray:
    """mu(0..n) by a linear sieve; mu[0] is unused and set to 0."""
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    for q in primes_upto(n):
        mu[q::q] *= -1
        mu[q * q :: q * q] = 0
    return mu


def prim_count(N: int, mode: str = "quadrant") -> int:
    """Primitive vectors with max-norm <= N.

    ``quadrant`` counts 1 <= n, m <= N; ``all`` counts the whole square,
    i.e. the four open quadrants plus the axis vectors +-e1, +-e2.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if mode not in ("quadrant", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    mu = mobius_table(N)
    d = np.arange(1, N + 1)
    quadrant = int(np.sum(mu[1:] * (N // d) ** 2))
    return quadrant if mode == "quadrant" else 4 * quadrant + 4


def _k_range(x0: int, step: int, R: int) -> tuple[float, float]:
    # integers k with |x0 + k*step| <= R
    if step == 0:
        return (-math.inf, math.inf) if abs(x0) <= R else (1, 0)
    lo, hi = (-R - x0), (R - x0)
    if step < 0:
        lo, hi, step = -hi, -lo, -step
    return (-((-lo) // step), hi // step)


def sl2_ball_count(R: int) -> int:
    """Number of integer matrices with det 1 and all |entries| <= R.

    Each matrix is a primitive first column (n, m) plus one completion
    (a0, b0) + k(n, m); count the k keeping the second column in the box.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    total = 0
    for n in range(-R, R + 1):
        for m in range(-R, R + 1):
            if math.gcd(n, m) != 1:
                continue
            a0, b0 = complete_primitive(n, m)
            lo1, hi1 = _k_range(a0, n, R)
            lo2, hi2 = _k_range(b0, m, R)
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi >= lo:
                total += int(hi - lo + 1)
    return total


def euler_product_partial(x: int) -> Fraction:
    """prod over primes q <= x of (1 - 1/q^2), exactly."""
    if x < 2:
        raise ValueError("x must be >= 2")
    out = Fraction(1)
    for q in primes_upto(x):
        out *= Fraction(q * q - 1, q * q)
    return out
