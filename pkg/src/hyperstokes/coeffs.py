"""Exact Bernoulli numbers, log-gamma coefficients and Stirling coefficients.

Everything here is rational.  Tables grow on demand and are shared by the
whole process; extension happens under a lock so concurrent readers are safe.
"""
from __future__ import annotations

import threading
from fractions import Fraction

import mpmath as mp

DEFAULT_NMAX = 200

_lock = threading.RLock()
_tangent: list[int] = [0, 1]          # tangent numbers T_1, T_2, ...
_stirling: list[Fraction] = [Fraction(1)]
_ycache: list[Fraction] = [Fraction(0)]  # y_k of the exponent series in 1/z


def _extend_tangent(n: int) -> None:
    # Brent and Harvey's integer recurrence; recomputes from scratch when grown
    if len(_tangent) > n:
        return
    size = max(n, 2 * (len(_tangent) - 1))
    t = [0] * (size + 1)
    t[1] = 1
    for k in range(2, size + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, size + 1):
        for j in range(k, size + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    _tangent[:] = t


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2, odd n > 1 give 0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    k = n // 2
    with _lock:
        _extend_tangent(k)
        tk = _tangent[k]
    sign = 1 if k % 2 else -1
    return Fraction(sign * 2 * k * tk, 4 ** k * (4 ** k - 1))


def log_gamma_coeff(n: int) -> Fraction:
    """Coefficient B_{2n} / (2n (2n-1)) of z^{-(2n-1)} in the expansion of g(z)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return bernoulli(2 * n) / (2 * n * (2 * n - 1))


def _y(k: int) -> Fraction:
    # exponent series g(z) = sum_k y_k z^{-k}
    while len(_ycache) <= k:
        j = len(_ycache)
        _ycache.append(log_gamma_coeff((j + 1) // 2) if j % 2 else Fraction(0))
    return _ycache[k]


def stirling_gamma(n: int) -> Fraction:
    """Stirling coefficient gamma_n with Gamma*(z) ~ sum (-1)^n gamma_n z^{-n}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        while len(_stirling) <= n:
            j = len(_stirling)
            # coefficients Y_j of exp(sum y_k t^k), stored as (-1)^j Y_j
            acc = Fraction(0)
            for k in range(1, j + 1, 2):
                acc += k * _y(k) * (-1) ** (j - k) * _stirling[j - k]
            _stirling.append((-1) ** j * acc / j)
        return _stirling[n]


def stirling_table(nmax: int = DEFAULT_NMAX) -> list[Fraction]:
    stirling_gamma(nmax)
    return list(_stirling[: nmax + 1])


def convolution_defect(n: int) -> Fraction:
    """sum_k (-1)^k gamma_k gamma_{n-k}; equals 1 for n = 0 and 0 otherwise."""
    return sum(((-1) ** k * stirling_gamma(k) * stirling_gamma(n - k) for k in range(n + 1)),
               Fraction(0))


class CoeffTable:
    """Snapshot of the three coefficient families up to ``nmax``."""

    def __init__(self, nmax: int = DEFAULT_NMAX):
        self.nmax = nmax
        self.bernoulli = [bernoulli(j) for j in range(2 * nmax + 1)]
        self.log_gamma = [None] + [log_gamma_coeff(j) for j in range(1, nmax + 1)]
        self.stirling = stirling_table(nmax)


def gamma_mp(n: int) -> mp.mpf:
    """gamma_n rounded to the current working precision."""
    q = stirling_gamma(n)
    return mp.mpf(q.numerator) / q.denominator


def gammas_mp(count: int, alternate: bool = False) -> list:
    """[gamma_0, ..., gamma_{count-1}], optionally times (-1)^k."""
    out = []
    for k in range(count):
        v = gamma_mp(k)
        out.append(-v if alternate and k % 2 else v)
    return out
