"""Error-function approximations of terminants across Stokes lines.

The transition variable c(phi) solves c^2/2 = 1 + i(phi - pi) - e^{i(phi - pi)}
on the branch with c ~ -(phi - pi) near phi = pi.  Writing u = phi - pi and
c = -u s, the equation becomes s^2 = Q(u) with Q(u) = 2 (e^{iu} - 1 - iu)/(iu)^2,
which is entire with Q(0) = 1 and has no real zeros, so s can be tracked by
Newton steps from u = 0 without ever dividing by a small number.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .coeffs import gamma_mp
from .errors import BranchError, DomainError
from .surface import SurfacePoint

STEP = mp.mpf("0.05")
DELTA = mp.mpf("0.3")

_c_lock = threading.Lock()
_c_tables: dict = {}


@dataclass(frozen=True)
class TransitionVariable:
    phi: mp.mpf
    c: mp.mpc
    branch_ok: bool


@dataclass(frozen=True)
class PartitionMultiplicity:
    """Partition of m written as multiplicities: sum_j j k_j = m (k[0] is k_1)."""

    m: int
    k: tuple

    def __post_init__(self):
        if sum((j + 1) * kj for j, kj in enumerate(self.k)) != self.m:
            raise ValueError("multiplicities do not add up to m")


@dataclass(frozen=True)
class ErfcPolyApprox:
    m: int
    rho: mp.mpf
    terms: tuple   # (PartitionMultiplicity, Fraction coefficient, complex term value)
    value: mp.mpc
    variant: int = 41


# ------------------------------------------------------------------ c(phi)

def _Q(u):
    x = 1j * u
    if abs(x) < 1:
        # 2 sum_{k>=0} x^k / (k+2)!
        total, term, k = mp.mpc(0), mp.mpf(1) / 2, 0
        eps = mp.mpf(2) ** (-mp.mp.prec - 4)
        while abs(term) > eps:
            total += term
            k += 1
            term = term * x / (k + 2)
        return 2 * total
    return 2 * (mp.expm1(x) - x) / (x * x)


def _newton_s(u, s):
    tol = mp.mpf(10) ** (-(mp.mp.dps - 5))
    q = _Q(u)
    for _ in range(60):
        ds = (s * s - q) / (2 * s)
        s -= ds
        if abs(ds) < tol * abs(s):
            return s
    raise BranchError(f"Newton iteration for c(phi) stalled at phi - pi = {u}")


def _anchor(k: int):
    """s at u = k * STEP (k of either sign), extending the cached table outward."""
    key = mp.mp.prec
    with _c_lock:
        table = _c_tables.setdefault(key, {0: mp.mpc(1)})
        if k in table:
            return table[k]
        step = 1 if k > 0 else -1
        j = 0
        while j + step in table and j != k:
            j += step
        s = table[j]
        while j != k:
            j += step
            s_new = _newton_s(j * STEP, s)
            _check_jump(j * STEP, STEP, s, s_new)
            s = s_new
            table[j] = s
        return s


def _check_jump(u, du, s_old, s_new):
    c_old = -(u - du) * s_old
    c_new = -u * s_new
    if abs(c_new - c_old) > 10 * abs(du):
        raise BranchError(f"c(phi) jumped near phi = {mp.nstr(u + mp.pi, 8)}")


def c_of_phi(phi) -> mp.mpc:
    """Transition variable c(phi) on the branch through c(pi) = 0, for -3 pi < phi < 3 pi."""
    phi = mp.mpf(phi)
    if not -3 * mp.pi < phi < 3 * mp.pi:
        raise DomainError("c(phi) is tracked on -3 pi < phi < 3 pi")
    u = phi - mp.pi  # at the caller's precision, so c(pi) is exactly 0
    with mp.workdps(mp.mp.dps + 5):
        k = int(mp.floor(abs(u) / STEP)) * (1 if u >= 0 else -1)
        s0 = _anchor(k)
        s = _newton_s(u, s0)
        _check_jump(u, u - k * STEP, s0, s)
        c = -u * s
    return +c


def transition(phi) -> TransitionVariable:
    c = c_of_phi(phi)
    u = mp.mpf(phi) - mp.pi
    res = abs(c * c / 2 - (1 + 1j * u - mp.expj(u)))
    ok = res < mp.mpf(10) ** (-(mp.mp.dps - 10)) * max(1, abs(c) ** 2)
    return TransitionVariable(mp.mpf(phi), c, bool(ok))


def c_residual(phi) -> mp.mpf:
    """|c^2/2 - (1 + i(phi - pi) - e^{i(phi - pi)})| for the returned c."""
    c = c_of_phi(phi)
    u = mp.mpf(phi) - mp.pi
    return abs(c * c / 2 - (1 + 1j * u - mp.expj(u)))


def erfc(w) -> mp.mpc:
    """Complementary error function of a complex argument (mpmath's implementation)."""
    return mp.erfc(w)


# ----------------------------------------------------------- partitions

@lru_cache(maxsize=None)
def partitions(m: int) -> tuple:
    """All partitions of m as multiplicity vectors (k_1, ..., k_m)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = []

    def descend(rest, largest, counts):
        if rest == 0:
            out.append(PartitionMultiplicity(m, tuple(counts)))
            return
        for part in range(min(rest, largest), 0, -1):
            counts[part - 1] += 1
            descend(rest - part, part, counts)
            counts[part - 1] -= 1

    descend(m, m, [0] * m)
    return tuple(out)


def partition_coefficient(p: PartitionMultiplicity, variant: int = 41) -> Fraction:
    """prod_j s^{k_j} / ((2j)^{k_j} k_j!) with s = 1 (variant 41) or -1 (variant 45)."""
    sign = 1 if variant == 41 else -1
    coef = Fraction(1)
    for j, kj in enumerate(p.k, start=1):
        coef *= Fraction(sign ** kj, (2 * j) ** kj * mp.factorial(kj).__int__())
    return coef


def stokes_line_value(m: int, variant: int = 41) -> Fraction:
    """Exact value of the erfc polynomial when every erfc equals 1."""
    _check_variant(variant)
    return sum((partition_coefficient(p, variant) for p in partitions(m)), Fraction(0))


def _check_variant(variant):
    if variant not in (41, 45):
        raise ValueError("variant must be 41 or 45")


def erfc_polynomial(phi, absz, m: int, variant: int = 41, rho=0):
    """Partition sum of products of erfc(c sqrt(j |sigma z| / 2)).

    Variant 41 uses c = c(phi); variant 45 uses conj(c(-phi)) and the signs (-1)^{k_j}.
    """
    _check_variant(variant)
    if m < 1:
        raise ValueError("m must be >= 1")
    absz = mp.mpf(absz)
    c = c_of_phi(phi) if variant == 41 else mp.conj(c_of_phi(-mp.mpf(phi)))
    vals = [erfc(c * mp.sqrt(j * absz / 2)) for j in range(1, m + 1)]
    terms = []
    total = mp.mpc(0)
    for p in partitions(m):
        coef = partition_coefficient(p, variant)
        t = mp.mpf(coef.numerator) / coef.denominator
        for j, kj in enumerate(p.k):
            if kj:
                t *= vals[j] ** kj
        terms.append((p, coef, t))
        total += t
    return ErfcPolyApprox(m, mp.mpf(rho), tuple(terms), total, variant)


def theorem_approx(z: SurfacePoint, N, sigma: SurfacePoint, n: int, m: int,
                   variant: int = 41) -> ErfcPolyApprox:
    """Erfc-polynomial approximation of the normalised equal-singulant F^(m) with last order N - n.

    The normalised quantity is e^{-m sigma z} F^(m) / ((2 pi i)^m z^{mN-m-n}),
    further multiplied by e^{-2 pi i m N} for variant 45.  n enters only the
    error term.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    w = sigma * z
    rho = mp.re(mp.mpmathify(N)) - w.modulus
    return erfc_polynomial(w.angle, w.modulus, m, variant, rho)


def normalised_terminant(z: SurfacePoint, N, sigma: SurfacePoint, n: int, m: int,
                         variant: int = 41, tol=None) -> mp.mpc:
    """Left-hand side of the theorem: the normalised F^(m)(z; N, ..., N, N - n) for equal singulants."""
    from .terminants import F2_orders, F_bell, TerminantSpec, evaluate

    _check_variant(variant)
    N = mp.mpmathify(N)
    with mp.workdps(mp.mp.dps + 10):
        if n == 0:
            F = F_bell(z, N, sigma, m)
        elif m == 2:
            F = F2_orders(z, N, sigma, N - n, 1, sigma, tol).value[0]
        else:
            levels = [(N, sigma)] * (m - 1) + [(N - n, sigma)]
            F = evaluate(z, TerminantSpec(tuple(levels)), "quad", tol)
        out = _normalise(F, z, sigma, m * N - m - n, m)
        if variant == 45:
            out *= mp.exp(-2j * mp.pi * m * N)
    return +out


def _normalise(F, z: SurfacePoint, sigma: SurfacePoint, power, m):
    sz = (sigma * z).to_complex()
    return mp.exp(-m * sz) * F / ((2j * mp.pi) ** m * z.power(power))


def olver_F1_approx(z: SurfacePoint, N, sigma: SurfacePoint, n: int = 0,
                    regime: str = "auto", delta=DELTA):
    """Approximation of e^{-sigma z} F1(z; N - n, sigma) / (2 pi i z^{N-1-n}).

    Regimes, with phi = arg(sigma z):
      "exponential"  |phi| <= pi - delta, the closed exponential form;
      "erfc"         -pi + delta <= phi <= 3 pi - delta, (1/2) erfc(c(phi) sqrt(|sigma z|/2));
      "conjugate"    -3 pi + delta <= phi <= pi - delta, the approximation of the same
                     quantity times e^{-2 pi i N}: -(1/2) erfc(conj(c(-phi)) sqrt(|sigma z|/2)).
    "auto" picks "exponential" when allowed, else "erfc" for phi > 0 and "conjugate" for phi < 0.
    Returns (value, regime).
    """
    w = sigma * z
    phi = w.angle
    a = w.modulus
    delta = mp.mpf(delta)
    N = mp.mpmathify(N)
    if regime == "auto":
        if abs(phi) <= mp.pi - delta:
            regime = "exponential"
        elif phi > 0:
            regime = "erfc"
        else:
            regime = "conjugate"
    if regime == "exponential":
        if not abs(phi) <= mp.pi - delta:
            raise DomainError("exponential form needs |phi| <= pi - delta")
        val = (-1j * mp.expj((mp.pi - phi) * N) / (1 + mp.expj(-phi))
               * mp.exp(-w.to_complex() - a) / mp.sqrt(2 * mp.pi * a))
    elif regime == "erfc":
        if not -mp.pi + delta <= phi <= 3 * mp.pi - delta:
            raise DomainError("erfc form needs -pi + delta <= phi <= 3 pi - delta")
        val = erfc(c_of_phi(phi) * mp.sqrt(a / 2)) / 2
    elif regime == "conjugate":
        if not -3 * mp.pi + delta <= phi <= mp.pi - delta:
            raise DomainError("conjugate form needs -3 pi + delta <= phi <= pi - delta")
        val = -erfc(mp.conj(c_of_phi(-phi)) * mp.sqrt(a / 2)) / 2
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return val, regime


def normalised_F1(z: SurfacePoint, N, sigma: SurfacePoint, n: int = 0) -> mp.mpc:
    """e^{-sigma z} F1(z; N - n, sigma) / (2 pi i z^{N-1-n})."""
    from .terminants import F1

    N = mp.mpmathify(N)
    with mp.workdps(mp.mp.dps + 10):
        F = F1(z, N - n, sigma)
        out = mp.exp(-(sigma * z).to_complex()) * F / (2j * mp.pi * z.power(N - 1 - n))
    return +out


# --------------------------------------------------- smoothing of Gamma*

def _series(z: SurfacePoint, count: int, alternate: bool):
    zi = z.inverse().to_complex()
    total, p = mp.mpc(0), mp.mpc(1)
    for k, gk in enumerate(_gammas(count)):
        total += (-gk if alternate and k % 2 else gk) * p
        p *= zi
    return total


def _gammas(count):
    return [gamma_mp(k) for k in range(count)]


def berry_smoothing_level1(z: SurfacePoint, M: int):
    """Error-function approximations of (R_N(z), reciprocal remainder) near arg z = pi/2."""
    if M < 1:
        raise ValueError("M must be >= 1")
    theta = z.angle
    f = erfc((mp.pi / 2 - theta) * mp.sqrt(mp.pi * z.modulus)) / 2
    e = mp.exp(2j * mp.pi * z.to_complex())
    r = e * _series(z, M, True) * f
    rt = -e * _series(z, M, False) * f
    return r, rt


def level2_factors(theta, absz):
    """The two erfc combinations for the level-2 remainders (gamma, reciprocal)."""
    x = mp.pi / 2 - mp.mpf(theta)
    a = erfc(x * mp.sqrt(2 * mp.pi * absz)) / 4
    b = erfc(x * mp.sqrt(mp.pi * absz)) ** 2 / 8
    return a + b, a - b


def level2_smoothing(z: SurfacePoint, K: int):
    """Error-function approximations of the two level-1 remainders near arg z = pi/2."""
    if K < 1:
        raise ValueError("K must be >= 1")
    fa, fb = level2_factors(z.angle, z.modulus)
    e = mp.exp(4j * mp.pi * z.to_complex())
    return e * _series(z, K, True) * fa, -e * _series(z, K, False) * fb


def mixed_scaled(z: SurfacePoint, N, sigma: SurfacePoint, n: int = 0, side: int = -1, tol=None):
    """|normalised F^(2)(z; N, sigma; N - n, sigma e^{side pi i})| sqrt|sigma z| e^{|sigma z| Re c^2 / k},

    with k = 1 for |phi| <= pi and k = 2 beyond, which the mixed-singulant
    estimate says stays bounded.
    """
    from .terminants import F2_orders

    if side not in (-1, 1):
        raise ValueError("side must be -1 or 1")
    N = mp.mpmathify(N)
    w = sigma * z
    phi = w.angle
    with mp.workdps(mp.mp.dps + 10):
        s2 = sigma.rotate_pi(side)
        F = F2_orders(z, N, sigma, N - n, 1, s2, tol).value[0]
        val = _normalise(F, z, sigma, 2 * N - 2 - n, 2)
        c = c_of_phi(phi)
        k = 1 if abs(phi) <= mp.pi else 2
        out = abs(val) * mp.sqrt(w.modulus) * mp.exp(w.modulus * mp.re(c * c) / k)
    return +out
