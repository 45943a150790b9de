"""Reference values of g(z), Gamma*(z) and 1/Gamma*(z), and exact level-0 remainders.

g is evaluated at a shifted argument z + m from the Bernoulli series and
brought back with log Gamma(z+1) = log Gamma(z) + log z.  Points past the
negative real axis are reached through g(z) = -g(z e^{-pi i}) - log(1 - e^{2 pi i z}),
with the logarithm continued along the circle |z| = const.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .coeffs import gamma_mp, log_gamma_coeff
from .errors import DomainError, PoleError, PrecisionError
from .surface import SurfacePoint

GUARD = 10


@dataclass(frozen=True)
class TruncationScheme:
    """Truncation indices N (level 0), M (level 1), K (level 2)."""

    level: int
    N: int
    M: Optional[int] = None
    K: Optional[int] = None

    def __post_init__(self):
        if self.level not in (0, 1, 2):
            raise ValueError("level must be 0, 1 or 2")
        idx = [self.N, self.M, self.K][: self.level + 1]
        if any(v is None for v in idx):
            raise ValueError(f"level {self.level} needs {self.level + 1} indices")
        if idx[-1] < 0 or any(a <= b for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must satisfy K < M < N")
        if self.N < 1:
            raise ValueError("N must be positive")

    @classmethod
    def optimal(cls, absz, level: int) -> "TruncationScheme":
        """Consecutive indices spaced by about 2 pi |z|, the outermost near 2 pi (level+1) |z|."""
        absz = mp.mpf(absz)
        idx = [int(mp.floor(2 * mp.pi * (level + 1 - j) * absz)) for j in range(level + 1)]
        if idx[-1] < 0 or len(set(idx)) < len(idx) or idx[0] < 1:
            raise ValueError(f"|z| = {mp.nstr(absz, 5)} is too small for distinct level-{level} indices")
        return cls(level, *idx)

    def as_tuple(self) -> tuple:
        return tuple(v for v in (self.N, self.M, self.K) if v is not None)


@dataclass(frozen=True)
class GammaStarValue:
    value: mp.mpc
    est_rel_error: mp.mpf


@dataclass(frozen=True)
class RemainderReport:
    level: int
    truncation: TruncationScheme
    partial_sum: mp.mpc
    remainder: mp.mpc
    oracle: mp.mpc
    variant: str = "gamma"
    est_abs_error: mp.mpf = mp.mpf(0)


# ------------------------------------------------------------------- g(z)

def _shift_for(z: mp.mpc) -> int:
    target = mp.mp.dps * mp.log(10) / (2 * mp.pi) + 1
    m = 0
    while abs(z + m) < target or mp.re(z + m) < abs(mp.im(z)):
        m += 1
    return m


def _g_series(w: mp.mpc):
    """Bernoulli series at large |w|; returns (value, first omitted term)."""
    eps = mp.mpf(2) ** (-mp.mp.prec)
    total = mp.mpc(0)
    inv2 = 1 / (w * w)
    p = 1 / w
    n = 1
    prev = mp.inf
    while True:
        term = log_gamma_coeff(n) * p
        a = abs(term)
        if a > prev:
            # past the least term: the caller's shift was too small
            return total, a
        total += term
        if a < eps * abs(total):
            return total, a
        prev = a
        p *= inv2
        n += 1


def _g_upper(z: mp.mpc):
    """g on 0 <= arg z <= pi (arg pi read as the limit from above)."""
    m = _shift_for(z)
    w = z + m
    val, tail = _g_series(w)
    if m:
        logs = mp.fsum(mp.log(z + j) for j in range(m))
        val += (w - mp.mpf(1) / 2) * mp.log(w) - (z - mp.mpf(1) / 2) * mp.log(z) - m - logs
    return val, tail


def _is_pole(z: SurfacePoint) -> bool:
    if z.offset != 0 or z.turns.denominator != 1 or z.turns.numerator % 2 == 0:
        return False
    return z.modulus == mp.nint(z.modulus)


def _L(z: SurfacePoint) -> mp.mpc:
    """log(1 - e^{2 pi i z}) continued along |z| = const from arg z = pi/2.

    On sheets where Im z < 0 it is written as 2 pi i z + log(1 - e^{-2 pi i z})
    plus a multiple of pi i, which keeps every logarithm principal.  The
    multiple is fixed at each crossing of the real axis.
    """
    theta = z.angle
    r = z.modulus
    # form A: log(1 - e^{2 pi i z}) + c, form B: 2 pi i z + log(1 - e^{-2 pi i z}) + c,
    # with c an integer multiple of pi i matched at each crossing of the real axis
    c = 0
    form = "A"
    n = 1
    while n * mp.pi < theta:
        x = (-1) ** n * r
        a = mp.log(1 - mp.expj(2 * mp.pi * x))
        b = 2j * mp.pi * x + mp.log(1 - mp.expj(-2 * mp.pi * x))
        jump = int(mp.nint(mp.im(a - b) / mp.pi))
        c = c + jump if form == "A" else c - jump
        form = "B" if form == "A" else "A"
        n += 1
    zc = z.to_complex()
    if form == "A":
        return mp.log(1 - mp.exp(2j * mp.pi * zc)) + 1j * mp.pi * c
    return 2j * mp.pi * zc + mp.log(1 - mp.exp(-2j * mp.pi * zc)) + 1j * mp.pi * c


def _g_surface(z: SurfacePoint):
    theta = z.angle
    if theta < 0:
        val, tail = _g_surface(SurfacePoint(z.modulus, -z.turns, -z.offset))
        return mp.conj(val), tail
    if theta <= mp.pi:
        return _g_upper(z.to_complex())
    inner, tail = _g_surface(z.rotate_pi(-1))
    return -inner - _L(z), tail


def g(z: SurfacePoint) -> mp.mpc:
    """g(z) = log Gamma(z) - (z - 1/2) log z + z - log(2 pi)/2, on any sheet."""
    if _is_pole(z):
        raise PoleError(f"Gamma* has a pole at {z}")
    with mp.workdps(mp.mp.dps + GUARD):
        val, _ = _g_surface(z)
    return +val


def gamma_star(z: SurfacePoint) -> GammaStarValue:
    """Gamma*(z) = Gamma(z) / (sqrt(2 pi) z^{z-1/2} e^{-z}) = e^{g(z)}."""
    if _is_pole(z):
        raise PoleError(f"Gamma* has a pole at {z}")
    with mp.workdps(mp.mp.dps + GUARD):
        val, tail = _g_surface(z)
        err = tail + mp.mpf(10) ** (-(mp.mp.dps - 2)) * (1 + abs(val))
        out = mp.exp(val)
    return GammaStarValue(+out, +err)


def reciprocal_gamma_star(z: SurfacePoint) -> GammaStarValue:
    """1/Gamma*(z) = e^{-g(z)}; zero at the poles of Gamma*."""
    if _is_pole(z):
        return GammaStarValue(mp.mpc(0), mp.mpf(0))
    with mp.workdps(mp.mp.dps + GUARD):
        val, tail = _g_surface(z)
        err = tail + mp.mpf(10) ** (-(mp.mp.dps - 2)) * (1 + abs(val))
        out = mp.exp(-val)
    return GammaStarValue(+out, +err)


def functional_residual(z: SurfacePoint) -> mp.mpc:
    """g(z) + g(z e^{-/+ pi i}) + log(1 - e^{+/- 2 pi i z}) for z in the upper/lower half-plane."""
    if not abs(z.angle) <= mp.pi:
        raise DomainError("the relation with the principal logarithm holds for |arg z| <= pi")
    with mp.workdps(mp.mp.dps + 5):
        zc = z.to_complex()
        if z.angle >= 0:
            r = g(z) + g(z.rotate_pi(-1)) + mp.log(1 - mp.exp(2j * mp.pi * zc))
        else:
            r = g(z) + g(z.rotate_pi(1)) + mp.log(1 - mp.exp(-2j * mp.pi * zc))
    return +r


# ------------------------------------------------------- level-0 remainders

def partial_sum0(z: SurfacePoint, N: int, variant: str = "gamma") -> mp.mpc:
    """sum_{n<N} (-1)^n gamma_n z^{-n} (variant "gamma") or sum gamma_n z^{-n} ("reciprocal")."""
    _check_variant(variant)
    zi = z.inverse().to_complex()
    sign = -1 if variant == "gamma" else 1
    total = mp.mpc(0)
    p = mp.mpc(1)
    for n in range(N):
        total += gamma_mp(n) * p
        p *= sign * zi
    return total


def _check_variant(variant: str):
    if variant not in ("gamma", "reciprocal"):
        raise ValueError("variant must be 'gamma' or 'reciprocal'")


def remainder_level0(z: SurfacePoint, N: int, variant: str = "gamma", check: bool = True) -> RemainderReport:
    """R_N(z) (variant "gamma") or the reciprocal-series remainder, by subtraction."""
    _check_variant(variant)
    if not abs(z.angle) < mp.pi:
        raise DomainError("level-0 remainders are defined for |arg z| < pi")
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workdps(mp.mp.dps + GUARD):
        ref = gamma_star(z) if variant == "gamma" else reciprocal_gamma_star(z)
        part = partial_sum0(z, N, variant)
        rem = ref.value - part
        scale = max(abs(ref.value), abs(part), mp.mpf(1))
        err = abs(ref.value) * ref.est_rel_error + scale * mp.mpf(10) ** (-(mp.mp.dps - 3))
    if check:
        _check_cancellation(rem, err, "level-0 remainder")
    return RemainderReport(0, TruncationScheme(0, N), +part, +rem, +ref.value, variant, +err)


def _check_cancellation(value, abs_err, what: str):
    if abs(value) < abs_err * mp.mpf(10) ** 10:
        raise PrecisionError(f"{what}: fewer than 10 significant digits survive; raise the precision")


def _resurgence_rays(theta):
    # move the rays +-pi/2 away from z while keeping the exponentials decaying
    up = mp.pi / 2 + (mp.mpf("0.3") if theta < mp.pi / 2 else -mp.mpf("0.3"))
    down = -mp.pi / 2 - (mp.mpf("0.3") if theta > -mp.pi / 2 else -mp.mpf("0.3"))
    return up, down


def resurgence_integral(z: SurfacePoint, N: int, inner, variant: str = "gamma", digits=None,
                        decay: int = 0):
    """The Borel-type representation of a remainder, valid for |arg z| < pi/2.

    ``inner(t, sign)`` supplies the function multiplying e^{+/-2 pi i t} t^{N-1}/(1 - t/z)
    on the upper (sign=+1) and lower (sign=-1) ray.  With inner = Gamma*(t) this
    is R_N; with Gamma*(t e^{-/+ pi i}) and the opposite overall sign it is the
    reciprocal remainder.  ``decay`` is the power of 1/t carried by ``inner``;
    it recentres the quadrature on the peak of the integrand.
    """
    from .terminants.quadrature import ray_rule

    _check_variant(variant)
    theta = z.angle
    if not abs(theta) < mp.pi / 2:
        raise DomainError("the ray representation needs |arg z| < pi/2")
    digits = mp.mp.dps - 5 if digits is None else digits
    with mp.workdps(mp.mp.dps + GUARD):
        zc = z.to_complex()
        up, down = _resurgence_rays(theta)
        total = mp.mpc(0)
        for alpha, sign in ((up, 1), (down, -1)):
            rule = ray_rule(alpha, N - 1 - decay, 2 * mp.pi * abs(mp.sin(alpha)), digits,
                            poles=[zc])
            acc = []
            for w, t, lt in zip(rule.w, rule.t, rule.logt):
                tp = SurfacePoint(abs(t), Fraction(0), mp.im(lt))
                acc.append(w * mp.exp(sign * 2j * mp.pi * t + (N - 1) * lt) / (1 - t / zc)
                           * inner(tp, sign))
            total += sign * mp.fsum(acc)
        out = total / (2j * mp.pi) / z.power(N)
        if variant == "reciprocal":
            out = -out
    return +out


def remainder_level0_quadrature(z: SurfacePoint, N: int, variant: str = "gamma") -> mp.mpc:
    """Level-0 remainder from its ray-integral representation (cross-check path)."""
    if variant == "gamma":
        return resurgence_integral(z, N, lambda t, s: gamma_star(t).value, variant)
    return resurgence_integral(z, N, lambda t, s: gamma_star(t.rotate_pi(-s)).value, variant)
