"""Level-1 and level-2 re-expansions of the remainders of Gamma*(z) and 1/Gamma*(z).

Remainders at every level are exact differences: oracle minus partial sum
minus the terminant sums of the lower levels.  Singulants are 2 pi e^{+/- i pi/2}
(written sp, sm below) and 4 pi e^{+/- i pi/2} for the doubled exponentials.

Second-level sums use four families F2(z; N-M+1, s1; M-k, s2) with s1, s2 in
{sp, sm}.  Each family is one outer quadrature with the inner terminant in
closed form.  The equal-singulant families follow the left-pole convention of
the terminants module; on the lower ray that convention sits on the opposite
side of the inner contour from the remainder integral, which is what produces
the single first-level correction sum in each variant.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .coeffs import gamma_mp, stirling_gamma
from .errors import DomainError, PrecisionError
from .reference import (RemainderReport, TruncationScheme, partial_sum0, remainder_level0,
                        resurgence_integral)
from .surface import SurfacePoint
from .terminants import F1_orders, F2_orders


__all__ = [
    "TruncationScheme", "MultiplierSample", "SmoothingCurve", "level1_terms", "remainder_level1",
    "remainder_level1_quadrature", "level2_terms", "remainder_level2", "stokes_multiplier",
    "stokes_multiplier_curve", "discontinuous_multipliers", "required_digits", "hierarchy",
]


@dataclass(frozen=True)
class MultiplierSample:
    theta: mp.mpf
    S: mp.mpc
    kind: str


@dataclass(frozen=True)
class SmoothingCurve:
    absz: mp.mpf
    N: int
    M: int
    kind: str
    digits: int
    samples: tuple


def _sing(modulus, sign):
    return SurfacePoint.pi(modulus, Fraction(sign, 2))


def _coef(k, variant):
    g = gamma_mp(k)
    return -g if variant == "gamma" and k % 2 else g


def _check_variant(variant):
    if variant not in ("gamma", "reciprocal"):
        raise ValueError("variant must be 'gamma' or 'reciprocal'")


# ----------------------------------------------------------------- digits

def required_digits(absz, level: int, N: int = None) -> int:
    """Working digits for exact level-`level` remainders at |z| = absz.

    The remainder after `level` re-expansions is about e^{-2 pi (level+1) |z|}
    relative to Gamma*; the partial sums can also exceed 1 by the size of
    their largest term.  Twenty guard digits cover the cancellation checks.
    """
    absz = mp.mpf(absz)
    depth = 2 * mp.pi * (level + 1) * absz / mp.log(10)
    growth = 0
    if N is not None:
        # log10 max_n gamma_n |z|^{-n}, with |gamma_n| ~ Gamma(n) (2 pi)^{-n}
        growth = max(0, max(mp.loggamma(n) - n * mp.log(2 * mp.pi * absz)
                            for n in range(1, N + 1)) / mp.log(10))
    return int(20 + mp.ceil(depth + growth))


# ---------------------------------------------------------------- level 1

def level1_terms(z: SurfacePoint, N: int, M: int):
    """Level-1 sums for (Gamma*, 1/Gamma*): first-level terminants with singulants 2 pi e^{+/- i pi/2}."""
    if not 0 <= M < N:
        raise ValueError("need 0 <= M < N")
    if M == 0:
        return mp.mpc(0), mp.mpc(0)
    with mp.workdps(mp.mp.dps + 10):
        # orders N-M+1 .. N; order N-m sits at index M-1-m
        fp = F1_orders(z, N - M + 1, M, _sing(2 * mp.pi, 1))
        fm = F1_orders(z, N - M + 1, M, _sing(2 * mp.pi, -1))
        diffs = [fp[M - 1 - m] - fm[M - 1 - m] for m in range(M)]
        pre = z.power(1 - N) / (2j * mp.pi)
        t = pre * mp.fsum(_coef(m, "gamma") * d for m, d in enumerate(diffs))
        tt = -pre * mp.fsum(_coef(m, "reciprocal") * d for m, d in enumerate(diffs))
    return +t, +tt


def remainder_level1(z: SurfacePoint, N: int, M: int, variant: str = "gamma") -> RemainderReport:
    """R_{N,M} (or its reciprocal counterpart) = level-0 remainder minus the level-1 sums."""
    _check_variant(variant)
    if not abs(z.angle) < mp.pi:
        raise DomainError("level-1 remainders are defined for |arg z| < pi")
    scheme = TruncationScheme(1, N, M)
    with mp.workdps(mp.mp.dps + 10):
        r0 = remainder_level0(z, N, variant)
        t, tt = level1_terms(z, N, M)
        t1 = t if variant == "gamma" else tt
        rem = r0.remainder - t1
        err = r0.est_abs_error + abs(t1) * mp.mpf(10) ** (-(mp.mp.dps - 5))
    _check(rem, err, "level-1 remainder")
    return RemainderReport(1, scheme, +(r0.partial_sum + t1), +rem, r0.oracle, variant, +err)


def remainder_level1_quadrature(z: SurfacePoint, N: int, M: int, variant: str = "gamma") -> mp.mpc:
    """R_{N,M} from its ray-integral representation with the exact R_M inside (|arg z| < pi/2)."""
    _check_variant(variant)
    if not M < N:
        raise ValueError("need M < N")

    def inner(t, sign):
        w = t if variant == "gamma" else t.rotate_pi(-sign)
        return remainder_level0(w, M, "gamma", check=False).remainder

    return resurgence_integral(z, N, inner, variant, decay=M)


def _check(value, err, what):
    if abs(value) < err * mp.mpf(10) ** 10:
        raise PrecisionError(f"{what}: fewer than 10 significant digits survive; raise the precision")


# ---------------------------------------------------------------- level 2

def _family(dps, z, N, M, K, signs, tol):
    # runs in a worker process: mpmath precision is global, so it travels with the job
    with mp.workdps(dps):
        s1, s2 = (_sing(2 * mp.pi, s) for s in signs)
        return F2_orders(z, N - M + 1, s1, M - K + 1, K, s2, tol)


def _families(z, N, M, K, tol, workers):
    jobs = {"pp": (1, 1), "pm": (1, -1), "mp": (-1, 1), "mm": (-1, -1)}
    args = [(mp.mp.dps, z, N, M, K, signs, tol) for signs in jobs.values()]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(_family, *zip(*args)))
    else:
        res = [_family(*a) for a in args]
    return dict(zip(jobs, res))


def level2_terms(z: SurfacePoint, N: int, M: int, K: int, tol=None, workers: int = 1):
    """Level-2 sums for (Gamma*, 1/Gamma*).

    Both variants share the four second-level families; with coefficients
    c_k = (-1)^k gamma_k (Gamma*) or gamma_k (1/Gamma*),

        T2 = (2 pi i)^-2 z^{1-N} sum_k c_k [F2(sp,sp) - F2(sp,sm) - F2(sm,sp) + F2(sm,sm)]
             - (2 pi i)^-1 z^{1-N} sum_k c_k F1(z; N-k, 4 pi e^{-/+ i pi/2}),

    the doubled singulant being 4 pi e^{-i pi/2} for Gamma* and 4 pi e^{+i pi/2}
    for 1/Gamma*.
    """
    if not 0 <= K < M < N:
        raise ValueError("need 0 <= K < M < N")
    if K == 0:
        return mp.mpc(0), mp.mpc(0)
    if tol is None:
        tol = mp.mpf(10) ** (-(mp.mp.dps - 15))
    with mp.workdps(mp.mp.dps + 10):
        fam = _families(z, N, M, K, tol, workers)
        # order M-k at index K-1-k
        combo = [fam["pp"].value[j] - fam["pm"].value[j] - fam["mp"].value[j] + fam["mm"].value[j]
                 for j in range(K)]
        u_minus = F1_orders(z, N - K + 1, K, _sing(4 * mp.pi, -1))
        u_plus = F1_orders(z, N - K + 1, K, _sing(4 * mp.pi, 1))
        pre1 = z.power(1 - N) / (2j * mp.pi)
        pre2 = pre1 / (2j * mp.pi)
        out = []
        for variant, u in (("gamma", u_minus), ("reciprocal", u_plus)):
            s2 = mp.fsum(_coef(k, variant) * combo[K - 1 - k] for k in range(K))
            s1 = mp.fsum(_coef(k, variant) * u[K - 1 - k] for k in range(K))
            out.append(pre2 * s2 - pre1 * s1)
    return +out[0], +out[1]


def remainder_level2(z: SurfacePoint, N: int, M: int, K: int, variant: str = "gamma",
                     tol=None, workers: int = 1) -> RemainderReport:
    """R_{N,M,K}: level-1 remainder minus the level-2 sums."""
    _check_variant(variant)
    scheme = TruncationScheme(2, N, M, K)
    with mp.workdps(mp.mp.dps + 10):
        r1 = remainder_level1(z, N, M, variant)
        t2 = level2_terms(z, N, M, K, tol, workers)[0 if variant == "gamma" else 1]
        rem = r1.remainder - t2
        quad_tol = mp.mpf(10) ** (-(mp.mp.dps - 25)) if tol is None else mp.mpf(tol)
        err = r1.est_abs_error + abs(t2) * quad_tol
    _check(rem, err, "level-2 remainder")
    return RemainderReport(2, scheme, +(r1.partial_sum + t2), +rem, r1.oracle, variant, +err)


def hierarchy(z: SurfacePoint, scheme: TruncationScheme = None, variant: str = "gamma",
              workers: int = 1) -> dict:
    """|R_N|, |R_{N,M}|, |R_{N,M,K}| for an optimal (or given) level-2 scheme."""
    scheme = scheme or TruncationScheme.optimal(z.modulus, 2)
    N, M, K = scheme.N, scheme.M, scheme.K
    digits = max(mp.mp.dps, required_digits(z.modulus, 2, N))
    with mp.workdps(digits):
        r0 = remainder_level0(z, N, variant).remainder
        r1 = remainder_level1(z, N, M, variant).remainder
        r2 = remainder_level2(z, N, M, K, variant, workers=workers).remainder
    return {"N": N, "M": M, "K": K, "digits": digits,
            "R0": abs(r0), "R1": abs(r1), "R2": abs(r2)}


# ------------------------------------------------------------ multipliers

def stokes_multiplier(z: SurfacePoint, N: int, M: int, kind: str = "s2") -> mp.mpc:
    """S2 with R_{N,M} = S2 e^{4 pi i z}, or S2~ with the reciprocal remainder = -S2~ e^{4 pi i z}."""
    if kind not in ("s2", "s2tilde"):
        raise ValueError("kind must be 's2' or 's2tilde'")
    variant = "gamma" if kind == "s2" else "reciprocal"
    with mp.workdps(mp.mp.dps + 5):
        r = remainder_level1(z, N, M, variant).remainder
        e = mp.exp(4j * mp.pi * z.to_complex())
        s = r / e if kind == "s2" else -r / e
    return +s


def stokes_multiplier_curve(absz, kind: str, theta_grid, digits: int = None,
                            workers: int = 1) -> SmoothingCurve:
    """Modified multipliers on a grid of arg z, with N = floor(4 pi |z|), M = floor(2 pi |z|)."""
    absz = mp.mpf(absz)
    scheme = TruncationScheme.optimal(absz, 1)
    N, M = scheme.N, scheme.M
    if digits is None:
        digits = max(mp.mp.dps, required_digits(absz, 1, N))

    jobs = [(digits, absz, mp.mpf(t), N, M, kind) for t in theta_grid]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            samples = list(ex.map(_sample, *zip(*jobs)))
    else:
        samples = [_sample(*j) for j in jobs]
    samples.sort(key=lambda s: s.theta)
    return SmoothingCurve(absz, N, M, kind, digits, tuple(samples))


def _sample(digits, absz, theta, N, M, kind):
    with mp.workdps(digits):
        z = SurfacePoint.polar(absz, theta)
        return MultiplierSample(theta, stokes_multiplier(z, N, M, kind), kind)


def discontinuous_multipliers(k: int, theta):
    """Piecewise-constant multipliers (S^(k), S~^(k)) of the complete transseries, as Fractions."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a = abs(mp.mpf(theta)) if not isinstance(theta, Fraction) else abs(theta)
    half = mp.pi / 2 if not isinstance(theta, Fraction) else Fraction(1, 2)
    whole = mp.pi if not isinstance(theta, Fraction) else Fraction(1)
    if not a < whole:
        raise DomainError("multipliers are defined for |theta| < pi")
    if a < half:
        return Fraction(0), Fraction(0)
    if a == half:
        s = _poch(Fraction(1, 2), k) / _fact(k)
        st = Fraction(1, 2) if k == 1 else -_poch(Fraction(-1, 2), k) / _fact(k)
        return s, st
    return Fraction(1), Fraction(1) if k == 1 else Fraction(0)


def _poch(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def _fact(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def series_check(n: int) -> Fraction:
    """gamma_n as a Fraction (convenience re-export)."""
    return stirling_gamma(n)
