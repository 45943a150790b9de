"""Right-hand sides of the magnitude bounds for equal-singulant hyperterminants.

The constants c_m are not known in closed form, so these functions return the
bounds without them; callers compare |F| against the returned scale.
"""
from __future__ import annotations

import mpmath as mp

from ..errors import DomainError
from ..surface import SurfacePoint
from .core import TerminantSpec


def _orders(spec: TerminantSpec):
    Ns = [mp.mpf(mp.re(N)) for N, _ in spec.levels]
    if any(mp.im(N) != 0 for N, _ in spec.levels):
        raise DomainError("the bounds are stated for real orders")
    return Ns


def _tails(Ns):
    return [mp.fsum(Ns[k:]) for k in range(len(Ns))]


def bound_scale(z: SurfacePoint, spec: TerminantSpec) -> mp.mpf:
    """|z|^-1 sqrt(N_m) Gamma(N_m) |s|^-N_m prod_k sqrt(S_k) Gamma(N_k - 1) |s|^{1-N_k}, times the sector factor.

    S_k = N_k + ... + N_m.  The sector factor is 1 for |phi| <= pi and
    |cos phi|^-S_1 for pi < |phi| < 3 pi / 2, phi = arg(sigma z).
    """
    Ns = _orders(spec)
    if any(not N > 1 for N in Ns):
        raise DomainError("orders must exceed 1")
    s = spec.levels[0][1].modulus
    S = _tails(Ns)
    log_b = -mp.log(z.modulus) + mp.log(Ns[-1]) / 2 + mp.loggamma(Ns[-1]) - Ns[-1] * mp.log(s)
    for k in range(len(Ns) - 1):
        log_b += mp.log(S[k]) / 2 + mp.loggamma(Ns[k] - 1) - (Ns[k] - 1) * mp.log(s)
    phi = abs(spec.levels[0][1].angle + z.angle)
    if phi > mp.pi:
        if not phi < 3 * mp.pi / 2:
            raise DomainError("the bound is stated for |arg(sigma z)| < 3 pi / 2")
        log_b -= S[0] * mp.log(abs(mp.cos(phi)))
    return mp.exp(log_b)


def origin_bound_scale(spec: TerminantSpec) -> mp.mpf:
    """sqrt(N_m) Gamma(N_m) |s|^-N_m Gamma(N_1 - 2) |s|^{2-N_1} prod_{1<k<m} sqrt(S_k) Gamma(N_k - 1) |s|^{1-N_k}."""
    Ns = _orders(spec)
    if len(Ns) < 2 or not Ns[0] > 2 or any(not N > 1 for N in Ns[1:]):
        raise DomainError("need m >= 2, N_1 > 2 and N_k > 1")
    s = spec.levels[0][1].modulus
    S = _tails(Ns)
    log_b = mp.log(Ns[-1]) / 2 + mp.loggamma(Ns[-1]) - Ns[-1] * mp.log(s)
    log_b += mp.loggamma(Ns[0] - 2) - (Ns[0] - 2) * mp.log(s)
    for k in range(1, len(Ns) - 1):
        log_b += mp.log(S[k]) / 2 + mp.loggamma(Ns[k] - 1) - (Ns[k] - 1) * mp.log(s)
    return mp.exp(log_b)
