"""Composite Gauss-Legendre rules on rays from the origin.

An integrand along the ray t = s e^{i alpha} is modelled as
|f| ~ s^p e^{-kappa s} times a factor analytic away from a few known poles.
Panels are geometric in s, the ray is cut where the model falls 10^-digits
below its peak, and each panel gets as many nodes as its share of the peak
and its distance to the poles require.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import mpmath as mp

_gl_cache: dict = {}
_gl_lock = threading.Lock()


def gauss_legendre(n: int):
    """Nodes and weights of the n-point rule on [-1, 1] at the working precision."""
    key = (n, mp.mp.prec)
    with _gl_lock:
        hit = _gl_cache.get(key)
    if hit is not None:
        return hit
    with mp.workprec(mp.mp.prec + 20):
        eps = mp.mpf(2) ** (-mp.mp.prec + 10)

        def legendre(x):
            p0, p1 = mp.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            return p1, n * (x * p1 - p0) / (x * x - 1)

        pos = []
        for i in range(n // 2):
            x = mp.cos(mp.pi * (i + mp.mpf(3) / 4) / (n + mp.mpf(1) / 2))
            for _ in range(100):
                pn, dp = legendre(x)
                dx = pn / dp
                x -= dx
                if abs(dx) < eps:
                    break
            pn, dp = legendre(x)
            pos.append((x, 2 / ((1 - x * x) * dp * dp)))
        if n % 2:
            _, dp = legendre(mp.mpf(0)) if n > 1 else (None, mp.mpf(1))
            mid = [(mp.mpf(0), 2 / (dp * dp))]
        else:
            mid = []
        pairs = [(-x, w) for x, w in pos] + mid + [(x, w) for x, w in reversed(pos)]
        full_x = [x for x, _ in pairs]
        full_w = [w for _, w in pairs]
    rule = ([+x for x in full_x], [+w for w in full_w])
    with _gl_lock:
        _gl_cache[key] = rule
    return rule


def _bernstein_rho(zeta) -> mp.mpf:
    # size of the largest ellipse with foci +-1 that excludes zeta
    zeta = mp.mpc(zeta)
    r = zeta + mp.sqrt(zeta - 1) * mp.sqrt(zeta + 1)
    return max(abs(r), 1 / abs(r)) if r != 0 else mp.mpf(1)


@dataclass
class RayRule:
    """Quadrature nodes along a ray.

    ``t`` are complex nodes, ``logt`` their surface logarithms
    (ln s + i alpha) and ``w`` the complex weights including dt/ds.
    """

    alpha: mp.mpf
    s: list
    t: list
    logt: list
    w: list

    def __len__(self):
        return len(self.t)

    def integrate(self, f) -> mp.mpc:
        """sum w_j f(t_j, logt_j)."""
        return mp.fsum(wj * f(tj, lj) for wj, tj, lj in zip(self.w, self.t, self.logt))


def _solve_drop(p, kappa, s_peak, L, upper: bool):
    """s with p ln s - kappa s = (value at s_peak) - L on the requested side."""
    f0 = (p * mp.log(s_peak) if p > 0 else 0) - kappa * s_peak

    def h(s):
        return (p * mp.log(s) if p > 0 else 0) - kappa * s - f0 + L

    if upper:
        lo = s_peak
        hi = s_peak + (L + 1) / kappa
        while h(hi) > 0:
            hi *= 2
    else:
        hi = s_peak
        lo = s_peak / 2
        while h(lo) > 0:
            lo /= 2
            if lo < mp.mpf(10) ** (-mp.mp.dps - 60):
                return lo
    for _ in range(200):
        mid = (lo + hi) / 2
        if (h(mid) > 0) == upper:
            lo = mid
        else:
            hi = mid
        if hi - lo < hi * mp.mpf(10) ** -6:
            break
    return (lo + hi) / 2


def ray_rule(alpha, p, kappa, digits, poles=(), ray_poles=(), ratio=2,
             refine=1.0, s_scale=None, max_nodes=400) -> RayRule:
    """Build a composite rule on the ray of surface angle ``alpha``.

    p, kappa  : magnitude model s^p e^{-kappa s} (kappa > 0)
    digits    : target relative accuracy in decimal digits
    poles     : complex points near which the integrand has poles
    ray_poles : angles of other rays whose points may be poles
    refine    : multiply node counts (used for error estimation)
    """
    alpha = mp.mpf(alpha)
    p = mp.mpf(p)
    kappa = mp.mpf(kappa)
    if kappa <= 0:
        raise ValueError("ray integrand must decay")
    L = digits * mp.log(10) + 8
    s_peak = p / kappa if p > 0 else 1 / kappa
    if s_scale is not None:
        s_peak = min(s_peak, s_scale) if p <= 0 else s_peak
    s_hi = _solve_drop(p, kappa, s_peak, L, upper=True)
    s_lo = _solve_drop(p, kappa, s_peak, L, upper=False) if p > 0 else s_peak * mp.mpf(10) ** (-digits)
    # panel edges: geometric both sides of the peak
    edges = [s_peak]
    while edges[0] > s_lo:
        edges.insert(0, edges[0] / ratio)
    while edges[-1] < s_hi:
        edges.append(edges[-1] * ratio)
    u = mp.expj(alpha)
    peak_val = (p * mp.log(s_peak) if p > 0 else 0) - kappa * s_peak
    s_all, t_all, l_all, w_all = [], [], [], []
    for a, b in zip(edges[:-1], edges[1:]):
        c = (a + b) / 2
        hw = (b - a) / 2
        near = min(max(s_peak, a), b)
        mval = (p * mp.log(near) if p > 0 else 0) - kappa * near
        need = digits - (peak_val - mval) / mp.log(10)
        if need < -2:
            continue
        need = max(need, 2)
        rho = _bernstein_rho(mp.mpc(-c / hw))  # branch point at the origin
        for P in poles:
            rho = min(rho, _bernstein_rho((mp.mpc(P) / u - c) / hw))
        for beta in ray_poles:
            v = mp.expj(beta) / u
            for rad in (a, c, b, abs(mp.re(v)) * c):
                rho = min(rho, _bernstein_rho((rad * v - c) / hw))
        rho = max(rho, mp.mpf("1.05"))
        n_pole = need * mp.log(10) / (2 * mp.log(rho))
        # the smooth factor behaves like exp(lam x) on the reference interval
        lam = abs(p / c - kappa) * hw + mp.sqrt(abs(p)) * hw / c + 1
        n_exp = mp.e * lam / 4
        while 2 * n_exp * mp.log(4 * n_exp / (mp.e * lam)) < need * mp.log(10):
            n_exp += 1
        n = int(mp.ceil(max(n_pole, n_exp) * refine)) + 2
        n = min(max(n, 4), max_nodes)
        xs, ws = gauss_legendre(n)
        for x, wt in zip(xs, ws):
            s = c + hw * x
            s_all.append(s)
            t_all.append(s * u)
            l_all.append(mp.mpc(mp.log(s), alpha))
            w_all.append(wt * hw * u)
    return RayRule(alpha, s_all, t_all, l_all, w_all)
