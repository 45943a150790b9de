"""Hyperterminants F^(m): closed forms, nested ray quadrature and identities."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from ..errors import ConvergenceError, DomainError
from ..surface import SurfacePoint
from .incgamma import ODE_REACH, g_orders, g_surface, _taylor_step
from .quadrature import ray_rule

EDGE = mp.mpf("0.35")      # keep z at least this far (radians) from the first contour
SPREAD = mp.mpf("0.5")     # preferred angle between neighbouring contours
MAX_TILT = mp.mpf("1.25")  # contours stay within this angle of steepest descent


@dataclass(frozen=True)
class TerminantSpec:
    """Orders and singulants (N_1, sigma_1), ..., (N_m, sigma_m)."""

    levels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        lv = tuple((mp.mpmathify(N), s) for N, s in self.levels)
        for N, s in lv:
            if not isinstance(s, SurfacePoint):
                raise TypeError("singulants must be SurfacePoint instances")
        object.__setattr__(self, "levels", lv)

    @classmethod
    def of(cls, *pairs) -> "TerminantSpec":
        return cls(tuple(pairs))

    @classmethod
    def equal(cls, N, sigma: SurfacePoint, m: int) -> "TerminantSpec":
        return cls(tuple((N, sigma) for _ in range(m)))

    @property
    def m(self) -> int:
        return len(self.levels)

    def tail(self) -> "TerminantSpec":
        return TerminantSpec(self.levels[1:])

    def coincident(self) -> list:
        """Flags: arg sigma_k = arg sigma_{k+1} (mod 2 pi)."""
        return [_same_direction(a[1], b[1]) for a, b in zip(self.levels, self.levels[1:])]

    def check(self):
        for N, _ in self.levels:
            if not mp.re(N) > 1:
                raise DomainError(f"order {N} must have real part > 1")


def _same_direction(a: SurfacePoint, b: SurfacePoint) -> bool:
    d = (a.turns - b.turns) % 2
    if a.offset == b.offset:
        return d == 0
    diff = (a.angle - b.angle) / (2 * mp.pi)
    return abs(diff - mp.nint(diff)) < mp.mpf(10) ** (-mp.mp.dps + 5)


@dataclass(frozen=True)
class Estimate:
    value: mp.mpc
    error: mp.mpf


def _pole_point(at: SurfacePoint, sigma1: SurfacePoint, sigma2: SurfacePoint) -> SurfacePoint:
    """Where the inner terminant is read when the first contour sweeps over t1 = at.

    On the first contour arg(sigma2 t1) is fixed by the inner contour (pi for
    coincident singulants, otherwise reduced into (-pi, pi]); near the pole the
    inner integral is single valued, so that angle is continued to t1 = at.
    """
    if _same_direction(sigma1, sigma2):
        ray = mp.pi
    else:
        ray = _reduce(sigma2.angle + mp.pi - sigma1.angle)
    psi = ray + sigma1.angle + at.angle - mp.pi
    if _same_direction(sigma1, sigma2) and sigma1.angle == sigma2.angle:
        return at
    return SurfacePoint.polar(at.modulus, psi - sigma2.angle)


def _reduce(x):
    """Reduce an angle into (-pi, pi]."""
    y = x - 2 * mp.pi * mp.floor((x + mp.pi) / (2 * mp.pi))
    if y == -mp.pi:
        y = mp.pi
    return y


# ---------------------------------------------------------------- F^(1)

def F1(z: SurfacePoint, N, sigma: SurfacePoint) -> mp.mpc:
    """First-level terminant by its incomplete gamma closed form, on any sheet."""
    N = mp.mpmathify(N)
    if not mp.re(N) > 1:
        raise DomainError("F1 needs Re N > 1")
    with mp.workdps(mp.mp.dps + 10):
        w = sigma * z
        val = (mp.exp(1j * mp.pi * N) * sigma.power(1 - N) * mp.gamma(N)
               * g_surface(N, w))
    return +val


def F1_orders(z: SurfacePoint, N0, count: int, sigma: SurfacePoint) -> list:
    """[F1(z; N0 + j, sigma) for j < count], sharing one incomplete gamma evaluation."""
    N0 = mp.mpmathify(N0)
    if count <= 0:
        return []
    if not mp.re(N0) > 1:
        raise DomainError("F1 needs Re N > 1")
    with mp.workdps(mp.mp.dps + 10):
        gs = g_orders(N0, count, sigma * z)
        out = []
        pref = mp.exp(1j * mp.pi * N0) * sigma.power(1 - N0) * mp.gamma(N0)
        sc = sigma.to_complex()
        for j, g in enumerate(gs):
            out.append(pref * g)
            pref = pref * (-1) / sc * (N0 + j)
        return [+v for v in out]


def F_bell(z: SurfacePoint, N, sigma: SurfacePoint, m: int) -> mp.mpc:
    """Equal-order, equal-singulant F^(m) from the complete Bell polynomial form."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return mp.mpc(1)
    N = mp.mpmathify(N)
    with mp.workdps(mp.mp.dps + 10):
        ys = []
        for j in range(1, m + 1):
            ys.append((2j * mp.pi) ** (j - 1) / j * F1(z, j * N - j + 1, sigma.scale(j)))
        val = bell_complete(ys)
    return +val


def bell_complete(y: Sequence) -> mp.mpc:
    """Complete Bell polynomial Y_m(y_1..y_m), normalised so exp(sum y_k t^k) = sum Y_m t^m."""
    Y = [mp.mpc(1)]
    for n in range(1, len(y) + 1):
        Y.append(mp.fsum(k * y[k - 1] * Y[n - k] for k in range(1, n + 1)) / n)
    return Y[-1]


# ------------------------------------------------------- nested quadrature

def _contour_tilts(spec: TerminantSpec, beta1) -> list:
    """Rotation of every contour away from its steepest-descent direction."""
    m = spec.m
    alphas = [mp.pi - s.angle for _, s in spec.levels]
    betas = [mp.mpf(beta1)]
    flags = spec.coincident()
    longest, run = 0, 0
    for flag in flags:
        run = run + 1 if flag else 0
        longest = max(longest, run)
    spread = SPREAD
    if longest:
        spread = min(SPREAD, (MAX_TILT - beta1) / longest)
    for k in range(1, m):
        prev = alphas[k - 1] + betas[k - 1]
        d = _reduce(alphas[k] - prev)
        if flags[k - 1]:
            b = prev + spread - alphas[k]
            b = b - 2 * mp.pi * mp.nint(b / (2 * mp.pi))
        elif abs(d) < spread:
            b = (spread - abs(d)) * (1 if d > 0 else -1)
        else:
            b = mp.mpf(0)
        if abs(b) > MAX_TILT + mp.mpf("1e-20"):
            raise DomainError("contour configuration too tight for rotated-ray quadrature")
        betas.append(b)
    return betas


def _nested(z: SurfacePoint, spec: TerminantSpec, betas, digits, refine):
    m = spec.m
    zc = z.to_complex()
    rules = []
    angles = [mp.pi - s.angle + b for (_, s), b in zip(spec.levels, betas)]
    for k, ((N, s), b) in enumerate(zip(spec.levels, betas)):
        poles = [zc] if k == 0 else []
        rays = []
        if k > 0:
            rays.append(angles[k - 1])
        if k + 1 < m:
            rays.append(angles[k + 1])
        rules.append(ray_rule(angles[k], mp.re(N) - 1, s.modulus * mp.cos(b), digits,
                              poles=poles, ray_poles=rays, refine=refine))
    vals = None
    for k in range(m - 1, -1, -1):
        N, s = spec.levels[k]
        sc = s.to_complex()
        rule = rules[k]
        v = [w * mp.exp(sc * t + (N - 1) * lt) for w, t, lt in zip(rule.w, rule.t, rule.logt)]
        if vals is not None:
            inner_t = rules[k + 1].t
            v = [vj * mp.fsum(vi / (tj - ti) for vi, ti in zip(vals, inner_t))
                 for vj, tj in zip(v, rule.t)]
        vals = v
    return mp.fsum(vi / (zc - ti) for vi, ti in zip(vals, rules[0].t))


def fm_quadrature(z: SurfacePoint, spec: TerminantSpec, tol=None,
                  continuation: str = "auto", coincident: str = "rotation") -> Estimate:
    """F^(m)(z) by nested ray quadrature.

    Coincident singulants follow the left-pole convention.  With
    ``coincident="rotation"`` the inner contours are turned by finite angles,
    which by Cauchy's theorem gives the limit exactly; ``"richardson"`` instead
    tilts the singulants by (m-k) eps for a sequence of eps and extrapolates.
    Outside |arg(sigma_1 z)| < pi the connection formula is applied
    (``continuation="auto"``) or, within half a radian of the boundary, the
    first contour is turned past z (``"rotate"``).
    """
    spec.check()
    if spec.m == 0:
        return Estimate(mp.mpc(1), mp.mpf(0))
    if tol is None:
        tol = mp.mpf(10) ** (-(mp.mp.dps - 15))
    tol = mp.mpf(tol)
    if coincident == "richardson" and any(spec.coincident()):
        return _richardson(z, spec, tol, continuation)
    digits = int(mp.ceil(-mp.log10(tol))) + 3
    with mp.workdps(max(mp.mp.dps, digits) + 10):
        sigma1 = spec.levels[0][1]
        N1 = spec.levels[0][0]
        phi = sigma1.angle + z.angle
        lim = mp.pi - EDGE
        if continuation == "rotate" and lim < phi < mp.pi + mp.mpf("0.6"):
            beta1 = mp.mpf("0.7")
        elif continuation == "rotate" and -mp.pi - mp.mpf("0.6") < phi < -lim:
            beta1 = -mp.mpf("0.7")
        elif phi >= lim:
            zz = z.rotate_pi(-2)
            a = fm_quadrature(zz, spec, tol, continuation, coincident)
            b = fm_quadrature(_pole_point(z, sigma1, spec.levels[1][1]) if spec.m > 1 else z,
                              spec.tail(), tol, continuation, coincident)
            pre = 2j * mp.pi * mp.exp(sigma1.to_complex() * z.to_complex()) * z.power(N1 - 1)
            return Estimate(a.value + pre * b.value, a.error + abs(pre) * b.error)
        elif phi < -mp.pi - EDGE:
            zz = z.rotate_pi(2)
            a = fm_quadrature(zz, spec, tol, continuation, coincident)
            b = fm_quadrature(_pole_point(zz, sigma1, spec.levels[1][1]) if spec.m > 1 else zz,
                              spec.tail(), tol, continuation, coincident)
            pre = 2j * mp.pi * mp.exp(sigma1.to_complex() * zz.to_complex()) * zz.power(N1 - 1)
            return Estimate(a.value - pre * b.value, a.error + abs(pre) * b.error)
        elif phi <= -lim:
            beta1 = -mp.mpf("0.6")
        else:
            beta1 = mp.mpf(0)
        betas = _contour_tilts(spec, beta1)
        coarse = _nested(z, spec, betas, digits, 1.0)
        fine = _nested(z, spec, betas, digits + 4, 1.6)
        err = abs(fine - coarse)
    return Estimate(+fine, +err)


def _richardson(z, spec, tol, continuation):
    m = spec.m
    eps0 = mp.mpf("0.01")
    rows = []
    prev_best = None
    for j in range(8):
        eps = eps0 / 2 ** j
        levels = tuple((N, s.rotate((m - 1 - k) * eps)) for k, (N, s) in enumerate(spec.levels))
        val = fm_quadrature(z, TerminantSpec(levels), tol / 100, continuation, "rotation").value
        row = [val]
        for i, prev in enumerate(rows[-1] if rows else []):
            row.append(row[i] + (row[i] - prev) / (2 ** (i + 1) - 1))
        rows.append(row)
        best = row[-1]
        if prev_best is not None and abs(best - prev_best) <= tol * abs(best):
            return Estimate(best, abs(best - prev_best))
        prev_best = best
    raise ConvergenceError("epsilon extrapolation stalled")


# ----------------------------------------------------- second-level families

def _g_on_ray(N, ws: list) -> list:
    """G(N, w) at points of one ray (SurfacePoints, increasing modulus).

    One direct evaluation where |e^w w^(N-1)| peaks, then Taylor steps outward,
    a direction in which errors along the homogeneous solution shrink.
    """
    if not ws:
        return []
    mags = [mp.re(w.to_complex()) + mp.re((N - 1) * w.log()) for w in ws]
    j0 = max(range(len(ws)), key=lambda j: mags[j])
    out = [None] * len(ws)
    out[j0] = g_surface(N, ws[j0])
    wc = [w.to_complex() for w in ws]
    for j in range(j0 + 1, len(ws)):
        out[j] = _march(N, wc[j - 1], out[j - 1], wc[j])
    for j in range(j0 - 1, -1, -1):
        out[j] = _march(N, wc[j + 1], out[j + 1], wc[j])
    return out


def _march(N, w0, g0, w1):
    # keep each Taylor step within half the distance to the singular point 0,
    # and short enough that the series does not cancel
    g, w = g0, w0
    while True:
        h = w1 - w
        reach = min(abs(w) / 2, ODE_REACH)
        if abs(h) <= reach:
            return _taylor_step(N, w, g, h)
        h = h * reach / abs(h)
        g = _taylor_step(N, w, g, h)
        w = w + h


def F2_orders(z: SurfacePoint, A, sigma1: SurfacePoint, B0, count: int,
              sigma2: SurfacePoint, tol=None) -> Estimate:
    """[F^(2)(z; A, sigma1; B0 + j, sigma2) for j < count].

    Outer ray by quadrature, inner first-level terminant in closed form, so the
    whole family costs one outer pass.  Returns an Estimate whose value is a list.
    """
    A = mp.mpmathify(A)
    B0 = mp.mpmathify(B0)
    if not (mp.re(A) > 1 and mp.re(B0) > 1):
        raise DomainError("orders must have real part > 1")
    if tol is None:
        tol = mp.mpf(10) ** (-(mp.mp.dps - 15))
    digits = int(mp.ceil(-mp.log10(tol))) + 3
    with mp.workdps(max(mp.mp.dps, digits) + 10):
        phi = sigma1.angle + z.angle
        lim = mp.pi - EDGE
        if phi >= lim or phi < -mp.pi - EDGE:
            up = phi >= lim
            zz = z.rotate_pi(-2 if up else 2)
            base = F2_orders(zz, A, sigma1, B0, count, sigma2, tol)
            at = z if up else zz
            tails = F1_orders(_pole_point(at, sigma1, sigma2), B0, count, sigma2)
            pre = 2j * mp.pi * mp.exp(sigma1.to_complex() * at.to_complex()) * at.power(A - 1)
            sign = 1 if up else -1
            vals = [b + sign * pre * t for b, t in zip(base.value, tails)]
            return Estimate(vals, base.error)
        beta1 = -mp.mpf("0.6") if phi <= -lim else mp.mpf(0)
        coarse = _f2_pass(z, A, sigma1, B0, count, sigma2, beta1, digits, 1.0)
        fine = _f2_pass(z, A, sigma1, B0, count, sigma2, beta1, digits + 4, 1.6)
        err = max(abs(a - b) / max(abs(b), mp.mpf(10) ** (-mp.mp.dps)) for a, b in zip(coarse, fine))
    return Estimate([+v for v in fine], +err)


def _f2_pass(z, A, sigma1, B0, count, sigma2, beta1, digits, refine):
    zc = z.to_complex()
    alpha = mp.pi - sigma1.angle
    rule = ray_rule(alpha + beta1, mp.re(A) - 1, sigma1.modulus * mp.cos(beta1), digits,
                    poles=[zc], refine=refine)
    # angle of sigma2 t1 on the contour: window (-pi, pi], coincident rays at +pi
    phi2 = _reduce(sigma2.angle + alpha)
    if _same_direction(sigma1, sigma2):
        phi2 = mp.pi
    phi2 = phi2 + beta1
    ws = [SurfacePoint(sigma2.modulus * s, Fraction(0), phi2) for s in rule.s]
    sc1 = sigma1.to_complex()
    sc2 = sigma2.to_complex()
    # F1(t; B, sigma2) = e^{pi i B} sigma2^{1-B} Gamma(B) G(B, sigma2 t)
    gs0 = _g_on_ray(B0, ws)
    sums = [mp.mpc(0)] * count
    acc = [[] for _ in range(count)]
    for w, t, lt, g0, wp in zip(rule.w, rule.t, rule.logt, gs0, ws):
        outer = w * mp.exp(sc1 * t + (A - 1) * lt) / (zc - t)
        wc = wp.to_complex()
        g = g0
        for j in range(count):
            acc[j].append(outer * g)
            g = (1 - wc * g) / (B0 + j)
    res = []
    pref = mp.exp(1j * mp.pi * B0) * sigma2.power(1 - B0) * mp.gamma(B0)
    for j in range(count):
        res.append(pref * mp.fsum(acc[j]))
        pref = pref * (-1) / sc2 * (B0 + j)
    return res


def F2_mixed_reduced(z: SurfacePoint, A, sigma: SurfacePoint, B, tol=None) -> mp.mpc:
    """F^(2)(z; A, sigma; B, sigma e^{-pi i}) via the one-dimensional u-integral.

    u = t2 / (t1 e^{pi i}) and s = t1 (1 + u) turn the double integral into
    e^{pi i B} int_0^inf u^(B-1) (1+u)^(1-A-B) F1((1+u) z; A+B-1, sigma) du.
    """
    A = mp.mpmathify(A)
    B = mp.mpmathify(B)
    if tol is None:
        tol = mp.mpf(10) ** (-(mp.mp.dps - 15))
    with mp.workdps(mp.mp.dps + 10):
        C = A + B - 1

        def f(u):
            zu = z.scale(1 + u)
            return (mp.power(u, B - 1) * mp.power(1 + u, 1 - A - B) * F1(zu, C, sigma))

        # the integrand behaves like u^(B-1) at 0 and u^(-A-1) at infinity
        val = mp.quad(f, [0, mp.mpf(1) / 4, 1, 4, 16, mp.inf])
        val = mp.exp(1j * mp.pi * B) * val
    return +val


# ---------------------------------------------------------- identities

def evaluate(z: SurfacePoint, spec: TerminantSpec, method: str = "auto", tol=None) -> mp.mpc:
    """F^(m)(z) by the cheapest applicable route."""
    if spec.m == 0:
        return mp.mpc(1)
    if spec.m == 1 and method in ("auto", "closed", "bell"):
        return F1(z, *spec.levels[0])
    if method in ("auto", "bell") and _all_equal(spec):
        return F_bell(z, spec.levels[0][0], spec.levels[0][1], spec.m)
    if method == "bell":
        raise DomainError("Bell form needs equal orders and singulants")
    cont = "rotate" if method == "quad-rotate" else "auto"
    return fm_quadrature(z, spec, tol, continuation=cont).value


def _all_equal(spec: TerminantSpec) -> bool:
    N0, s0 = spec.levels[0]
    return all(N == N0 and s.modulus == s0.modulus and _same_direction(s, s0)
               and s.angle == s0.angle for N, s in spec.levels)


def connection(z: SurfacePoint, spec: TerminantSpec, method: str = "auto", tol=None) -> mp.mpc:
    """Residual of F(z e^{-2 pi i}) - F(z) + 2 pi i e^{sigma_1 z} z^(N_1 - 1) F^(m-1)(z; tail)."""
    if spec.m < 1:
        raise ValueError("m must be >= 1")
    N1, s1 = spec.levels[0]
    with mp.workdps(mp.mp.dps + 5):
        a = evaluate(z.rotate_pi(-2), spec, method, tol)
        b = evaluate(z, spec, method, tol)
        c = evaluate(z, spec.tail(), method, tol)
        r = a - b + 2j * mp.pi * mp.exp(s1.to_complex() * z.to_complex()) * z.power(N1 - 1) * c
    return +r


def F_origin(spec: TerminantSpec, tol=None) -> mp.mpc:
    """lim_{z -> 0} F^(m)(z), from the one-dimensional outer integral."""
    spec.check()
    m = spec.m
    if m == 0:
        return mp.mpc(1)
    N1, s1 = spec.levels[0]
    if m >= 2 and not (mp.im(N1) == 0 and N1 > 2):
        raise DomainError("origin value needs real N_1 > 2")
    with mp.workdps(mp.mp.dps + 10):
        lead = mp.exp(1j * mp.pi * N1) * s1.power(1 - N1)
        if m == 1:
            return +(lead * mp.gamma(N1 - 1))
        digits = mp.mp.dps if tol is None else int(mp.ceil(-mp.log10(tol))) + 3
        rule = ray_rule(0, mp.re(N1) - 2, 1, digits)
        tail = spec.tail()
        N2, s2 = tail.levels[0]
        # x = (t / |sigma_1|) e^{i (pi - arg sigma_1)}; reduce arg(sigma_2 x) to (-pi, pi]
        alpha = mp.pi - s1.angle
        phi2 = _reduce(s2.angle + alpha)
        if _same_direction(s1, s2):
            phi2 = mp.pi
        shift = phi2 - (s2.angle + alpha)
        xs = [SurfacePoint(t.real / s1.modulus, Fraction(0), alpha + shift) for t in rule.t]
        if tail.m == 1:
            ws = [s2 * x for x in xs]
            gs = _g_on_ray(N2, ws)
            pref = mp.exp(1j * mp.pi * N2) * s2.power(1 - N2) * mp.gamma(N2)
            inner = [pref * g for g in gs]
        else:
            inner = [evaluate(x, tail, "auto", tol) for x in xs]
        total = mp.fsum(w * mp.exp(-t + (N1 - 2) * lt) * f
                        for w, t, lt, f in zip(rule.w, rule.t, rule.logt, inner))
        return +(lead * total)


def recurrence_shift(z: SurfacePoint, N, sigma: SurfacePoint, m: int, n: int,
                     method: str = "auto", tol=None) -> mp.mpc:
    """Residual of the order-shift identity for F^(m)(z; N, ..., N, N - n), equal singulants.

    z F^(m)(.., N-n) - F^(m)(.., N-n+1)
        + sum_{k<m} F^(k)(z; N x k) F^(m-k)(0; orders k+1..m, the first raised by one).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    N = mp.mpmathify(N)
    orders = [N] * (m - 1) + [N - n]
    with mp.workdps(mp.mp.dps + 5):
        def spec_of(ords):
            return TerminantSpec(tuple((o, sigma) for o in ords))

        lhs = z.to_complex() * evaluate(z, spec_of(orders), method, tol)
        lhs -= evaluate(z, spec_of(orders[:-1] + [orders[-1] + 1]), method, tol)
        for k in range(m):
            head = evaluate(z, spec_of([N] * k), method, tol) if k else mp.mpc(1)
            tail = list(orders[k:])
            tail[0] = tail[0] + 1
            lhs += head * F_origin(spec_of(tail), tol)
    return +lhs
