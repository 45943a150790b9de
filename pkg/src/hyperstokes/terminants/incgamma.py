"""The normalised incomplete gamma function used by first-level terminants.

We work with

    G(N, w) = e^w w^(N-1) Gamma(1-N, w) = (1/Gamma(N)) int_0^inf e^-u u^(N-1) / (u + w) du

which is single valued on the principal sheet |arg w| < pi and carries no
exponential scale.  Away from the negative axis a continued fraction is used;
near it we integrate the first-order ODE  w G' = (w + N - 1) G - 1  along an
arc of constant |w| by Taylor steps.  Other sheets follow from the connection
formula.  Orders are stepped with  G(N+1) = (1 - w G(N)) / N.
"""
from __future__ import annotations

import mpmath as mp

from ..errors import ConvergenceError, DomainError
from ..surface import SurfacePoint

CF_ANGLE = mp.mpf("1.9")     # continued fraction used for |arg w| <= CF_ANGLE
ODE_STEP = mp.mpf("0.35")    # arc step for the Taylor continuation, radians
ODE_REACH = 2                # and at most this far in |w|, so terms stay near e^2
SMALL_R = 4                  # below this radius, continue inward from |w| = SMALL_R


def _eps():
    return mp.mpf(2) ** (-mp.mp.prec - 4)


def g_cf(N, w, maxiter=200000):
    """Continued fraction for G(N, w); needs w off the negative real axis."""
    tiny = mp.mpf(2) ** (-2 * mp.mp.prec - 100)
    eps = _eps()
    b = w + N
    f = b if b != 0 else tiny
    C, D = f, mp.mpc(0)
    for k in range(1, maxiter):
        a = -k * (N + k - 1)
        b = w + N + 2 * k
        D = b + a * D
        if D == 0:
            D = tiny
        D = 1 / D
        C = b + a / C
        if C == 0:
            C = tiny
        d = C * D
        f *= d
        if abs(d - 1) < eps:
            return 1 / f
    raise ConvergenceError(f"continued fraction for G({N}, {w}) did not converge")


def _far(N, r) -> bool:
    # beyond this radius the divergent series is accurate on all of |arg w| <= pi
    return r >= mp.mpf("1.2") * mp.mp.prec * mp.ln2 + 2 * abs(N) + 20


def g_series(N, w):
    """Large-|w| expansion sum_k (-1)^k (N)_k / w^(k+1), truncated at working precision."""
    eps = _eps()
    term = 1 / w
    total = term
    k = 0
    while abs(term) > eps * abs(total):
        term = -term * (N + k) / w
        total += term
        k += 1
        if k > 4 * mp.mp.prec:
            raise ConvergenceError("asymptotic series for G did not settle")
    return total


def _taylor_step(N, w0, g0, h):
    eps = _eps()
    g1 = ((w0 + N - 1) * g0 - 1) / w0
    total = g0 + g1 * h
    hp = h
    gkm1, gk = g0, g1
    k = 1
    quiet = 0
    while True:
        gnew = ((w0 + N - 1 - k) * gk + gkm1) / (w0 * (k + 1))
        hp *= h
        term = gnew * hp
        total += term
        if abs(term) <= eps * abs(total):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
        gkm1, gk = gk, gnew
        k += 1
        if k > 20 * mp.mp.dps + 200:
            raise ConvergenceError("Taylor continuation of G did not converge")


def g_principal(N, r, phi):
    """G(N, r e^{i phi}) for real phi in [-pi, pi]; phi = +-pi are the two cut edges."""
    r = mp.mpf(r)
    phi = mp.mpf(phi)
    if abs(phi) > mp.pi + _eps():
        raise DomainError("g_principal needs |phi| <= pi")
    on_cut = abs(abs(phi) - mp.pi) < 2 * _eps()
    if r < SMALL_R:
        # radial Taylor steps inward, each halving |w| at most
        g = g_principal(N, SMALL_R, phi)
        u = mp.mpc(-1) if on_cut else mp.expj(phi)
        rr = mp.mpf(SMALL_R)
        while rr > r:
            r1 = max(rr / 2, r)
            g = _taylor_step(N, rr * u, g, (r1 - rr) * u)
            rr = r1
        return g
    if _far(N, r):
        return g_series(N, mp.mpc(-r) if on_cut else r * mp.expj(phi))
    if abs(phi) <= CF_ANGLE:
        return g_cf(N, r * mp.expj(phi))
    sgn = 1 if phi > 0 else -1
    step = min(ODE_STEP, ODE_REACH / r)
    a = sgn * CF_ANGLE
    g = g_cf(N, r * mp.expj(a))
    while a != phi:
        if abs(phi - a) <= step:
            a1 = phi
        else:
            a1 = a + sgn * step
        w0 = r * mp.expj(a)
        w1 = mp.mpc(-r) if (a1 == phi and on_cut) else r * mp.expj(a1)
        g = _taylor_step(N, w0, g, w1 - w0)
        a = a1
    return g


def g_surface(N, w: SurfacePoint):
    """G(N, w) for w anywhere on the Riemann surface of the logarithm."""
    N = mp.mpmathify(N)
    with mp.workdps(mp.mp.dps + 10):
        phi = w.angle
        if abs(phi) <= mp.pi:
            return +g_principal(N, w.modulus, phi)
        # connection: G(w) = G(w e^{-2 pi i}) + 2 pi i e^{-pi i N} e^w w^{N-1} / Gamma(N)
        if phi > 0:
            inner = g_surface(N, w.rotate_pi(-2))
            extra = _conn_term(N, w)
            return inner + extra
        wp = w.rotate_pi(2)
        inner = g_surface(N, wp)
        return inner - _conn_term(N, wp)


def _conn_term(N, w: SurfacePoint):
    return (2j * mp.pi * mp.exp(-1j * mp.pi * N + w.to_complex()) * w.power(N - 1)
            / mp.gamma(N))


def g_orders(N0, count, w: SurfacePoint):
    """[G(N0 + j, w) for j in range(count)] from one evaluation plus recurrence.

    Stepping up in order is stable when the order exceeds |w| and stepping down
    is stable below it, so the seed is taken near |w|.
    """
    N0 = mp.mpmathify(N0)
    if count <= 0:
        return []
    with mp.workdps(mp.mp.dps + 10):
        r = w.modulus
        j0 = int(mp.nint(r - mp.re(N0)))
        j0 = min(max(j0, 0), count - 1)
        wc = w.to_complex()
        out = [None] * count
        out[j0] = g_surface(N0 + j0, w)
        for j in range(j0, count - 1):
            out[j + 1] = (1 - wc * out[j]) / (N0 + j)
        for j in range(j0, 0, -1):
            out[j - 1] = (1 - (N0 + j - 1) * out[j]) / wc
        return [+v for v in out]
