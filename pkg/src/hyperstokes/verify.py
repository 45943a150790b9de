"""Identity checks with measured residuals, grouped into named suites."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .surface import SurfacePoint

SUITES = ["coeffs", "oracle", "smoothing", "connection", "howls", "levels"]


@dataclass(frozen=True)
class Check:
    name: str
    residual: mp.mpf
    threshold: mp.mpf

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": mp.nstr(self.residual, 8),
                "threshold": mp.nstr(self.threshold, 3), "passed": self.passed}


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else mp.mpf(0)


def random_howls_inputs(count: int, seed: int):
    """(z, N, sigma, m) with |arg(sigma z)| < pi, N in [4, 12], |z| in [1, 6], m alternating 2, 3."""
    rng = random.Random(seed)
    out = []
    for j in range(count):
        N = mp.mpf(rng.uniform(4, 12))
        sigma = SurfacePoint.polar(mp.mpf(rng.uniform(1, 8)), mp.mpf(rng.uniform(-mp.pi, mp.pi)))
        phi = mp.mpf(rng.uniform(-3.0, 3.0))
        z = SurfacePoint.polar(mp.mpf(rng.uniform(1, 6)), phi - sigma.angle)
        out.append((z, N, sigma, 2 + j % 2))
    return out


def suite_coeffs(**_):
    from .coeffs import convolution_defect, stirling_gamma

    worst = max(abs(convolution_defect(n) - (1 if n == 0 else 0)) for n in range(41))
    lit = [stirling_gamma(1) + Fraction(1, 12), stirling_gamma(2) - Fraction(1, 288),
           stirling_gamma(3) - Fraction(139, 51840)]
    return [Check("coeffs.convolution_n<=40", _q(worst), mp.mpf(0)),
            Check("coeffs.literals", _q(max(abs(v) for v in lit)), mp.mpf(0))]


def _q(x: Fraction) -> mp.mpf:
    return mp.mpf(x.numerator) / x.denominator


def suite_oracle(**_):
    from .reference import functional_residual, gamma_star

    dps = mp.mp.dps
    r1 = _rel(gamma_star(SurfacePoint(mp.mpf(1))).value, mp.e / mp.sqrt(2 * mp.pi))
    worst = mp.mpf(0)
    for j in range(20):
        z = SurfacePoint.pi(mp.mpf(1) + mp.mpf(j) / 4, Fraction(j - 10, 11))
        worst = max(worst, abs(functional_residual(z)))
    thr = mp.mpf(10) ** (-(dps - 10))
    return [Check("oracle.gamma_star(1)", r1, thr), Check("oracle.functional_relation", worst, thr)]


def suite_smoothing(**_):
    from .smoothing import c_residual, stokes_line_value

    worst = max(c_residual(mp.mpf(k) / 7) for k in range(-60, 61))
    exact = max(abs(stokes_line_value(m) - _half_poch(m)) for m in range(1, 6))
    return [Check("smoothing.c_residual", worst, mp.mpf(10) ** (-(mp.mp.dps - 10))),
            Check("smoothing.stokes_line_values", _q(exact), mp.mpf(0))]


def _half_poch(m: int) -> Fraction:
    out = Fraction(1)
    for j in range(m):
        out *= Fraction(1, 2) + j
        out /= j + 1
    return out


def suite_connection(count=4, seed=0, tol=None, **_):
    from .terminants import TerminantSpec, connection, F_bell

    rng = random.Random(seed + 1)
    checks = []
    worst1 = worst2 = mp.mpf(0)
    for _ in range(count):
        N = mp.mpf(rng.uniform(2, 10))
        sigma = SurfacePoint.polar(2 * mp.pi, mp.mpf(rng.choice([-1, 1])) * mp.pi / 2)
        z = SurfacePoint.polar(mp.mpf(rng.uniform(1, 5)), mp.mpf(rng.uniform(-2.5, 2.5)))
        for m in (1, 2):
            spec = TerminantSpec.equal(N, sigma, m)
            scale = abs(F_bell(z.rotate_pi(-2), N, sigma, m)) + abs(F_bell(z, N, sigma, m))
            r = abs(connection(z, spec, "bell" if m == 2 else "closed")) / scale
            if m == 1:
                worst1 = max(worst1, r)
            else:
                worst2 = max(worst2, r)
    thr = mp.mpf(10) ** (-(mp.mp.dps - 15))
    checks.append(Check("connection.m1", worst1, thr))
    checks.append(Check("connection.m2_bell", worst2, thr))
    return checks


def suite_howls(count=20, seed=2024, tol=None, **_):
    from .terminants import F_bell, TerminantSpec, fm_quadrature

    tol = mp.mpf(10) ** -20 if tol is None else tol
    worst = {2: mp.mpf(0), 3: mp.mpf(0)}
    for z, N, sigma, m in random_howls_inputs(count, seed):
        q = fm_quadrature(z, TerminantSpec.equal(N, sigma, m), tol).value
        worst[m] = max(worst[m], _rel(q, F_bell(z, N, sigma, m)))
    return [Check(f"howls.m{m}_quadrature_vs_bell", worst[m], mp.mpf("1e-8")) for m in (2, 3)
            if count >= m - 1]


def suite_levels(**_):
    from .hyper import remainder_level1, remainder_level1_quadrature

    z = SurfacePoint.pi(5, Fraction(9, 20))
    a = remainder_level1(z, 62, 31).remainder
    b = remainder_level1_quadrature(z, 62, 31)
    return [Check("levels.level1_two_paths", _rel(a, b), mp.mpf("1e-4"))]


def run_suite(name: str, count: int = 20, seed: int = 2024, tol=None) -> list:
    fn = {"coeffs": suite_coeffs, "oracle": suite_oracle, "smoothing": suite_smoothing,
          "connection": suite_connection, "howls": suite_howls, "levels": suite_levels}[name]
    return fn(count=count, seed=seed, tol=tol)
