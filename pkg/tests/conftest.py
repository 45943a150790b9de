import mpmath as mp
import pytest


@pytest.fixture(autouse=True)
def _precision():
    old = mp.mp.dps
    mp.mp.dps = 50
    yield
    mp.mp.dps = old


def rel(a, b):
    s = max(abs(a), abs(b))
    return abs(a - b) / s if s else mp.mpf(0)


def f1_ray_quadrature(z, N, sigma):
    """Independent oracle for F1: the defining ray integral by mpmath's tanh-sinh rule."""
    a = mp.pi - sigma.angle
    e = mp.expj(a)
    zc = z.to_complex()

    def f(s):
        t = s * e
        return mp.exp(sigma.to_complex() * t + (N - 1) * (mp.log(s) + 1j * a)) / (zc - t) * e

    peak = (mp.re(N) - 1) / sigma.modulus
    return mp.quad(f, [0, peak / 2, peak, 2 * peak, 4 * peak, mp.inf])


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            for name, value in getattr(rep, "user_properties", []):
                if name == "criterion":
                    lines.append((value[0], f"criterion {value[0]:>2}: {'PASS' if rep.passed else 'FAIL'}  {value[1]}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
