from fractions import Fraction

import mpmath as mp
import pytest

from hyperstokes.coeffs import gamma_mp
from hyperstokes.errors import DomainError
from hyperstokes.reference import remainder_level0
from hyperstokes.smoothing import (PartitionMultiplicity, berry_smoothing_level1, c_of_phi,
                                   c_residual, erfc, erfc_polynomial, level2_factors,
                                   level2_smoothing, mixed_scaled, normalised_F1,
                                   normalised_terminant, olver_F1_approx, partition_coefficient,
                                   partitions, stokes_line_value, theorem_approx, transition)
from hyperstokes.surface import SurfacePoint

def sig():
    return SurfacePoint.pi(2 * mp.pi, Fraction(1, 2))


def at_phi(absw, phi):
    """z with arg(sigma z) = phi and |sigma z| = absw for sigma = 2 pi i."""
    return SurfacePoint.polar(absw / (2 * mp.pi), mp.mpf(phi) - mp.pi / 2)


def test_c_at_stokes_line():
    assert abs(c_of_phi(mp.pi)) < mp.mpf(10) ** -(mp.mp.dps - 5)


def test_c_series_near_pi():
    h = mp.mpf("1e-3")
    c = c_of_phi(mp.pi + h)
    assert abs(c - (-h - 1j * h ** 2 / 6)) < 10 * h ** 3


def test_c_at_half_pi():
    c = c_of_phi(mp.pi / 2)
    assert abs(c * c / 2 - (1 + 1j * (1 - mp.pi / 2))) < mp.mpf(10) ** -40
    assert mp.re(c) > 0


def test_c_third_order_term():
    h = mp.mpf("1e-2")
    c = c_of_phi(mp.pi + h)
    assert abs(c - (-h - 1j * h ** 2 / 6 + h ** 3 / 36)) < 10 * h ** 4


def test_transition_record():
    t = transition(mp.mpf(2))
    assert t.branch_ok and t.c == c_of_phi(2)


def test_c_range():
    with pytest.raises(DomainError):
        c_of_phi(3 * mp.pi + 1)


def test_erfc_basics():
    assert erfc(0) == 1
    w = mp.mpc("0.7", "-1.3")
    assert abs(erfc(-w) - (2 - erfc(w))) < mp.mpf(10) ** -45


# Observed sup of |erfc(w)| / |exp(-w^2)| over Re w >= 0.
ERFC_K = mp.mpf(1)


def test_erfc_decay_constant():
    worst = max(abs(erfc(mp.mpc(x, y))) / abs(mp.exp(-mp.mpc(x, y) ** 2))
                for x in (0, mp.mpf("0.5"), 1, 2, 4, 8) for y in (-8, -4, -1, 0, 1, 4, 8))
    assert worst <= ERFC_K + mp.mpf(10) ** -40


def test_partitions():
    assert {p.k for p in partitions(3)} == {(0, 0, 1), (1, 1, 0), (3, 0, 0)}
    assert len(partitions(6)) == 11
    with pytest.raises(ValueError):
        PartitionMultiplicity(3, (1, 0, 1))


def test_partition_coefficients():
    assert partition_coefficient(PartitionMultiplicity(2, (0, 1))) == Fraction(1, 4)
    assert partition_coefficient(PartitionMultiplicity(2, (2, 0))) == Fraction(1, 8)
    assert partition_coefficient(PartitionMultiplicity(2, (2, 0)), 45) == Fraction(1, 8)
    assert partition_coefficient(PartitionMultiplicity(2, (0, 1)), 45) == Fraction(-1, 4)


@pytest.mark.parametrize("m,value", [(1, Fraction(1, 2)), (2, Fraction(3, 8)), (3, Fraction(5, 16))])
def test_theorem_on_stokes_line(m, value):
    assert stokes_line_value(m) == value
    approx = theorem_approx(at_phi(20 * mp.pi, mp.pi), 20 * mp.pi, sig(), 0, m)
    assert abs(approx.value - mp.mpf(value.numerator) / value.denominator) < mp.mpf(10) ** -45


def test_erfc_polynomial_limits():
    assert abs(erfc_polynomial(mp.mpf("0.5"), 200, 2).value) < mp.mpf(10) ** -10
    assert abs(erfc_polynomial(mp.pi + 2, 200, 2).value - 1) < mp.mpf(10) ** -10


def test_uniform_F1_on_stokes_line():
    a = 20 * mp.pi
    v, regime = olver_F1_approx(at_phi(a, mp.pi), a, sig())
    assert regime == "erfc"
    assert abs(v - mp.mpf(1) / 2) < mp.mpf(10) ** -(mp.mp.dps - 5)
    exact = normalised_F1(at_phi(a, mp.pi), a, sig())
    assert abs(exact - v) < 2 / mp.sqrt(a)


def test_uniform_F1_exponential_regime():
    a = 10 * mp.pi
    z = at_phi(a, mp.pi / 2)
    v, regime = olver_F1_approx(z, a, sig())
    assert regime == "exponential"
    assert abs(normalised_F1(z, a, sig()) - v) / abs(v) < 3 / a


def test_uniform_F1_conjugate_regime():
    a = 20 * mp.pi
    z = at_phi(a, -mp.pi)
    v, regime = olver_F1_approx(z, a, sig(), regime="conjugate")
    exact = normalised_F1(z, a, sig()) * mp.exp(-2j * mp.pi * a)
    assert abs(exact - v) < 2 / mp.sqrt(a)


def test_uniform_F1_domain():
    with pytest.raises(DomainError):
        olver_F1_approx(at_phi(10, mp.pi), 10, sig(), regime="exponential")


def test_level1_erfc_factor_on_stokes_line():
    z = SurfacePoint.pi(5, Fraction(1, 2))
    r, _ = berry_smoothing_level1(z, 31)
    e = mp.exp(2j * mp.pi * z.to_complex())
    ser = mp.fsum((-1) ** k * gamma_mp(k) * z.to_complex() ** -k for k in range(31))
    assert abs(r / (e * ser) - mp.mpf(1) / 2) < mp.mpf(10) ** -40


def test_level1_erfc_far_side():
    absz = 5
    theta = mp.pi / 2 + 3 / mp.sqrt(mp.pi * absz)
    z = SurfacePoint.polar(absz, theta)
    r, _ = berry_smoothing_level1(z, 31)
    ser = mp.fsum((-1) ** k * gamma_mp(k) * z.to_complex() ** -k for k in range(31))
    factor = r / (mp.exp(2j * mp.pi * z.to_complex()) * ser)
    assert abs(factor - 1) < mp.mpf("3e-5")


@pytest.mark.parametrize("variant", [0, 1])
def test_level1_erfc_against_exact_remainder(variant):
    z = SurfacePoint.pi(5, Fraction(55, 100))
    approx = berry_smoothing_level1(z, 31)[variant]
    exact = remainder_level0(z, 31, ("gamma", "reciprocal")[variant]).remainder
    assert abs(approx - exact) / abs(exact) < mp.mpf("0.25")


def test_level2_factors():
    a, b = level2_factors(mp.pi / 2, 5)
    assert abs(a - mp.mpf(3) / 8) < mp.mpf(10) ** -45 and abs(b - mp.mpf(1) / 8) < mp.mpf(10) ** -45
    a, b = level2_factors(mp.mpf("0.1"), 50)
    assert abs(a) < mp.mpf(10) ** -30 and abs(b) < mp.mpf(10) ** -30
    a, b = level2_factors(mp.pi - mp.mpf("0.1"), 50)
    assert abs(a - 1) < mp.mpf(10) ** -30 and abs(b) < mp.mpf(10) ** -30


def test_level2_smoothing_shape():
    z = SurfacePoint.pi(5, Fraction(1, 2))
    r, rt = level2_smoothing(z, 31)
    assert abs(abs(r / rt) - 3) < mp.mpf("0.1")


def test_normalised_terminant_n_positive_matches_bell_route():
    with mp.workdps(30):
        a = 12 * mp.pi
        z = at_phi(a, mp.pi - mp.mpf("0.2"))
        v1 = normalised_terminant(z, a, sig(), 1, 2, tol=mp.mpf(10) ** -15)
        approx = theorem_approx(z, a, sig(), 1, 2).value
        assert abs(v1 - approx) < 1


def test_mixed_scaled_symmetric():
    with mp.workdps(30):
        a = mixed_scaled(at_phi(6 * mp.pi, mp.mpf("2.5")), 6 * mp.pi, sig(), 0, -1, mp.mpf(10) ** -15)
        b = mixed_scaled(at_phi(6 * mp.pi, mp.mpf("-2.5")), 6 * mp.pi, sig(), 0, 1, mp.mpf(10) ** -15)
        assert abs(a - b) < mp.mpf(10) ** -10


def test_c_residual_small():
    assert max(c_residual(mp.mpf(k) / 5) for k in range(-40, 41)) < mp.mpf(10) ** -(mp.mp.dps - 10)
