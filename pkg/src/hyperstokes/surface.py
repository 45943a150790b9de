"""Points on the Riemann surface of the logarithm.

A point is stored as a modulus together with an unbounded angle.  The angle
is split into an exact rational multiple of pi and a real offset, so that
points such as ``5 e^{i pi/2}`` sit exactly on the imaginary axis.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

DEFAULT_DIGITS = 50
MIN_DIGITS = 30


def default_digits() -> int:
    """Default working precision, overridable by HYPERSTOKES_DIGITS."""
    raw = os.environ.get("HYPERSTOKES_DIGITS")
    if raw is None:
        return DEFAULT_DIGITS
    return check_digits(int(raw))


def check_digits(digits: int) -> int:
    if int(digits) != digits or digits < MIN_DIGITS:
        raise ValueError(f"precision must be an integer >= {MIN_DIGITS} digits, got {digits}")
    return int(digits)


@contextmanager
def precision(digits: int):
    """Run a block at ``digits`` decimal digits."""
    with mp.workdps(check_digits(digits)):
        yield


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("turns must be an int or Fraction")


@dataclass(frozen=True)
class SurfacePoint:
    """Nonzero point ``modulus * exp(i*angle)`` with the angle kept unreduced.

    ``turns`` is the exact part of the angle in units of pi and ``offset`` a
    real remainder in radians.
    """

    modulus: mp.mpf
    turns: Fraction = Fraction(0)
    offset: mp.mpf = mp.mpf(0)

    def __post_init__(self):
        object.__setattr__(self, "modulus", mp.mpf(self.modulus))
        object.__setattr__(self, "turns", _as_fraction(self.turns))
        object.__setattr__(self, "offset", mp.mpf(self.offset))
        if not self.modulus > 0:
            raise ValueError("modulus must be positive")

    @classmethod
    def polar(cls, modulus, angle) -> "SurfacePoint":
        return cls(modulus, Fraction(0), angle)

    @classmethod
    def pi(cls, modulus, turns) -> "SurfacePoint":
        """Point at angle ``turns * pi`` with ``turns`` rational."""
        return cls(modulus, _as_fraction(turns), 0)

    @classmethod
    def from_complex(cls, c) -> "SurfacePoint":
        """Principal-sheet point, angle in (-pi, pi]."""
        c = mp.mpc(c)
        if c.imag == 0 and c.real > 0:
            return cls(c.real)
        if c.imag == 0 and c.real < 0:
            return cls(-c.real, Fraction(1))
        return cls(abs(c), Fraction(0), mp.arg(c))

    @property
    def angle(self) -> mp.mpf:
        return self.turns * mp.pi + self.offset if self.turns else +self.offset

    def is_exact(self) -> bool:
        return self.offset == 0

    def unit(self) -> mp.mpc:
        """exp(i*angle), exact on the coordinate axes."""
        if self.offset == 0:
            t = self.turns % 2
            if t == 0:
                return mp.mpc(1)
            if t == Fraction(1, 2):
                return mp.mpc(0, 1)
            if t == 1:
                return mp.mpc(-1)
            if t == Fraction(3, 2):
                return mp.mpc(0, -1)
            x = mp.mpf(t.numerator) / t.denominator
            return mp.mpc(mp.cospi(x), mp.sinpi(x))
        return mp.expj(self.angle)

    def to_complex(self) -> mp.mpc:
        return self.modulus * self.unit()

    def log(self) -> mp.mpc:
        return mp.mpc(mp.log(self.modulus), self.angle)

    def rotate(self, dtheta) -> "SurfacePoint":
        """Add a real angle ``dtheta`` (radians)."""
        return SurfacePoint(self.modulus, self.turns, self.offset + dtheta)

    def rotate_pi(self, turns) -> "SurfacePoint":
        """Add ``turns * pi`` exactly."""
        return SurfacePoint(self.modulus, self.turns + _as_fraction(turns), self.offset)

    def scale(self, factor) -> "SurfacePoint":
        """Multiply the modulus by a positive real."""
        return SurfacePoint(self.modulus * factor, self.turns, self.offset)

    def __mul__(self, other: "SurfacePoint") -> "SurfacePoint":
        if not isinstance(other, SurfacePoint):
            return NotImplemented
        return SurfacePoint(self.modulus * other.modulus, self.turns + other.turns,
                            self.offset + other.offset)

    def inverse(self) -> "SurfacePoint":
        return SurfacePoint(1 / self.modulus, -self.turns, -self.offset)

    def power(self, w) -> mp.mpc:
        """exp(w * (ln modulus + i angle))."""
        w = mp.mpc(w)
        if w.imag == 0 and self.offset == 0 and w.real == int(w.real):
            # integer power: keep axis points exact
            k = int(w.real)
            return self.modulus ** k * (self.unit() ** k)
        return mp.exp(w * self.log())

    def __repr__(self) -> str:
        return (f"SurfacePoint(modulus={mp.nstr(self.modulus, 15)}, "
                f"angle={mp.nstr(self.angle, 15)})")


def rotate(p: SurfacePoint, dtheta) -> SurfacePoint:
    return p.rotate(dtheta)


def power(p: SurfacePoint, w) -> mp.mpc:
    return p.power(w)
