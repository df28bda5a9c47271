"""Exact eigen-data of a primitive 2x2 substitution matrix."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import IntMatrix2, primitivity_power
from .quadratic import QuadraticNumber


class Theta2Class(enum.Enum):
    LT1 = "LT1"
    EQ1 = "EQ1"
    GT1 = "GT1"


class NotPrimitiveError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralData:
    trace: int
    det: int
    theta1: QuadraticNumber
    theta2: Optional[QuadraticNumber]      # None when the second eigenvalue is complex
    theta2_abs_sq: QuadraticNumber          # |theta2|^2; equals det for a complex pair
    e1: tuple[QuadraticNumber, QuadraticNumber]
    e2: Optional[tuple[QuadraticNumber, QuadraticNumber]]
    gamma: QuadraticNumber
    alpha: Optional[float]                  # None when theta2 == 0
    theta2_class: Theta2Class

    def to_json(self) -> dict:
        vec = (lambda v: None if v is None else [c.to_json() for c in v])
        return {
            "trace": self.trace,
            "det": self.det,
            "theta1": self.theta1.to_json(),
            "theta2": None if self.theta2 is None else self.theta2.to_json(),
            "theta2_abs_sq": self.theta2_abs_sq.to_json(),
            "e1": vec(self.e1),
            "e2": vec(self.e2),
            "gamma": self.gamma.to_json(),
            "alpha": None if self.alpha is None else round(self.alpha, 12),
            "alpha_defined_by": {"trace": self.trace, "det": self.det},
            "theta2_class": self.theta2_class.value,
        }


def eigenvalues(m: IntMatrix2) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Both real eigenvalues (larger first); raises on a complex pair."""
    disc = m.trace ** 2 - 4 * m.det
    if disc < 0:
        raise ValueError("complex eigenvalues")
    root = QuadraticNumber.sqrt(disc)
    half = Fraction(1, 2)
    return ((m.trace + root) * half, (m.trace - root) * half)


def second_eigen_class(m: IntMatrix2) -> Theta2Class:
    """Compare the non-dominant eigenvalue's modulus with 1, exactly.

    With ``chi(x) = x^2 - tr*x + det`` and a dominant root above 1, the sign
    of ``chi(1)`` is that of ``theta2 - 1`` and the sign of ``chi(-1)`` that
    of ``theta2 + 1``.  A complex pair has ``|theta2|^2 = det``.
    """
    tr, det = m.trace, m.det
    if tr * tr - 4 * det < 0:
        return _compare_one(det)
    at_one = 1 - tr + det
    at_minus_one = 1 + tr + det
    if at_one == 0 or at_minus_one == 0:
        return Theta2Class.EQ1
    if at_one < 0 < at_minus_one:
        return Theta2Class.LT1
    return Theta2Class.GT1


def _compare_one(x) -> Theta2Class:
    if x < 1:
        return Theta2Class.LT1
    return Theta2Class.EQ1 if x == 1 else Theta2Class.GT1


def eigen_data(m: IntMatrix2) -> SpectralData:
    """Perron-Frobenius data with ``e1 = (1, gamma)`` and ``e2 = (-1, y)``, ``y > 0``."""
    if primitivity_power(m) is None:
        raise NotPrimitiveError(f"matrix {m.rows()} is not primitive")
    theta1, theta2 = eigenvalues(m)   # primitive 2x2: discriminant > 0
    gamma = (theta1 - m.m00) / m.m01
    e2 = (QuadraticNumber(-1), (m.m00 - theta2) / m.m01)
    abs2 = abs(theta2)
    alpha = None
    if abs2:
        alpha = math.log(float(abs2)) / math.log(float(theta1))
    return SpectralData(
        trace=m.trace,
        det=m.det,
        theta1=theta1,
        theta2=theta2,
        theta2_abs_sq=theta2 * theta2,
        e1=(QuadraticNumber(1), gamma),
        e2=e2,
        gamma=gamma,
        alpha=alpha,
        theta2_class=second_eigen_class(m),
    )


def project(w, gamma):
    """``(w_x + gamma*w_y, w_y - gamma*w_x)``: along and across the PF direction."""
    wx, wy = w
    return (wx + gamma * wy, wy - gamma * wx)


def perron_tile_lengths(m: IntMatrix2) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Left PF eigenvector normalized to ``t0 = 1`` (self-similar tile lengths)."""
    theta1 = eigen_data(m).theta1
    return (QuadraticNumber(1), (theta1 - m.m00) / m.m10)
