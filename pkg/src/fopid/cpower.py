"""Principal-branch powers and polar decomposition of complex numbers."""

from __future__ import annotations

import math


def polar(z: complex) -> tuple[float, float]:
    """Return (magnitude, argument) of ``z`` with the argument in (-pi, pi].

    The argument of 0 is defined as 0. ``atan2`` can return exactly -pi for
    inputs on the negative real axis with a negative-zero imaginary part;
    that value is folded to +pi so the interval stays half-open.
    """
    magnitude = abs(z)
    argument = math.atan2(z.imag, z.real)
    if argument == -math.pi:
        argument = math.pi
    return magnitude, argument


def cpow(z: complex, alpha: float) -> complex:
    """Raise ``z`` to the real power ``alpha`` on the principal branch.

    Computed in polar form: |z|**alpha * (cos(alpha*arg z) + j sin(alpha*arg z))
    with arg z in (-pi, pi].

    Conventions at the origin: cpow(0, alpha) = 0 for alpha > 0, and
    cpow(0, 0) = 1 (useful when evaluating polynomials at s = 0).

    Raises:
        ValueError: if z == 0 and alpha < 0.
    """
    z = complex(z)
    if z == 0:
        if alpha > 0:
            return 0j
        if alpha == 0:
            return 1 + 0j
        raise ValueError("0 cannot be raised to a negative power")
    magnitude, argument = polar(z)
    scale = magnitude**alpha
    angle = alpha * argument
    return complex(scale * math.cos(angle), scale * math.sin(angle))
