"""Evaluation of the maps f(z) = z^n + lam^2/(z^n - lam) on the Riemann sphere.

A family member is fixed by an integer degree n >= 2 and a nonzero complex
parameter lam.  Over a common denominator,

    f(z) = (z^(2n) - lam*z^n + lam^2) / (z^n - lam),

a degree-2n rational map.  Its critical points are 0, infinity and the n
solutions of z^n = 2*lam; the two finite critical values are v0 = f(0) = -lam
and v1 = f(c_k) = 3*lam, and their preimage sets are exactly {0} and
{c_1, ..., c_n}.  Because f(omega*z) = f(z) for omega = e^(2*pi*i/n), every
orbit picture carries n-fold rotational symmetry.

Everything here is plain double-precision arithmetic.  Values whose real or
imaginary part would pass 1e150 are normalized to the point at infinity
instead of drifting into NaN territory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

OVERFLOW_CAP = 1e150

# relative width of the band around the pole where the combined rational
# form is evaluated instead of the two-term sum
_POLE_BAND = 1e-12


class PoleError(ArithmeticError):
    """Raised when a derivative is requested exactly at a pole (z^n == lam)."""


@dataclass(frozen=True)
class SpherePoint:
    """A point of the Riemann sphere: finite complex value, or infinity.

    ``value`` is None exactly for the point at infinity.  Construct finite
    points through :meth:`of`, which normalizes overflow and non-finite
    coordinates to infinity.
    """

    value: complex | None

    @staticmethod
    def of(z: complex) -> "SpherePoint":
        z = complex(z)
        # NaN fails both comparisons and lands on infinity as well
        if not (abs(z.real) < OVERFLOW_CAP and abs(z.imag) < OVERFLOW_CAP):
            return INFINITY
        return SpherePoint(z)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __complex__(self) -> complex:
        if self.value is None:
            raise ValueError("the point at infinity has no complex value")
        return self.value

    def __repr__(self) -> str:
        return "SpherePoint(inf)" if self.value is None else f"SpherePoint({self.value!r})"


INFINITY = SpherePoint(None)


@dataclass(frozen=True)
class MapParams:
    """One family member (n, lam) plus its derived constants.

    n < 2 and lam = 0 are rejected outright; the family is only defined for
    nonzero lam, and nothing below degree 2 is meaningful.  The classification
    machinery is proved for n >= 3; n = 2 is accepted but experimental.
    """

    n: int
    lam: complex
    omega: complex = field(init=False, repr=False)
    v0: complex = field(init=False, repr=False)
    v1: complex = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = int(self.n)
        if n != self.n or n < 2:
            raise ValueError("degree parameter n must be an integer >= 2")
        lam = complex(self.lam)
        if lam == 0:
            raise ValueError("lam must be nonzero")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "omega", cmath.exp(2j * math.pi / n))
        object.__setattr__(self, "v0", -lam)
        object.__setattr__(self, "v1", 3 * lam)

    @property
    def experimental(self) -> bool:
        return self.n == 2


def _eval_raw(n: int, lam: complex, z: complex) -> complex | None:
    """f at a finite z, with None encoding the point at infinity.

    The two-term form z^n + lam^2/(z^n - lam) is used away from the pole.
    Inside the relative band |z^n - lam| < 1e-12*max(1, |z^n|) the combined
    rational form is used, with its numerator grouped as z^n*(z^n - lam) +
    lam^2 so the large terms do not cancel against each other right next to
    the pole.
    """
    try:
        w = z ** n
    except OverflowError:
        return None
    d = w - lam
    try:
        if abs(d) < _POLE_BAND * max(1.0, abs(w)):
            if d == 0:
                return None
            fz = (w * d + lam * lam) / d
        else:
            fz = w + lam * lam / d
    except (OverflowError, ZeroDivisionError):
        return None
    if not (abs(fz.real) < OVERFLOW_CAP and abs(fz.imag) < OVERFLOW_CAP):
        return None
    return fz


def evaluate(params: MapParams, z: SpherePoint | complex) -> SpherePoint:
    """Apply f once.  Total on the sphere.

    Infinity maps to infinity (numerator degree 2n beats denominator degree
    n), the n poles z^n = lam map to infinity, and any overflow past 1e150
    normalizes to infinity.  Raw complex seeds are accepted and wrapped.
    """
    if isinstance(z, SpherePoint):
        if z.is_infinity:
            return INFINITY
        z = z.value
    fz = _eval_raw(params.n, params.lam, complex(z))
    return INFINITY if fz is None else SpherePoint(fz)


def derivative(params: MapParams, z: complex) -> complex:
    """f'(z) = n * z^(2n-1) * (z^n - 2*lam) / (z^n - lam)^2 at finite z."""
    z = complex(z)
    n, lam = params.n, params.lam
    w = z ** n
    d = w - lam
    if d == 0:
        raise PoleError(f"derivative requested at a pole of the map: z={z!r}")
    return n * z ** (2 * n - 1) * (w - 2 * lam) / (d * d)


def critical_points(params: MapParams) -> list[SpherePoint]:
    """The n+2 critical points [0, infinity, c_1, ..., c_n], in that order.

    c_k = omega^(k-1) * (2*lam)^(1/n) with the principal n-th root; any other
    branch choice would only permute the c_k.
    """
    c1 = complex(2 * params.lam) ** (1.0 / params.n)
    points = [SpherePoint(0j), INFINITY]
    rot = 1 + 0j
    for _ in range(params.n):
        points.append(SpherePoint.of(rot * c1))
        rot *= params.omega
    return points
