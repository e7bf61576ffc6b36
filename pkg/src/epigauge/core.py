"""Vertical distance-to-epigraph primitives and certified gauge bounds.

This module holds the vocabulary everything else builds on:

- ``Point`` / ``Func``: points in R^n and pure, deterministic scalar
  functions on a closed ball around the origin.  Evaluation outside the
  declared ball is a hard error, never an extrapolation.
- ``Cylinder``: the comparison window (base radius ``R``, level band
  ``[-M, M]``).
- ``pos_part`` / ``vertical_distance`` / ``pointwise_discrepancy``: the
  elementary vertical maps.  ``vertical_distance(f, t)`` is the gap from a
  point ``(x, t)`` straight up to the region above the graph at that ``x``;
  the discrepancy compares two such gaps at a shared level.
- ``GaugeBound``: a scalar bound on the vertical discrepancy over a
  cylinder.  Every bound records its provenance and whether it is actually
  certified; the distinction is never blurred.
- ``FinitePointSet`` / ``ClosedBall``: minimizer-set representations with
  exact distance formulas.

Numerical discipline
--------------------
Everything is plain 64-bit floating point.  Exact claims about exactly
representable constructions are tested bit-exactly; everything else uses
the absolute slack ``TAU``.  Closed-ball membership tests allow the same
slack (relative and absolute) so that lattice boundary points generated by
repeated addition are not spuriously rejected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import DomainError, EvaluationError, PreconditionError

__all__ = [
    "TAU",
    "Point",
    "Func",
    "Cylinder",
    "Provenance",
    "GaugeBound",
    "FinitePointSet",
    "ClosedBall",
    "ArgminSet",
    "pos_part",
    "vertical_distance",
    "pointwise_discrepancy",
    "gauge_from_value_bound",
    "discrepancy_profile",
    "in_closed_ball",
]

TAU: float = 1e-12
"""Absolute slack for certified-inequality assertions and tie detection.

Constructions built from exactly representable constants are checked
bit-exactly; any comparison involving rounded arithmetic uses this slack,
stated explicitly at the point of use.
"""


def _require_finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise PreconditionError(f"{name} must be finite, got {x!r}")
    return x


# ---------------------------------------------------------------------------
# Elementary vertical maps
# ---------------------------------------------------------------------------


def pos_part(r: float) -> float:
    """Positive part ``max(r, 0)``.

    Nonpositive inputs (including ``-0.0``) map to ``+0.0`` so that exact
    zero claims downstream are bit-exact.
    """
    r = _require_finite(r, "r")
    return r if r > 0.0 else 0.0


def vertical_distance(f_value: float, t: float) -> float:
    """Vertical gap from level ``t`` up to the closed half-line above
    ``f_value``: zero when ``t >= f_value``, else ``f_value - t``."""
    f_value = _require_finite(f_value, "f_value")
    t = _require_finite(t, "t")
    return pos_part(f_value - t)


def pointwise_discrepancy(fa: float, fb: float, t: float) -> float:
    """Absolute difference of the two vertical gaps at a shared level ``t``.

    Equal to ``|vertical_distance(fa, t) - vertical_distance(fb, t)|`` in
    exact arithmetic, computed by case split::

        t >= max(fa, fb)  ->  0
        t <= min(fa, fb)  ->  |fa - fb|
        otherwise         ->  max(fa, fb) - t

    The case split matters in floating point: the direct composition can
    exceed ``|fa - fb|`` by one ulp (e.g. ``fa=0, fb=0.3, t=-1``), whereas
    this form never does (the mixed case is a correctly rounded value of a
    real number that is at most ``|fa - fb|``, and rounding is monotone).
    All domination properties therefore hold with zero tolerance.
    """
    fa = _require_finite(fa, "fa")
    fb = _require_finite(fb, "fb")
    t = _require_finite(t, "t")
    if t >= fa and t >= fb:
        return 0.0
    if t <= fa and t <= fb:
        return abs(fa - fb)
    hi = fa if fa > fb else fb
    return hi - t


# ---------------------------------------------------------------------------
# Points and membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Point:
    """A point of R^n, n >= 1.  Coordinates are finite floats.

    Ordering is lexicographic on coordinates, which fixes the reporting
    order of argmin tie lists.
    """

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise PreconditionError("Point needs at least one coordinate")
        for c in coords:
            if not math.isfinite(c):
                raise PreconditionError(f"Point coordinates must be finite, got {coords!r}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords: float) -> "Point":
        return cls(tuple(coords))

    @classmethod
    def origin(cls, dim: int) -> "Point":
        return cls((0.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coords))

    def dist(self, other: "Point") -> float:
        if other.dim != self.dim:
            raise DomainError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(self.coords, other.coords)))

    def __str__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


def in_closed_ball(point: Point, radius: float, center: Point | None = None) -> bool:
    """Closed-ball membership with floating-point slack.

    True iff ``||point - center|| <= radius * (1 + TAU) + TAU``.  The slack
    keeps lattice boundary points (built by repeated float addition) inside
    balls of nominally equal radius; it is applied consistently wherever
    ball membership is decided.
    """
    if radius < 0:
        return False
    if math.isinf(radius):
        return True
    d = point.norm() if center is None else point.dist(center)
    return d <= radius * (1.0 + TAU) + TAU


# ---------------------------------------------------------------------------
# Functions on a ball
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Func:
    """A pure, deterministic scalar function on the closed ball
    ``||x|| <= domain_radius`` in R^dim.

    ``eval`` must be deterministic (same input, bit-identical output) and
    finite on the declared ball.  Calling the ``Func`` checks the domain
    first and the finiteness of the result after; out-of-domain evaluation
    raises ``DomainError`` rather than extrapolating, because downstream
    certificates are only meaningful on certified regions.

    Instances are immutable and safe to share across threads.
    """

    eval: Callable[[Point], float]
    domain_radius: float = math.inf
    dim: int = 1
    label: str = ""

    def __post_init__(self) -> None:
        if not callable(self.eval):
            raise PreconditionError("eval must be callable")
        if not (self.domain_radius > 0):
            raise PreconditionError(f"domain_radius must be > 0, got {self.domain_radius!r}")
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise PreconditionError(f"dim must be an integer >= 1, got {self.dim!r}")

    def __call__(self, x: Point) -> float:
        if x.dim != self.dim:
            raise DomainError(
                f"function {self.label or '<unnamed>'} expects dimension {self.dim}, "
                f"got point of dimension {x.dim}"
            )
        if not in_closed_ball(x, self.domain_radius):
            raise DomainError(
                f"point with norm {x.norm()!r} outside domain ball of radius "
                f"{self.domain_radius!r} of function {self.label or '<unnamed>'}"
            )
        value = float(self.eval(x))
        if not math.isfinite(value):
            raise EvaluationError(
                f"function {self.label or '<unnamed>'} returned non-finite value "
                f"{value!r} at {x}"
            )
        return value

    # -- named analytic families -------------------------------------------

    @classmethod
    def constant(cls, value: float, dim: int = 1, domain_radius: float = math.inf,
                 label: str = "") -> "Func":
        value = _require_finite(value, "value")
        return cls(lambda _p, _v=value: _v, domain_radius, dim, label or f"const({value!r})")

    @classmethod
    def quadratic(cls, coeff: float, dim: int = 1, domain_radius: float = math.inf,
                  label: str = "") -> "Func":
        """``x -> coeff * ||x||^2``."""
        coeff = _require_finite(coeff, "coeff")

        def _eval(p: Point, _c=coeff) -> float:
            s = 0.0
            for c in p.coords:
                s += c * c
            return _c * s

        return cls(_eval, domain_radius, dim, label or f"{coeff!r}*|x|^2")

    @classmethod
    def affine(cls, slope: Sequence[float], intercept: float,
               domain_radius: float = math.inf, label: str = "") -> "Func":
        """``x -> <slope, x> + intercept``."""
        slope_t = tuple(_require_finite(s, "slope") for s in slope)
        if not slope_t:
            raise PreconditionError("affine slope must have at least one component")
        intercept = _require_finite(intercept, "intercept")

        def _eval(p: Point, _s=slope_t, _b=intercept) -> float:
            acc = _b
            for si, ci in zip(_s, p.coords):
                acc += si * ci
            return acc

        return cls(_eval, domain_radius, len(slope_t),
                   label or f"affine({slope_t!r}, {intercept!r})")

    @classmethod
    def bump(cls, center: Point, rho: float, amplitude: float,
             domain_radius: float = math.inf, label: str = "") -> "Func":
        """Tent bump ``x -> amplitude * max(0, 1 - ||x - center|| / rho)``.

        Exactly zero (bit-exact ``+0.0``) wherever ``||x - center|| >= rho``.
        """
        rho = _require_finite(rho, "rho")
        if rho <= 0:
            raise PreconditionError(f"rho must be > 0, got {rho!r}")
        amplitude = _require_finite(amplitude, "amplitude")

        def _eval(p: Point, _c=center, _r=rho, _a=amplitude) -> float:
            return _a * pos_part(1.0 - p.dist(_c) / _r)

        return cls(_eval, domain_radius, center.dim,
                   label or f"bump(center={center}, rho={rho!r}, amp={amplitude!r})")

    @classmethod
    def clamp_shift(cls, base: "Func", shift: float, label: str = "") -> "Func":
        """``x -> max(base(x) - shift, 0)``: the graph dropped by ``shift``
        and clipped at level zero."""
        shift = _require_finite(shift, "shift")
        return cls(lambda p, _b=base, _s=shift: pos_part(_b(p) - _s),
                   base.domain_radius, base.dim,
                   label or f"pospart({base.label or 'f'} - {shift!r})")

    @classmethod
    def sum_of(cls, *terms: "Func", label: str = "") -> "Func":
        if not terms:
            raise PreconditionError("sum_of needs at least one term")
        dim = terms[0].dim
        if any(t.dim != dim for t in terms):
            raise PreconditionError("sum_of terms must share a dimension")
        radius = min(t.domain_radius for t in terms)
        return cls(lambda p, _ts=terms: math.fsum(t(p) for t in _ts),
                   radius, dim, label or "sum(" + ", ".join(t.label or "f" for t in terms) + ")")

    @classmethod
    def scaled(cls, base: "Func", factor: float, label: str = "") -> "Func":
        factor = _require_finite(factor, "factor")
        return cls(lambda p, _b=base, _k=factor: _k * _b(p),
                   base.domain_radius, base.dim,
                   label or f"{factor!r}*{base.label or 'f'}")


# ---------------------------------------------------------------------------
# Cylinder and gauge bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    """Comparison window: base ball ``||x|| <= R`` times level band
    ``|t| <= M``."""

    R: float
    M: float

    def __post_init__(self) -> None:
        R = _require_finite(self.R, "R")
        M = _require_finite(self.M, "M")
        if R <= 0 or M <= 0:
            raise PreconditionError(f"cylinder needs R > 0 and M > 0, got R={R!r}, M={M!r}")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "M", M)


class Provenance(enum.Enum):
    """How a gauge bound was obtained.  Recorded on every bound: a
    certified bound and an unaudited assumption must never look alike."""

    VALUE_BOUND = "ValueBound"
    ENVELOPE = "Envelope"
    TOLERANCE_FIELD = "ToleranceField"
    ASSUMED = "Assumed"


@dataclass(frozen=True)
class GaugeBound:
    """A scalar ``delta`` bounding the vertical discrepancy of a function
    pair over ``cylinder``.

    ``certified`` is True only when ``delta`` is a guaranteed upper bound
    (a caller-supplied certificate, or a grid supremum of an envelope family
    declared grid-exact).  Grid scans of general families produce
    ``certified=False`` records whose ``detail`` marks them as estimates.
    ``Assumed`` provenance is never certified.
    """

    delta: float
    cylinder: Cylinder
    provenance: Provenance
    certified: bool = True
    detail: str = ""

    def __post_init__(self) -> None:
        delta = _require_finite(self.delta, "delta")
        if delta < 0:
            raise PreconditionError(f"gauge bound delta must be >= 0, got {delta!r}")
        if self.provenance is Provenance.ASSUMED and self.certified:
            raise PreconditionError("an Assumed gauge bound cannot be marked certified")
        object.__setattr__(self, "delta", delta)


def gauge_from_value_bound(eps: float, cylinder: Cylinder) -> GaugeBound:
    """Convert a caller-certified uniform value bound into a gauge bound.

    If ``sup |f - g| <= eps`` holds on the base ball then, because clipping
    at any level is 1-Lipschitz in the function value, the vertical
    discrepancy never exceeds ``eps`` anywhere on the cylinder.  The caller
    vouches for ``eps``; the conversion itself is lossless.
    """
    eps = _require_finite(eps, "eps")
    if eps < 0:
        raise PreconditionError(f"eps must be >= 0, got {eps!r}")
    return GaugeBound(
        delta=eps,
        cylinder=cylinder,
        provenance=Provenance.VALUE_BOUND,
        certified=True,
        detail=f"caller-certified sup|f-g| <= {eps!r} on the base ball of radius {cylinder.R!r}",
    )


def discrepancy_profile(f: Func, g: Func, x: Point,
                        t_samples: Iterable[float]) -> list[float]:
    """Vertical discrepancy of ``(f, g)`` at ``x`` along listed levels.

    Inspection/plot helper: evaluates both functions once and returns one
    discrepancy per sample, in input order.
    """
    fa = f(x)
    fb = g(x)
    return [pointwise_discrepancy(fa, fb, t) for t in t_samples]


# ---------------------------------------------------------------------------
# Minimizer-set representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinitePointSet:
    """A nonempty finite set of points (all of one dimension)."""

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        points = tuple(self.points)
        if not points:
            raise PreconditionError("FinitePointSet must be nonempty")
        dim = points[0].dim
        if any(p.dim != dim for p in points):
            raise PreconditionError("FinitePointSet points must share a dimension")
        object.__setattr__(self, "points", points)

    @property
    def dim(self) -> int:
        return self.points[0].dim


@dataclass(frozen=True)
class ClosedBall:
    """A closed ball (in R^1: a closed interval) with exact distance
    formula ``max(0, ||x - center|| - radius)``.  Radius 0 is a point."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        radius = _require_finite(self.radius, "radius")
        if radius < 0:
            raise PreconditionError(f"ball radius must be >= 0, got {radius!r}")
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return self.center.dim


ArgminSet = FinitePointSet | ClosedBall
