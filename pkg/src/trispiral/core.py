"""
Triangular spirals built from a chain of similar right triangles.

Each triangle shares the spiral origin as its apex. The hypotenuse of
triangle ``n`` becomes the height (the leg adjacent to the apex) of
triangle ``n + 1``, so the radius grows by ``1 / cos(phi0)`` per step and a
full turn takes ``mod = 2 * sides`` triangles.

All angles are radians.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Handedness",
    "SpiralSpec",
    "TrianglePatch",
    "GrowthTableRow",
    "spec_from_sides",
    "spec_from_mod",
    "growth_base",
    "growth_rate",
    "radius_at_index",
    "radius_at_angle",
    "angle_from_radius",
    "polar_slope_angle",
    "radial_difference",
    "vertices",
    "triangles",
    "polyline_radius_at_angle",
    "envelope_radius_at_angle",
    "growth_table",
]


class Handedness(str, enum.Enum):
    COUNTERCLOCKWISE = "ccw"
    CLOCKWISE = "cw"

    @property
    def sign(self) -> int:
        return 1 if self is Handedness.COUNTERCLOCKWISE else -1


@dataclass(frozen=True)
class SpiralSpec:
    """Defining parameters of a triangular spiral.

    Use :func:`spec_from_sides` or :func:`spec_from_mod` rather than the
    constructor; direct construction is validated but all fields must agree.

    Attributes
    ----------
    sides : int
        Sides of the regular polygon the spiral traces out (>= 3).
    mod : int
        Triangles per full turn, ``2 * sides``.
    phi0 : float
        Apex angle of every triangle, ``pi / sides``.
    seed : float
        Height of triangle 0, i.e. the radius of the first vertex.
    phase : float
        Angle of the first vertex from the reference axis.
    handedness : Handedness
        Winding direction.
    """

    sides: int
    mod: int
    phi0: float
    seed: float = 1.0
    phase: float = 0.0
    handedness: Handedness = Handedness.COUNTERCLOCKWISE

    def __post_init__(self):
        if self.sides < 3:
            raise ValueError(
                f"sides must be >= 3 (got {self.sides}); phi0 = pi/sides "
                "must stay below 90 degrees"
            )
        if self.mod != 2 * self.sides:
            raise ValueError(f"mod must equal 2*sides, got mod={self.mod}, sides={self.sides}")
        if not math.isclose(self.phi0, math.pi / self.sides, rel_tol=0, abs_tol=1e-15):
            raise ValueError(f"phi0 must equal pi/sides, got {self.phi0}")
        if not (self.seed > 0 and math.isfinite(self.seed)):
            raise ValueError(f"seed must be a positive finite length, got {self.seed}")
        object.__setattr__(self, "handedness", Handedness(self.handedness))


class TrianglePatch(NamedTuple):
    """One right triangle (origin, P_n, P_n+1) with the right angle at P_n."""

    index: int
    apex: tuple[float, float]
    inner_vertex: tuple[float, float]
    outer_vertex: tuple[float, float]
    height: float
    base: float
    hypotenuse: float


class GrowthTableRow(NamedTuple):
    sides: int
    degrees: float
    base: float


def spec_from_sides(sides, seed=1.0, phase=0.0, handedness=Handedness.COUNTERCLOCKWISE):
    """Build the spiral traced by a regular polygon with ``sides`` sides.

    Raises
    ------
    ValueError
        If ``sides < 3`` (the apex angle would reach 90 degrees) or
        ``seed <= 0``.
    """
    sides = int(sides)
    if sides < 3:
        raise ValueError(
            f"sides must be >= 3 (got {sides}); a right triangle cannot have "
            "a second 90 degree angle at the apex"
        )
    if not (seed > 0 and math.isfinite(seed)):
        raise ValueError(f"seed must be a positive finite length, got {seed}")
    return SpiralSpec(
        sides=sides,
        mod=2 * sides,
        phi0=math.pi / sides,
        seed=float(seed),
        phase=float(phase),
        handedness=Handedness(handedness),
    )


def spec_from_mod(mod, seed=1.0, phase=0.0, handedness=Handedness.COUNTERCLOCKWISE):
    """Build a spiral from its triangle count per turn.

    ``mod`` must be even and at least 6 because ``mod = 2 * sides`` with
    ``sides >= 3``.
    """
    if int(mod) != mod or mod % 2:
        raise ValueError(
            f"mod must be an even integer (mod = 2*sides), got {mod}"
        )
    if mod < 6:
        raise ValueError(
            f"mod must be >= 6 (mod = 2*sides with sides >= 3), got {mod}"
        )
    return spec_from_sides(int(mod) // 2, seed, phase, handedness)


def growth_base(spec: SpiralSpec) -> float:
    """Per-triangle radius ratio, ``1 / cos(phi0)``."""
    return 1.0 / math.cos(spec.phi0)


def growth_rate(phi0):
    """Continuous growth per radian of the envelope, ``ln(sec phi0) / phi0``."""
    phi0 = np.asarray(phi0, dtype=float)
    out = -np.log(np.cos(phi0)) / phi0
    return out if out.ndim else float(out)


def radius_at_index(spec: SpiralSpec, n) -> float:
    """Radius of vertex ``n``: ``seed / cos(phi0)**n``."""
    if int(n) != n or n < 0:
        raise ValueError(f"triangle index must be a nonnegative integer, got {n}")
    return spec.seed / math.cos(spec.phi0) ** int(n)


def radius_at_angle(spec: SpiralSpec, phi):
    """Smooth envelope through all vertices, ``seed / cos(phi0)**(phi/phi0)``.

    ``phi`` is measured from the spiral's phase in its own winding sense.
    Accepts scalars or arrays.
    """
    phi = np.asarray(phi, dtype=float)
    out = spec.seed * np.exp(phi * growth_rate(spec.phi0))
    return out if out.ndim else float(out)


def _k_constant(phi0: float) -> float:
    return phi0 / math.log(math.cos(phi0))


def angle_from_radius(spec: SpiralSpec, r) -> float:
    """Invert :func:`radius_at_angle` via ``phi = k ln(seed / r)``.

    ``k = phi0 / ln(cos(phi0))`` is negative, so ``phi >= 0`` for
    ``r >= seed``.
    """
    if r < spec.seed:
        raise ValueError(f"radius {r} lies inside the seed radius {spec.seed}")
    return _k_constant(spec.phi0) * math.log(spec.seed / r)


def polar_slope_angle(spec_or_phi0, convention="paper"):
    """Angle between the spiral tangent and the concentric circle.

    Parameters
    ----------
    spec_or_phi0 : SpiralSpec or float or array_like
        A spiral, or bare apex angle(s) in radians.
    convention : {"paper", "per_radian"}
        ``"paper"`` differentiates the radius with respect to the triangle
        index, giving ``atan(-ln cos phi0)``. ``"per_radian"`` differentiates
        the envelope with respect to the polar angle, giving
        ``atan(-ln(cos phi0) / phi0)``.
    """
    phi0 = spec_or_phi0.phi0 if isinstance(spec_or_phi0, SpiralSpec) else spec_or_phi0
    phi0 = np.asarray(phi0, dtype=float)
    slope = -np.log(np.cos(phi0))
    if convention == "per_radian":
        slope = slope / phi0
    elif convention != "paper":
        raise ValueError(f"unknown convention {convention!r}")
    out = np.arctan(slope)
    return out if out.ndim else float(out)


def radial_difference(spec: SpiralSpec, n) -> float:
    """Radius increase from vertex ``n`` to ``n + 1``."""
    if int(n) != n or n < 0:
        raise ValueError(f"triangle index must be a nonnegative integer, got {n}")
    c = math.cos(spec.phi0)
    return spec.seed * (1.0 - c) / c ** (int(n) + 1)


def _vertex_arrays(spec: SpiralSpec, count: int):
    n = np.arange(count)
    r = spec.seed / np.cos(spec.phi0) ** n
    ang = spec.handedness.sign * (n * spec.phi0 + spec.phase)
    return r, ang


def vertices(spec: SpiralSpec, count: int) -> list[tuple[float, float]]:
    """Cartesian vertices ``P_0 .. P_{count-1}``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    r, ang = _vertex_arrays(spec, count)
    xs = r * np.cos(ang)
    ys = r * np.sin(ang)
    return [(float(x), float(y)) for x, y in zip(xs, ys)]


def triangles(spec: SpiralSpec, count: int) -> list[TrianglePatch]:
    """The first ``count`` triangles of the fractal.

    Patch ``n`` reuses the exact vertex objects of patch ``n - 1``, so the
    outer vertex of one patch *is* the inner vertex of the next.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    pts = vertices(spec, count + 1)
    t = math.tan(spec.phi0)
    c = math.cos(spec.phi0)
    out = []
    for n in range(count):
        h = radius_at_index(spec, n)
        out.append(
            TrianglePatch(
                index=n,
                apex=(0.0, 0.0),
                inner_vertex=pts[n],
                outer_vertex=pts[n + 1],
                height=h,
                base=h * t,
                hypotenuse=h / c,
            )
        )
    return out


def _polyline_unit(local, phi0):
    # Chord P_n -> P_n+1 is perpendicular to O P_n, so the ray at local
    # offset psi in [0, phi0) meets it at r_n / cos(psi). Defined for any
    # real ``local`` (negative values extend the chain inward).
    q = local / phi0
    nearest = np.round(q)
    on_vertex = np.abs(q - nearest) < 1e-12
    n = np.where(on_vertex, nearest, np.floor(q))
    psi = np.where(on_vertex, 0.0, local - n * phi0)
    return np.cos(phi0) ** (-n) / np.cos(psi)


def polyline_radius_at_angle(spec: SpiralSpec, theta):
    """Radius of the chord polyline along the ray at ``theta``.

    ``theta`` is an absolute angle in the spiral's winding sense, so the
    local offset from the first vertex is ``theta - phase``. The result
    equals the vertex radius at vertex angles and lies inside the envelope
    everywhere else.
    """
    theta = np.asarray(theta, dtype=float)
    local = theta - spec.phase
    if np.any(local < 0):
        raise ValueError("theta must not precede the spiral phase")
    out = spec.seed * _polyline_unit(local, spec.phi0)
    return out if out.ndim else float(out)


def envelope_radius_at_angle(spec: SpiralSpec, theta):
    """Envelope radius at absolute angle ``theta`` (winding sense)."""
    return radius_at_angle(spec, np.asarray(theta, dtype=float) - spec.phase)


def growth_table(sides_min=3, sides_max=109) -> list[GrowthTableRow]:
    """Per-polygon apex angle (degrees) and growth base ``1/cos(180/s)``."""
    if sides_min < 3:
        raise ValueError(f"sides_min must be >= 3, got {sides_min}")
    if sides_max < sides_min:
        raise ValueError(f"empty range [{sides_min}, {sides_max}]")
    return [
        GrowthTableRow(s, 180.0 / s, 1.0 / math.cos(math.pi / s))
        for s in range(int(sides_min), int(sides_max) + 1)
    ]
