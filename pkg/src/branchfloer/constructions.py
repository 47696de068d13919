"""Diagram generators: toroidal grid diagrams and two-bridge diagrams on S^2.

Two-bridge diagrams are read off the pillowcase. On the torus R^2/Z^2 take the
horizontal lines y = 1/4, 3/4 and the lines p*x - q*y = 1/4, 3/4 of slope p/q;
the elliptic involution v -> -v swaps the two lines of each pair and fixes
the four half-lattice points, so the quotient is a sphere with one alpha
curve, one beta curve and the four fixed points as basepoints. Intersection
points are indexed by their x-coordinate on y = 1/4 in units of 1/(4p); all
arithmetic is integer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from branchfloer.diagram import Curve, CurveKind, Diagram, Quadrant, trace_regions, validate
from branchfloer.errors import SpecError

logger = logging.getLogger("branchfloer.constructions")


@dataclass(frozen=True)
class GridSpec:
    """An n x n toroidal grid.

    ``os[c]`` and ``xs[c]`` are the rows (0-indexed) of the O and X markers in
    column c. O markers become w basepoints and X markers z basepoints.
    """

    size: int
    xs: tuple[int, ...]
    os: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.size
        if n < 2:
            raise SpecError(f"grid size must be at least 2, got {n}")
        for name, perm in (("X", self.xs), ("O", self.os)):
            if sorted(perm) != list(range(n)):
                raise SpecError(f"{name} placements {list(perm)} are not a permutation of 0..{n - 1}")
        clashes = [c for c in range(n) if self.xs[c] == self.os[c]]
        if clashes:
            raise SpecError(f"X and O share a square in columns {clashes}")

    @classmethod
    def from_one_indexed(cls, xs: Sequence[int], os: Sequence[int]) -> GridSpec:
        if len(xs) != len(os):
            raise SpecError("X and O rows must have the same length")
        return cls(len(xs), tuple(x - 1 for x in xs), tuple(o - 1 for o in os))


@dataclass(frozen=True)
class BridgeSpec:
    """The two-bridge knot b(p, q)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if p < 1 or p % 2 == 0:
            raise SpecError(f"p must be a positive odd integer, got {p}")
        if gcd(p, q) != 1:
            raise SpecError(f"gcd({p}, {q}) != 1")
        if not (0 < q < p or p == q == 1):
            raise SpecError(f"q must satisfy 0 < q < p, got q = {q}")


UNKNOT_GRID = GridSpec(2, xs=(0, 1), os=(1, 0))
TREFOIL_GRID = GridSpec(5, xs=(2, 3, 4, 0, 1), os=(0, 1, 2, 3, 4))
FIGURE_EIGHT_GRID = GridSpec(6, xs=(1, 0, 2, 3, 5, 4), os=(5, 3, 4, 1, 2, 0))


def _checked(d: Diagram, source: str) -> Diagram:
    report = validate(d)
    if not report.ok:
        # constructions are expected to be valid; surface the full report
        report.raise_for_errors()
    logger.info(
        "Built %s: %d points, %d regions, genus %d, n = %d",
        source,
        len(d.point_names),
        len(d.regions),
        d.genus,
        d.n,
    )
    return d


def from_grid(spec: GridSpec) -> Diagram:
    """Torus diagram of a grid: rows are alpha circles, columns beta circles.

    Point (i, j) sits on row i and column j; the square whose lower-left
    corner is (i, j) is the region at that point's NE corner.
    """
    n = spec.size

    def pid(i: int, j: int) -> int:
        return (i % n) * n + (j % n)

    names = [f"p{i}_{j}" for i in range(n) for j in range(n)]
    curves = [Curve(f"a{i}", CurveKind.ALPHA, tuple(pid(i, j) for j in range(n))) for i in range(n)]
    curves += [Curve(f"b{j}", CurveKind.BETA, tuple(pid(i, j) for i in range(n))) for j in range(n)]
    regions = trace_regions(curves, [1] * (n * n))
    unmarked = Diagram.create(names, curves, regions, {})
    basepoints = {}
    for c in range(n):
        basepoints[unmarked.corner_region[(pid(spec.os[c], c), Quadrant.NE)]] = f"w{c + 1}"
        basepoints[unmarked.corner_region[(pid(spec.xs[c], c), Quadrant.NE)]] = f"z{c + 1}"
    return _checked(Diagram.create(names, curves, regions, basepoints), f"grid of size {n}")


def two_bridge(spec: BridgeSpec) -> Diagram:
    """Genus-0 diagram of b(p, q) with basepoints w1, z1, w2, z2."""
    p, q = spec.p, spec.q
    modulus = 4 * p
    placed = sorted(((q + 1 + 2 * j) % modulus, j) for j in range(2 * p))
    order = [u for u, _ in placed]
    sign_at = {u: 1 if j % 2 == 0 else -1 for u, j in placed}
    pid = {u: i for i, u in enumerate(order)}

    beta_order = []
    for m in range(p):
        plus = (1 + q + 4 * q * m) % modulus
        minus = -(1 + 3 * q + 4 * q * m) % modulus
        if sign_at.get(plus) != 1 or sign_at.get(minus) != -1:
            raise SpecError(f"inconsistent pillowcase intersection data for b({p}, {q})")
        beta_order += [plus, minus]

    names = [f"x{u}" for u in order]
    curves = [
        Curve("a", CurveKind.ALPHA, tuple(range(len(order)))),
        Curve("b", CurveKind.BETA, tuple(pid[u] for u in beta_order)),
    ]
    regions = trace_regions(curves, [sign_at[u] for u in order])
    unmarked = Diagram.create(names, curves, regions, {})

    def region_near(column: int, upper: bool) -> int:
        # the basepoint sits between alpha points center - 1 and center + 1
        center = column - q if upper else column + q
        edge = unmarked.edge_id(0, pid[(center - 1) % modulus])
        left, right = unmarked.sides[edge]
        return left if upper else right

    upper_w = 0 if q % 2 else 2 * p
    basepoints = {
        region_near(0, False): "w1",
        region_near(2 * p, False): "z1",
        region_near(upper_w, True): "w2",
        region_near(2 * p - upper_w, True): "z2",
    }
    return _checked(Diagram.create(names, curves, regions, basepoints), f"two-bridge b({p}, {q})")
