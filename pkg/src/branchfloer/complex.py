"""The knot Floer chain complex of a nice diagram.

Generators are matchings of alpha curves to beta curves through intersection
points. The differential counts empty embedded bigons and rectangles that
avoid every basepoint: for each generator the candidate targets differ from
it in one coordinate (bigons) or by swapping the beta curves of two
coordinates (rectangles), and each candidate domain is checked against the
corner conditions and Maslov index 1. Gradings are relative inside each
spin^c class, anchored at the first generator of the class.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from sympy import Poly, div, symbols

from branchfloer.algebra import F2Matrix, Grading, as_grading, f2_homology_ranks
from branchfloer.diagram import Diagram, Quadrant, is_nice
from branchfloer.domains import (
    Domain,
    Generator,
    box_translates,
    connecting_chain,
    domain_solver,
    grading_shift,
    maslov_index,
)
from branchfloer.errors import DifferentialError, EulerCharacteristicError, NotNiceError

if TYPE_CHECKING:
    from branchfloer.cover import CoveredDiagram

logger = logging.getLogger("branchfloer.complex")


def enumerate_generators(d: Diagram) -> list[Generator]:
    """All matchings, in lexicographic order of point ids per alpha curve."""
    if len(d.alphas) != len(d.betas):
        return []
    choices = [sorted(d.curves[c].points) for c in d.alphas]
    beta_of = [point.beta for point in d.points]
    found: list[Generator] = []
    chosen: list[int] = []
    used: set[int] = set()

    def extend(i: int) -> None:
        if i == len(choices):
            found.append(tuple(chosen))
            return
        for p in choices[i]:
            if beta_of[p] in used:
                continue
            used.add(beta_of[p])
            chosen.append(p)
            extend(i + 1)
            chosen.pop()
            used.discard(beta_of[p])

    extend(0)
    return found


# ---------------------------------------------------------------------------
# spin^c classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpinCPartition:
    """Generators grouped by epsilon-class.

    ``labels[i]`` is epsilon(anchor, x_i) in cokernel coordinates; ``classes[i]``
    numbers the distinct labels in order of first appearance. Covers add the
    conjugation induced by tau^# and the canonical class of the invariant
    generators.
    """

    torsion: tuple[int, ...]
    betti: int
    labels: tuple[tuple[int, ...], ...]
    classes: tuple[int, ...]
    conjugation: tuple[int, ...] | None = None
    canonical: int | None = None

    @property
    def count(self) -> int:
        return len(set(self.classes))

    @property
    def canonical_class(self) -> int | None:
        """Class of the tau-invariant generators, once an involution is attached."""
        return self.canonical

    def members(self, cls: int) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c == cls]

    def conjugate(self, cls: int) -> int:
        if self.conjugation is None:
            return cls
        return self.conjugation[cls]

    def with_involution(self, tau: Sequence[int]) -> SpinCPartition:
        """Attach the class involution induced by a generator involution."""
        conjugation = [-1] * self.count
        for i, j in enumerate(tau):
            a, b = self.classes[i], self.classes[j]
            if conjugation[a] not in (-1, b):
                raise DifferentialError("tau^# does not act on spin^c classes", witness=i)
            conjugation[a] = b
        fixed = {self.classes[i] for i, j in enumerate(tau) if i == j}
        if len(fixed) > 1:
            raise DifferentialError(f"invariant generators span classes {sorted(fixed)}")
        return replace(
            self,
            conjugation=tuple(conjugation),
            canonical=next(iter(fixed)) if fixed else None,
        )


def spinc_partition(d: Diagram, generators: Sequence[Generator]) -> SpinCPartition:
    """Group generators by their obstruction class relative to the first one."""
    solver = domain_solver(d)
    torsion, betti = solver.first_homology()
    if not generators:
        return SpinCPartition(torsion, betti, (), ())
    anchor = generators[0]
    labels = tuple(solver.obstruction(connecting_chain(d, anchor, x)) for x in generators)
    numbering: dict[tuple[int, ...], int] = {}
    classes = tuple(numbering.setdefault(label, len(numbering)) for label in labels)
    return SpinCPartition(torsion, betti, labels, classes)


# ---------------------------------------------------------------------------
# differential
# ---------------------------------------------------------------------------


def _points_between(d: Diagram) -> dict[tuple[int, int], list[int]]:
    on: dict[tuple[int, int], list[int]] = defaultdict(list)
    for p, point in enumerate(d.points):
        on[(point.alpha, point.beta)].append(p)
    return on


def _candidates(
    d: Diagram, on: Mapping[tuple[int, int], list[int]], x: Generator
) -> Iterable[Generator]:
    """Targets of possible bigons (one coordinate moves) and rectangles (two swap)."""
    alphas = d.alphas
    beta = [d.points[p].beta for p in x]
    for k in range(len(x)):
        for p in on[(alphas[k], beta[k])]:
            if p != x[k]:
                yield x[:k] + (p,) + x[k + 1 :]
    for k, l in combinations(range(len(x)), 2):
        for p in on[(alphas[k], beta[l])]:
            for q in on[(alphas[l], beta[k])]:
                y = list(x)
                y[k], y[l] = p, q
                yield tuple(y)


def _is_empty_polygon(d: Diagram, multiplicities: Sequence[int], x: Generator, y: Generator) -> bool:
    if any(a not in (0, 1) for a in multiplicities):
        return False
    fixed = set(x) & set(y)
    for p in set(x) | set(y):
        quadrants = sorted(multiplicities[d.corner_region[(p, q)]] for q in Quadrant)
        if p in fixed:
            if any(quadrants):
                return False
        elif quadrants != [0, 0, 0, 1]:
            return False
    return maslov_index(d, Domain(tuple(multiplicities), x, y)) == 1


def _boundary_sets(
    d: Diagram, generators: Sequence[Generator], bound: int | None = None
) -> tuple[frozenset[int], ...]:
    ok, offending = is_nice(d)
    if not ok:
        raise NotNiceError(list(offending))
    index = {g: i for i, g in enumerate(generators)}
    on = _points_between(d)
    solver = domain_solver(d, pointed=True)
    basis = solver.periodic_basis
    limit = bound if bound is not None else len(d.regions)
    boundary = []
    for x in generators:
        targets: set[int] = set()
        for y in dict.fromkeys(_candidates(d, on, x)):
            base = solver.solve(connecting_chain(d, x, y))
            if base is None:
                continue
            domains = box_translates(base, basis, limit, 0, 1) if basis else [base]
            count = sum(1 for dom in domains if _is_empty_polygon(d, dom, x, y))
            if count % 2:
                targets.add(index[y])
        boundary.append(frozenset(targets))
    for i, targets in enumerate(boundary):
        twice: set[int] = set()
        for j in targets:
            twice ^= boundary[j]
        if twice:
            raise DifferentialError(f"d^2 != 0 at generator {i}", witness=(i, min(twice)))
    return tuple(boundary)


def differential(d: Diagram, max_domain_coeff: int | None = None) -> F2Matrix:
    """Matrix of the differential; entry (y, x) is the mod-2 count from x to y."""
    generators = enumerate_generators(d)
    boundary = _boundary_sets(d, generators, max_domain_coeff)
    n = len(generators)
    return F2Matrix(n, n, frozenset((j, i) for i, targets in enumerate(boundary) for j in targets))


@dataclass(frozen=True)
class FloerComplex:
    diagram: Diagram
    generators: tuple[Generator, ...]
    boundary: tuple[frozenset[int], ...]
    spinc: SpinCPartition
    maslov: tuple[int, ...]
    alexander: tuple[int, ...]

    @cached_property
    def index(self) -> dict[Generator, int]:
        return {g: i for i, g in enumerate(self.generators)}

    @property
    def n(self) -> int:
        return self.diagram.n

    def matrix(self) -> F2Matrix:
        n = len(self.generators)
        return F2Matrix(n, n, frozenset((j, i) for i, targets in enumerate(self.boundary) for j in targets))


def build_complex(d: Diagram, *, max_domain_coeff: int | None = None) -> FloerComplex:
    """Generators, spin^c classes, the differential and relative gradings of a nice diagram."""
    generators = enumerate_generators(d)
    logger.info("Enumerated %d generators on %r", len(generators), d)
    spinc = spinc_partition(d, generators)
    boundary = _boundary_sets(d, generators, max_domain_coeff)
    logger.info(
        "Differential has %d nonzero entries across %d spin^c classes",
        sum(len(t) for t in boundary),
        spinc.count,
    )

    solver = domain_solver(d)
    anchors: dict[int, Generator] = {}
    maslov, alexander = [], []
    for x, cls in zip(generators, spinc.classes):
        anchor = anchors.setdefault(cls, x)
        multiplicities = solver.solve(connecting_chain(d, anchor, x))
        if multiplicities is None:
            raise DifferentialError("generator not connected to its class anchor", witness=x)
        dm, da = grading_shift(d, Domain(multiplicities, anchor, x))
        maslov.append(-dm)
        alexander.append(-da)

    for i, targets in enumerate(boundary):
        for j in targets:
            if (
                spinc.classes[i] != spinc.classes[j]
                or alexander[i] != alexander[j]
                or maslov[j] != maslov[i] - 1
            ):
                raise DifferentialError(f"differential from {i} to {j} breaks the gradings", witness=(i, j))
    return FloerComplex(d, tuple(generators), boundary, spinc, tuple(maslov), tuple(alexander))


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedRanks:
    """Homology ranks keyed by (spin^c class, Alexander, relative Maslov).

    ``relative`` uses the anchored Alexander gradings; ``shifts`` holds the
    per-class normalization so that rank(a) = rank(-(n - 1) - a).
    """

    n: int
    relative: Mapping[tuple[int, int, int], int]
    shifts: Mapping[int, Fraction]
    canonical: int | None = None
    entries: dict[tuple[int, Grading, int], int] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        normalized = {
            (cls, as_grading(a + self.shifts[cls]), m): rank for (cls, a, m), rank in self.relative.items()
        }
        object.__setattr__(self, "entries", dict(sorted(normalized.items())))

    @property
    def classes(self) -> list[int]:
        return sorted(self.shifts)

    def total(self, cls: int | None = None) -> int:
        return sum(rank for (c, _, _), rank in self.entries.items() if cls is None or c == cls)

    def by_bigrading(self, cls: int = 0) -> dict[tuple[Grading, int], int]:
        return {(a, m): rank for (c, a, m), rank in self.entries.items() if c == cls}

    def by_alexander(self, cls: int = 0) -> dict[Grading, int]:
        result: dict[Grading, int] = defaultdict(int)
        for (a, _), rank in self.by_bigrading(cls).items():
            result[a] += rank
        return dict(sorted(result.items()))

    def hat_by_bigrading(self, cls: int = 0) -> dict[tuple[Grading, int], int]:
        """Peel off V^(n-1): tilde(A, M) = sum_k C(n-1, k) hat(A + k, M + k)."""
        tilde = self.by_bigrading(cls)
        span = self.n - 1
        keys = {(a - k, m - k) for (a, m) in tilde for k in range(span + 1)}
        hat: dict[tuple[Grading, int], int] = {}
        for a, m in sorted(keys, reverse=True):
            value = tilde.get((a, m), 0) - sum(
                comb(span, k) * hat.get((a + k, m + k), 0) for k in range(1, span + 1)
            )
            if value < 0:
                raise EulerCharacteristicError(
                    f"ranks of class {cls} are not divisible by V^{span} at (A, M) = ({a}, {m})"
                )
            if value:
                hat[(a, m)] = value
        return dict(sorted(hat.items()))

    def hat_by_alexander(self, cls: int = 0) -> dict[Grading, int]:
        result: dict[Grading, int] = defaultdict(int)
        for (a, _), rank in self.hat_by_bigrading(cls).items():
            result[a] += rank
        return dict(sorted(result.items()))

    def hat_total(self, cls: int | None = None) -> int:
        classes = self.classes if cls is None else [cls]
        return sum(sum(self.hat_by_bigrading(c).values()) for c in classes)


def _block_homology(members_by_degree: Mapping[int, list[int]], boundary: Sequence[frozenset[int]]) -> dict[int, int]:
    low, high = min(members_by_degree), max(members_by_degree)
    degrees = [members_by_degree.get(m, []) for m in range(low, high + 1)]
    position = {g: i for members in degrees for i, g in enumerate(members)}
    maps = []
    for k in range(1, len(degrees)):
        source, target = degrees[k], degrees[k - 1]
        pairs = ((position[j], position[i]) for i in source for j in boundary[i])
        maps.append(F2Matrix(len(target), len(source), frozenset(pairs)))
    maps.append(F2Matrix.zeros(len(degrees[-1]), 0))
    ranks = f2_homology_ranks(maps)
    return {low + k: ranks[k] for k in range(len(degrees)) if ranks[k]}


def hfk_tilde(c: FloerComplex) -> GradedRanks:
    """Homology per (class, Alexander, Maslov), normalized symmetric per class."""
    strata: dict[tuple[int, int], dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    for i, (cls, a, m) in enumerate(zip(c.spinc.classes, c.alexander, c.maslov)):
        strata[(cls, a)][m].append(i)
    relative: dict[tuple[int, int, int], int] = {}
    for (cls, a), by_degree in sorted(strata.items()):
        for m, rank in _block_homology(by_degree, c.boundary).items():
            relative[(cls, a, m)] = rank

    shifts: dict[int, Fraction] = {}
    for cls in sorted(set(c.spinc.classes)):
        support = [a for (k, a, _) in relative if k == cls]
        if support:
            shifts[cls] = Fraction(-(c.n - 1) - (min(support) + max(support)), 2)
        else:
            shifts[cls] = Fraction(0)
    ranks = GradedRanks(c.n, relative, shifts, c.spinc.canonical)
    logger.info("Homology has total rank %d over %d classes", ranks.total(), len(shifts))
    return ranks


# ---------------------------------------------------------------------------
# Alexander polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlexanderPolynomial:
    """Symmetric Laurent polynomial with Delta(1) = 1, keyed by exponent."""

    coefficients: tuple[tuple[int, int], ...]

    @property
    def determinant(self) -> int:
        return abs(sum(c * (-1) ** (e % 2) for e, c in self.coefficients))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def __str__(self) -> str:
        terms = []
        for exponent, coefficient in sorted(self.coefficients, reverse=True):
            size = abs(coefficient)
            if exponent == 0:
                body = str(size)
            else:
                power = "t" if exponent == 1 else f"t^{exponent}"
                body = power if size == 1 else f"{size}*{power}"
            if not terms:
                terms.append(body if coefficient > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if coefficient > 0 else f"- {body}")
        return " ".join(terms) if terms else "0"


def alexander_polynomial(r: GradedRanks, n: int | None = None) -> AlexanderPolynomial:
    """Graded Euler characteristic divided by (1 - t^-1)^(n-1)."""
    if len(r.classes) != 1:
        raise EulerCharacteristicError("the Alexander polynomial needs a single spin^c class")
    n = r.n if n is None else n
    cls = r.classes[0]
    euler: dict[int, int] = defaultdict(int)
    for (a, m), rank in r.by_bigrading(cls).items():
        if not isinstance(a, int):
            raise EulerCharacteristicError(f"non-integral Alexander grading {a}")
        euler[a] += (-1) ** (m % 2) * rank
    euler = {a: v for a, v in euler.items() if v}
    if not euler:
        raise EulerCharacteristicError("vanishing graded Euler characteristic")

    t = symbols("t")
    low = min(euler)
    numerator = Poly(sum(v * t ** (a - low) for a, v in euler.items()), t)
    quotient, remainder = div(numerator, Poly((t - 1) ** (n - 1), t))
    if not remainder.is_zero:
        raise EulerCharacteristicError("graded Euler characteristic is not divisible by (1 - t^-1)^(n-1)")
    top = quotient.degree()
    terms = {
        top - i + low + n - 1: int(c) for i, c in enumerate(quotient.all_coeffs()) if c != 0
    }
    exponents = sorted(terms)
    twice_center = exponents[0] + exponents[-1]
    if twice_center % 2:
        raise EulerCharacteristicError("Alexander polynomial is not symmetric")
    center = twice_center // 2
    terms = {e - center: c for e, c in terms.items()}
    if any(terms.get(-e) != c for e, c in terms.items()):
        raise EulerCharacteristicError("Alexander polynomial is not symmetric")
    value = sum(terms.values())
    if value not in (1, -1):
        raise EulerCharacteristicError(f"Delta(1) = {value}, expected +-1")
    return AlexanderPolynomial(tuple(sorted((e, c * value) for e, c in terms.items())))


# ---------------------------------------------------------------------------
# lifted generators
# ---------------------------------------------------------------------------


def _base_generator(d: Diagram, points: Sequence[int]) -> Generator | None:
    slots: list[int | None] = [None] * len(d.alphas)
    betas = set()
    for p in points:
        point = d.points[p]
        slot = d.alpha_ordinal[point.alpha]
        if slots[slot] is not None or point.beta in betas:
            return None
        slots[slot] = p
        betas.add(point.beta)
    return tuple(slots) if None not in slots else None  # type: ignore[return-value]


def decompose_lifted_generator(c: CoveredDiagram, x: Generator) -> tuple[Generator, Generator] | None:
    """Split a cover generator into the lifts of two base generators."""
    projected = [c.point_projection[p] for p in x]
    k = len(c.base.alphas)
    for subset in combinations(range(len(projected)), k):
        rest = [projected[i] for i in range(len(projected)) if i not in subset]
        first = _base_generator(c.base, [projected[i] for i in subset])
        second = _base_generator(c.base, rest)
        if first is not None and second is not None:
            return first, second
    return None
