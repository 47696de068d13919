"""Domains, periodic domains and relative gradings.

A domain is an integer combination of regions. Crossing edge e from its right
region to its left region the multiplicity jumps by the coefficient of e in
the domain's boundary, so a domain from x to y is a solution of

    a_L(e) - a_R(e) = gamma_e + m_curve(e)       for every edge e

where gamma is the connecting 1-chain (alpha arcs from x to y, beta arcs from
y to x) and m_c is the number of times the whole curve c is added to it.

:class:`DomainSolver` integrates this system along a breadth-first spanning
tree of the dual graph, which leaves one equation per non-tree edge in the
unknowns (a_root, m_1, ..., m_K). The reduced system is put in Smith normal
form once per diagram; every later solve is a matrix-vector product. The same
factorization yields the periodic-domain lattice (its integer kernel), the
obstruction class epsilon (the image in its cokernel) and H_1 of the
three-manifold. In pointed mode every basepoint region is pinned to
multiplicity 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import chain
from typing import Iterator, Mapping, Sequence

import networkx as nx
import numpy as np

from branchfloer.algebra import ZMatrix, smith_decomposition
from branchfloer.diagram import Diagram, Quadrant
from branchfloer.errors import DifferentialError, NotComparableError

logger = logging.getLogger("branchfloer.domains")

Generator = tuple[int, ...]


@dataclass(frozen=True)
class Domain:
    multiplicities: tuple[int, ...]
    source: Generator
    target: Generator

    def __add__(self, periodic: Sequence[int]) -> Domain:
        shifted = tuple(a + b for a, b in zip(self.multiplicities, periodic))
        return Domain(shifted, self.source, self.target)

    def n_w(self, d: Diagram) -> int:
        return sum(self.multiplicities[r] for r, label in d.basepoints if label.startswith("w"))

    def n_z(self, d: Diagram) -> int:
        return sum(self.multiplicities[r] for r, label in d.basepoints if label.startswith("z"))


def _arc(d: Diagram, curve: int, start: int, end: int, sign: int) -> Iterator[tuple[int, int]]:
    """Edges of the shorter arc from position ``start`` to ``end`` on ``curve``."""
    length = len(d.curves[curve].points)
    forward = (end - start) % length
    if forward == 0:
        return
    if forward <= length - forward:
        for k in range(forward):
            yield d.edge_id(curve, start + k), sign
    else:
        for k in range(length - forward):
            yield d.edge_id(curve, start - 1 - k), -sign


def connecting_chain(d: Diagram, x: Generator, y: Generator) -> dict[int, int]:
    """The 1-chain gamma_{x,y}: alpha arcs from x to y, beta arcs from y to x."""
    gamma: dict[int, int] = {}
    points = d.points
    for i, c in enumerate(d.alphas):
        px, py = points[x[i]], points[y[i]]
        for e, s in _arc(d, c, px.alpha_position, py.alpha_position, 1):
            gamma[e] = gamma.get(e, 0) + s
    on_beta_x = {points[p].beta: points[p].beta_position for p in x}
    on_beta_y = {points[p].beta: points[p].beta_position for p in y}
    for c in d.betas:
        for e, s in _arc(d, c, on_beta_y[c], on_beta_x[c], 1):
            gamma[e] = gamma.get(e, 0) + s
    return {e: v for e, v in gamma.items() if v}


class DomainSolver:
    """Smith-factorized edge-jump system of one diagram."""

    def __init__(self, d: Diagram, *, pointed: bool = False) -> None:
        self.diagram = d
        self.pointed = pointed
        region_count = len(d.regions)
        width = 1 + len(d.curves)

        dual = nx.Graph()
        dual.add_nodes_from(range(region_count))
        for e, (left, right) in enumerate(d.sides):
            if left != right and not dual.has_edge(left, right):
                dual.add_edge(left, right, edge=e)
        self._tree: list[tuple[int, int, int]] = [
            (parent, child, dual.edges[parent, child]["edge"]) for parent, child in nx.bfs_edges(dual, 0)
        ]
        if len(self._tree) != region_count - 1:
            raise ValueError(f"dual graph of {d!r} is disconnected")
        tree_edges = {e for _, _, e in self._tree}

        coefficients = [[0] * width for _ in range(region_count)]
        coefficients[0][0] = 1
        for parent, child, e in self._tree:
            sign = 1 if d.sides[e][0] == child else -1
            coefficients[child] = list(coefficients[parent])
            coefficients[child][1 + d.edges[e].curve] += sign

        self._row_edges = [e for e in range(len(d.edges)) if e not in tree_edges]
        rows = []
        for e in self._row_edges:
            left, right = d.sides[e]
            row = [a - b for a, b in zip(coefficients[left], coefficients[right])]
            row[1 + d.edges[e].curve] -= 1
            rows.append(row)
        self._pinned = sorted(d.basepoint_map) if pointed else []
        rows.extend(list(coefficients[r]) for r in self._pinned)

        self.constraints = ZMatrix.from_rows(rows, width)
        self.smith = smith_decomposition(self.constraints)
        self._coefficients = np.array(coefficients, dtype=object).reshape(region_count, width)
        self._left = np.array(self.smith.left.entries, dtype=object).reshape(self.smith.left.shape)
        self._right = np.array(self.smith.right.entries, dtype=object).reshape(self.smith.right.shape)
        logger.debug(
            "Domain system for %r: %d equations, %d unknowns, rank %d, pointed=%s",
            d,
            self.constraints.rows,
            width,
            self.smith.rank,
            pointed,
        )

    def _reduce(self, gamma: Mapping[int, int]) -> tuple[list[int], np.ndarray]:
        d = self.diagram
        offsets = [0] * len(d.regions)
        for parent, child, e in self._tree:
            g = gamma.get(e, 0)
            offsets[child] = offsets[parent] + (g if d.sides[e][0] == child else -g)
        rhs = []
        for e in self._row_edges:
            left, right = d.sides[e]
            rhs.append(gamma.get(e, 0) - offsets[left] + offsets[right])
        rhs.extend(-offsets[r] for r in self._pinned)
        if not rhs:
            return offsets, np.zeros(0, dtype=object)
        return offsets, self._left @ np.array(rhs, dtype=object)

    def obstruction(self, gamma: Mapping[int, int]) -> tuple[int, ...]:
        """Class of gamma in the cokernel of the system; zero iff solvable."""
        _, w = self._reduce(gamma)
        factors = self.smith.invariant_factors
        rank = self.smith.rank
        torsion = tuple(int(w[i]) % f for i, f in enumerate(factors[:rank]) if f > 1)
        return torsion + tuple(int(v) for v in w[rank:])

    def solve(self, gamma: Mapping[int, int]) -> tuple[int, ...] | None:
        """Region multiplicities of one solution, or None when unsolvable."""
        offsets, w = self._reduce(gamma)
        factors = self.smith.invariant_factors
        rank = self.smith.rank
        for i in range(rank):
            if w[i] % factors[i]:
                return None
        if any(w[rank:]):
            return None
        v = np.zeros(self.constraints.cols, dtype=object)
        for i in range(rank):
            v[i] = w[i] // factors[i]
        u = self._right @ v
        values = self._coefficients @ u
        return tuple(int(a) + b for a, b in zip(values, offsets))

    @cached_property
    def periodic_basis(self) -> tuple[tuple[int, ...], ...]:
        """A lattice basis of periodic domains (pointed mode: basepoint-free ones)."""
        basis = []
        for j in range(self.smith.rank, self.constraints.cols):
            values = self._coefficients @ self._right[:, j]
            basis.append(tuple(int(a) for a in values))
        return tuple(basis)

    def first_homology(self) -> tuple[tuple[int, ...], int]:
        """Torsion invariant factors and first Betti number of the three-manifold."""
        if self.pointed:
            raise ValueError("first homology is read off the unpointed system")
        factors = self.smith.invariant_factors[: self.smith.rank]
        free = self.constraints.rows - self.smith.rank
        return tuple(f for f in factors if f > 1), free - (len(self.diagram.point_names) - 1)


@lru_cache(maxsize=32)
def domain_solver(d: Diagram, pointed: bool = False) -> DomainSolver:
    """Solver for the domain system; ``pointed`` forbids regions with basepoints."""
    return DomainSolver(d, pointed=pointed)


def epsilon(d: Diagram, x: Generator, y: Generator) -> tuple[int, ...]:
    """Obstruction epsilon(x, y) in cokernel coordinates; all zero iff x ~ y."""
    return domain_solver(d).obstruction(connecting_chain(d, x, y))


def domain_between(d: Diagram, x: Generator, y: Generator) -> Domain | None:
    """Some domain from x to y, or None when epsilon(x, y) != 0."""
    multiplicities = domain_solver(d).solve(connecting_chain(d, x, y))
    if multiplicities is None:
        return None
    return Domain(multiplicities, tuple(x), tuple(y))


def corner_average(d: Diagram, multiplicities: Sequence[int], point: int) -> Fraction:
    """Average multiplicity of the four corners at ``point``."""
    return Fraction(sum(multiplicities[d.corner_region[(point, q)]] for q in Quadrant), 4)


def maslov_index(d: Diagram, domain: Domain) -> Fraction:
    """Lipshitz's index: Euler measure plus corner averages at both ends."""
    mult = domain.multiplicities
    total = sum((a * d.euler_measure(r) for r, a in enumerate(mult) if a), Fraction(0))
    for p in chain(domain.source, domain.target):
        total += corner_average(d, mult, p)
    if total.denominator != 1:
        raise DifferentialError(f"non-integral Maslov index {total}", witness=domain)
    return total


def relative_gradings(d: Diagram, x: Generator, y: Generator) -> tuple[int, int]:
    """(M(x) - M(y), A(x) - A(y)) read off any domain from x to y."""
    domain = domain_between(d, x, y)
    if domain is None:
        raise NotComparableError(x, y)
    return grading_shift(d, domain)


def grading_shift(d: Diagram, domain: Domain) -> tuple[int, int]:
    """(Maslov, Alexander) difference across ``domain``: (mu - 2 n_w, n_z - n_w)."""
    n_w = domain.n_w(d)
    return int(maslov_index(d, domain)) - 2 * n_w, domain.n_z(d) - n_w


def box_translates(
    base: Sequence[int],
    basis: Sequence[Sequence[int]],
    bound: int,
    low: int = 0,
    high: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Lattice translates ``base + sum t_k basis_k`` with ``|t_k| <= bound`` inside a box.

    Depth-first over the coefficients; a branch is cut as soon as some region
    can no longer reach ``[low, high]`` with the remaining coefficients.
    """
    regions = len(base)
    spread = [[0] * regions for _ in range(len(basis) + 1)]
    for j in reversed(range(len(basis))):
        spread[j] = [spread[j + 1][r] + bound * abs(basis[j][r]) for r in range(regions)]

    def visit(j: int, current: list[int]) -> Iterator[tuple[int, ...]]:
        reach = spread[j]
        if any(current[r] + reach[r] < low for r in range(regions)):
            return
        if high is not None and any(current[r] - reach[r] > high for r in range(regions)):
            return
        if j == len(basis):
            yield tuple(current)
            return
        for t in range(-bound, bound + 1):
            yield from visit(j + 1, [c + t * b for c, b in zip(current, basis[j])])

    yield from visit(0, list(base))


def is_weakly_admissible(d: Diagram, bound: int | None = None) -> bool:
    """No nonzero basepoint-free periodic domain has only nonnegative multiplicities."""
    basis = domain_solver(d, pointed=True).periodic_basis
    if not basis:
        return True
    for vector in basis:
        if all(v >= 0 for v in vector) or all(v <= 0 for v in vector):
            return False
    limit = bound if bound is not None else len(d.regions)
    zero = (0,) * len(d.regions)
    for candidate in box_translates(zero, basis, limit, low=0):
        if any(candidate):
            logger.info("Found a nonnegative periodic domain on %r", d)
            return False
    return True
