"""The Borel complex of the deck involution and its localization.

On the cover complex the involution acts by a permutation tau^# of
generators that commutes with the differential. The equivariant complex is
the cover complex tensored with F2[q] and the total differential

    D = d + (1 + tau^#) q

which squares to zero. Both d and tau^# preserve the Alexander grading and
tau^# swaps conjugate spin^c classes, so D splits into blocks indexed by a
conjugation orbit of classes and an Alexander grading. Over the fraction
field F2(q) the homology of a block has dimension dim - 2 rank(D), and the
sum over blocks is compared with the knot Floer homology of the base.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from branchfloer.algebra import F2Matrix, Grading, PolyMatrix, as_grading, fq_matrix_rank
from branchfloer.complex import FloerComplex, GradedRanks, SpinCPartition, decompose_lifted_generator
from branchfloer.cover import CoveredDiagram
from branchfloer.errors import ChainMapError, DifferentialError, VerdictInputError

logger = logging.getLogger("branchfloer.equivariant")


def tau_permutation(c: CoveredDiagram, generators: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
    """Index of tau(x) for each generator x; ChainMapError if an image is missing."""
    index = {g: i for i, g in enumerate(generators)}
    images = []
    for g in generators:
        image = c.tau_generator(g)
        if image not in index:
            raise ChainMapError(index[g])
        images.append(index[image])
    return tuple(images)


def tau_sharp(c: CoveredDiagram, generators: Sequence[tuple[int, ...]]) -> F2Matrix:
    """Permutation matrix of tau^#; entry (tau(i), i) is 1."""
    tau = tau_permutation(c, generators)
    return F2Matrix(len(tau), len(tau), frozenset((j, i) for i, j in enumerate(tau)))


@dataclass(frozen=True)
class EquivariantBlock:
    orbit: tuple[int, ...]
    alexander: Grading
    members: tuple[int, ...]
    boundary: F2Matrix
    tau: F2Matrix
    canonical: bool

    @cached_property
    def total(self) -> PolyMatrix:
        dim = len(self.members)
        return PolyMatrix.from_coefficients([self.boundary, F2Matrix.identity(dim) + self.tau])


@dataclass(frozen=True)
class EquivariantComplex:
    complex: FloerComplex
    ranks: GradedRanks
    tau: tuple[int, ...]
    spinc: SpinCPartition
    alexander: tuple[Grading, ...]
    blocks: tuple[EquivariantBlock, ...]

    def tau_matrix(self) -> F2Matrix:
        n = len(self.tau)
        return F2Matrix(n, n, frozenset((j, i) for i, j in enumerate(self.tau)))

    def total_differential(self) -> PolyMatrix:
        n = len(self.tau)
        return PolyMatrix.from_coefficients([self.complex.matrix(), F2Matrix.identity(n) + self.tau_matrix()])


def _check_involution(cx: FloerComplex, tau: Sequence[int]) -> None:
    if sorted(tau) != list(range(len(cx.generators))):
        raise DifferentialError("tau^# is not a permutation of the generators")
    for i, j in enumerate(tau):
        if tau[j] != i:
            raise DifferentialError("tau^# is not an involution", witness=i)
    for i, targets in enumerate(cx.boundary):
        if {tau[j] for j in targets} != cx.boundary[tau[i]]:
            raise ChainMapError(i)


def build_equivariant(cx: FloerComplex, ranks: GradedRanks, tau: Sequence[int]) -> EquivariantComplex:
    """Split the Borel complex into (orbit, Alexander) blocks.

    Generators of the second class of a conjugate pair are graded by their
    tau-image, which lines the pair up on one Alexander scale.
    """
    tau = tuple(tau)
    _check_involution(cx, tau)
    spinc = cx.spinc.with_involution(tau)

    aligned: list[Grading] = []
    orbit_of: list[tuple[int, ...]] = []
    for i, cls in enumerate(spinc.classes):
        partner = spinc.conjugate(cls)
        representative = min(cls, partner)
        source = i if cls == representative else tau[i]
        aligned.append(as_grading(cx.alexander[source] + ranks.shifts[representative]))
        orbit_of.append(tuple(sorted({cls, partner})))

    grouped: dict[tuple[tuple[int, ...], Grading], list[int]] = defaultdict(list)
    for i in range(len(cx.generators)):
        grouped[(orbit_of[i], aligned[i])].append(i)
    full = cx.matrix()
    blocks = []
    for (orbit, a), members in sorted(grouped.items(), key=lambda item: (item[0][0], item[0][1])):
        inside = set(members)
        if any(tau[i] not in inside for i in members):
            raise DifferentialError(f"tau^# leaves the block {orbit} at A = {a}")
        tau_block = F2Matrix.identity(len(tau)).submatrix(members, [tau[i] for i in members])
        block = EquivariantBlock(
            orbit=orbit,
            alexander=a,
            members=tuple(members),
            boundary=full.submatrix(members, members),
            tau=tau_block,
            canonical=spinc.canonical in orbit,
        )
        if not (block.total @ block.total).is_zero():
            raise DifferentialError(f"D^2 != 0 on block {orbit} at A = {a}")
        blocks.append(block)
    logger.info("Borel complex has %d blocks over %d generators", len(blocks), len(tau))
    return EquivariantComplex(cx, ranks, tau, spinc, tuple(aligned), tuple(blocks))


@dataclass(frozen=True)
class BlockRanks:
    orbit: tuple[int, ...]
    alexander: Grading
    dimension: int
    e1: int
    localized: int
    canonical: bool


@dataclass(frozen=True)
class BorelReport:
    blocks: tuple[BlockRanks, ...]
    cover_ranks: GradedRanks
    canonical_class: int | None
    class_count: int
    torsion: tuple[int, ...]
    alignment_offset: Grading | None = None

    @property
    def e1_total(self) -> int:
        return sum(b.e1 for b in self.blocks)

    @property
    def localized_total(self) -> int:
        return sum(b.localized for b in self.blocks)

    def localized_by_alexander(self) -> dict[Grading, int]:
        result: dict[Grading, int] = defaultdict(int)
        for b in self.blocks:
            if b.localized:
                result[b.alexander] += b.localized
        return dict(sorted(result.items()))

    def noncanonical_localized(self) -> int:
        return sum(b.localized for b in self.blocks if not b.canonical)


def localized_ranks(e: EquivariantComplex, alignment_offset: Grading | None = None) -> BorelReport:
    """E1 and localized ranks per orbit block of the Borel complex."""
    blocks = []
    for block in e.blocks:
        dim = len(block.members)
        blocks.append(
            BlockRanks(
                orbit=block.orbit,
                alexander=block.alexander,
                dimension=dim,
                e1=dim - 2 * block.boundary.rank(),
                localized=dim - 2 * fq_matrix_rank(block.total),
                canonical=block.canonical,
            )
        )
    report = BorelReport(
        blocks=tuple(blocks),
        cover_ranks=e.ranks,
        canonical_class=e.spinc.canonical,
        class_count=e.spinc.count,
        torsion=e.spinc.torsion,
        alignment_offset=alignment_offset,
    )
    logger.info("Localized rank %d, E1 rank %d", report.localized_total, report.e1_total)
    return report


def alexander_alignment(
    covered: CoveredDiagram,
    cover_complex: FloerComplex,
    cover_ranks: GradedRanks,
    base_complex: FloerComplex,
    base_ranks: GradedRanks,
) -> Grading:
    """Offset between normalized cover and base gradings on invariant generators.

    An invariant generator projects to twice a base generator x and its
    Alexander grading is that of x, so the offset is constant; it vanishes
    when both normalizations are the absolute ones.
    """
    invariant = [i for i, g in enumerate(cover_complex.generators) if covered.tau_generator(g) == g]
    if not invariant:
        raise DifferentialError("the cover has no invariant generators")
    canonical = cover_complex.spinc.classes[invariant[0]]
    base_index = base_complex.index
    offsets = set()
    for i in invariant:
        g = cover_complex.generators[i]
        if cover_complex.spinc.classes[i] != canonical:
            raise DifferentialError("invariant generators span several spin^c classes", witness=g)
        pair = decompose_lifted_generator(covered, g)
        if pair is None or pair[0] != pair[1]:
            raise DifferentialError("invariant generator does not project to a doubled base generator", witness=g)
        j = base_index[pair[0]]
        cover_a = cover_complex.alexander[i] + cover_ranks.shifts[canonical]
        base_a = base_complex.alexander[j] + base_ranks.shifts[base_complex.spinc.classes[j]]
        offsets.add(cover_a - base_a)
    if len(offsets) != 1:
        raise DifferentialError(f"invariant generators disagree with the base gradings: {sorted(offsets)}")
    return as_grading(offsets.pop())


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    name: str
    holds: bool
    lhs: object
    rhs: object
    relation: str


@dataclass(frozen=True)
class VerdictSet:
    verdicts: tuple[Verdict, ...]

    def __iter__(self) -> Iterator[Verdict]:
        return iter(self.verdicts)

    def __getitem__(self, name: str) -> Verdict:
        for verdict in self.verdicts:
            if verdict.name == name:
                return verdict
        raise KeyError(name)

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts)


def _dominates(upper: Mapping[Grading, int], lower: Mapping[Grading, int]) -> bool:
    return all(upper.get(a, 0) >= rank for a, rank in lower.items())


def verify_corollaries(base: GradedRanks, report: BorelReport, n: int) -> VerdictSet:
    """Localization equality and the rank inequalities it implies."""
    cover = report.cover_ranks
    if base.n != n or cover.n != n:
        raise VerdictInputError(f"base has n = {base.n} and cover n = {cover.n}, expected {n}")
    if len(base.classes) != 1:
        raise VerdictInputError("the base must carry a single spin^c class")
    s0 = report.canonical_class
    if s0 is None:
        raise VerdictInputError("the cover report has no canonical class")
    b = base.classes[0]
    offset = report.alignment_offset or 0
    base_tilde = {a + offset: r for a, r in base.by_alexander(b).items()}
    localized = report.localized_by_alexander()
    cover_tilde = cover.by_alexander(s0)
    base_hat = {a + offset: r for a, r in base.hat_by_alexander(b).items()}
    cover_hat = cover.hat_by_alexander(s0)

    verdicts = [
        Verdict("localization-total", report.localized_total == base.total(b), report.localized_total, base.total(b), "="),
        Verdict("localization-by-alexander", localized == base_tilde, localized, base_tilde, "="),
        Verdict(
            "localized-within-e1",
            all(blk.localized <= blk.e1 and (blk.dimension - blk.localized) % 2 == 0 for blk in report.blocks),
            report.localized_total,
            report.e1_total,
            "<=",
        ),
        Verdict("noncanonical-localized-zero", report.noncanonical_localized() == 0, report.noncanonical_localized(), 0, "="),
        Verdict("rank-inequality-total", cover.hat_total() >= base.hat_total(), cover.hat_total(), base.hat_total(), ">="),
        Verdict(
            "rank-inequality-canonical",
            cover.hat_total(s0) >= base.hat_total(b),
            cover.hat_total(s0),
            base.hat_total(b),
            ">=",
        ),
        Verdict("rank-inequality-by-alexander", _dominates(cover_tilde, base_tilde), cover_tilde, base_tilde, ">="),
    ]
    nonzero = [a for a, r in cover_hat.items() if r]
    top = max(nonzero) if nonzero else None
    top_cover = cover_hat.get(top, 0) if top is not None else 0
    top_base = base_hat.get(top, 0) if top is not None else 0
    verdicts.append(Verdict("rank-inequality-top-grading", top_cover >= top_base, top_cover, top_base, ">="))
    result = VerdictSet(tuple(verdicts))
    failed = [v.name for v in result if not v.holds]
    if failed:
        logger.warning("Verdicts failed: %s", ", ".join(failed))
    return result
