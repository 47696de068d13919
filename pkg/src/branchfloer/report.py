"""Compute reports and their JSON and text renderings.

JSON output is versioned by ``SCHEMA_VERSION``, keeps a fixed key order and
uses exact numbers: integers stay integers and half-integral gradings are
written as ``"a/b"`` strings. Stage timings are only included on request so
identical runs produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Any, Mapping

from branchfloer.algebra import as_grading
from branchfloer.checks import CheckSummary
from branchfloer.complex import AlexanderPolynomial, GradedRanks, SpinCPartition
from branchfloer.equivariant import BorelReport, VerdictSet

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class DiagramStats:
    points: int
    edges: int
    regions: int
    genus: int
    n: int
    alphas: int
    nice: bool
    weakly_admissible: bool
    generators: int


@dataclass(frozen=True)
class Report:
    input: str
    base: DiagramStats
    base_ranks: GradedRanks
    alexander: AlexanderPolynomial | None = None
    cover: DiagramStats | None = None
    cover_spinc: SpinCPartition | None = None
    cover_ranks: GradedRanks | None = None
    borel: BorelReport | None = None
    verdicts: VerdictSet | None = None
    checks: CheckSummary | None = None

    @property
    def ok(self) -> bool:
        if self.verdicts is not None and not self.verdicts.all_hold:
            return False
        return self.checks is None or self.checks.passed

    def determinant_agrees(self) -> bool | None:
        """|Delta(-1)| against the number of spin^c classes on the cover."""
        if self.alexander is None or self.cover_spinc is None:
            return None
        return self.alexander.determinant == self.cover_spinc.count


def _number(value: object) -> Any:
    """Integral fractions as ints, the rest as "a/b" strings."""
    if isinstance(value, Fraction):
        value = as_grading(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def _jsonable(value: object) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return _number(value)
    if isinstance(value, Mapping):
        return {str(_number(k)): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


def _stats(stats: DiagramStats) -> dict[str, Any]:
    return {
        "points": stats.points,
        "edges": stats.edges,
        "regions": stats.regions,
        "genus": stats.genus,
        "n": stats.n,
        "alpha_curves": stats.alphas,
        "nice": stats.nice,
        "weakly_admissible": stats.weakly_admissible,
        "generators": stats.generators,
    }


def _ranks(ranks: GradedRanks, cls: int) -> dict[str, Any]:
    return {
        "total": ranks.total(cls),
        "alexander_shift": _number(ranks.shifts[cls]),
        "by_alexander": _jsonable(ranks.by_alexander(cls)),
        "by_bigrading": [[_number(a), m, r] for (a, m), r in ranks.by_bigrading(cls).items()],
        "hat_total": ranks.hat_total(cls),
        "hat_by_alexander": _jsonable(ranks.hat_by_alexander(cls)),
    }


def _alexander(poly: AlexanderPolynomial) -> dict[str, Any]:
    return {
        "terms": [[e, c] for e, c in poly.coefficients],
        "text": str(poly),
        "determinant": poly.determinant,
    }


def _cover(report: Report) -> dict[str, Any]:
    spinc = report.cover_spinc
    ranks = report.cover_ranks
    data: dict[str, Any] = _stats(report.cover)
    if spinc is not None:
        data["spinc"] = {
            "classes": spinc.count,
            "torsion": list(spinc.torsion),
            "betti": spinc.betti,
            "h1_order": prod(spinc.torsion) if spinc.betti == 0 else None,
            "canonical": spinc.canonical,
            "conjugation": None if spinc.conjugation is None else list(spinc.conjugation),
            "pair_gradings": "aligned by tau^#, absolute shift per pair unresolved",
        }
    if ranks is not None:
        data["ranks"] = {str(cls): _ranks(ranks, cls) for cls in ranks.classes}
    data["determinant_agrees"] = report.determinant_agrees()
    return data


def _borel(borel: BorelReport) -> dict[str, Any]:
    return {
        "e1_total": borel.e1_total,
        "localized_total": borel.localized_total,
        "localized_by_alexander": _jsonable(borel.localized_by_alexander()),
        "alignment_offset": _number(borel.alignment_offset),
        "blocks": [
            {
                "orbit": list(b.orbit),
                "alexander": _number(b.alexander),
                "dimension": b.dimension,
                "e1": b.e1,
                "localized": b.localized,
                "canonical": b.canonical,
            }
            for b in borel.blocks
        ],
    }


def report_dict(report: Report, timings: Mapping[str, float] | None = None) -> dict[str, Any]:
    """The versioned JSON document; key order is fixed and numbers are exact."""
    data: dict[str, Any] = {"schema": SCHEMA_VERSION, "input": report.input}
    base = _stats(report.base)
    base["ranks"] = {str(cls): _ranks(report.base_ranks, cls) for cls in report.base_ranks.classes}
    base["alexander_polynomial"] = None if report.alexander is None else _alexander(report.alexander)
    data["base"] = base
    data["cover"] = None if report.cover is None else _cover(report)
    data["borel"] = None if report.borel is None else _borel(report.borel)
    data["verdicts"] = (
        None
        if report.verdicts is None
        else [
            {
                "name": v.name,
                "holds": v.holds,
                "relation": v.relation,
                "lhs": _jsonable(v.lhs),
                "rhs": _jsonable(v.rhs),
            }
            for v in report.verdicts
        ]
    )
    if report.checks is not None:
        data["checks"] = {
            "passed": report.checks.passed,
            "skipped": list(report.checks.skipped),
            "results": [
                {"name": r.name, "passed": r.passed, "observed": _jsonable(r.observed)}
                for r in report.checks.results
            ],
        }
    if timings is not None:
        data["timing"] = {name: round(seconds, 6) for name, seconds in timings.items()}
    return data


def render_json(report: Report, timings: Mapping[str, float] | None = None) -> str:
    """``report_dict`` as indented JSON with a trailing newline."""
    return json.dumps(report_dict(report, timings), indent=2) + "\n"


def _grading_line(values: Mapping[Any, int]) -> str:
    return ", ".join(f"A={_number(a)}: {r}" for a, r in values.items()) or "(empty)"


def render_text(report: Report, timings: Mapping[str, float] | None = None) -> str:
    """Human-readable summary, one section per stage."""
    lines = [f"input: {report.input}"]
    b = report.base
    lines.append(
        f"base: {b.points} points, {b.regions} regions, genus {b.genus}, n = {b.n}, "
        f"{b.generators} generators, nice={b.nice}, weakly admissible={b.weakly_admissible}"
    )
    for cls in report.base_ranks.classes:
        ranks = report.base_ranks
        lines.append(f"  tilde rank {ranks.total(cls)}: {_grading_line(ranks.by_alexander(cls))}")
        lines.append(f"  hat rank {ranks.hat_total(cls)}: {_grading_line(ranks.hat_by_alexander(cls))}")
    if report.alexander is not None:
        lines.append(f"  Alexander polynomial: {report.alexander}  (determinant {report.alexander.determinant})")
    if report.cover is not None:
        c = report.cover
        lines.append(
            f"cover: {c.points} points, {c.regions} regions, genus {c.genus}, {c.generators} generators, "
            f"nice={c.nice}, weakly admissible={c.weakly_admissible}"
        )
        spinc = report.cover_spinc
        if spinc is not None:
            lines.append(
                f"  spin^c classes: {spinc.count} (torsion {list(spinc.torsion)}, betti {spinc.betti}), "
                f"canonical class {spinc.canonical}"
            )
        if report.cover_ranks is not None:
            for cls in report.cover_ranks.classes:
                marker = " (canonical)" if cls == spinc.canonical else ""
                ranks = report.cover_ranks
                lines.append(f"  class {cls}{marker}: tilde rank {ranks.total(cls)}, hat rank {ranks.hat_total(cls)}")
        agrees = report.determinant_agrees()
        if agrees is not None:
            lines.append(f"  determinant matches class count: {agrees}")
    if report.borel is not None:
        borel = report.borel
        lines.append(f"borel: E1 rank {borel.e1_total}, localized rank {borel.localized_total}")
        lines.append(f"  localized by Alexander grading: {_grading_line(borel.localized_by_alexander())}")
        if borel.alignment_offset is not None:
            lines.append(f"  alignment offset: {_number(borel.alignment_offset)}")
    if report.verdicts is not None:
        lines.append("verdicts:")
        for v in report.verdicts:
            status = "ok" if v.holds else "FAILED"
            lines.append(f"  [{status}] {v.name}: {_jsonable(v.lhs)} {v.relation} {_jsonable(v.rhs)}")
    if report.checks is not None:
        failed = report.checks.failures
        lines.append(f"checks: {len(report.checks.results) - len(failed)}/{len(report.checks.results)} passed")
        for r in failed:
            lines.append(f"  [FAILED] {r.name}: observed {_jsonable(r.observed)}, expected {_jsonable(r.expected)}")
        for family in report.checks.skipped:
            lines.append(f"  [skipped] {family}: empty range")
    if timings:
        lines.append("timing:")
        for name, seconds in timings.items():
            lines.append(f"  {name}: {seconds:.3f}s")
    return "\n".join(lines) + "\n"
