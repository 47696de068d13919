"""The compute pipeline as a graph of cached stages.

Each step (base diagram, validation, complexes, cover, Borel report,
verdicts) is a :class:`~branchfloer.stage.Stage` reading the steps and
settings it needs. Changing a setting reruns only the stages that read it:
toggling ``lift`` keeps the base complex, and changing the report format
reruns nothing but the rendering.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from branchfloer.checks import CheckSummary, run_checks
from branchfloer.complex import (
    AlexanderPolynomial,
    FloerComplex,
    GradedRanks,
    alexander_polynomial,
    build_complex,
    hfk_tilde,
)
from branchfloer.constructions import BridgeSpec, GridSpec, from_grid, two_bridge
from branchfloer.cover import CoveredDiagram, branched_double_cover
from branchfloer.diagram import Diagram, ValidationReport, is_nice, validate
from branchfloer.domains import is_weakly_admissible
from branchfloer.equivariant import (
    BorelReport,
    EquivariantComplex,
    VerdictSet,
    alexander_alignment,
    build_equivariant,
    localized_ranks,
    tau_permutation,
    verify_corollaries,
)
from branchfloer.errors import CoverError
from branchfloer.fileformat import load_grid, parse_diagram
from branchfloer.report import DiagramStats, Report, render_json, render_text
from branchfloer.settings import Settings
from branchfloer.stage import Stage

logger = logging.getLogger("branchfloer.pipeline")


@dataclass(frozen=True)
class DiagramSource:
    """Where the base diagram comes from, with a printable description."""

    description: str
    load: Callable[[], Diagram]

    @classmethod
    def two_bridge(cls, p: int, q: int) -> DiagramSource:
        spec = BridgeSpec(p, q)
        return cls(f"two-bridge b({p}, {q})", lambda: two_bridge(spec))

    @classmethod
    def grid(cls, spec: GridSpec, description: str | None = None) -> DiagramSource:
        return cls(description or f"grid of size {spec.size}", lambda: from_grid(spec))

    @classmethod
    def grid_file(cls, path: str | Path) -> DiagramSource:
        return cls.grid(load_grid(path), f"grid file {Path(path).name}")

    @classmethod
    def diagram(cls, d: Diagram, description: str = "diagram") -> DiagramSource:
        return cls(description, lambda: d)

    @classmethod
    def diagram_file(cls, path: str | Path) -> DiagramSource:
        text = Path(path).read_text(encoding="utf-8")
        d = parse_diagram(text, check=False)
        return cls.diagram(d, f"diagram file {Path(path).name}")


def _stats(d: Diagram, generators: int, max_domain_coeff: int | None) -> DiagramStats:
    return DiagramStats(
        points=len(d.point_names),
        edges=len(d.edges),
        regions=len(d.regions),
        genus=d.genus,
        n=d.n,
        alphas=len(d.alphas),
        nice=is_nice(d)[0],
        weakly_admissible=is_weakly_admissible(d, max_domain_coeff),
        generators=generators,
    )


class Pipeline:
    """Stages from a diagram source to the final report."""

    def __init__(self, source: DiagramSource, settings: Settings | None = None) -> None:
        self.source = source
        self.settings = settings or Settings()
        self.base = Stage(self._base, "base diagram")
        self.validation = Stage(self._validation, "validation")
        self.base_complex = Stage(self._base_complex, "base complex")
        self.base_ranks = Stage(self._base_ranks, "base ranks")
        self.alexander = Stage(self._alexander, "alexander polynomial")
        self.lifts = Stage(self._lifts, "lift decision")
        self.cover = Stage(self._cover, "cover")
        self.cover_complex = Stage(self._cover_complex, "cover complex")
        self.cover_ranks = Stage(self._cover_ranks, "cover ranks")
        self.equivariant = Stage(self._equivariant, "equivariant complex")
        self.borel = Stage(self._borel, "borel report")
        self.verdicts = Stage(self._verdicts, "verdicts")
        self.checks = Stage(self._checks, "checks")
        self.report = Stage(self._report, "report")
        self.rendered = Stage(self._rendered, "rendered report")

    @property
    def stages(self) -> list[Stage]:
        return [
            self.base,
            self.validation,
            self.base_complex,
            self.base_ranks,
            self.alexander,
            self.lifts,
            self.cover,
            self.cover_complex,
            self.cover_ranks,
            self.equivariant,
            self.borel,
            self.verdicts,
            self.checks,
            self.report,
            self.rendered,
        ]

    def timings(self) -> dict[str, float]:
        return {s.name: s.elapsed for s in self.stages if s.elapsed is not None and not s.dirty}

    # -- stage bodies ----------------------------------------------------------

    def _base(self) -> Diagram:
        return self.source.load()

    def _validation(self) -> ValidationReport:
        report = validate(self.base.get())
        report.raise_for_errors()
        return report

    def _base_complex(self) -> FloerComplex:
        self.validation.get()
        return build_complex(self.base.get(), max_domain_coeff=self.settings.get("max_domain_coeff"))

    def _base_ranks(self) -> GradedRanks:
        return hfk_tilde(self.base_complex.get())

    def _alexander(self) -> AlexanderPolynomial | None:
        ranks = self.base_ranks.get()
        if len(ranks.classes) != 1:
            return None
        return alexander_polynomial(ranks)

    def _lifts(self) -> bool:
        requested = self.settings.get("lift")
        genus = self.base.get().genus
        if requested is None:
            return genus == 0
        if requested and genus != 0:
            raise CoverError("cover requires genus-0 base")
        return bool(requested)

    def _cover(self) -> CoveredDiagram | None:
        if not self.lifts.get():
            return None
        self.validation.get()
        return branched_double_cover(self.base.get())

    def _cover_complex(self) -> FloerComplex | None:
        covered = self.cover.get()
        if covered is None:
            return None
        return build_complex(covered.cover, max_domain_coeff=self.settings.get("max_domain_coeff"))

    def _cover_ranks(self) -> GradedRanks | None:
        cx = self.cover_complex.get()
        return None if cx is None else hfk_tilde(cx)

    def _equivariant(self) -> EquivariantComplex | None:
        covered, cx = self.cover.get(), self.cover_complex.get()
        if covered is None or cx is None:
            return None
        tau = tau_permutation(covered, cx.generators)
        return build_equivariant(cx, self.cover_ranks.get(), tau)

    def _borel(self) -> BorelReport | None:
        e = self.equivariant.get()
        if e is None:
            return None
        offset = None
        if len(self.base_ranks.get().classes) == 1:
            offset = alexander_alignment(
                self.cover.get(),
                self.cover_complex.get(),
                self.cover_ranks.get(),
                self.base_complex.get(),
                self.base_ranks.get(),
            )
        return localized_ranks(e, offset)

    def _verdicts(self) -> VerdictSet | None:
        borel = self.borel.get()
        if borel is None:
            return None
        return verify_corollaries(self.base_ranks.get(), borel, self.base.get().n)

    def _checks(self) -> CheckSummary | None:
        return run_checks() if self.settings.get("checks") else None

    def _report(self) -> Report:
        base = self.base.get()
        base_complex = self.base_complex.get()
        covered = self.cover.get()
        cover_complex = self.cover_complex.get()
        bound = self.settings.get("max_domain_coeff")
        report = Report(
            input=self.source.description,
            base=_stats(base, len(base_complex.generators), bound),
            base_ranks=self.base_ranks.get(),
            alexander=self.alexander.get(),
            cover=None if covered is None else _stats(covered.cover, len(cover_complex.generators), bound),
            cover_spinc=None if cover_complex is None else self.equivariant.get().spinc,
            cover_ranks=self.cover_ranks.get(),
            borel=self.borel.get(),
            verdicts=self.verdicts.get(),
            checks=self.checks.get(),
        )
        logger.info("Report assembled for %s", self.source.description)
        return report

    def _rendered(self) -> str:
        report = self.report.get()
        timings = self.timings() if self.settings.get("timing") else None
        render = render_json if self.settings.get("report") == "json" else render_text
        return render(report, timings)

    def run(self) -> Report:
        """Compute whatever is stale and return the report."""
        return self.report.get()

    def render(self) -> str:
        """The report rendered in the format the ``report`` setting names."""
        return self.rendered.get()
