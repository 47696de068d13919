"""Session fixtures: diagrams, complexes and Borel reports are built once."""

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import pytest

from branchfloer.complex import FloerComplex, GradedRanks, build_complex, hfk_tilde
from branchfloer.constructions import (
    FIGURE_EIGHT_GRID,
    TREFOIL_GRID,
    UNKNOT_GRID,
    BridgeSpec,
    from_grid,
    two_bridge,
)
from branchfloer.cover import CoveredDiagram, branched_double_cover
from branchfloer.diagram import Diagram
from branchfloer.equivariant import (
    BorelReport,
    EquivariantComplex,
    alexander_alignment,
    build_equivariant,
    localized_ranks,
    tau_permutation,
)

DATA = Path(__file__).resolve().parent.parent / "data"


@dataclass(frozen=True)
class BridgeRun:
    base: Diagram
    base_complex: FloerComplex
    base_ranks: GradedRanks
    covered: CoveredDiagram
    cover_complex: FloerComplex
    cover_ranks: GradedRanks
    equivariant: EquivariantComplex
    borel: BorelReport


@lru_cache(maxsize=None)
def bridge_run(p: int, q: int) -> BridgeRun:
    base = two_bridge(BridgeSpec(p, q))
    base_complex = build_complex(base)
    base_ranks = hfk_tilde(base_complex)
    covered = branched_double_cover(base)
    cover_complex = build_complex(covered.cover)
    cover_ranks = hfk_tilde(cover_complex)
    equivariant = build_equivariant(cover_complex, cover_ranks, tau_permutation(covered, cover_complex.generators))
    offset = alexander_alignment(covered, cover_complex, cover_ranks, base_complex, base_ranks)
    return BridgeRun(
        base,
        base_complex,
        base_ranks,
        covered,
        cover_complex,
        cover_ranks,
        equivariant,
        localized_ranks(equivariant, offset),
    )


@lru_cache(maxsize=None)
def grid_complex(name: str) -> FloerComplex:
    spec = {"unknot": UNKNOT_GRID, "trefoil": TREFOIL_GRID, "figure_eight": FIGURE_EIGHT_GRID}[name]
    return build_complex(from_grid(spec))


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def unknot():
    return bridge_run(1, 1)


@pytest.fixture(scope="session")
def trefoil():
    return bridge_run(3, 1)


@pytest.fixture(scope="session")
def figure_eight():
    return bridge_run(5, 3)


@pytest.fixture(scope="session")
def grids():
    """Grid complexes by knot name, built on first use."""
    return grid_complex


@pytest.fixture(scope="session")
def runs(unknot, trefoil, figure_eight):
    return {"unknot": unknot, "trefoil": trefoil, "figure_eight": figure_eight}
