"""Finite checks of the topological and algebraic identities the engine relies on.

- Elementary symmetric functions of the doubled multiset {+-sqrt(r_i)}: odd
  ones vanish and the 2m-th is (-1)^m sigma_m(r).
- Betti numbers of the symmetric product of a wedge of m circles, modelled by
  the r-skeleton of the m-torus with its product cell structure.
- Surjectivity in cohomology of the inclusion of the alpha and beta tori into
  that skeleton, checked in homology: the push-forward on every exterior
  degree must be a split injection over Z. The companion inclusion into the
  symmetric product of the sphere punctured at the w basepoints is expected
  to fail already in degree 1.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb, prod
from pathlib import Path
from typing import Mapping, Sequence

from sympy import Matrix, Poly, expand, sqrt, symbols

from branchfloer.algebra import F2Matrix, ZMatrix, f2_homology_ranks, integer_snf
from branchfloer.errors import ExpectationsError, SpecError

logger = logging.getLogger("branchfloer.checks")


def elementary_symmetric(values: Sequence[object], j: int) -> object:
    """The j-th elementary symmetric function of ``values``, expanded."""
    return expand(sum((prod(c) for c in combinations(values, j)), 0))


def _variables(k: int) -> tuple:
    return symbols(f"r1:{k + 1}", positive=True)


def sigma_doubling(k: int) -> list[Poly]:
    """sigma_j(sqrt(r_1), -sqrt(r_1), ..., sqrt(r_k), -sqrt(r_k)) for j = 1..2k."""
    if k < 1:
        raise SpecError(f"k must be positive, got {k}")
    rs = _variables(k)
    values = [v for r in rs for v in (sqrt(r), -sqrt(r))]
    return [Poly(elementary_symmetric(values, j), *rs) for j in range(1, 2 * k + 1)]


def sigma_doubling_holds(k: int) -> bool:
    """Odd entries vanish and the 2m-th is (-1)^m sigma_m(r_1, ..., r_k)."""
    rs = _variables(k)
    doubled = sigma_doubling(k)
    for j, entry in enumerate(doubled, start=1):
        if j % 2:
            if not entry.is_zero:
                return False
        else:
            m = j // 2
            if entry != Poly((-1) ** m * elementary_symmetric(rs, m), *rs):
                return False
    return True


def sym_wedge_betti(m: int, r: int) -> tuple[int, ...]:
    """Betti numbers of the r-skeleton of the m-torus (cells = subsets of circles)."""
    if m < 1 or r < 1:
        raise SpecError(f"m and r must be positive, got m={m}, r={r}")
    top = min(m, r)
    cells = [list(combinations(range(m), k)) for k in range(top + 1)]
    index = [{cell: i for i, cell in enumerate(level)} for level in cells]
    maps = []
    for k in range(1, top + 1):
        # each circle cell has two equal endpoint faces, so every face appears twice
        pairs = (
            (index[k - 1][cell[:t] + cell[t + 1 :]], i)
            for i, cell in enumerate(cells[k])
            for t in range(k)
            for _ in range(2)
        )
        maps.append(F2Matrix.from_pairs(len(cells[k - 1]), len(cells[k]), pairs))
    maps.append(F2Matrix.zeros(len(cells[top]), 0))
    return tuple(f2_homology_ranks(maps)[: top + 1])


def _wedge_rows(vectors: Sequence[Sequence[int]], k: int, dimension: int) -> list[list[int]]:
    """Plucker coordinates of the k-fold wedges of ``vectors``."""
    columns = list(combinations(range(dimension), k))
    rows = []
    for chosen in combinations(range(len(vectors)), k):
        block = Matrix([list(vectors[i]) for i in chosen])
        rows.append([int(block.extract(list(range(k)), list(cols)).det()) for cols in columns])
    return rows


def _split_injective(rows: Sequence[Sequence[int]], cols: int) -> bool:
    if len(rows) > cols:
        return False
    factors = integer_snf(ZMatrix.from_rows(rows, cols))
    return sum(1 for f in factors if f == 1) == len(rows)


def push_forward_matrix(n: int, k: int) -> list[list[int]]:
    """Degree-k push-forward of the beta then alpha tori in the nu' basis.

    With 2n - 1 basis loops nu'_0..nu'_{2n-2}, beta_i = nu'_{2i} + nu'_{2i+1}
    and alpha_i = nu'_{2i+1} + nu'_{2i+2} for i < n - 1.
    """
    size = 2 * n - 1
    betas = [[int(j in (2 * i, 2 * i + 1)) for j in range(size)] for i in range(n - 1)]
    alphas = [[int(j in (2 * i + 1, 2 * i + 2)) for j in range(size)] for i in range(n - 1)]
    return _wedge_rows(betas, k, size) + _wedge_rows(alphas, k, size)


def companion_push_forward_matrix(n: int, k: int) -> list[list[int]]:
    """Same for the w-punctured sphere: beta_i -> w_i, alpha_i -> w_{i+1}, sum of w = 0."""
    size = n - 1

    def loop(i: int) -> list[int]:
        if i < size:
            return [int(j == i) for j in range(size)]
        return [-1] * size

    betas = [loop(i) for i in range(n - 1)]
    alphas = [loop(i + 1) for i in range(n - 1)]
    return _wedge_rows(betas, k, size) + _wedge_rows(alphas, k, size)


def check_i1_surjectivity(n: int) -> bool:
    """Alpha and beta tori push forward split-injectively in every degree 1..n-1."""
    if n < 2:
        raise SpecError(f"n must be at least 2, got {n}")
    return all(_split_injective(push_forward_matrix(n, k), comb(2 * n - 1, k)) for k in range(1, n))


def check_i2_surjectivity(n: int) -> bool:
    """The same test for the symmetric product of the sphere punctured at the w basepoints."""
    if n < 2:
        raise SpecError(f"n must be at least 2, got {n}")
    return all(_split_injective(companion_push_forward_matrix(n, k), comb(n - 1, k)) for k in range(1, n))


@dataclass(frozen=True)
class CheckResult:
    name: str
    observed: object
    expected: object

    @property
    def passed(self) -> bool:
        return self.observed == self.expected


@dataclass(frozen=True)
class CheckSummary:
    """Results of one run; ``skipped`` names families whose range was empty."""

    results: tuple[CheckResult, ...]
    skipped: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.skipped and all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]


def load_expectations(path: str | Path) -> dict[str, object]:
    """Read expected values by check name; JSON lists become tuples."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ExpectationsError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ExpectationsError("expectations must be a JSON object keyed by check name")
    return {name: tuple(value) if isinstance(value, list) else value for name, value in data.items()}


def run_checks(
    max_k: int = 5,
    max_m: int = 9,
    max_n: int = 5,
    expectations: Mapping[str, object] | None = None,
) -> CheckSummary:
    """Run every family up to the given ranges.

    ``expectations`` overrides expected values by check name; unknown names are
    logged and ignored. A family whose range is empty is listed in ``skipped``.
    """
    overrides = dict(expectations or {})
    results: list[CheckResult] = []

    def record(name: str, observed: object, expected: object) -> None:
        results.append(CheckResult(name, observed, overrides.pop(name, expected)))

    for k in range(1, max_k + 1):
        record(f"sigma_doubling(k={k})", sigma_doubling_holds(k), True)
    for m in range(1, max_m + 1):
        for r in range(1, m + 1):
            record(f"sym_wedge_betti(m={m},r={r})", sym_wedge_betti(m, r), tuple(comb(m, j) for j in range(r + 1)))
    for n in range(2, max_n + 1):
        record(f"i1_surjectivity(n={n})", check_i1_surjectivity(n), True)
        record(f"i2_surjectivity(n={n})", check_i2_surjectivity(n), False)
    if overrides:
        logger.warning("Expectations for unknown checks ignored: %s", ", ".join(sorted(overrides)))
    skipped = [
        family
        for family, empty in (
            ("sigma_doubling", max_k < 1),
            ("sym_wedge_betti", max_m < 1),
            ("i1_surjectivity", max_n < 2),
            ("i2_surjectivity", max_n < 2),
        )
        if empty
    ]
    if skipped:
        logger.warning("Skipped checks with an empty range: %s", ", ".join(skipped))
    summary = CheckSummary(tuple(results), tuple(skipped))
    logger.info("Ran %d checks, %d failed, %d families skipped", len(results), len(summary.failures), len(skipped))
    return summary
