"""Tests for domains, periodic domains and relative gradings."""

from itertools import combinations

import pytest

from branchfloer.complex import enumerate_generators
from branchfloer.constructions import TREFOIL_GRID, UNKNOT_GRID, BridgeSpec, from_grid, two_bridge
from branchfloer.diagram import Diagram
from branchfloer.domains import (
    Domain,
    box_translates,
    connecting_chain,
    domain_between,
    domain_solver,
    epsilon,
    grading_shift,
    is_weakly_admissible,
    maslov_index,
    relative_gradings,
)
from branchfloer.errors import NotComparableError


class TestConnectingChain:
    def test_same_generator(self):
        d = from_grid(UNKNOT_GRID)
        x = enumerate_generators(d)[0]
        assert connecting_chain(d, x, x) == {}

    def test_alpha_and_beta_arcs(self):
        d = from_grid(UNKNOT_GRID)
        x, y = enumerate_generators(d)
        gamma = connecting_chain(d, x, y)
        kinds = {d.edge_kind(e).value for e in gamma}
        assert kinds == {"alpha", "beta"}
        assert all(abs(v) == 1 for v in gamma.values())


class TestDomainSolver:
    def test_trivial_domain(self):
        d = from_grid(UNKNOT_GRID)
        x = enumerate_generators(d)[0]
        assert domain_between(d, x, x).multiplicities == (0, 0, 0, 0)
        assert not any(epsilon(d, x, x))

    def test_single_square_between_grid_generators(self):
        d = from_grid(UNKNOT_GRID)
        x, y = enumerate_generators(d)
        base = domain_between(d, x, y)
        basis = domain_solver(d).periodic_basis
        squares = [m for m in box_translates(base.multiplicities, basis, 6, 0, 1) if sum(m) == 1]
        assert squares
        for m in squares:
            assert maslov_index(d, Domain(m, x, y)) == 1

    def test_solution_has_the_right_boundary(self):
        d = two_bridge(BridgeSpec(3, 1))
        gens = enumerate_generators(d)
        x, y = gens[0], gens[3]
        domain = domain_between(d, x, y)
        gamma = connecting_chain(d, x, y)
        for e, (left, right) in enumerate(d.sides):
            jump = domain.multiplicities[left] - domain.multiplicities[right]
            curve_total = jump - gamma.get(e, 0)
            # what is left over is a whole-curve multiple
            same_curve = [
                f for f in range(len(d.edges)) if d.edges[f].curve == d.edges[e].curve
            ]
            totals = {
                domain.multiplicities[d.sides[f][0]] - domain.multiplicities[d.sides[f][1]] - gamma.get(f, 0)
                for f in same_curve
            }
            assert totals == {curve_total}

    def test_sphere_periodic_domains(self):
        d = two_bridge(BridgeSpec(3, 1))
        assert len(domain_solver(d).periodic_basis) == 3
        assert domain_solver(d, pointed=True).periodic_basis == ()

    def test_first_homology_of_the_sphere(self):
        d = two_bridge(BridgeSpec(3, 1))
        assert domain_solver(d).first_homology() == ((), 0)

    def test_first_homology_of_a_grid(self):
        assert domain_solver(from_grid(TREFOIL_GRID)).first_homology() == ((), 0)

    def test_pointed_first_homology_refused(self):
        with pytest.raises(ValueError, match="unpointed"):
            domain_solver(from_grid(UNKNOT_GRID), pointed=True).first_homology()

    def test_solver_is_cached(self):
        d = from_grid(UNKNOT_GRID)
        assert domain_solver(d) is domain_solver(d)
        assert domain_solver(d) is not domain_solver(d, pointed=True)


class TestMaslovIndex:
    def test_fundamental_class(self):
        d = two_bridge(BridgeSpec(3, 1))
        x = enumerate_generators(d)[0]
        whole = Domain((1,) * len(d.regions), x, x)
        assert maslov_index(d, whole) == 2 * d.n
        assert whole.n_w(d) == whole.n_z(d) == d.n
        assert grading_shift(d, whole) == (0, 0)

    def test_zero_domain(self):
        d = from_grid(UNKNOT_GRID)
        x = enumerate_generators(d)[0]
        assert maslov_index(d, Domain((0,) * 4, x, x)) == 0


class TestRelativeGradings:
    @pytest.mark.parametrize(
        "make",
        [lambda: two_bridge(BridgeSpec(3, 1)), lambda: two_bridge(BridgeSpec(5, 3)), lambda: from_grid(UNKNOT_GRID)],
    )
    def test_independent_of_periodic_domain(self, make):
        d = make()
        basis = domain_solver(d).periodic_basis
        gens = enumerate_generators(d)
        for x, y in combinations(gens, 2):
            base = domain_between(d, x, y)
            shift = grading_shift(d, base)
            for periodic in basis:
                assert grading_shift(d, base + periodic) == shift
                assert grading_shift(d, base + tuple(-v for v in periodic)) == shift

    def test_additive(self):
        d = two_bridge(BridgeSpec(3, 1))
        gens = enumerate_generators(d)
        for x, y, z in combinations(gens, 3):
            m_xy, a_xy = relative_gradings(d, x, y)
            m_yz, a_yz = relative_gradings(d, y, z)
            assert relative_gradings(d, x, z) == (m_xy + m_yz, a_xy + a_yz)

    def test_antisymmetric(self):
        d = from_grid(UNKNOT_GRID)
        x, y = enumerate_generators(d)
        m, a = relative_gradings(d, x, y)
        assert relative_gradings(d, y, x) == (-m, -a)
        assert abs(a) == 1

    def test_not_comparable(self, trefoil):
        cx = trefoil.cover_complex
        classes = cx.spinc.classes
        i = classes.index(0)
        j = next(k for k, c in enumerate(classes) if c != 0)
        with pytest.raises(NotComparableError, match="not in the same spin"):
            relative_gradings(cx.diagram, cx.generators[i], cx.generators[j])
        assert any(epsilon(cx.diagram, cx.generators[i], cx.generators[j]))


class TestBoxTranslates:
    def test_single_point(self):
        assert list(box_translates((0, 0), ((1, -1),), 2, low=0)) == [(0, 0)]

    def test_bounded_box(self):
        found = sorted(box_translates((0, 2), ((1, -1),), 3, 0, 2))
        assert found == [(0, 2), (1, 1), (2, 0)]

    def test_no_basis(self):
        assert list(box_translates((1, 2), (), 5, 0)) == [(1, 2)]


class TestWeakAdmissibility:
    def test_constructions_admissible(self):
        assert is_weakly_admissible(from_grid(TREFOIL_GRID))
        assert is_weakly_admissible(two_bridge(BridgeSpec(5, 3)))

    def test_unmarked_torus_is_not(self):
        d = from_grid(UNKNOT_GRID)
        bare = Diagram.create(d.point_names, d.curves, d.regions, {})
        assert not is_weakly_admissible(bare)
