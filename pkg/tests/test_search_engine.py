"""
Tests for the backtracking search, the SCM census and the family-constrained search.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from colouring_bijections.exceptions import GuardViolation
from colouring_bijections.groups import build_from_spec
from colouring_bijections.perm_maps import is_colouring_bijection, is_strong_complete_mapping
from colouring_bijections.search_engine import (
    BranchOrder,
    SearchConfig,
    SearchMode,
    SearchTarget,
    constraint_tables,
    family_images_are_bijective,
    find_family_bijection,
    luby,
    oracle_count,
    scm_census,
    search,
)

CB = SearchTarget.COLOURING_BIJECTION
SCM = SearchTarget.STRONG_COMPLETE_MAPPING
CM = SearchTarget.COMPLETE_MAPPING


def count(spec, target, **kwargs):
    config = SearchConfig(target=target, mode=SearchMode.COUNT, **kwargs)
    return search(build_from_spec(spec), config)


class TestConfig:
    """Test SearchConfig validation."""

    def test_enumerate_needs_limit(self):
        """Test that enumerate mode requires a limit."""
        with pytest.raises(ValidationError):
            SearchConfig(mode=SearchMode.ENUMERATE)

    def test_rejects_bad_values(self):
        """Test field bounds."""
        with pytest.raises(ValidationError):
            SearchConfig(node_budget=0)
        with pytest.raises(ValidationError):
            SearchConfig(jobs=0)

    def test_restarts_only_in_first_mode(self):
        """Test when randomized restarts apply."""
        assert SearchConfig(order=BranchOrder.MOST_CONSTRAINED).uses_restarts
        assert not SearchConfig().uses_restarts
        assert not SearchConfig(mode=SearchMode.COUNT, order=BranchOrder.MOST_CONSTRAINED).uses_restarts
        assert not SearchConfig(restarts=False, order=BranchOrder.MOST_CONSTRAINED).uses_restarts

    def test_default_order_is_ascending(self):
        """Test that searches branch in ascending order unless asked otherwise."""
        assert SearchConfig().order is BranchOrder.ASCENDING

    def test_luby_sequence(self):
        """Test the restart schedule."""
        assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


class TestCounts:
    """Test exhaustive counts against known values."""

    @pytest.mark.parametrize("spec,target,expected", [
        ("C3", CB, 0),
        ("C3", SCM, 0),
        ("C3", CM, 3),
        ("C5", CB, 10),
        ("C5", SCM, 10),
        ("C5", CM, 15),
        ("C7", CB, 28),
        ("C7", SCM, 28),
        ("C7", CM, 133),
        ("C3xC3", CB, 648),
        ("C3xC3", SCM, 648),
        ("C3xC3", CM, 2241),
    ])
    def test_count(self, spec, target, expected):
        """Test counts of colouring bijections, SCMs and complete mappings."""
        result = count(spec, target)
        assert result.count == expected
        assert result.exhausted
        assert result.found == []

    def test_fix_identity(self):
        """Test that fixing the identity divides the CB count by |G|."""
        assert count("C3xC3", CB, fix_identity=True).count == 72
        assert count("C3xC3", CM, fix_identity=True).count == 249

    @pytest.mark.parametrize("target", [CB, SCM, CM])
    def test_branch_orders_agree(self, target):
        """Test that both branching orders count the same trees."""
        ascending = count("C3xC3", target, order=BranchOrder.ASCENDING)
        constrained = count("C3xC3", target, order=BranchOrder.MOST_CONSTRAINED)
        assert ascending.count == constrained.count

    @pytest.mark.parametrize("spec,target", [("C5", CB), ("C5", CM), ("C3xC3", CB)])
    def test_oracle(self, spec, target):
        """Test pruned counts against filtering every permutation."""
        group = build_from_spec(spec)
        assert count(spec, target).count == oracle_count(group, target)

    def test_oracle_fixing_identity(self):
        """Test the identity-fixing oracle on C3xC3."""
        assert oracle_count(build_from_spec("C3xC3"), CB, fix_identity=True) == 72


class TestModes:
    """Test first, enumerate and budgeted searches."""

    def test_first_on_c5(self):
        """Test that first mode returns one verified map."""
        group = build_from_spec("C5")
        result = search(group, SearchConfig())
        assert len(result.found) == 1
        assert is_colouring_bijection(group, result.found[0])
        assert result.count is None

    def test_first_without_solution(self):
        """Test that C3 has no colouring bijection and the search says so."""
        result = search(build_from_spec("C3"), SearchConfig())
        assert result.found == []
        assert result.exhausted

    def test_first_is_deterministic(self):
        """Test that a fixed seed gives the same answer."""
        group = build_from_spec("C3xC3")
        first = search(group, SearchConfig(seed=7, order=BranchOrder.MOST_CONSTRAINED)).found
        second = search(group, SearchConfig(seed=7, order=BranchOrder.MOST_CONSTRAINED)).found
        assert first == second

    def test_default_first_is_lexicographically_smallest(self):
        """Test that the default first search returns the smallest image list."""
        group = build_from_spec("C3xC3")
        result = search(group, SearchConfig())
        everything = search(group, SearchConfig(mode=SearchMode.ENUMERATE, limit=1000)).found
        assert result.restarts == 0
        assert result.found[0].as_list() == min(sigma.as_list() for sigma in everything)
        assert result.found[0].as_list()[:6] == [0, 3, 6, 2, 5, 8]

    def test_enumerate(self):
        """Test that enumerate stops at the limit with distinct maps."""
        group = build_from_spec("C3xC3")
        result = search(group, SearchConfig(mode=SearchMode.ENUMERATE, limit=5, target=SCM))
        assert len(result.found) == 5
        assert len(set(result.found)) == 5
        assert all(is_strong_complete_mapping(group, sigma) for sigma in result.found)

    def test_enumerate_fix_identity(self):
        """Test that identity-fixing results fix the identity."""
        group = build_from_spec("C3xC3")
        config = SearchConfig(mode=SearchMode.ENUMERATE, limit=100, fix_identity=True)
        result = search(group, config)
        assert len(result.found) == 72
        assert all(sigma(0) == 0 for sigma in result.found)

    def test_budget(self):
        """Test that a node budget reports an incomplete search."""
        result = count("C3xC3", CM, node_budget=10)
        assert not result.exhausted
        assert result.nodes_explored <= 10

    def test_budget_lifts_guard(self):
        """Test that a budgeted count is allowed above the guard."""
        result = count("C3xC3xC3xC3xC3", CB, node_budget=50)
        assert not result.exhausted

    def test_guard(self):
        """Test that unbudgeted counts above order 81 are refused."""
        with pytest.raises(GuardViolation):
            count("C3xC3xC3xC3xC3", CB)

    @pytest.mark.slow
    @pytest.mark.parametrize("spec", ["H3", "L3"])
    def test_first_on_nonabelian(self, spec):
        """Test that restarts find colouring bijections of the order 27 groups."""
        group = build_from_spec(spec)
        result = search(group, SearchConfig(fix_identity=True, order=BranchOrder.MOST_CONSTRAINED))
        assert len(result.found) == 1
        assert is_colouring_bijection(group, result.found[0])


class TestParallel:
    """Test splitting the first branching level over processes."""

    def test_count_matches_sequential(self):
        """Test that parallel counts equal sequential ones."""
        sequential = count("C3xC3", CB)
        parallel = count("C3xC3", CB, jobs=2)
        assert parallel.count == sequential.count
        assert parallel.nodes_explored == sequential.nodes_explored

    @pytest.mark.parametrize("order", [BranchOrder.ASCENDING, BranchOrder.MOST_CONSTRAINED])
    def test_enumerate_matches_sequential(self, order):
        """Test that the merged solutions come out in sequential order."""
        group = build_from_spec("C3xC3")
        config = dict(mode=SearchMode.ENUMERATE, limit=20, order=order)
        sequential = search(group, SearchConfig(**config))
        parallel = search(group, SearchConfig(jobs=2, **config))
        assert parallel.found == sequential.found
        assert parallel.nodes_explored == sequential.nodes_explored


class TestCensus:
    """Test the SCM census with colouring bijections counted on the same tree."""

    def test_abelian_ratio(self):
        """Test that every SCM inverse is a colouring bijection on an abelian group."""
        result = scm_census(build_from_spec("C3xC3"))
        assert (result.scm_count, result.cb_count) == (648, 648)
        assert result.ratio == 1.0
        assert result.exhausted

    def test_fix_identity(self):
        """Test the identity-fixing census."""
        result = scm_census(build_from_spec("C3xC3"), fix_identity=True)
        assert (result.scm_count, result.cb_count) == (72, 72)

    def test_no_scm(self):
        """Test that the ratio is undefined without SCMs."""
        result = scm_census(build_from_spec("C3"))
        assert result.scm_count == 0
        assert result.ratio is None

    def test_guard(self):
        """Test that a full census on H3 needs a budget."""
        with pytest.raises(GuardViolation):
            scm_census(build_from_spec("H3"))
        assert not scm_census(build_from_spec("H3"), budget=100).exhausted

    @pytest.mark.slow
    def test_modular_group_rarity(self):
        """Test that about 2.17% of the SCMs of M16 have colouring bijection inverses."""
        result = scm_census(build_from_spec("M16"), jobs=4)
        assert result.exhausted
        assert 0.0212 <= result.ratio <= 0.0222


class TestFamilySearch:
    """Test searches over arbitrary constraint families."""

    def test_recovers_colouring(self):
        """Test that the CB families give a colouring bijection."""
        group = build_from_spec("C7")
        values = constraint_tables(group, CB)
        sigma = find_family_bijection(group, values)
        assert sigma is not None
        assert sigma(0) == 0
        assert is_colouring_bijection(group, sigma)
        assert family_images_are_bijective(values, sigma.as_list())

    def test_no_solution(self):
        """Test that impossible families return None."""
        group = build_from_spec("C3")
        assert find_family_bijection(group, constraint_tables(group, CB)) is None

    def test_shape_checked(self):
        """Test that families must match the group order."""
        group = build_from_spec("C5")
        with pytest.raises(ValueError):
            find_family_bijection(group, np.zeros((2, 3, 3), dtype=np.int64))

    def test_table_shape(self):
        """Test one value table per family plus sigma itself."""
        group = build_from_spec("H3")
        assert constraint_tables(group, CB).shape == (4, 27, 27)
        assert constraint_tables(group, SCM).shape == (3, 27, 27)
        assert constraint_tables(group, CM).shape == (2, 27, 27)
