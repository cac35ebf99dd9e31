"""
Tests for the recursive colouring driver.
"""

import pytest

from colouring_bijections.config import Config, LiftKind
from colouring_bijections.exceptions import GuardViolation
from colouring_bijections.groups import build_from_spec
from colouring_bijections.perm_maps import is_colouring_bijection
from colouring_bijections.pipeline import (
    ColourOutcome,
    ColourStage,
    ColouringPipeline,
    colour,
)
from colouring_bijections.tables import alpha_map, h3_sigma, l3_sigma


def actions(result):
    return [step.action for step in result.trace]


class TestBaseCases:
    """Test groups coloured without recursion."""

    def test_trivial_group(self):
        """Test the group of order one."""
        result = colour(build_from_spec("C1"))
        assert result.success
        assert actions(result) == ["trivial"]

    @pytest.mark.parametrize("spec", ["C5", "C7", "C5xC7", "C25"])
    def test_square_map(self, spec):
        """Test orders prime to 6."""
        group = build_from_spec(spec)
        result = colour(group)
        assert result.success
        assert actions(result) == ["square-map"]
        assert is_colouring_bijection(group, result.sigma)

    @pytest.mark.parametrize("spec,stored", [
        ("H3", h3_sigma),
        ("L3", l3_sigma),
        ("C9xC3", lambda: alpha_map(0)),
    ])
    def test_stored_colourings(self, spec, stored):
        """Test that the stored maps are returned on their own tables."""
        result = colour(build_from_spec(spec))
        assert result.success
        assert actions(result) == ["base"]
        assert result.sigma == stored()
        assert result.trace[0].verified

    @pytest.mark.parametrize("spec", ["C3xC3", "C3xC3xC3", "C3xC9"])
    def test_transported_and_linear(self, spec):
        """Test elementary abelian groups and isomorphic copies of C9xC3."""
        group = build_from_spec(spec)
        result = colour(group)
        assert result.success
        assert actions(result) == ["base"]
        assert is_colouring_bijection(group, result.sigma)


class TestNoConstruction:
    """Test groups the driver declines."""

    @pytest.mark.parametrize("spec", ["C3", "C9", "C27"])
    def test_cyclic_three_groups(self, spec):
        """Test that cyclic 3-groups are reported, not searched."""
        result = colour(build_from_spec(spec))
        assert result.outcome is ColourOutcome.NO_CONSTRUCTION
        assert result.sigma is None
        assert actions(result) == ["no-construction"]
        assert result.nodes_explored == 0

    @pytest.mark.parametrize("spec", ["L4", "L5"])
    def test_lr_open_case(self, spec):
        """Test that L_r for r >= 4 is reported as open."""
        result = colour(build_from_spec(spec))
        assert result.outcome is ColourOutcome.NO_CONSTRUCTION
        assert spec in result.message

    def test_search_proves_none(self):
        """Test that an exhausted identity-fixing search proves nonexistence."""
        result = colour(build_from_spec("C2"))
        assert result.outcome is ColourOutcome.NONE_EXISTS
        assert actions(result) == ["search"]

    def test_search_finds_one(self):
        """Test the search fallback on the Klein four-group."""
        group = build_from_spec("C2xC2")
        result = colour(group)
        assert result.success
        assert result.trace[-1].action == "search"
        assert result.sigma(0) == 0
        assert result.nodes_explored > 0

    def test_guard(self):
        """Test that groups above order 243 are refused."""
        with pytest.raises(GuardViolation):
            colour(build_from_spec("C3xC3xC3xC3xC3xC3"))


class TestRecursion:
    """Test lifts and products."""

    def test_central_lift(self):
        """Test that H3xC3 is lifted from its central C3 x C3 quotient."""
        group = build_from_spec("H3xC3")
        result = colour(group)
        assert result.success
        assert is_colouring_bijection(group, result.sigma)
        lifts = [step for step in result.trace if step.action.startswith("lift")]
        assert len(lifts) == 1
        assert lifts[0].action == "lift C3xC3-central"
        assert lifts[0].depth == 0
        assert any(step.depth == 1 and step.action == "base" for step in result.trace)

    def test_noncentral_preference(self):
        """Test that the preference order selects the lift kind."""
        config = Config(colour={"lift_preference": [LiftKind.C3XC3]})
        group = build_from_spec("H3xC3")
        result = ColouringPipeline(config).colour(group)
        assert result.success
        lifts = [step for step in result.trace if step.action.startswith("lift")]
        assert lifts[0].action == "lift C3xC3"
        assert lifts[0].detail.startswith("noncentral")

    @pytest.mark.parametrize("spec", ["C9xC9", "L3xC3"])
    def test_lift_from_central_quotient(self, spec):
        """Test groups coloured through their central C3 x C3 subgroup."""
        group = build_from_spec(spec)
        result = colour(group)
        assert result.success
        assert "lift C3xC3-central" in actions(result)
        assert is_colouring_bijection(group, result.sigma)

    def test_product_rule(self):
        """Test that C5xC3xC3 is coloured factor by factor."""
        group = build_from_spec("C5xC3xC3")
        result = colour(group)
        assert result.success
        assert "product" in actions(result)
        assert is_colouring_bijection(group, result.sigma)

    def test_trace_serialises(self):
        """Test the trace dictionaries."""
        result = colour(build_from_spec("H3xC3"))
        first = result.trace[0].as_dict()
        assert set(first) == {"depth", "group", "order", "classification", "action", "detail", "verified"}

    def test_memoised(self):
        """Test that a second call on the same pipeline reuses the result."""
        pipeline = ColouringPipeline(Config())
        group = build_from_spec("H3xC3")
        first = pipeline.colour(group)
        second = pipeline.colour(group)
        assert first.sigma == second.sigma
        assert second.trace == []


class TestStatusCallbacks:
    """Test progress reporting."""

    def test_stages(self):
        """Test that the first update is the guard and the last is completion."""
        statuses = []
        pipeline = ColouringPipeline(Config())
        pipeline.add_status_callback(statuses.append)
        pipeline.colour(build_from_spec("H3"))
        assert statuses[0].stage is ColourStage.GUARD
        assert statuses[-1].stage is ColourStage.COMPLETE
        assert statuses[-1].progress == 1.0

    def test_failing_callback(self):
        """Test that a broken callback does not stop the driver."""
        pipeline = ColouringPipeline(Config())

        def broken(status):
            raise RuntimeError("callback failure")

        pipeline.add_status_callback(broken)
        assert pipeline.colour(build_from_spec("C5")).success

    def test_failure_reported(self):
        """Test that an unresolved group ends with an error status."""
        statuses = []
        pipeline = ColouringPipeline(Config())
        pipeline.add_status_callback(statuses.append)
        pipeline.colour(build_from_spec("C3"))
        assert statuses[-1].error == ColourOutcome.NO_CONSTRUCTION.value
