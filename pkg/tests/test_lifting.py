"""
Tests for lifting colouring bijections across normal C3 x C3 and C9 x C3 subgroups.
"""

import numpy as np
import pytest

from colouring_bijections.config import LiftKind
from colouring_bijections.exceptions import LiftPreconditionError
from colouring_bijections.groups import build_from_spec, center, parse_generators, subgroup_generated
from colouring_bijections.lifting import (
    SubgroupBasis,
    c3c3_basis,
    case1_conditions_hold,
    case1_families,
    case1_map,
    check_layer_property,
    is_subgroup_colouring,
    lift,
    lift_c3c3,
    lift_c9c3,
    lift_central,
    linear_subgroup_map,
    transversal_scheme,
)
from colouring_bijections.linear import IDENTITY, M1
from colouring_bijections.perm_maps import identity_perm, is_colouring_bijection
from colouring_bijections.pipeline import base_colouring
from colouring_bijections.quotients import quotient
from colouring_bijections.structure import LiftingSubgroup, c9c3_split, classify
from colouring_bijections.tables import alpha_map


def subgroup(group, generators):
    return subgroup_generated(group, parse_generators(group, generators))


def quotient_colouring(decomposition):
    """Stored colouring bijection of the quotient, on the quotient's own table."""
    q = decomposition.quotient
    tag = classify(q)
    return base_colouring(q, tag.kind, tag.invariants, q.exponent)


class TestTransversalScheme:
    """Test phi and the three factorisations."""

    def test_heisenberg_by_centre(self):
        """Test the scheme of H3 over Z(H3)."""
        group = build_from_spec("H3")
        decomposition = quotient(group, center(group))
        scheme = transversal_scheme(decomposition, quotient_colouring(decomposition))
        is_valid, message = scheme.validate()
        assert is_valid, message
        assert len(scheme.phi) == 9
        assert scheme.phi[0] == 0

    def test_quotient_must_be_colouring(self):
        """Test that the identity on G/H is refused."""
        group = build_from_spec("H3")
        decomposition = quotient(group, center(group))
        with pytest.raises(LiftPreconditionError):
            transversal_scheme(decomposition, identity_perm(decomposition.quotient))

    def test_layer_property_fails_for_identity(self):
        """Test that the identity does not map cosets onto layers."""
        group = build_from_spec("H3")
        decomposition = quotient(group, center(group))
        scheme = transversal_scheme(decomposition, quotient_colouring(decomposition))
        holds, message = check_layer_property(scheme, identity_perm(group))
        assert not holds
        assert message.startswith("Delta")


class TestSubgroupMaps:
    """Test coordinates and maps on H."""

    def test_basis_must_split(self):
        """Test that a repeated generator does not give coordinates."""
        group = build_from_spec("H3xC3")
        z = group.parse_element("(0,0,1,0)")
        basis = SubgroupBasis(group, (z, z), (3, 3))
        with pytest.raises(LiftPreconditionError):
            basis.coordinates

    def test_linear_maps(self):
        """Test that M1 colours C3 x C3 and the identity matrix does not."""
        group = build_from_spec("H3xC3")
        h = center(group)
        z, w = group.parse_element("(0,0,1,0)"), group.parse_element("(0,0,0,1)")
        basis = SubgroupBasis(group, (z, w), (3, 3))
        assert is_subgroup_colouring(group, h, linear_subgroup_map(basis, M1))
        assert not is_subgroup_colouring(group, h, linear_subgroup_map(basis, IDENTITY))
        images = linear_subgroup_map(basis, M1)
        assert np.all(images[9:] == -1)

    def test_noncentral_basis(self):
        """Test that the basis starts with a central element."""
        group = build_from_spec("H3xC3")
        h = subgroup(group, "(0,0,1,0),(1,0,0,1)")
        z, b = c3c3_basis(group, h).generators
        assert z in center(group)
        assert b not in center(group)


class TestC3C3Lifts:
    """Test lifts over normal C3 x C3 subgroups."""

    def test_central(self):
        """Test the lift of H3xC3 over <z, w>."""
        group = build_from_spec("H3xC3")
        h = center(group)
        decomposition = quotient(group, h)
        phi = quotient_colouring(decomposition)
        sigma = lift_c3c3(group, h, phi)
        assert is_colouring_bijection(group, sigma)
        holds, message = check_layer_property(transversal_scheme(decomposition, phi), sigma)
        assert holds, message

    def test_noncentral(self):
        """Test the lift of H3xC3 over <z, xw>."""
        group = build_from_spec("H3xC3")
        h = subgroup(group, "(0,0,1,0),(1,0,0,1)")
        decomposition = quotient(group, h)
        phi = quotient_colouring(decomposition)
        sigma = lift_c3c3(group, h, phi)
        assert is_colouring_bijection(group, sigma)
        scheme = transversal_scheme(decomposition, phi)
        holds, message = check_layer_property(scheme, sigma)
        assert holds, message

    def test_wrong_subgroup_type(self):
        """Test that a subgroup of order 3 is refused."""
        group = build_from_spec("H3")
        decomposition = quotient(group, center(group))
        with pytest.raises(LiftPreconditionError):
            lift_c3c3(group, center(group), quotient_colouring(decomposition))

    def test_central_requires_central(self):
        """Test lift_central on a noncentral subgroup."""
        group = build_from_spec("H3xC3")
        h = subgroup(group, "(0,0,1,0),(1,0,0,1)")
        decomposition = quotient(group, h)
        psi = np.arange(group.order)
        with pytest.raises(LiftPreconditionError):
            lift_central(group, h, quotient_colouring(decomposition), psi)

    def test_dispatch(self):
        """Test the construction labels chosen by lift()."""
        group = build_from_spec("H3xC3")
        for generators, kind, construction in (
            ("(0,0,1,0),(0,0,0,1)", LiftKind.C3XC3_CENTRAL, "central"),
            ("(0,0,1,0),(1,0,0,1)", LiftKind.C3XC3, "noncentral"),
        ):
            h = subgroup(group, generators)
            phi = quotient_colouring(quotient(group, h))
            outcome = lift(group, LiftingSubgroup(h, kind, True), phi)
            assert outcome.construction == construction
            assert outcome.kind is kind
            assert is_colouring_bijection(group, outcome.sigma)


class TestCaseOneMaps:
    """Test the coset maps of the central-C9 case."""

    def test_families(self):
        """Test the four constraint families."""
        assert case1_families(1).shape == (4, 27, 27)

    def test_alpha0_serves_trivial_action(self):
        """Test that alpha0 meets the conditions for k = 0."""
        assert case1_conditions_hold(alpha_map(0), 0)
        assert case1_map(0) == alpha_map(0)

    @pytest.mark.parametrize("k", [1, 2])
    def test_stored_alphas_incomplete(self, k):
        """Test that the stored alpha_k miss the beta q condition."""
        assert not case1_conditions_hold(alpha_map(k), k)

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [1, 2])
    def test_completed_maps(self, k):
        """Test that the searched coset maps meet all four conditions."""
        beta = case1_map(k)
        assert case1_conditions_hold(beta, k)
        assert beta(0) == 0


class TestC9C3Lifts:
    """Test lifts over abelian normal C9 x C3 subgroups."""

    def test_case_two(self):
        """Test the lift of L3xC3xC3 over <a, w1>."""
        group = build_from_spec("L3xC3xC3")
        h = subgroup(group, "(1,0,0,0),(0,0,1,0)")
        split = c9c3_split(group, h)
        assert split.case == 2
        decomposition = quotient(group, h)
        phi = quotient_colouring(decomposition)
        sigma = lift_c9c3(group, h, phi, split)
        assert is_colouring_bijection(group, sigma)
        holds, message = check_layer_property(transversal_scheme(decomposition, phi), sigma)
        assert holds, message

    def test_case_two_dispatch(self):
        """Test that lift() labels the construction by case."""
        group = build_from_spec("L3xC3xC3")
        h = subgroup(group, "(1,0,0,0),(0,0,1,0)")
        phi = quotient_colouring(quotient(group, h))
        outcome = lift(group, LiftingSubgroup(h, LiftKind.C9XC3, True, c9c3_split(group, h)), phi)
        assert outcome.construction == "case 2"
        assert outcome.subgroup.startswith("<")

    @pytest.mark.slow
    def test_case_one(self):
        """Test the lift of C9oH3xC3 over <c, x>."""
        group = build_from_spec("C9oH3xC3")
        h = subgroup(group, "(1,0,0,0),(0,1,0,0)")
        split = c9c3_split(group, h)
        assert split.case == 1
        phi = quotient_colouring(quotient(group, h))
        sigma = lift_c9c3(group, h, phi, split)
        assert is_colouring_bijection(group, sigma)

    def test_wrong_subgroup_type(self):
        """Test that an elementary abelian subgroup is refused."""
        group = build_from_spec("H3xC3")
        h = center(group)
        phi = quotient_colouring(quotient(group, h))
        with pytest.raises(LiftPreconditionError):
            lift_c9c3(group, h, phi)
