"""
Tests for coset decompositions and conjugation exponents.
"""

import numpy as np
import pytest

from colouring_bijections.exceptions import ConjugationError, NotNormalError
from colouring_bijections.groups import build_from_spec, center, parse_generators, subgroup_generated
from colouring_bijections.quotients import conjugation_params, quotient
from colouring_bijections.structure import ClassKind, classify


class TestQuotient:
    """Test canonical quotients G/H."""

    def test_cyclic_quotient(self):
        """Test C9xC3 / <(3,0),(0,1)> is cyclic of order 3."""
        group = build_from_spec("C9xC3")
        subgroup = subgroup_generated(group, parse_generators(group, "(3,0),(0,1)"))
        decomposition = quotient(group, subgroup)
        assert decomposition.quotient.order == 3
        assert classify(decomposition.quotient).kind is ClassKind.CYCLIC
        is_valid, message = decomposition.validate()
        assert is_valid, message

    def test_heisenberg_by_centre(self):
        """Test H3 / Z(H3) is elementary abelian of order 9."""
        group = build_from_spec("H3")
        decomposition = quotient(group, center(group))
        tag = classify(decomposition.quotient)
        assert tag.kind is ClassKind.ABELIAN
        assert tag.invariants == (3, 3)
        assert decomposition.transversal[0] == 0

    def test_unique_factorisation(self):
        """Test that every element factors as h t with h in H and t in T."""
        group = build_from_spec("H3xC3")
        subgroup = subgroup_generated(group, parse_generators(group, "(0,0,1,0),(1,0,0,1)"))
        decomposition = quotient(group, subgroup)
        transversal = set(decomposition.transversal)
        for g in range(group.order):
            h, t = decomposition.decompose(g)
            assert h in subgroup
            assert t in transversal
            assert decomposition.compose(h, t) == g
        is_valid, message = decomposition.validate()
        assert is_valid, message

    def test_projection_is_homomorphism(self):
        """Test pi(a b) = pi(a) pi(b)."""
        group = build_from_spec("L3")
        decomposition = quotient(group, center(group))
        pi, q = decomposition.pi, decomposition.quotient
        assert np.array_equal(pi[group.mul], q.mul[pi[:, None], pi[None, :]])

    def test_not_normal(self):
        """Test that non-normal subgroups are rejected."""
        group = build_from_spec("H3")
        x = group.parse_element("(1,0,0)")
        with pytest.raises(NotNormalError):
            quotient(group, subgroup_generated(group, [x]))


class TestConjugationParams:
    """Test solving t b t^-1 = b^(1+3m) c^l."""

    def test_heisenberg(self):
        """Test x y x^-1 = y z in H3."""
        group = build_from_spec("H3")
        z = group.parse_element("(0,0,1)")
        x = group.parse_element("(1,0,0)")
        y = group.parse_element("(0,1,0)")
        params = conjugation_params(group, z, y, x)
        assert (params.m, params.l) == (0, 1)
        assert conjugation_params(group, z, y, y).l == 0

    def test_lr(self):
        """Test b a b^-1 = a^4 in L3, read with c = a^3."""
        group = build_from_spec("L3xC3")
        a = group.parse_element("(1,0,0)")
        b = group.parse_element("(0,1,0)")
        w = group.parse_element("(0,0,1)")
        params = conjugation_params(group, w, a, b)
        assert (params.m, params.l) == (1, 0)

    def test_noncentral_c(self):
        """Test that c must be central."""
        group = build_from_spec("H3")
        x = group.parse_element("(1,0,0)")
        y = group.parse_element("(0,1,0)")
        with pytest.raises(ConjugationError):
            conjugation_params(group, x, y, y)

    def test_outside_subgroup(self):
        """Test that conjugates outside <c, b> are reported."""
        group = build_from_spec("H3xC3")
        w = group.parse_element("(0,0,0,1)")
        y = group.parse_element("(0,1,0,0)")
        x = group.parse_element("(1,0,0,0)")
        with pytest.raises(ConjugationError):
            conjugation_params(group, w, y, x)
