"""
Property-based tests for the colouring bijection predicates.
"""

from functools import lru_cache

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from colouring_bijections.groups import build_from_spec
from colouring_bijections.perm_maps import (
    Perm,
    conj_by_automorphism,
    conjugacy_map_is_bijective,
    deltas,
    is_colouring_bijection,
    is_complete_mapping,
    is_strong_complete_mapping,
)
from colouring_bijections.search_engine import SearchConfig, SearchMode, search
from colouring_bijections.structure import automorphisms
from colouring_bijections.tables import h3_sigma, l3_sigma


@lru_cache(maxsize=None)
def heisenberg_automorphisms():
    return automorphisms(build_from_spec("H3"))


@lru_cache(maxsize=None)
def c3c3_colourings():
    group = build_from_spec("C3xC3")
    return search(group, SearchConfig(mode=SearchMode.ENUMERATE, limit=1000)).found


def translate(sigma: Perm, w: int) -> Perm:
    """x -> sigma(x w)."""
    group = sigma.group
    idx = np.arange(group.order)
    return Perm(group, sigma.images[group.mul[idx, w]])


class TestRandomPermutations:
    """Identities that hold for every bijection."""

    @settings(max_examples=200, deadline=None)
    @given(st.permutations(list(range(27))))
    def test_delta_identities(self, images):
        """Test Delta3 = x^-1 Delta1 = Delta2 x."""
        group = build_from_spec("H3")
        is_valid, message = deltas(group, Perm(group, images)).validate(group)
        assert is_valid, message

    @settings(max_examples=200, deadline=None)
    @given(st.permutations(list(range(27))))
    def test_predicate_hierarchy(self, images):
        """Test that SCM implies CM and that sigma is a CB iff its inverse is an SCM with bijective conjugacy map."""
        group = build_from_spec("L3")
        sigma = Perm(group, images)
        if is_strong_complete_mapping(group, sigma):
            assert is_complete_mapping(group, sigma)
        tau = sigma.inverse()
        assert is_colouring_bijection(group, sigma) == (
            is_strong_complete_mapping(group, tau) and conjugacy_map_is_bijective(group, tau.as_list())
        )


class TestColouringSymmetries:
    """Operations that carry colouring bijections to colouring bijections."""

    @settings(deadline=None)
    @given(st.integers(min_value=0, max_value=26))
    def test_translates(self, w):
        """Test that sigma(x w) colours H3 with exactly one fixed point."""
        sigma = translate(h3_sigma(), w)
        group = sigma.group
        assert is_colouring_bijection(group, sigma)
        assert int(np.sum(sigma.images == np.arange(group.order))) == 1

    @settings(deadline=None)
    @given(st.integers(min_value=0, max_value=26))
    def test_translates_of_lr(self, w):
        """Test translates of the L3 bijection."""
        sigma = translate(l3_sigma(), w)
        assert is_colouring_bijection(sigma.group, sigma)

    def test_translate_to_identity_fixing(self):
        """Test that every colouring bijection has an identity-fixing translate."""
        for stored in (h3_sigma(), l3_sigma()):
            w = int(stored.inverse()(0))
            sigma = translate(stored, w)
            assert sigma(0) == 0
            assert is_colouring_bijection(sigma.group, sigma)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=431))
    def test_automorphism_conjugates(self, i):
        """Test that phi^-1 sigma phi colours H3."""
        phi = heisenberg_automorphisms()[i]
        group = phi.group
        assert is_colouring_bijection(group, conj_by_automorphism(group, h3_sigma(), phi))

    def test_every_colouring_has_one_fixed_point(self):
        """Test all colouring bijections of C3xC3."""
        colourings = c3c3_colourings()
        assert len(colourings) == 648
        group = colourings[0].group
        for sigma in colourings:
            assert int(np.sum(sigma.images == np.arange(group.order))) == 1

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=647))
    def test_inverse_characterisation(self, i):
        """Test that sigma^-1 is an SCM with a bijective conjugacy map."""
        sigma = c3c3_colourings()[i]
        group = sigma.group
        tau = sigma.inverse()
        assert is_strong_complete_mapping(group, tau)
        assert conjugacy_map_is_bijective(group, tau.as_list())
