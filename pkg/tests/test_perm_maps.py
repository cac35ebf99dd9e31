"""
Tests for bijections, Delta maps, the predicates and the permutation file format.
"""

import numpy as np
import pytest

from colouring_bijections.exceptions import InvalidPermutationError, NotAutomorphismError, PermFileError
from colouring_bijections.groups import build_from_spec
from colouring_bijections.perm_maps import (
    Perm,
    conj_by_automorphism,
    conjugacy_map_is_bijective,
    deltas,
    format_perm,
    identity_perm,
    is_automorphism,
    is_colouring_bijection,
    is_complete_mapping,
    is_strong_complete_mapping,
    load_perm,
    parse_perm,
    perm_header,
    product_bijection,
    save_perm,
    square_map,
    theta_conjugacy,
)
from colouring_bijections.tables import h3_sigma, l3_sigma


class TestPerm:
    """Test the Perm value type."""

    def test_rejects_non_permutations(self):
        """Test wrong lengths, out-of-range images and repeats."""
        group = build_from_spec("C5")
        with pytest.raises(InvalidPermutationError):
            Perm(group, [0, 1, 2, 3])
        with pytest.raises(InvalidPermutationError):
            Perm(group, [0, 1, 2, 3, 5])
        with pytest.raises(InvalidPermutationError):
            Perm(group, [0, 1, 2, 3, 3])

    def test_inverse_and_compose(self):
        """Test that sigma after sigma^-1 is the identity."""
        sigma = h3_sigma()
        assert sigma.compose(sigma.inverse()).is_identity
        assert sigma.inverse().compose(sigma) == identity_perm(sigma.group)
        assert not sigma.is_identity

    def test_images_are_read_only(self):
        """Test that a Perm cannot be changed after construction."""
        sigma = identity_perm(build_from_spec("C3"))
        with pytest.raises(ValueError):
            sigma.images[0] = 1

    def test_equality_and_hash(self):
        """Test value semantics."""
        group = build_from_spec("C5")
        first = Perm(group, [0, 2, 4, 1, 3])
        second = Perm(group, np.array([0, 2, 4, 1, 3]))
        assert first == second
        assert len({first, second}) == 1
        assert first(1) == 2


class TestPredicates:
    """Test the colouring bijection family of predicates."""

    def test_identity_is_not_a_colouring(self):
        """Test that Delta2 of the identity is constant."""
        group = build_from_spec("C3")
        assert not is_colouring_bijection(group, identity_perm(group))
        assert not is_strong_complete_mapping(group, identity_perm(group))

    @pytest.mark.parametrize("spec", ["C5", "C7", "C5xC7", "C11"])
    def test_square_map_orders_prime_to_six(self, spec):
        """Test that x -> x^2 colours groups of order prime to 6."""
        group = build_from_spec(spec)
        assert is_colouring_bijection(group, square_map(group))

    def test_square_map_on_exponent_three(self):
        """Test that squaring is a bijection of H3 but x sigma(x) = x^3 collapses."""
        group = build_from_spec("H3")
        sigma = square_map(group)
        assert not is_colouring_bijection(group, sigma)
        assert not is_complete_mapping(group, sigma)

    def test_square_map_not_bijective(self):
        """Test that squaring C2 is rejected."""
        with pytest.raises(InvalidPermutationError):
            square_map(build_from_spec("C2"))

    @pytest.mark.parametrize("sigma_factory", [h3_sigma, l3_sigma])
    def test_shipped_colourings(self, sigma_factory):
        """Test that the shipped bijections satisfy all three Delta conditions."""
        sigma = sigma_factory()
        group = sigma.group
        assert is_colouring_bijection(group, sigma)
        triple = deltas(group, sigma)
        for images in (triple.d1, triple.d2, triple.d3):
            assert np.unique(images).size == group.order
        is_valid, message = triple.validate(group)
        assert is_valid, message

    def test_unique_fixed_point(self):
        """Test that Delta2(x) = e exactly at the fixed points."""
        sigma = h3_sigma()
        fixed = np.nonzero(sigma.images == np.arange(sigma.group.order))[0]
        assert fixed.tolist() == [0]

    def test_inverse_is_strong_complete_mapping(self):
        """Test that sigma^-1 is an SCM whose conjugacy map is bijective."""
        sigma = h3_sigma()
        group = sigma.group
        tau = sigma.inverse()
        assert is_strong_complete_mapping(group, tau)
        assert conjugacy_map_is_bijective(group, tau.as_list())
        assert np.unique(theta_conjugacy(group, tau)).size == group.order

    def test_abelian_conjugacy_is_trivial(self):
        """Test that theta is the identity map on an abelian group."""
        group = build_from_spec("C5")
        tau = square_map(group)
        assert np.array_equal(theta_conjugacy(group, tau), np.arange(5))
        assert conjugacy_map_is_bijective(group, tau.as_list())


class TestAutomorphismConjugation:
    """Test conjugation by automorphisms."""

    def test_conjugate_of_square_map(self):
        """Test that x -> 2x commutes with squaring on C5."""
        group = build_from_spec("C5")
        phi = Perm(group, [0, 2, 4, 1, 3])
        assert is_automorphism(group, phi)
        assert conj_by_automorphism(group, square_map(group), phi) == square_map(group)

    def test_rejects_non_automorphism(self):
        """Test that a transposition of C5 is refused."""
        group = build_from_spec("C5")
        phi = Perm(group, [0, 2, 1, 3, 4])
        assert not is_automorphism(group, phi)
        with pytest.raises(NotAutomorphismError):
            conj_by_automorphism(group, square_map(group), phi)


class TestProductBijection:
    """Test componentwise products."""

    def test_product_of_colourings(self):
        """Test that (a, b) -> (sigma(a), tau(b)) colours C5 x C7."""
        c5, c7 = build_from_spec("C5"), build_from_spec("C7")
        sigma = product_bijection(square_map(c5), square_map(c7))
        assert sigma.group.name == "C5xC7"
        assert is_colouring_bijection(sigma.group, sigma)
        assert sigma(1 * 7 + 3) == 2 * 7 + 6

    def test_wrong_indexing(self):
        """Test that a product indexed the other way round is rejected."""
        c5, c7 = build_from_spec("C5"), build_from_spec("C7")
        with pytest.raises(InvalidPermutationError):
            product_bijection(square_map(c5), square_map(c7), build_from_spec("C7xC5"))


class TestPermFiles:
    """Test the permutation text format."""

    def test_format_and_parse(self):
        """Test that the written form reads back to the same map."""
        sigma = h3_sigma()
        text = format_perm(sigma)
        assert text.startswith("group: H3\n")
        assert "(0,0,1) -> (2,0,1)" in text
        assert parse_perm(text) == sigma
        assert perm_header(text) == "H3"

    def test_images_line_alone(self):
        """Test that the images list suffices."""
        sigma = parse_perm("group: C5\nimages: [0, 2, 4, 1, 3]\n")
        assert sigma.as_list() == [0, 2, 4, 1, 3]

    def test_mapping_lines_alone(self):
        """Test that mapping lines suffice, with comments ignored."""
        text = "# squaring\ngroup: C3\n(0) -> (0)\n(1) -> (2)  # x -> x^2\n(2) -> (1)\n"
        assert parse_perm(text).as_list() == [0, 2, 1]

    def test_disagreement(self):
        """Test that mapping lines and images must agree."""
        text = "group: C3\n(0) -> (0)\n(1) -> (2)\n(2) -> (1)\nimages: [0, 1, 2]\n"
        with pytest.raises(PermFileError):
            parse_perm(text)

    @pytest.mark.parametrize("text", [
        "(0) -> (0)\n(1) -> (1)\n(2) -> (2)\n",
        "group: C3\n",
        "group: C3\n(0) -> (0)\n(0) -> (1)\n(2) -> (2)\n",
        "group: C3\n(0) -> (0)\n(1) -> (1)\n",
        "group: C3\nimages: [0, 0, 1]\n",
        "group: C3\nimages: [0, one, 2]\n",
        "group: C3\nsigma = id\n",
        "group: Q8\nimages: [0]\n",
    ])
    def test_malformed(self, text):
        """Test that malformed files raise PermFileError."""
        with pytest.raises(PermFileError):
            parse_perm(text)

    def test_header_mismatch(self):
        """Test reading a file against a different group."""
        with pytest.raises(PermFileError):
            parse_perm("group: C5\nimages: [0, 2, 4, 1, 3]\n", group=build_from_spec("C5xC1"))

    def test_header_lookup(self):
        """Test perm_header without a header."""
        assert perm_header("images: [0]\n") is None
        assert perm_header("# group: H3\ngroup: L3\n") == "L3"

    def test_save_and_load(self, tmp_path):
        """Test writing into a fresh directory and reading back."""
        sigma = l3_sigma()
        path = save_perm(sigma, tmp_path / "out" / "l3.perm")
        assert load_perm(path) == sigma
        assert load_perm(path, group=sigma.group) == sigma

    def test_missing_file(self, tmp_path):
        """Test that a missing file is a PermFileError."""
        with pytest.raises(PermFileError):
            load_perm(tmp_path / "absent.perm")

    def test_shipped_file(self, data_dir):
        """Test the shipped H3 file against the embedded table."""
        assert load_perm(data_dir / "h3_sigma.perm") == h3_sigma()
