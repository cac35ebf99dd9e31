"""
Bijections of a group, their Delta maps, and the colouring-bijection family of predicates.

For a bijection sigma of G:
    Delta1(x) = sigma(x) x,  Delta2(x) = x^-1 sigma(x),  Delta3(x) = x^-1 sigma(x) x.
sigma is a colouring bijection when all three are bijections, a strong
complete mapping when x sigma(x) and x^-1 sigma(x) are, and a complete
mapping when x sigma(x) is.
"""

import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from .exceptions import (
    InvalidPermutationError,
    NotAutomorphismError,
    PermFileError,
    SpecParseError,
)
from .groups import FiniteGroup, build_from_spec
from .utils import ensure_directory

logger = structlog.get_logger(__name__)

_MAPPING_LINE = re.compile(r"^\s*(\([^()]*\))\s*->\s*(\([^()]*\))\s*$")
_IMAGES_LINE = re.compile(r"^\s*images\s*:\s*\[(.*)\]\s*$")
_GROUP_LINE = re.compile(r"^\s*group\s*:\s*(\S.*?)\s*$")


def _is_bijection(values: Sequence[int], n: int) -> bool:
    seen = bytearray(n)
    for v in values:
        if seen[v]:
            return False
        seen[v] = 1
    return True


@dataclass(frozen=True, eq=False)
class Perm:
    """A bijection of the elements of a group, stored as an image array."""
    group: FiniteGroup
    images: np.ndarray

    def __post_init__(self):
        images = np.asarray(self.images, dtype=np.int64).copy()
        n = self.group.order
        if images.shape != (n,):
            raise InvalidPermutationError(f"Expected {n} images for {self.group.name}, got {images.size}")
        if n and (images.min() < 0 or images.max() >= n):
            raise InvalidPermutationError("Image index out of range")
        if np.unique(images).size != n:
            raise InvalidPermutationError(f"Images do not form a permutation of {self.group.name}")
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    def __call__(self, g: int) -> int:
        return int(self.images[g])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self.group.order == other.group.order and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Perm({self.group.name}, {self.as_list()})"

    @cached_property
    def key(self) -> bytes:
        return self.images.tobytes()

    def as_list(self) -> List[int]:
        return self.images.tolist()

    def inverse(self) -> "Perm":
        inverse = np.empty_like(self.images)
        inverse[self.images] = np.arange(self.group.order)
        return Perm(self.group, inverse)

    def compose(self, other: "Perm") -> "Perm":
        """self after other: x -> self(other(x))."""
        return Perm(self.group, self.images[other.images])

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.group.order)))


@dataclass(frozen=True, eq=False)
class DeltaTriple:
    """The three Delta maps of a bijection as image arrays."""
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def validate(self, group: FiniteGroup) -> Tuple[bool, str]:
        """
        Check Delta3(x) = x^-1 Delta1(x) = Delta2(x) x for every x.

        Returns:
            Tuple of (is_valid, error_message)
        """
        idx = np.arange(group.order)
        if not np.array_equal(self.d3, group.mul[group.inv, self.d1]):
            return False, "Delta3 != x^-1 Delta1"
        if not np.array_equal(self.d3, group.mul[self.d2, idx]):
            return False, "Delta3 != Delta2 x"
        return True, ""


def identity_perm(group: FiniteGroup) -> Perm:
    return Perm(group, np.arange(group.order))


def deltas(group: FiniteGroup, sigma: Perm) -> DeltaTriple:
    idx = np.arange(group.order)
    s = sigma.images
    d1 = group.mul[s, idx]
    d2 = group.mul[group.inv, s]
    d3 = group.mul[d2, idx]
    return DeltaTriple(d1=d1, d2=d2, d3=d3)


def is_colouring_bijection(group: FiniteGroup, sigma: Perm) -> bool:
    """True iff sigma(x)x, x^-1 sigma(x) and x^-1 sigma(x) x are all bijections."""
    n = group.order
    table, inv = group.table, group.inv_list
    seen1, seen2, seen3 = bytearray(n), bytearray(n), bytearray(n)
    for x, s in enumerate(sigma.images.tolist()):
        d1 = table[s][x]
        d2 = table[inv[x]][s]
        d3 = table[d2][x]
        if seen1[d1] or seen2[d2] or seen3[d3]:
            return False
        seen1[d1] = seen2[d2] = seen3[d3] = 1
    return True


def is_strong_complete_mapping(group: FiniteGroup, sigma: Perm) -> bool:
    """True iff x sigma(x) and x^-1 sigma(x) are bijections."""
    n = group.order
    table, inv = group.table, group.inv_list
    seen1, seen2 = bytearray(n), bytearray(n)
    for x, s in enumerate(sigma.images.tolist()):
        a = table[x][s]
        b = table[inv[x]][s]
        if seen1[a] or seen2[b]:
            return False
        seen1[a] = seen2[b] = 1
    return True


def is_complete_mapping(group: FiniteGroup, sigma: Perm) -> bool:
    """True iff x sigma(x) is a bijection."""
    table = group.table
    return _is_bijection([table[x][s] for x, s in enumerate(sigma.images.tolist())], group.order)


def theta_conjugacy(group: FiniteGroup, tau: Perm) -> np.ndarray:
    """x -> tau(x)^-1 x tau(x)."""
    idx = np.arange(group.order)
    t = tau.images
    return group.mul[group.mul[group.inv[t], idx], t]


def conjugacy_map_is_bijective(group: FiniteGroup, images: Sequence[int]) -> bool:
    """Leaf test used by the census: is x -> tau(x)^-1 x tau(x) a permutation?"""
    table, inv = group.table, group.inv_list
    return _is_bijection([table[table[inv[t]][x]][t] for x, t in enumerate(images)], group.order)


def is_automorphism(group: FiniteGroup, phi: Perm) -> bool:
    p = phi.images
    return bool(np.array_equal(p[group.mul], group.mul[p[:, None], p[None, :]]))


def conj_by_automorphism(group: FiniteGroup, sigma: Perm, phi: Perm) -> Perm:
    """phi^-1 o sigma o phi."""
    if not is_automorphism(group, phi):
        raise NotAutomorphismError(f"Map is not an automorphism of {group.name}")
    phi_inverse = phi.inverse().images
    return Perm(group, phi_inverse[sigma.images[phi.images]])


def automorphism_orbit(group: FiniteGroup, sigma: Perm, automorphisms: Iterable[Perm]) -> Tuple[List[Perm], int]:
    """
    Orbit of sigma under conjugation by the given automorphism group.

    Returns:
        Tuple of (distinct orbit elements in first-seen order, stabiliser order)
    """
    orbit: dict = {}
    stabiliser = 0
    for phi in automorphisms:
        image = conj_by_automorphism(group, sigma, phi)
        if image == sigma:
            stabiliser += 1
        orbit.setdefault(image.key, image)
    return list(orbit.values()), stabiliser


def product_bijection(sigma_a: Perm, sigma_b: Perm, group: Optional[FiniteGroup] = None) -> Perm:
    """
    Componentwise bijection (a, b) -> (sigma_a(a), sigma_b(b)) on A x B.

    Args:
        sigma_a: Bijection of A
        sigma_b: Bijection of B
        group: Target product group; must index (a, b) as a * |B| + b with concatenated labels

    Returns:
        Perm on the product group
    """
    a, b = sigma_a.group, sigma_b.group
    if group is None:
        group = build_from_spec(f"{a.name}x{b.name}")
    if group.order != a.order * b.order:
        raise InvalidPermutationError(
            f"{group.name} has order {group.order}, expected {a.order} * {b.order}"
        )
    expected_labels = tuple(la + lb for la in a.labels for lb in b.labels)
    if group.labels != expected_labels:
        raise InvalidPermutationError(f"{group.name} is not indexed as {a.name} x {b.name}")
    images = (sigma_a.images[:, None] * b.order + sigma_b.images[None, :]).ravel()
    return Perm(group, images)


def square_map(group: FiniteGroup) -> Perm:
    """x -> x^2. A colouring bijection whenever gcd(|G|, 6) = 1.

    Raises:
        InvalidPermutationError: if squaring is not a bijection of the group
    """
    idx = np.arange(group.order)
    return Perm(group, group.mul[idx, idx])


# --------------------------------------------------------------------------
# Permutation files

def format_perm(perm: Perm) -> str:
    """Text form: a group header, one ``label -> label`` line per element, and the images list."""
    group = perm.group
    lines = [f"group: {group.name}"]
    for g, s in enumerate(perm.as_list()):
        lines.append(f"{group.format_element(g)} -> {group.format_element(s)}")
    lines.append("images: [" + ", ".join(str(s) for s in perm.as_list()) + "]")
    return "\n".join(lines) + "\n"


def parse_perm(
    text: str,
    group: Optional[FiniteGroup] = None,
    group_builder: Callable[[str], FiniteGroup] = build_from_spec,
) -> Perm:
    """
    Parse the permutation file format.

    Either the ``label -> label`` lines or the ``images:`` line suffices;
    when both are present they must agree.

    Args:
        text: File contents
        group: Group to read against; if omitted the header spec is built
        group_builder: Builds the group named in the header

    Returns:
        Perm on the group
    """
    header: Optional[str] = None
    pairs: List[Tuple[str, str]] = []
    images: Optional[List[int]] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if (match := _GROUP_LINE.match(line)) is not None:
            header = match.group(1)
        elif (match := _IMAGES_LINE.match(line)) is not None:
            try:
                images = [int(item) for item in match.group(1).split(",") if item.strip()]
            except ValueError as exc:
                raise PermFileError(f"line {number}: non-integer image") from exc
        elif (match := _MAPPING_LINE.match(line)) is not None:
            pairs.append((match.group(1), match.group(2)))
        else:
            raise PermFileError(f"line {number}: cannot parse {raw!r}")

    if group is None:
        if header is None:
            raise PermFileError("Missing 'group:' header")
        try:
            group = group_builder(header)
        except SpecParseError as exc:
            raise PermFileError(f"Bad group header {header!r}: {exc}") from exc
    elif header is not None and header != group.name:
        raise PermFileError(f"File is for {header}, expected {group.name}")

    from_pairs: Optional[List[int]] = None
    if pairs:
        from_pairs = [-1] * group.order
        try:
            for source, target in pairs:
                g = group.parse_element(source)
                if from_pairs[g] != -1:
                    raise PermFileError(f"{source} is mapped twice")
                from_pairs[g] = group.parse_element(target)
        except SpecParseError as exc:
            raise PermFileError(str(exc)) from exc
        if -1 in from_pairs:
            raise PermFileError(f"{from_pairs.count(-1)} elements have no image")

    if from_pairs is None and images is None:
        raise PermFileError("No mapping lines and no images list")
    if from_pairs is not None and images is not None and from_pairs != images:
        raise PermFileError("Mapping lines disagree with the images list")
    chosen = from_pairs if from_pairs is not None else images
    try:
        return Perm(group, chosen)
    except InvalidPermutationError as exc:
        raise PermFileError(str(exc)) from exc


def perm_header(text: str) -> Optional[str]:
    """The spec named on the ``group:`` line, if any."""
    for raw in text.splitlines():
        match = _GROUP_LINE.match(raw.split("#", 1)[0])
        if match is not None:
            return match.group(1)
    return None


def save_perm(perm: Perm, path: Union[str, Path]) -> Path:
    path = Path(path)
    ensure_directory(path.parent)
    path.write_text(format_perm(perm))
    logger.debug("Wrote permutation", path=str(path), group=perm.group.name)
    return path


def load_perm(path: Union[str, Path], group: Optional[FiniteGroup] = None) -> Perm:
    path = Path(path)
    if not path.exists():
        raise PermFileError(f"Permutation file not found: {path}")
    return parse_perm(path.read_text(), group=group)
