"""
Finite groups as explicit multiplication tables.

Elements are indexed 0..n-1 in lexicographic mixed-radix order over the
coordinates of each construction, so the identity is always index 0 and
product groups index (a, b) as a * |B| + b.
"""

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from sympy import factorint

from .config import default_config
from .exceptions import GuardViolation, SpecParseError, UnsupportedFamilyError

logger = structlog.get_logger(__name__)

Label = Tuple[int, ...]

_FACTOR_PATTERN = re.compile(r"^(C9oH3|C(\d+)|H(\d+)|L(\d+)|M(\d+))$")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as its full multiplication table.

    Instances are immutable once built and safe to share between threads.
    """
    name: str
    mul: np.ndarray
    labels: Tuple[Label, ...]
    factors: Tuple[str, ...] = ()

    def __post_init__(self):
        mul = np.ascontiguousarray(self.mul, dtype=np.int64)
        mul.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "labels", tuple(tuple(int(c) for c in lab) for lab in self.labels))
        if mul.shape != (len(self.labels), len(self.labels)):
            raise ValueError(f"Table shape {mul.shape} does not match {len(self.labels)} labels")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def inv(self) -> np.ndarray:
        inv = np.argmax(self.mul == 0, axis=1).astype(np.int64)
        inv.setflags(write=False)
        return inv

    @cached_property
    def table(self) -> List[List[int]]:
        """Multiplication table as nested lists for scalar hot loops."""
        return self.mul.tolist()

    @cached_property
    def inv_list(self) -> List[int]:
        return self.inv.tolist()

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        current = idx.copy()
        k = 1
        while (orders == 0).any():
            hit = (current == 0) & (orders == 0)
            orders[hit] = k
            current = self.mul[current, idx]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def label_index(self) -> Dict[Label, int]:
        return {label: g for g, label in enumerate(self.labels)}

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def prime_factors(self) -> Dict[int, int]:
        return {int(p): int(e) for p, e in factorint(self.order).items()}

    @property
    def is_p_group(self) -> bool:
        return len(self.prime_factors) == 1

    def multiply(self, *elements: int) -> int:
        """Product of the given elements, left to right."""
        table = self.table
        return reduce(lambda a, b: table[a][b], elements, 0)

    def power(self, g: int, k: int) -> int:
        """g raised to an integer power (negative powers use the inverse)."""
        if k < 0:
            g, k = self.inv_list[g], -k
        k %= int(self.element_orders[g])
        result = 0
        row = self.table
        for _ in range(k):
            result = row[result][g]
        return result

    def conjugate(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.table[self.table[g][h]][self.inv_list[g]]

    def element_order(self, g: int) -> int:
        return int(self.element_orders[g])

    def format_element(self, g: int) -> str:
        return "(" + ",".join(str(c) for c in self.labels[g]) + ")"

    def parse_element(self, text: str) -> int:
        """Element index from a coordinate label such as ``(1,0,2)``."""
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise SpecParseError(f"Element label must be parenthesised: {text!r}")
        try:
            label = tuple(int(part) for part in body[1:-1].split(",") if part.strip() != "")
        except ValueError as exc:
            raise SpecParseError(f"Non-integer coordinate in {text!r}") from exc
        if label not in self.label_index:
            raise SpecParseError(f"{text!r} is not an element of {self.name}")
        return self.label_index[label]


@dataclass(frozen=True)
class SubgroupData:
    """A subgroup as a sorted element tuple plus the generators it was built from."""
    elements: Tuple[int, ...]
    generators: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.element_set

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.elements)] = True
        return m


# --------------------------------------------------------------------------
# Constructions

def cyclic_group(n: int) -> FiniteGroup:
    """C_n with labels (i,)."""
    idx = np.arange(n)
    return FiniteGroup(f"C{n}", np.add.outer(idx, idx) % n, tuple((i,) for i in range(n)), (f"C{n}",))


def heisenberg_group() -> FiniteGroup:
    """H3: (i,j,k)(r,s,t) = (i+r, j+s, k+t+is) mod 3, index 9i+3j+k."""
    idx = np.arange(27)
    i, j, k = idx // 9, (idx // 3) % 3, idx % 3
    mul = (
        ((i[:, None] + i[None, :]) % 3) * 9
        + ((j[:, None] + j[None, :]) % 3) * 3
        + (k[:, None] + k[None, :] + i[:, None] * j[None, :]) % 3
    )
    labels = tuple((int(a), int(b), int(c)) for a, b, c in zip(i, j, k))
    return FiniteGroup("H3", mul, labels, ("H3",))


def lr_group(r: int) -> FiniteGroup:
    """L_r = C_{3^(r-1)} x| C_3: (i,j)(r',s) = (i + (1+3^(r-2))^j r', j+s), index 3i+j."""
    if r < 3:
        raise UnsupportedFamilyError(f"L{r} is not defined; the family starts at L3")
    m = 3 ** (r - 1)
    q = 1 + 3 ** (r - 2)
    n = 3 * m
    idx = np.arange(n)
    i, j = idx // 3, idx % 3
    multiplier = np.array([pow(q, e, m) for e in range(3)])
    mul = ((i[:, None] + multiplier[j][:, None] * i[None, :]) % m) * 3 + (j[:, None] + j[None, :]) % 3
    labels = tuple((int(a), int(b)) for a, b in zip(i, j))
    return FiniteGroup(f"L{r}", mul, labels, (f"L{r}",))


def modular_group_16() -> FiniteGroup:
    """M16: (i,j)(r,s) = (i + 5^j r mod 8, j+s mod 2), index 2i+j."""
    idx = np.arange(16)
    i, j = idx // 2, idx % 2
    multiplier = np.array([1, 5])
    mul = ((i[:, None] + multiplier[j][:, None] * i[None, :]) % 8) * 2 + (j[:, None] + j[None, :]) % 2
    labels = tuple((int(a), int(b)) for a, b in zip(i, j))
    return FiniteGroup("M16", mul, labels, ("M16",))


def central_product_c9_h3() -> FiniteGroup:
    """C9 o H3, amalgamating c^3 with the centre of H3.

    (a,i,j)(b,r,s) = (a+b+3is mod 9, i+r, j+s), index 9a+3i+j. The centre is
    the cyclic group of order 9 generated by c = (1,0,0).
    """
    idx = np.arange(81)
    a, i, j = idx // 9, (idx // 3) % 3, idx % 3
    mul = (
        ((a[:, None] + a[None, :] + 3 * i[:, None] * j[None, :]) % 9) * 9
        + ((i[:, None] + i[None, :]) % 3) * 3
        + (j[:, None] + j[None, :]) % 3
    )
    labels = tuple((int(x), int(y), int(z)) for x, y, z in zip(a, i, j))
    return FiniteGroup("C9oH3", mul, labels, ("C9oH3",))


def direct_product(first: FiniteGroup, second: FiniteGroup) -> FiniteGroup:
    """First x second with index a * |second| + b and concatenated labels."""
    nb = second.order
    n = first.order * nb
    mul = (first.mul[:, None, :, None] * nb + second.mul[None, :, None, :]).reshape(n, n)
    labels = tuple(la + lb for la in first.labels for lb in second.labels)
    return FiniteGroup(
        f"{first.name}x{second.name}", mul, labels, first.factors + second.factors
    )


def _factor_order(token: str) -> int:
    match = _FACTOR_PATTERN.match(token)
    if match is None:
        raise SpecParseError(f"Unrecognised group factor {token!r}")
    if token == "C9oH3":
        return 81
    cyc, heis, lr, mod = match.group(2), match.group(3), match.group(4), match.group(5)
    if cyc is not None:
        n = int(cyc)
        if n < 1:
            raise SpecParseError(f"Cyclic order must be positive: {token!r}")
        return n
    if heis is not None:
        if heis != "3":
            raise UnsupportedFamilyError(f"Only H3 is available, got {token!r}")
        return 27
    if lr is not None:
        r = int(lr)
        if r < 3:
            raise UnsupportedFamilyError(f"L{r} is not defined; the family starts at L3")
        return 3 ** r
    if mod != "16":
        raise UnsupportedFamilyError(f"Only M16 is available, got {token!r}")
    return 16


def parse_spec(spec: str) -> List[str]:
    """Split a spec such as ``H3xC3`` into validated factor tokens."""
    if not isinstance(spec, str) or not spec.strip():
        raise SpecParseError("Empty group spec")
    tokens = [token.strip() for token in spec.strip().split("x")]
    if any(token == "" for token in tokens):
        raise SpecParseError(f"Malformed product in spec {spec!r}")
    for token in tokens:
        _factor_order(token)
    return tokens


def spec_order(spec: str) -> int:
    """Order of the group a spec describes, without building it."""
    return reduce(lambda acc, token: acc * _factor_order(token), parse_spec(spec), 1)


def _build_factor(token: str) -> FiniteGroup:
    if token == "C9oH3":
        return central_product_c9_h3()
    if token == "H3":
        return heisenberg_group()
    if token == "M16":
        return modular_group_16()
    if token.startswith("L"):
        return lr_group(int(token[1:]))
    return cyclic_group(int(token[1:]))


@lru_cache(maxsize=64)
def _build_cached(normalized: str) -> FiniteGroup:
    tokens = normalized.split("x")
    group = reduce(direct_product, (_build_factor(token) for token in tokens))
    logger.debug("Built group", spec=normalized, order=group.order)
    return group


def build_from_spec(spec: str, max_order: Optional[int] = None) -> FiniteGroup:
    """
    Build a group from the spec mini-language.

    Args:
        spec: ``C{n}``, ``H3``, ``L{r}`` (r >= 3), ``M16``, ``C9oH3`` or products joined by ``x``
        max_order: Table size cap; defaults to the configured limit

    Returns:
        FiniteGroup with identity 0 and coordinate labels
    """
    tokens = parse_spec(spec)
    cap = max_order if max_order is not None else default_config.groups.max_table_order
    order = spec_order(spec)
    if order > cap:
        raise GuardViolation(f"{spec} has order {order}, above the table cap {cap}")
    return _build_cached("x".join(tokens))


def verify_axioms(group: FiniteGroup, check_associativity: bool = True) -> Tuple[bool, str]:
    """
    Exhaustively check the group axioms on the stored table.

    Returns:
        Tuple of (is_valid, error_message)

    Raises:
        GuardViolation: associativity requested above the lifting order cap
    """
    n = group.order
    mul = group.mul
    idx = np.arange(n)
    if not (np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx)):
        return False, "index 0 is not a two-sided identity"
    if not np.all(mul[idx, group.inv] == 0):
        return False, "some element has no right inverse"
    sorted_rows = np.sort(mul, axis=1)
    sorted_cols = np.sort(mul, axis=0)
    if not (np.all(sorted_rows == idx[None, :]) and np.all(sorted_cols == idx[:, None])):
        return False, "table is not a Latin square"
    if check_associativity:
        cap = default_config.groups.max_lifting_order
        if n > cap:
            raise GuardViolation(f"associativity check on {group.name} (order {n}) is limited to order {cap}")
        for a in range(n):
            # (a b) c versus a (b c) for all b, c
            if not np.array_equal(mul[mul[a]], mul[a][mul]):
                return False, f"associativity fails with left factor {group.format_element(a)}"
    return True, ""


# --------------------------------------------------------------------------
# Subgroups

def subgroup_generated(group: FiniteGroup, generators: Iterable[int]) -> SubgroupData:
    """Smallest subgroup containing the generators (closure under right multiplication)."""
    gens = tuple(dict.fromkeys(int(g) for g in generators))
    table = group.table
    seen = {0}
    queue = deque([0])
    while queue:
        g = queue.popleft()
        row = table[g]
        for s in gens:
            h = row[s]
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return SubgroupData(tuple(sorted(seen)), gens)


def center(group: FiniteGroup) -> SubgroupData:
    commuting = np.all(group.mul == group.mul.T, axis=1)
    elements = tuple(int(g) for g in np.nonzero(commuting)[0])
    return SubgroupData(elements, elements)


def is_normal(group: FiniteGroup, subgroup: SubgroupData) -> bool:
    """True iff g s g^-1 lies in the subgroup for every g and every generator s."""
    mask = subgroup.mask(group.order)
    mul, inv = group.mul, group.inv
    for s in subgroup.generators:
        conjugates = mul[mul[:, s], inv]
        if not mask[conjugates].all():
            return False
    return True


def frattini_subgroup(group: FiniteGroup) -> SubgroupData:
    """Frattini subgroup of a p-group: generated by p-th powers and commutators."""
    if not group.is_p_group:
        raise GuardViolation(f"{group.name} is not a p-group")
    p = next(iter(group.prime_factors))
    mul, inv = group.mul, group.inv
    idx = np.arange(group.order)
    powers = idx.copy()
    for _ in range(p - 1):
        powers = mul[powers, idx]
    commutators = mul[mul[inv][:, inv], mul].ravel()  # a^-1 b^-1 a b
    generators = np.unique(np.concatenate([powers, commutators]))
    return subgroup_generated(group, (int(g) for g in generators))


def generating_tuple(group: FiniteGroup) -> Tuple[int, ...]:
    """
    Deterministic generating tuple.

    For p-groups the tuple is minimal: the least index outside the subgroup
    generated by the Frattini subgroup and the elements chosen so far is
    added until everything is generated.
    """
    if group.order == 1:
        return ()
    base: Tuple[int, ...] = ()
    if group.is_p_group:
        base = frattini_subgroup(group).elements
    chosen: List[int] = []
    current = subgroup_generated(group, base)
    while current.order < group.order:
        g = next(x for x in range(group.order) if x not in current)
        chosen.append(g)
        current = subgroup_generated(group, base + tuple(chosen))
    return tuple(chosen)


def omega_subgroup(group: FiniteGroup, k: int = 1) -> SubgroupData:
    """Subgroup generated by the elements whose order divides p^k (p-groups)."""
    p = next(iter(group.prime_factors))
    elements = np.nonzero((p ** k) % group.element_orders == 0)[0]
    return subgroup_generated(group, (int(g) for g in elements))


def format_subgroup(group: FiniteGroup, subgroup: SubgroupData) -> str:
    """Generator labels as ``<(0,0,1),(1,0,0)>``."""
    return "<" + ",".join(group.format_element(g) for g in subgroup.generators) + ">"


def parse_generators(group: FiniteGroup, text: str) -> List[int]:
    """Parse a comma or semicolon separated list of element labels."""
    labels = re.findall(r"\([^()]*\)", text)
    if not labels:
        raise SpecParseError(f"No element labels found in {text!r}")
    return [group.parse_element(label) for label in labels]
