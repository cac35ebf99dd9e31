"""
Structural queries: classification, automorphisms, isomorphisms and the normal subgroups lifts use.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .config import LiftKind, default_config
from .exceptions import GuardViolation
from .groups import (
    FiniteGroup,
    SubgroupData,
    center,
    frattini_subgroup,
    generating_tuple,
    is_normal,
    subgroup_generated,
)
from .perm_maps import Perm
from .quotients import quotient

logger = structlog.get_logger(__name__)


class ClassKind(str, Enum):
    CYCLIC = "cyclic"
    ABELIAN = "abelian"
    LR = "Lr"
    OTHER_NONABELIAN = "other-nonabelian"


@dataclass(frozen=True)
class GroupClass:
    """Classification tag; invariants for abelian groups, r for L_r."""
    kind: ClassKind
    invariants: Tuple[int, ...] = ()
    r: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is ClassKind.ABELIAN:
            return "abelian(" + ",".join(str(q) for q in self.invariants) + ")"
        if self.kind is ClassKind.LR:
            return f"Lr({self.r})"
        return self.kind.value

    @property
    def is_elementary_abelian_3(self) -> bool:
        return self.kind is ClassKind.ABELIAN and set(self.invariants) == {3}


def abelian_invariants(group: FiniteGroup) -> Tuple[int, ...]:
    """Invariant factors of an abelian group, largest first, from |Omega_k| counts per prime."""
    orders = group.element_orders
    per_prime: Dict[int, List[int]] = {}
    for p, e in group.prime_factors.items():
        ranks = []
        for k in range(e + 1):
            count = int(np.sum((p ** k) % orders == 0))
            ranks.append(round(np.log(count) / np.log(p)))
        # number of cyclic factors of exponent >= k
        at_least = [ranks[k] - ranks[k - 1] for k in range(1, e + 1)]
        exponents = []
        for k in range(e, 0, -1):
            already = len(exponents)
            exponents.extend([k] * (at_least[k - 1] - already))
        per_prime[p] = [p ** k for k in exponents]
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for i in range(width):
        value = 1
        for powers in per_prime.values():
            if i < len(powers):
                value *= powers[i]
        factors.append(value)
    return tuple(factors)


def classify(group: FiniteGroup) -> GroupClass:
    n = group.order
    orders = group.element_orders
    if n == 1 or int(orders.max()) == n:
        return GroupClass(ClassKind.CYCLIC, (n,) if n > 1 else ())
    if group.is_abelian:
        return GroupClass(ClassKind.ABELIAN, abelian_invariants(group))
    if group.prime_factors.keys() == {3} and int(orders.max()) == n // 3:
        return GroupClass(ClassKind.LR, r=group.prime_factors[3])
    return GroupClass(ClassKind.OTHER_NONABELIAN)


# --------------------------------------------------------------------------
# Homomorphisms from generator images

def extend_homomorphism(
    source: FiniteGroup,
    target: FiniteGroup,
    generators: Sequence[int],
    images: Sequence[int],
) -> Optional[List[int]]:
    """
    Complete generators -> images to a homomorphism by walking the Cayley graph.

    Every edge g -> g s must satisfy f(g s) = f(g) f(s); the first edge that
    disagrees rejects the assignment.

    Returns:
        Image list of the homomorphism, or None if the assignment does not extend
    """
    src, tgt = source.table, target.table
    f = [-1] * source.order
    f[0] = 0
    queue = [0]
    pairs = list(zip(generators, images))
    for g in queue:
        row = src[g]
        image_row = tgt[f[g]]
        for s, img in pairs:
            h = row[s]
            fh = image_row[img]
            if f[h] == -1:
                f[h] = fh
                queue.append(h)
            elif f[h] != fh:
                return None
    if len(queue) != source.order:
        return None
    return f


def _image_candidates(source: FiniteGroup, target: FiniteGroup, generators: Sequence[int]) -> List[List[int]]:
    target_orders = target.element_orders
    outside = np.ones(target.order, dtype=bool)
    if target.is_p_group:
        outside[list(frattini_subgroup(target).elements)] = False
    return [
        [int(h) for h in np.nonzero((target_orders == source.element_order(s)) & outside)[0]]
        for s in generators
    ]


def _iter_isomorphisms(source: FiniteGroup, target: FiniteGroup) -> Iterator[List[int]]:
    """All isomorphisms source -> target in lexicographic order of generator images."""
    if source.order != target.order:
        return
    if not np.array_equal(np.sort(source.element_orders), np.sort(target.element_orders)):
        return
    generators = generating_tuple(source)
    if not generators:
        yield [0]
        return
    candidates = _image_candidates(source, target, generators)
    p_group = target.is_p_group
    base = frattini_subgroup(target).elements if p_group else ()
    chosen: List[int] = []

    def descend(depth: int) -> Iterator[List[int]]:
        if depth == len(generators):
            f = extend_homomorphism(source, target, generators, chosen)
            if f is not None and len(set(f)) == target.order:
                yield f
            return
        span = subgroup_generated(target, base + tuple(chosen)) if p_group else None
        for h in candidates[depth]:
            # images of a minimal generating tuple stay independent modulo the Frattini subgroup
            if span is not None and h in span:
                continue
            chosen.append(h)
            yield from descend(depth + 1)
            chosen.pop()

    yield from descend(0)


def automorphisms(group: FiniteGroup) -> List[Perm]:
    """
    All automorphisms, by generator-image enumeration pruned by element orders.

    Raises:
        GuardViolation: for groups above the configured order or generator count
    """
    limits = default_config.groups
    if group.order > limits.max_automorphism_order:
        raise GuardViolation(f"{group.name}: automorphisms limited to order {limits.max_automorphism_order}")
    if len(generating_tuple(group)) > limits.max_generators:
        raise GuardViolation(f"{group.name} needs more than {limits.max_generators} generators")
    result = [Perm(group, f) for f in _iter_isomorphisms(group, group)]
    logger.debug("Enumerated automorphisms", group=group.name, count=len(result))
    return result


def find_isomorphism(source: FiniteGroup, target: FiniteGroup) -> Optional[np.ndarray]:
    """First isomorphism source -> target as an index array, or None."""
    for f in _iter_isomorphisms(source, target):
        return np.array(f, dtype=np.int64)
    return None


def transport_perm(sigma: Perm, isomorphism: np.ndarray, target: FiniteGroup) -> Perm:
    """f o sigma o f^-1 for an isomorphism f from sigma's group onto target."""
    images = np.empty(target.order, dtype=np.int64)
    images[isomorphism] = isomorphism[sigma.images]
    return Perm(target, images)


# --------------------------------------------------------------------------
# Lifting subgroups

@dataclass(frozen=True)
class C9C3Split:
    """H = <c> x <b> with c central in G; case 1 has |c| = 9, case 2 has |c| = 3."""
    c: int
    b: int
    case: int


@dataclass(frozen=True)
class LiftingSubgroup:
    subgroup: SubgroupData
    kind: LiftKind
    quotient_noncyclic: bool
    split: Optional[C9C3Split] = None


def c9c3_split(group: FiniteGroup, subgroup: SubgroupData) -> Optional[C9C3Split]:
    """
    Canonical splitting of an abelian C9 x C3 subgroup with a central cyclic factor.

    Prefers a central c of order 9 (case 1) with b the least order-3 element
    outside <c>; otherwise a central c of order 3 with b the least order-9
    element such that c is not in <b>.
    """
    mul = group.mul
    members = sorted(subgroup.elements)
    central = [g for g in members if np.array_equal(mul[g], mul[:, g])]
    for c in central:
        if group.element_order(c) == 9:
            powers = set(subgroup_generated(group, [c]).elements)
            b = next((g for g in members if group.element_order(g) == 3 and g not in powers), None)
            if b is not None:
                return C9C3Split(c=c, b=b, case=1)
    for c in central:
        if group.element_order(c) != 3:
            continue
        for b in members:
            if group.element_order(b) == 9 and c not in subgroup_generated(group, [b]):
                return C9C3Split(c=c, b=b, case=2)
    return None


def _span_pair(table: List[List[int]], a: int, b: int, order_a: int, order_b: int) -> frozenset:
    elements = set()
    x = 0
    for _ in range(order_a):
        y = x
        for _ in range(order_b):
            elements.add(y)
            y = table[y][b]
        x = table[x][a]
    return frozenset(elements)


def _is_cyclic(group: FiniteGroup) -> bool:
    return group.order == 1 or int(group.element_orders.max()) == group.order


def enumerate_lifting_subgroups(group: FiniteGroup) -> List[LiftingSubgroup]:
    """
    Normal C3 x C3 subgroups and abelian normal C9 x C3 subgroups with a central split.

    Each entry is tagged with its kind and whether G/H is noncyclic. The list
    is ordered by kind (central C3 x C3, C3 x C3, C9 x C3), then by the sorted
    element tuple.
    """
    if group.prime_factors.keys() != {3}:
        return []
    table = group.table
    orders = group.element_orders
    centre = set(center(group).elements)
    order3 = [int(g) for g in np.nonzero(orders == 3)[0]]
    order9 = [int(g) for g in np.nonzero(orders == 9)[0]]

    found: Dict[frozenset, Tuple[LiftKind, Tuple[int, int]]] = {}
    for i, a in enumerate(order3):
        a2 = table[a][a]
        for b in order3[i + 1:]:
            if b == a2 or table[a][b] != table[b][a]:
                continue
            span = _span_pair(table, a, b, 3, 3)
            if span in found:
                continue
            found[span] = (LiftKind.C3XC3_CENTRAL if span <= centre else LiftKind.C3XC3, (a, b))

    c9c3: Dict[frozenset, Tuple[int, int]] = {}
    if group.order >= 27:
        for g in order9:
            cube = group.power(g, 3)
            powers = {cube, table[cube][cube]}
            for h in order3:
                if h in powers or table[g][h] != table[h][g]:
                    continue
                span = _span_pair(table, g, h, 9, 3)
                if span not in c9c3:
                    c9c3[span] = (g, h)

    entries: List[LiftingSubgroup] = []
    for span, (kind, generators) in found.items():
        subgroup = SubgroupData(tuple(sorted(span)), generators)
        if not is_normal(group, subgroup):
            continue
        entries.append(LiftingSubgroup(subgroup, kind, not _is_cyclic(quotient(group, subgroup).quotient)))
    for span, generators in c9c3.items():
        subgroup = SubgroupData(tuple(sorted(span)), generators)
        if not is_normal(group, subgroup):
            continue
        split = c9c3_split(group, subgroup)
        if split is None:
            continue
        entries.append(
            LiftingSubgroup(subgroup, LiftKind.C9XC3, not _is_cyclic(quotient(group, subgroup).quotient), split)
        )

    rank = {LiftKind.C3XC3_CENTRAL: 0, LiftKind.C3XC3: 1, LiftKind.C9XC3: 2}
    entries.sort(key=lambda e: (rank[e.kind], e.subgroup.elements))
    logger.debug(
        "Enumerated lifting subgroups",
        group=group.name,
        count=len(entries),
        kinds={kind.value: sum(1 for e in entries if e.kind is kind) for kind in LiftKind},
    )
    return entries
