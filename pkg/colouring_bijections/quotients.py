"""
Coset decompositions G = H T for normal subgroups and the conjugation data used by the lifts.

Cosets are right cosets Ht with the representative on the right, so every
element factors uniquely as g = h t with h in H and t in T.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import structlog

from .exceptions import ConjugationError, NotNormalError
from .groups import FiniteGroup, SubgroupData, format_subgroup, is_normal

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class CosetDecomposition:
    """Normal subgroup H, canonical transversal T, the quotient G/H and the maps pi, tau."""
    parent: FiniteGroup
    subgroup: SubgroupData
    transversal: Tuple[int, ...]
    quotient: FiniteGroup
    pi: np.ndarray
    tau: np.ndarray

    @cached_property
    def h_part(self) -> np.ndarray:
        """h of g = h t for every g."""
        t = self.tau[self.pi]
        return self.parent.mul[np.arange(self.parent.order), self.parent.inv[t]]

    @cached_property
    def t_part(self) -> np.ndarray:
        """t of g = h t for every g."""
        return self.tau[self.pi]

    @cached_property
    def transversal_position(self) -> dict:
        return {t: q for q, t in enumerate(self.transversal)}

    def decompose(self, g: int) -> Tuple[int, int]:
        """The unique (h, t) with g = h t."""
        return int(self.h_part[g]), int(self.t_part[g])

    def compose(self, h: int, t: int) -> int:
        return self.parent.table[h][t]

    def validate(self) -> Tuple[bool, str]:
        """
        Check the decomposition invariants against the parent table.

        Returns:
            Tuple of (is_valid, error_message)
        """
        parent, quotient = self.parent, self.quotient
        if len(self.transversal) * self.subgroup.order != parent.order:
            return False, "|T| * |H| differs from |G|"
        if not np.array_equal(self.pi[self.tau], np.arange(quotient.order)):
            return False, "pi(tau(q)) != q"
        if not np.array_equal(self.tau[self.pi[list(self.transversal)]], np.array(self.transversal)):
            return False, "tau(pi(t)) != t on the transversal"
        recomposed = parent.mul[self.h_part, self.t_part]
        if not np.array_equal(recomposed, np.arange(parent.order)):
            return False, "g != h t for some g"
        if not self.subgroup.mask(parent.order)[self.h_part].all():
            return False, "h component outside H"
        image = self.pi[parent.mul]
        if not np.array_equal(image, quotient.mul[self.pi[:, None], self.pi[None, :]]):
            return False, "pi is not a homomorphism"
        return True, ""


def quotient(group: FiniteGroup, subgroup: SubgroupData) -> CosetDecomposition:
    """
    Quotient by a normal subgroup with the least element index of each coset as representative.

    Quotient elements are numbered by ascending representative, so the
    identity coset is quotient index 0.
    """
    if not is_normal(group, subgroup):
        raise NotNormalError(f"{format_subgroup(group, subgroup)} is not normal in {group.name}")
    members = np.array(subgroup.elements, dtype=np.int64)
    representatives = group.mul[members].min(axis=0)  # min over h of h g
    transversal = np.unique(representatives)
    pi = np.searchsorted(transversal, representatives).astype(np.int64)
    tau = transversal.astype(np.int64)
    quotient_mul = pi[group.mul[np.ix_(tau, tau)]]
    quotient_group = FiniteGroup(
        f"{group.name}/{format_subgroup(group, subgroup)}",
        quotient_mul,
        tuple(group.labels[t] for t in tau),
    )
    pi.setflags(write=False)
    tau.setflags(write=False)
    logger.debug(
        "Computed quotient",
        group=group.name,
        subgroup_order=subgroup.order,
        quotient_order=quotient_group.order,
    )
    return CosetDecomposition(
        parent=group,
        subgroup=subgroup,
        transversal=tuple(int(t) for t in tau),
        quotient=quotient_group,
        pi=pi,
        tau=tau,
    )


@dataclass(frozen=True)
class ConjugationParams:
    """Exponents with t b t^-1 = b^(1+3m) c^l."""
    m: int
    l: int


def conjugation_params(group: FiniteGroup, c: int, b: int, t: int) -> ConjugationParams:
    """
    Solve t b t^-1 = b^(1+3m) c^l by enumeration.

    m ranges over 0..3^(k-1)-1 where |b| = 3^k, and l over 0..|c|-1. For
    |c| = 3 and |b| = 3 this is t b t^-1 = b c^l, i.e. l is the exponent
    k(t) of the lifting constructions.

    Raises:
        ConjugationError: if c is not central or no solution exists
    """
    mul = group.mul
    if not np.array_equal(mul[c], mul[:, c]):
        raise ConjugationError(f"{group.format_element(c)} is not central in {group.name}")
    order_b = group.element_order(b)
    order_c = group.element_order(c)
    if order_b < 3 or _not_power_of_three(order_b):
        raise ConjugationError(f"|b| = {order_b} is not a positive power of 3")
    target = group.conjugate(t, b)
    for m in range(order_b // 3):
        b_part = group.power(b, 1 + 3 * m)
        for l in range(order_c):
            if group.table[b_part][group.power(c, l)] == target:
                return ConjugationParams(m=m, l=l)
    raise ConjugationError(
        f"{group.format_element(t)} conjugates {group.format_element(b)} outside "
        f"<{group.format_element(c)},{group.format_element(b)}>"
    )


def _not_power_of_three(n: int) -> bool:
    while n % 3 == 0 and n > 1:
        n //= 3
    return n != 1
