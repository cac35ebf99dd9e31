"""
Lifting colouring bijections from G/H to G.

Every lift has the shape sigma(h t) = psi_t(h) phi(t) over the canonical
decomposition G = H T, where phi(t) = tau(Phi(pi(t))) carries the quotient
bijection back to the transversal and psi_t is a bijection of H chosen per
coset representative:

* central H: one colouring bijection psi of H for every t
* H = C3 x C3 not central: a linear map built from the conjugation action of phi(t)
* H = C9 x C3 with a central cyclic factor: a table map selected by the
  conjugation exponents of phi(t)
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import structlog

from .config import LiftKind
from .exceptions import InvariantFailure, LiftPreconditionError
from .groups import FiniteGroup, SubgroupData, build_from_spec, center, format_subgroup, subgroup_generated
from .linear import M1, Matrix2F3, pair_choice, shear
from .perm_maps import Perm, deltas, is_colouring_bijection
from .quotients import CosetDecomposition, conjugation_params, quotient
from .search_engine import family_images_are_bijective, find_family_bijection
from .structure import C9C3Split, LiftingSubgroup, c9c3_split
from .tables import alpha_map, f_map

logger = structlog.get_logger(__name__)

# images of a map H -> H stored over the parent's indices; -1 outside H
SubgroupMap = np.ndarray


# --------------------------------------------------------------------------
# Transversal scheme

@dataclass(frozen=True, eq=False)
class TransversalScheme:
    """
    phi and the unique factorisations used by every lift, indexed by transversal position.

    For t = T[q]:
        phi(t) t        = xi(t)    t1(t)
        t^-1 phi(t)     = zeta(t)  t2(t)
        t^-1 phi(t) t   = omega(t) t3(t)
    """
    decomposition: CosetDecomposition
    phi: Tuple[int, ...]
    xi: Tuple[int, ...]
    zeta: Tuple[int, ...]
    omega: Tuple[int, ...]
    t1: Tuple[int, ...]
    t2: Tuple[int, ...]
    t3: Tuple[int, ...]

    @property
    def transversal(self) -> Tuple[int, ...]:
        return self.decomposition.transversal

    def validate(self) -> Tuple[bool, str]:
        """
        Recheck the three factorisations in G and that t -> t_i permute T.

        Returns:
            Tuple of (is_valid, error_message)
        """
        group = self.decomposition.parent
        table, inv = group.table, group.inv_list
        members = self.decomposition.subgroup.element_set
        transversal = set(self.transversal)
        for q, t in enumerate(self.transversal):
            f = self.phi[q]
            products = (
                (table[f][t], self.xi[q], self.t1[q], "phi(t) t"),
                (table[inv[t]][f], self.zeta[q], self.t2[q], "t^-1 phi(t)"),
                (table[table[inv[t]][f]][t], self.omega[q], self.t3[q], "t^-1 phi(t) t"),
            )
            for product, h, ti, what in products:
                if h not in members or ti not in transversal:
                    return False, f"{what} factor outside H x T at {group.format_element(t)}"
                if table[h][ti] != product:
                    return False, f"{what} != h t_i at {group.format_element(t)}"
        for name, values in (("t1", self.t1), ("t2", self.t2), ("t3", self.t3)):
            if set(values) != transversal:
                return False, f"{name} is not a bijection of T"
        return True, ""


def _check_quotient_perm(decomposition: CosetDecomposition, Phi: Perm) -> None:
    q = decomposition.quotient
    if Phi.group.order != q.order or not np.array_equal(Phi.group.mul, q.mul):
        raise LiftPreconditionError(
            f"Quotient permutation acts on {Phi.group.name}, not on the table of {q.name}"
        )
    if not is_colouring_bijection(q, Phi):
        raise LiftPreconditionError(f"Quotient permutation is not a colouring bijection of {q.name}")


def transversal_scheme(decomposition: CosetDecomposition, Phi: Perm) -> TransversalScheme:
    """
    Carry a colouring bijection of G/H to the transversal and factor the three Delta products.

    Args:
        decomposition: Canonical decomposition of G by a normal subgroup
        Phi: Colouring bijection on the quotient table of the decomposition

    Returns:
        TransversalScheme, already validated

    Raises:
        LiftPreconditionError: if Phi is not a colouring bijection of the quotient
    """
    _check_quotient_perm(decomposition, Phi)
    group = decomposition.parent
    table, inv = group.table, group.inv_list
    fields: Dict[str, List[int]] = {name: [] for name in ("phi", "xi", "zeta", "omega", "t1", "t2", "t3")}
    for q, t in enumerate(decomposition.transversal):
        f = int(decomposition.tau[Phi(q)])
        xi, t1 = decomposition.decompose(table[f][t])
        zeta, t2 = decomposition.decompose(table[inv[t]][f])
        omega, t3 = decomposition.decompose(table[table[inv[t]][f]][t])
        for name, value in (("phi", f), ("xi", xi), ("zeta", zeta), ("omega", omega),
                            ("t1", t1), ("t2", t2), ("t3", t3)):
            fields[name].append(value)
    scheme = TransversalScheme(decomposition, **{name: tuple(values) for name, values in fields.items()})
    valid, message = scheme.validate()
    if not valid:
        raise InvariantFailure(f"Transversal scheme for {decomposition.quotient.name}: {message}")
    return scheme


# --------------------------------------------------------------------------
# Coordinates on H

@dataclass(frozen=True, eq=False)
class SubgroupBasis:
    """H = <g1> x <g2> with h = g1^x g2^y identified with (x, y)."""
    group: FiniteGroup
    generators: Tuple[int, int]
    orders: Tuple[int, int]

    def element(self, x: int, y: int) -> int:
        g1, g2 = self.generators
        return self.group.table[self.group.power(g1, x)][self.group.power(g2, y)]

    @cached_property
    def coordinates(self) -> Dict[int, Tuple[int, int]]:
        a, b = self.orders
        coords = {self.element(x, y): (x, y) for x in range(a) for y in range(b)}
        if len(coords) != a * b:
            raise LiftPreconditionError(
                f"{self.group.format_element(self.generators[0])}, "
                f"{self.group.format_element(self.generators[1])} do not split the subgroup"
            )
        return coords

    def table_index(self, h: int) -> int:
        """Index of h in the table group C{a}xC{b}."""
        x, y = self.coordinates[h]
        return x * self.orders[1] + y

    def from_table_index(self, i: int) -> int:
        return self.element(i // self.orders[1], i % self.orders[1])


def linear_subgroup_map(basis: SubgroupBasis, matrix: Matrix2F3) -> SubgroupMap:
    """h -> matrix . coordinates(h) on an elementary abelian H of order 9."""
    images = np.full(basis.group.order, -1, dtype=np.int64)
    for h, coords in basis.coordinates.items():
        images[h] = basis.element(*matrix.apply(coords))
    return images


def table_subgroup_map(basis: SubgroupBasis, table_perm: Perm) -> SubgroupMap:
    """Pull a map of the table group C{a}xC{b} back to H through the basis."""
    images = np.full(basis.group.order, -1, dtype=np.int64)
    for h in basis.coordinates:
        images[h] = basis.from_table_index(table_perm(basis.table_index(h)))
    return images


def is_subgroup_colouring(group: FiniteGroup, subgroup: SubgroupData, psi: SubgroupMap) -> bool:
    """psi restricted to H is a colouring bijection of H."""
    table, inv = group.table, group.inv_list
    members = subgroup.element_set
    images = [int(psi[h]) for h in subgroup.elements]
    if set(images) != members:
        return False
    d1, d2, d3 = set(), set(), set()
    for h, s in zip(subgroup.elements, images):
        left = table[inv[h]][s]
        d1.add(table[s][h])
        d2.add(left)
        d3.add(table[left][h])
    return d1 == d2 == d3 == members


# --------------------------------------------------------------------------
# Assembling sigma

def _assemble(scheme: TransversalScheme, coset_map: Callable[[int], SubgroupMap]) -> Perm:
    """sigma(h t) = coset_map(q)(h) phi(t) for t = T[q]."""
    decomposition = scheme.decomposition
    group = decomposition.parent
    table = group.table
    elements = decomposition.subgroup.elements
    images = np.empty(group.order, dtype=np.int64)
    for q, t in enumerate(decomposition.transversal):
        psi = coset_map(q)
        f = scheme.phi[q]
        for h in elements:
            images[table[h][t]] = table[int(psi[h])][f]
    return Perm(group, images)


def _verified(group: FiniteGroup, sigma: Perm, what: str) -> Perm:
    if not is_colouring_bijection(group, sigma):
        raise InvariantFailure(f"{what} on {group.name} did not produce a colouring bijection")
    logger.debug("Lift verified", group=group.name, construction=what)
    return sigma


def _is_central(group: FiniteGroup, subgroup: SubgroupData) -> bool:
    return subgroup.element_set <= center(group).element_set


def lift_central(
    group: FiniteGroup,
    subgroup: SubgroupData,
    Phi: Perm,
    psi: SubgroupMap,
    decomposition: Optional[CosetDecomposition] = None,
) -> Perm:
    """
    sigma(h t) = psi(h) phi(t) for a central H.

    Args:
        group: G
        subgroup: Central subgroup H
        Phi: Colouring bijection of G/H
        psi: Colouring bijection of H, indexed by elements of G
        decomposition: Reuse an existing decomposition of G by H

    Raises:
        LiftPreconditionError: H not central, or Phi / psi fail their checks
    """
    if not _is_central(group, subgroup):
        raise LiftPreconditionError(f"{format_subgroup(group, subgroup)} is not central in {group.name}")
    if not is_subgroup_colouring(group, subgroup, psi):
        raise LiftPreconditionError(f"psi is not a colouring bijection of {format_subgroup(group, subgroup)}")
    decomposition = decomposition or quotient(group, subgroup)
    scheme = transversal_scheme(decomposition, Phi)
    return _verified(group, _assemble(scheme, lambda q: psi), "central lift")


# --------------------------------------------------------------------------
# H = C3 x C3

def _require_c3c3(group: FiniteGroup, subgroup: SubgroupData) -> None:
    elements = subgroup.elements
    if subgroup.order != 9 or any(group.element_order(h) != 3 for h in elements if h != 0):
        raise LiftPreconditionError(f"{format_subgroup(group, subgroup)} is not isomorphic to C3xC3")


def c3c3_basis(group: FiniteGroup, subgroup: SubgroupData) -> SubgroupBasis:
    """(z, b): z the least element of H in Z(G) of order 3, b the least element of H outside <z>."""
    centre = center(group).element_set
    z = next((h for h in subgroup.elements if h != 0 and h in centre), None)
    if z is None:
        raise LiftPreconditionError(f"{format_subgroup(group, subgroup)} meets the centre trivially")
    span = subgroup_generated(group, [z]).element_set
    b = next(h for h in subgroup.elements if h not in span)
    return SubgroupBasis(group, (z, b), (3, 3))


def lift_c3c3(group: FiniteGroup, subgroup: SubgroupData, Phi: Perm) -> Perm:
    """
    Lift over a normal H isomorphic to C3 x C3.

    Central H delegates to lift_central with the linear map M1. Otherwise
    psi_t has matrix C(-alpha) M_t in the basis (z, b), where alpha = k(phi(t)^-1)
    and M_t = pair_choice(alpha).
    """
    _require_c3c3(group, subgroup)
    decomposition = quotient(group, subgroup)
    if _is_central(group, subgroup):
        elements = [h for h in subgroup.elements if h != 0]
        first = elements[0]
        span = subgroup_generated(group, [first]).element_set
        second = next(h for h in elements if h not in span)
        basis = SubgroupBasis(group, (first, second), (3, 3))
        return lift_central(group, subgroup, Phi, linear_subgroup_map(basis, M1), decomposition)

    basis = c3c3_basis(group, subgroup)
    z, b = basis.generators
    scheme = transversal_scheme(decomposition, Phi)
    inv = group.inv_list
    maps = []
    for f in scheme.phi:
        alpha = conjugation_params(group, z, b, inv[f]).l
        maps.append(linear_subgroup_map(basis, shear(-alpha) @ pair_choice(alpha)))
    logger.debug(
        "Noncentral C3xC3 lift",
        group=group.name,
        z=group.format_element(z),
        b=group.format_element(b),
    )
    return _verified(group, _assemble(scheme, maps.__getitem__), "C3xC3 lift")


# --------------------------------------------------------------------------
# H = C9 x C3

def _q_shift(group: FiniteGroup, k: int) -> np.ndarray:
    """q(u, j) = z^(k j) on C9xC3 with z = (3, 0)."""
    z = group.label_index[(3, 0)]
    return np.array([group.power(z, k * (h % 3)) for h in range(group.order)], dtype=np.int64)


def case1_families(k: int) -> np.ndarray:
    """
    Constraint families a case-1 coset map beta must satisfy for conjugation exponent k.

    On C9xC3 with h = (u, j) and q(h) = z^(k j): beta, h beta q, h^-1 beta and
    beta q must all be bijections. These are the H-parts of the three layer
    maps sigma(h t) = beta(h) phi(t) produces when phi(t) acts on b by z^k.
    """
    group = build_from_spec("C9xC3")
    n = group.order
    mul, inv = group.mul, group.inv
    q = _q_shift(group, k)
    idx = np.arange(n)
    own = np.broadcast_to(idx[None, :], (n, n))
    return np.stack([
        np.ascontiguousarray(own),
        mul[mul[idx[:, None], idx[None, :]], q[:, None]],
        mul[inv],
        mul[idx[None, :], q[:, None]],
    ]).astype(np.int64)


def case1_conditions_hold(beta: Perm, k: int) -> bool:
    return family_images_are_bijective(case1_families(k), beta.images)


@lru_cache(maxsize=None)
def case1_map(k: int) -> Perm:
    """
    Coset map for case 1 and exponent k.

    alpha_0 serves k = 0. For k = 1, 2 the stored alpha_k make the first
    two layer maps bijective but not the third (beta q), so a map meeting all
    four conditions is found by search on C9xC3 instead.
    """
    if k == 0:
        return alpha_map(0)
    stored = alpha_map(k)
    if case1_conditions_hold(stored, k):
        return stored
    group = build_from_spec("C9xC3")
    beta = find_family_bijection(group, case1_families(k))
    if beta is None:
        raise InvariantFailure(f"No case-1 coset map for k={k}")
    logger.info("Completed case-1 coset map by search", k=k)
    return beta


def _require_c9c3(group: FiniteGroup, subgroup: SubgroupData) -> None:
    elements = subgroup.elements
    table = group.table
    abelian = all(table[a][b] == table[b][a] for a in elements for b in elements)
    orders = sorted(group.element_order(h) for h in elements)
    if subgroup.order != 27 or not abelian or orders[-1] != 9:
        raise LiftPreconditionError(f"{format_subgroup(group, subgroup)} is not an abelian C9xC3")


def c9c3_table_basis(group: FiniteGroup, split: C9C3Split) -> SubgroupBasis:
    """Basis matching the C9xC3 tables: (c, b) in case 1, (b, c) in case 2."""
    if split.case == 1:
        return SubgroupBasis(group, (split.c, split.b), (9, 3))
    return SubgroupBasis(group, (split.b, split.c), (9, 3))


def lift_c9c3(
    group: FiniteGroup,
    subgroup: SubgroupData,
    Phi: Perm,
    split: Optional[C9C3Split] = None,
) -> Perm:
    """
    Lift over an abelian normal H = <c> x <b> isomorphic to C9 x C3 with c central.

    Case 1 (|c| = 9): t b t^-1 = b c^(3u), sigma(h t) = beta_u(h) phi(t) with
    u read from phi(t) and h = c^u' b^j read as (u', j).
    Case 2 (|c| = 3): t b t^-1 = b^(1+3 lambda) c^ell, sigma(h t) =
    f_(lambda, ell)(h) phi(t) with h = b^j c^m read as (j, m).
    Central H delegates to lift_central with alpha_0.

    Raises:
        LiftPreconditionError: H has the wrong type or no split with a central cyclic factor
    """
    _require_c9c3(group, subgroup)
    split = split or c9c3_split(group, subgroup)
    if split is None:
        raise LiftPreconditionError(f"{format_subgroup(group, subgroup)} has no split with a central factor")
    decomposition = quotient(group, subgroup)
    basis = c9c3_table_basis(group, split)
    if _is_central(group, subgroup):
        return lift_central(group, subgroup, Phi, table_subgroup_map(basis, alpha_map(0)), decomposition)

    scheme = transversal_scheme(decomposition, Phi)
    maps = []
    for f in scheme.phi:
        params = conjugation_params(group, split.c, split.b, f)
        if split.case == 1:
            if params.l % 3:
                raise LiftPreconditionError(
                    f"{group.format_element(f)} conjugates b to b c^{params.l}, outside b <c^3>"
                )
            maps.append(table_subgroup_map(basis, case1_map(params.l // 3)))
        else:
            maps.append(table_subgroup_map(basis, f_map(params.m, params.l)))
    logger.debug("C9xC3 lift", group=group.name, case=split.case)
    return _verified(group, _assemble(scheme, maps.__getitem__), f"C9xC3 lift (case {split.case})")


# --------------------------------------------------------------------------
# Dispatch and layer check

@dataclass
class LiftOutcome:
    sigma: Perm
    kind: LiftKind
    construction: str
    subgroup: str


def lift(group: FiniteGroup, entry: LiftingSubgroup, Phi: Perm) -> LiftOutcome:
    """Apply the construction matching a lifting subgroup."""
    label = format_subgroup(group, entry.subgroup)
    if entry.kind is LiftKind.C9XC3:
        sigma = lift_c9c3(group, entry.subgroup, Phi, entry.split)
        split = entry.split or c9c3_split(group, entry.subgroup)
        central = _is_central(group, entry.subgroup)
        construction = "central" if central else f"case {split.case}"
    else:
        sigma = lift_c3c3(group, entry.subgroup, Phi)
        construction = "central" if entry.kind is LiftKind.C3XC3_CENTRAL else "noncentral"
    return LiftOutcome(sigma, entry.kind, construction, label)


def check_layer_property(scheme: TransversalScheme, sigma: Perm) -> Tuple[bool, str]:
    """
    Delta_i maps every coset H t onto the coset H t_i(t).

    Returns:
        Tuple of (holds, error_message)
    """
    decomposition = scheme.decomposition
    group = decomposition.parent
    table = group.table
    elements = decomposition.subgroup.elements
    triple = deltas(group, sigma)
    for i, (delta, targets) in enumerate(
        ((triple.d1, scheme.t1), (triple.d2, scheme.t2), (triple.d3, scheme.t3)), start=1
    ):
        for q, t in enumerate(decomposition.transversal):
            image = {int(delta[table[h][t]]) for h in elements}
            expected = {table[h][targets[q]] for h in elements}
            if image != expected:
                return False, f"Delta{i} does not map H{group.format_element(t)} onto its layer"
    return True, ""
