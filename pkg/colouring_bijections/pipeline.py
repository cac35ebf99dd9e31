"""
End-to-end colouring driver: base cases, lifts, products and a budgeted search fallback.
"""

import time
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import structlog

from .config import Config, default_config
from .exceptions import ColouringError, GuardViolation, InvariantFailure
from .groups import FiniteGroup, build_from_spec
from .lifting import lift
from .linear import M1, companion_matrix
from .perm_maps import Perm, identity_perm, is_colouring_bijection, product_bijection, square_map
from .quotients import quotient
from .search_engine import BranchOrder, SearchConfig, search
from .structure import ClassKind, classify, enumerate_lifting_subgroups, find_isomorphism, transport_perm
from .tables import alpha_map, h3_sigma, l3_sigma

logger = structlog.get_logger(__name__)


class ColourStage(Enum):
    """Stages of one colouring attempt."""
    GUARD = "guard"
    CLASSIFY = "classify"
    BASE_CASE = "base_case"
    LIFT = "lift"
    PRODUCT = "product"
    SEARCH = "search"
    VERIFY = "verify"
    COMPLETE = "complete"


class ColourOutcome(str, Enum):
    COLOURED = "coloured"
    NO_CONSTRUCTION = "no-construction-known"
    SEARCH_EXHAUSTED = "search-budget-exhausted"
    NONE_EXISTS = "no-colouring-bijection"


@dataclass
class ColourStatus:
    """Status update from the colouring driver."""
    stage: ColourStage
    progress: float  # 0.0 to 1.0
    message: str
    details: Optional[Dict[str, Any]] = None
    error: Optional[str] = None


@dataclass
class TraceStep:
    """One decision of the recursion."""
    depth: int
    group: str
    order: int
    classification: str
    action: str
    detail: str = ""
    verified: Optional[bool] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "depth": self.depth,
            "group": self.group,
            "order": self.order,
            "classification": self.classification,
            "action": self.action,
            "detail": self.detail,
            "verified": self.verified,
        }


@dataclass
class ColourResult:
    """Outcome of colour(G); failures are values, not exceptions."""
    outcome: ColourOutcome
    group: str
    sigma: Optional[Perm]
    trace: List[TraceStep]
    execution_time: float
    message: str = ""
    nodes_explored: int = 0

    @property
    def success(self) -> bool:
        return self.outcome is ColourOutcome.COLOURED


class _Unresolved(Exception):
    """Internal: no construction applies at this level."""

    def __init__(self, outcome: ColourOutcome, message: str):
        super().__init__(message)
        self.outcome = outcome


# --------------------------------------------------------------------------
# Base colourings on the spec groups

def linear_colouring(dimension: int) -> Perm:
    """
    x -> M x on C3^d: M1 for d = 2, otherwise the companion matrix of a root-free polynomial.

    M, M + I and M - I are invertible, which makes x -> Mx a colouring bijection of the abelian group.
    """
    if dimension < 2:
        raise ValueError("C3 has no colouring bijection")
    group = build_from_spec("x".join(["C3"] * dimension))
    matrix = M1.as_array() if dimension == 2 else companion_matrix(dimension)
    coords = np.array(group.labels, dtype=np.int64)
    weights = 3 ** np.arange(dimension - 1, -1, -1)
    images = ((coords @ matrix.T) % 3) @ weights
    return Perm(group, images)


def base_colouring(group: FiniteGroup, kind: ClassKind, invariants, exponent: int) -> Optional[Perm]:
    """Stored or closed-form colouring bijection of a known base group, transported onto group."""
    n = group.order
    if kind is ClassKind.ABELIAN and set(invariants) == {3}:
        stored = linear_colouring(len(invariants))
    elif kind is ClassKind.ABELIAN and tuple(invariants) == (9, 3):
        stored = alpha_map(0)
    elif kind is ClassKind.LR and n == 27:
        stored = l3_sigma()
    elif kind is ClassKind.OTHER_NONABELIAN and n == 27 and exponent == 3:
        stored = h3_sigma()
    else:
        return None
    if np.array_equal(stored.group.mul, group.mul):
        return Perm(group, stored.images)
    iso = find_isomorphism(stored.group, group)
    if iso is None:
        raise InvariantFailure(f"{group.name} was classified like {stored.group.name} but is not isomorphic")
    return transport_perm(stored, iso, group)


# --------------------------------------------------------------------------
# Driver

class ColouringPipeline:
    """Recursive colouring driver."""

    def __init__(self, config: Config):
        self.config = config
        self.status_callbacks: List[Callable[[ColourStatus], None]] = []
        self._memo: Dict[bytes, Perm] = {}
        self._failed: Dict[bytes, _Unresolved] = {}
        self._nodes = 0

    def add_status_callback(self, callback) -> None:
        """Add a callback function for status updates."""
        self.status_callbacks.append(callback)

    def _emit_status(
        self,
        stage: ColourStage,
        progress: float,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error: Optional[str] = None,
    ) -> None:
        """Emit status update to all registered callbacks."""
        status = ColourStatus(stage=stage, progress=progress, message=message, details=details, error=error)
        for callback in self.status_callbacks:
            try:
                callback(status)
            except Exception as e:
                logger.warning("Status callback failed", error=str(e))

    def colour(self, group: FiniteGroup) -> ColourResult:
        """
        Find a colouring bijection of group, or explain why none was produced.

        Args:
            group: Group to colour (order at most the configured limit)

        Returns:
            ColourResult with the bijection, the recursion trace and the outcome

        Raises:
            GuardViolation: group above the configured order
            InvariantFailure: a construction produced a map that failed verification
        """
        start_time = time.time()
        trace: List[TraceStep] = []
        self._nodes = 0
        self._emit_status(ColourStage.GUARD, 0.0, f"Colouring {group.name}")
        limit = self.config.colour.max_order
        if group.order > limit:
            raise GuardViolation(f"colour is limited to order {limit}; {group.name} has order {group.order}")

        try:
            sigma = self._colour(group, 0, trace)
        except _Unresolved as unresolved:
            execution_time = time.time() - start_time
            self._emit_status(ColourStage.COMPLETE, 1.0, str(unresolved), error=unresolved.outcome.value)
            logger.info("No colouring produced", group=group.name, outcome=unresolved.outcome.value)
            return ColourResult(
                unresolved.outcome, group.name, None, trace, execution_time, str(unresolved), self._nodes
            )

        self._emit_status(ColourStage.VERIFY, 0.9, "Verifying result")
        if not is_colouring_bijection(group, sigma):
            raise InvariantFailure(f"colour({group.name}) produced a map that is not a colouring bijection")
        execution_time = time.time() - start_time
        self._emit_status(
            ColourStage.COMPLETE,
            1.0,
            f"Coloured {group.name} in {execution_time:.2f} seconds",
            details={"steps": len(trace)},
        )
        logger.info("Coloured group", group=group.name, steps=len(trace), seconds=round(execution_time, 3))
        return ColourResult(ColourOutcome.COLOURED, group.name, sigma, trace, execution_time, "", self._nodes)

    # -- recursion ----------------------------------------------------------

    def _colour(self, group: FiniteGroup, depth: int, trace: List[TraceStep]) -> Perm:
        key = group.mul.tobytes()
        if key in self._memo:
            return Perm(group, self._memo[key].images)
        if key in self._failed:
            raise self._failed[key]
        try:
            sigma = self._attempt(group, depth, trace)
        except _Unresolved as unresolved:
            self._failed[key] = unresolved
            raise
        self._memo[key] = sigma
        return sigma

    def _step(self, trace: List[TraceStep], depth: int, group: FiniteGroup, label: str, action: str,
              detail: str = "", verified: Optional[bool] = None) -> None:
        trace.append(TraceStep(depth, group.name, group.order, label, action, detail, verified))

    def _attempt(self, group: FiniteGroup, depth: int, trace: List[TraceStep]) -> Perm:
        n = group.order
        self._emit_status(ColourStage.CLASSIFY, 0.1, f"Classifying {group.name}", details={"depth": depth})
        tag = classify(group)
        label = str(tag)

        if n == 1:
            self._step(trace, depth, group, label, "trivial", verified=True)
            return identity_perm(group)

        if gcd(n, 6) == 1:
            sigma = square_map(group)
            self._step(trace, depth, group, label, "square-map", "x -> x^2", is_colouring_bijection(group, sigma))
            return sigma

        three_group = group.prime_factors.keys() == {3}
        if three_group and tag.kind is ClassKind.CYCLIC:
            self._step(trace, depth, group, label, "no-construction", "cyclic 3-group")
            raise _Unresolved(ColourOutcome.NO_CONSTRUCTION, f"{group.name} is cyclic")
        if tag.kind is ClassKind.LR and (tag.r or 0) >= 4:
            self._step(trace, depth, group, label, "no-construction", f"L{tag.r} is open")
            raise _Unresolved(ColourOutcome.NO_CONSTRUCTION, f"{group.name} is isomorphic to L{tag.r}")

        self._emit_status(ColourStage.BASE_CASE, 0.2, "Checking base cases")
        base = base_colouring(group, tag.kind, tag.invariants, group.exponent)
        if base is not None:
            self._step(trace, depth, group, label, "base", f"stored colouring of {base_name(tag, group)}",
                       is_colouring_bijection(group, base))
            return base

        if three_group and n <= self.config.groups.max_lifting_order:
            sigma = self._try_lifts(group, depth, trace, label)
            if sigma is not None:
                return sigma

        sigma = self._try_product(group, depth, trace, label)
        if sigma is not None:
            return sigma

        if depth > 0:
            self._step(trace, depth, group, label, "unresolved", "no lift or product applies")
            raise _Unresolved(ColourOutcome.NO_CONSTRUCTION, f"No construction for {group.name}")
        return self._fallback_search(group, depth, trace, label)

    def _try_lifts(self, group: FiniteGroup, depth: int, trace: List[TraceStep], label: str) -> Optional[Perm]:
        self._emit_status(ColourStage.LIFT, 0.4, "Scanning lifting subgroups", details={"group": group.name})
        preference = list(self.config.colour.lift_preference)
        entries = [e for e in enumerate_lifting_subgroups(group) if e.quotient_noncyclic and e.kind in preference]
        entries.sort(key=lambda e: preference.index(e.kind))
        for entry in entries:
            decomposition = quotient(group, entry.subgroup)
            try:
                Phi = self._colour(decomposition.quotient, depth + 1, trace)
            except _Unresolved:
                continue
            outcome = lift(group, entry, Phi)
            self._step(
                trace, depth, group, label, f"lift {entry.kind.value}",
                f"{outcome.construction} over {outcome.subgroup}, quotient order {decomposition.quotient.order}",
                True,
            )
            return outcome.sigma
        return None

    def _try_product(self, group: FiniteGroup, depth: int, trace: List[TraceStep], label: str) -> Optional[Perm]:
        factors = group.factors
        if len(factors) < 2 or group.name != "x".join(factors):
            return None
        self._emit_status(ColourStage.PRODUCT, 0.6, "Trying product rule")
        for cut in range(1, len(factors)):
            left = build_from_spec("x".join(factors[:cut]))
            right = build_from_spec("x".join(factors[cut:]))
            try:
                sigma_left = self._colour(left, depth + 1, trace)
                sigma_right = self._colour(right, depth + 1, trace)
            except _Unresolved:
                continue
            sigma = product_bijection(sigma_left, sigma_right, group)
            self._step(trace, depth, group, label, "product", f"{left.name} x {right.name}",
                       is_colouring_bijection(group, sigma))
            return sigma
        return None

    def _fallback_search(self, group: FiniteGroup, depth: int, trace: List[TraceStep], label: str) -> Perm:
        budget = self.config.search.fallback_budget
        self._emit_status(ColourStage.SEARCH, 0.7, "Falling back to search", details={"budget": budget})
        config = SearchConfig(
            fix_identity=True,
            node_budget=budget,
            order=BranchOrder.MOST_CONSTRAINED,
            seed=self.config.search.seed,
        )
        try:
            result = search(group, config)
        except ColouringError as exc:
            self._step(trace, depth, group, label, "search", f"refused: {exc}")
            raise _Unresolved(ColourOutcome.SEARCH_EXHAUSTED, str(exc)) from exc
        self._nodes += result.nodes_explored
        if result.found:
            sigma = result.found[0]
            self._step(trace, depth, group, label, "search", f"{result.nodes_explored} nodes",
                       is_colouring_bijection(group, sigma))
            return sigma
        if result.exhausted:
            self._step(trace, depth, group, label, "search", f"complete, {result.nodes_explored} nodes, none found")
            raise _Unresolved(ColourOutcome.NONE_EXISTS, f"{group.name} has no colouring bijection")
        self._step(trace, depth, group, label, "search", f"budget of {budget} nodes exhausted")
        raise _Unresolved(
            ColourOutcome.SEARCH_EXHAUSTED,
            f"No construction for {group.name}; search stopped after {result.nodes_explored} nodes",
        )


def base_name(tag, group: FiniteGroup) -> str:
    if tag.kind is ClassKind.ABELIAN:
        return "x".join(f"C{q}" for q in tag.invariants)
    if tag.kind is ClassKind.LR:
        return "L3"
    return "H3"


def colour(group: FiniteGroup, config: Optional[Config] = None) -> ColourResult:
    """
    Convenience function to colour one group.

    Args:
        group: Group to colour
        config: Optional configuration (uses default if not provided)

    Returns:
        ColourResult
    """
    return ColouringPipeline(config or default_config).colour(group)
