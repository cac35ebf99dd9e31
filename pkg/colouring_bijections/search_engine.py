"""
Backtracking search for colouring bijections, strong complete mappings and complete mappings.

Each target is a family of derived maps that must all be bijections:

    cb   sigma(x),  sigma(x) x,  x^-1 sigma(x),  x^-1 sigma(x) x
    scm  sigma(x),  x sigma(x),  x^-1 sigma(x)
    cm   sigma(x),  x sigma(x)

Two branching orders are available. ``ascending``, the default, assigns sigma(x) for x in
ascending index order and keeps one used-value mask per family.
``most-constrained`` treats the problem as an exact cover whose items are
the domain elements and the values of every family (an assignment x -> v
covers x and one value per family) and always branches on the uncovered
item with the fewest live assignments. In first mode it can run seeded,
randomized Luby restarts. Both orders are deterministic for a fixed config.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator

from .config import default_config
from .exceptions import GuardViolation, InvariantFailure
from .groups import FiniteGroup
from .logging_setup import LogCapture
from .perm_maps import (
    Perm,
    conjugacy_map_is_bijective,
    is_colouring_bijection,
    is_complete_mapping,
    is_strong_complete_mapping,
)

logger = structlog.get_logger(__name__)

LeafPredicate = Callable[[FiniteGroup, List[int]], bool]


class SearchTarget(str, Enum):
    COLOURING_BIJECTION = "cb"
    STRONG_COMPLETE_MAPPING = "scm"
    COMPLETE_MAPPING = "cm"


class SearchMode(str, Enum):
    FIRST = "first"
    COUNT = "count"
    ENUMERATE = "enumerate"


class BranchOrder(str, Enum):
    ASCENDING = "ascending"
    MOST_CONSTRAINED = "most-constrained"


TARGET_PREDICATES = {
    SearchTarget.COLOURING_BIJECTION: is_colouring_bijection,
    SearchTarget.STRONG_COMPLETE_MAPPING: is_strong_complete_mapping,
    SearchTarget.COMPLETE_MAPPING: is_complete_mapping,
}


class SearchConfig(BaseModel):
    """What to search for and how."""
    target: SearchTarget = Field(SearchTarget.COLOURING_BIJECTION, description="Predicate every result satisfies")
    mode: SearchMode = Field(SearchMode.FIRST, description="Stop at the first solution, count all, or list up to limit")
    limit: Optional[int] = Field(None, ge=1, description="Solutions to collect in enumerate mode")
    fix_identity: bool = Field(False, description="Only consider sigma(e) = e")
    node_budget: Optional[int] = Field(None, ge=1, description="Stop after this many assignments")
    order: BranchOrder = Field(BranchOrder.ASCENDING, description="Branching order")
    restarts: bool = Field(True, description="Randomized Luby restarts in first mode (most-constrained order)")
    seed: int = Field(default_factory=lambda: default_config.search.seed, ge=0)
    restart_unit: int = Field(default_factory=lambda: default_config.search.restart_unit, ge=1)
    jobs: int = Field(1, ge=1, description="Worker processes splitting the first branching level")

    @model_validator(mode="after")
    def check_limit(self):
        if self.mode is SearchMode.ENUMERATE and self.limit is None:
            raise ValueError("enumerate mode requires limit >= 1")
        return self

    @property
    def solution_limit(self) -> Optional[int]:
        if self.mode is SearchMode.FIRST:
            return 1
        if self.mode is SearchMode.ENUMERATE:
            return self.limit
        return None

    @property
    def uses_restarts(self) -> bool:
        return self.restarts and self.mode is SearchMode.FIRST and self.order is BranchOrder.MOST_CONSTRAINED


@dataclass
class SearchResult:
    """Outcome of a search; exhausted is False only when the node budget cut it short."""
    found: List[Perm]
    count: Optional[int]
    nodes_explored: int
    exhausted: bool
    filtered_count: Optional[int] = None
    restarts: int = 0
    elapsed_seconds: float = 0.0


def constraint_tables(group: FiniteGroup, target: SearchTarget) -> np.ndarray:
    """values[c, x, v]: the value of family c when sigma(x) = v. Family 0 is sigma itself."""
    n = group.order
    mul, inv = group.mul, group.inv
    idx = np.arange(n)
    own = np.broadcast_to(idx[None, :], (n, n))
    left_inverse = mul[inv]  # x^-1 v
    if target is SearchTarget.COLOURING_BIJECTION:
        families = [own, mul.T, left_inverse, mul[left_inverse, idx[:, None]]]
    elif target is SearchTarget.STRONG_COMPLETE_MAPPING:
        families = [own, mul, left_inverse]
    else:
        families = [own, mul]
    return np.stack([np.ascontiguousarray(f) for f in families]).astype(np.int64)


def luby(i: int) -> int:
    """i-th term (1-based) of the Luby sequence 1, 1, 2, 1, 1, 2, 4, ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


@dataclass
class _BranchOutcome:
    count: int = 0
    filtered: int = 0
    nodes: int = 0
    found: List[List[int]] = field(default_factory=list)
    stamps: List[int] = field(default_factory=list)
    budget_hit: bool = False


class _Backtracker:
    """Search state; private to one process or branch."""

    def __init__(
        self,
        group: FiniteGroup,
        config: SearchConfig,
        leaf_predicate: Optional[LeafPredicate] = None,
        values: Optional[np.ndarray] = None,
    ):
        self.group = group
        self.config = config
        self.leaf_predicate = leaf_predicate
        self.n = group.order
        self.values = constraint_tables(group, config.target) if values is None else values
        self.families = self.values.shape[0]
        self.limit = config.solution_limit
        self.budget = config.node_budget

        self.nodes = 0
        self.run_nodes = 0
        self.run_limit: Optional[int] = None
        self.outcome = _BranchOutcome()
        self.stop = False
        self.cut = False
        self.rng: Optional[np.random.Generator] = None
        self.images = [-1] * self.n

        if config.order is BranchOrder.ASCENDING:
            self._setup_ascending()
        else:
            self._setup_exact_cover()

    # -- shared bookkeeping -------------------------------------------------

    def _enter(self) -> bool:
        if self.budget is not None and self.nodes >= self.budget:
            self.outcome.budget_hit = True
            self.stop = True
            return False
        if self.run_limit is not None and self.run_nodes >= self.run_limit:
            self.cut = True
            self.stop = True
            return False
        self.nodes += 1
        self.run_nodes += 1
        return True

    def _leaf(self) -> None:
        outcome = self.outcome
        outcome.count += 1
        if self.leaf_predicate is not None and self.leaf_predicate(self.group, self.images):
            outcome.filtered += 1
        if self.limit is not None:
            outcome.found.append(list(self.images))
            outcome.stamps.append(self.nodes)
            if len(outcome.found) >= self.limit:
                self.stop = True

    # -- ascending order ----------------------------------------------------

    def _setup_ascending(self) -> None:
        n, k = self.n, self.families
        per_x = self.values.transpose(1, 2, 0).tolist()  # [x][v] -> k values
        self.rows = [[tuple(cell) for cell in row] for row in per_x]
        self.used = [bytearray(n) for _ in range(k)]
        self.sequence = list(range(n))
        if self.config.fix_identity:
            self._assign_ascending(0, 0)
            self.sequence = self.sequence[1:]

    def _assign_ascending(self, x: int, v: int) -> None:
        for used, w in zip(self.used, self.rows[x][v]):
            used[w] = 1
        self.images[x] = v

    def _release_ascending(self, x: int, v: int) -> None:
        for used, w in zip(self.used, self.rows[x][v]):
            used[w] = 0
        self.images[x] = -1

    def ascending_candidates(self, x: int) -> List[int]:
        used = self.used
        return [
            v for v, cell in enumerate(self.rows[x])
            if not any(u[w] for u, w in zip(used, cell))
        ]

    def _descend_ascending(self, position: int) -> None:
        if position == len(self.sequence):
            self._leaf()
            return
        x = self.sequence[position]
        for v in self.ascending_candidates(x):
            if not self._enter():
                return
            self._assign_ascending(x, v)
            self._descend_ascending(position + 1)
            self._release_ascending(x, v)
            if self.stop:
                return

    # -- most-constrained order (exact cover) -------------------------------

    def _setup_exact_cover(self) -> None:
        n, k = self.n, self.families
        offsets = (np.arange(k) * n + n)[:, None, None]
        domain = np.broadcast_to(np.arange(n)[:, None], (n, n))[None]
        items = np.concatenate([domain, self.values + offsets]).reshape(k + 1, n * n).T
        self.option_items = np.ascontiguousarray(items)  # (n*n, k+1)
        self.item_count = (k + 1) * n
        order = np.argsort(self.option_items.T.ravel(), kind="stable")
        self.item_options = (order % (n * n)).reshape(self.item_count, n)
        self.covered = np.zeros(self.item_count, dtype=bool)
        self.depth0 = 0
        if self.config.fix_identity:
            self._cover(0)
            self.depth0 = 1

    def _cover(self, option: int) -> None:
        self.covered[self.option_items[option]] = True
        x, v = divmod(option, self.n)
        self.images[x] = v

    def _uncover(self, option: int) -> None:
        self.covered[self.option_items[option]] = False
        self.images[option // self.n] = -1

    def exact_cover_candidates(self) -> Optional[np.ndarray]:
        """Live options of the most constrained uncovered item, ascending; None at a dead end."""
        live = ~self.covered[self.option_items].any(axis=1)
        counts = np.bincount(self.option_items[live].ravel(), minlength=self.item_count)
        counts[self.covered] = self.n + 1
        best = int(counts.argmin())
        if counts[best] == 0:
            return None
        options = self.item_options[best]
        return options[live[options]]

    def _descend_exact_cover(self, depth: int) -> None:
        if depth == self.n:
            self._leaf()
            return
        options = self.exact_cover_candidates()
        if options is None:
            return
        if self.rng is not None:
            options = self.rng.permutation(options)
        for option in options.tolist():
            if not self._enter():
                return
            self._cover(option)
            self._descend_exact_cover(depth + 1)
            self._uncover(option)
            if self.stop:
                return

    # -- drivers ------------------------------------------------------------

    def root_branches(self) -> List[int]:
        """First-level choices in sequential order: values for ascending, options for exact cover."""
        if self.config.order is BranchOrder.ASCENDING:
            if not self.sequence:
                return []
            return self.ascending_candidates(self.sequence[0])
        if self.depth0 == self.n:
            return []
        options = self.exact_cover_candidates()
        return [] if options is None else options.tolist()

    def run(self) -> _BranchOutcome:
        if self.config.order is BranchOrder.ASCENDING:
            self._descend_ascending(0)
        else:
            self._descend_exact_cover(self.depth0)
        self.outcome.nodes = self.nodes
        return self.outcome

    def run_branch(self, branch: int) -> _BranchOutcome:
        """Explore one first-level branch, counting the branch assignment as a node."""
        if self._enter():
            if self.config.order is BranchOrder.ASCENDING:
                x = self.sequence[0]
                self._assign_ascending(x, branch)
                self.sequence = self.sequence[1:]
                self._descend_ascending(0)
            else:
                self._cover(branch)
                self._descend_exact_cover(self.depth0 + 1)
        self.outcome.nodes = self.nodes
        return self.outcome

    def run_with_restarts(self) -> Tuple[_BranchOutcome, int]:
        """Seeded Luby restarts; returns the outcome and the number of restarts used."""
        self.rng = np.random.default_rng(self.config.seed)
        unit = self.config.restart_unit
        attempt = 0
        while True:
            attempt += 1
            self.run_limit = unit * luby(attempt)
            self.run_nodes = 0
            self.stop = self.cut = False
            self._descend_exact_cover(self.depth0)
            if self.outcome.found or self.outcome.budget_hit or not self.cut:
                break
            logger.debug("Restarting search", attempt=attempt, nodes=self.nodes)
        self.outcome.nodes = self.nodes
        return self.outcome, attempt - 1


def _run_branch_job(
    group: FiniteGroup,
    config: SearchConfig,
    leaf_predicate: Optional[LeafPredicate],
    branch: int,
) -> _BranchOutcome:
    return _Backtracker(group, config, leaf_predicate).run_branch(branch)


def _merge_branches(outcomes: List[_BranchOutcome], limit: Optional[int]) -> _BranchOutcome:
    """Combine branch results exactly as the sequential search would have produced them."""
    merged = _BranchOutcome()
    for outcome in outcomes:
        if limit is not None and len(merged.found) + len(outcome.found) >= limit:
            needed = limit - len(merged.found)
            merged.found.extend(outcome.found[:needed])
            merged.count += needed
            merged.nodes += outcome.stamps[needed - 1]
            return merged
        merged.found.extend(outcome.found)
        merged.count += outcome.count
        merged.filtered += outcome.filtered
        merged.nodes += outcome.nodes
    return merged


def search(
    group: FiniteGroup,
    config: Optional[SearchConfig] = None,
    leaf_predicate: Optional[LeafPredicate] = None,
) -> SearchResult:
    """
    Backtracking search over bijections of the group.

    Args:
        group: Group to search on
        config: Target, mode, identity fixing, budget, branching order and jobs
        leaf_predicate: Extra test applied to every complete solution; passing
            leaves are tallied in SearchResult.filtered_count

    Returns:
        SearchResult; budget exhaustion is reported through exhausted=False

    Raises:
        GuardViolation: count or enumerate mode without a budget above the exhaustive guard
    """
    config = config or SearchConfig()
    guard = default_config.search.exhaustive_guard
    if config.mode is not SearchMode.FIRST and config.node_budget is None and group.order > guard:
        raise GuardViolation(
            f"{config.mode.value} search on {group.name} (order {group.order}) needs a node budget above order {guard}"
        )

    jobs = config.jobs
    if jobs > 1 and (config.node_budget is not None or config.uses_restarts):
        logger.info("Running single-threaded", reason="budget or restarts", requested_jobs=jobs)
        jobs = 1

    started = time.perf_counter()
    restarts = 0
    with LogCapture(logger, "search", group=group.name, target=config.target.value, mode=config.mode.value):
        searcher = _Backtracker(group, config, leaf_predicate)
        if config.uses_restarts:
            outcome, restarts = searcher.run_with_restarts()
        elif jobs > 1:
            branches = searcher.root_branches()
            workers = min(jobs, default_config.processing.max_workers, max(1, len(branches)))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_run_branch_job, group, config, leaf_predicate, branch)
                    for branch in branches
                ]
                outcome = _merge_branches([f.result() for f in futures], config.solution_limit)
        else:
            outcome = searcher.run()

    predicate = TARGET_PREDICATES[config.target]
    found = [Perm(group, images) for images in outcome.found]
    for perm in found:
        if not predicate(group, perm):
            raise InvariantFailure(f"search emitted a map failing the {config.target.value} predicate")

    result = SearchResult(
        found=found,
        count=outcome.count if config.mode is SearchMode.COUNT else None,
        nodes_explored=outcome.nodes,
        exhausted=not outcome.budget_hit,
        filtered_count=outcome.filtered if leaf_predicate is not None else None,
        restarts=restarts,
        elapsed_seconds=time.perf_counter() - started,
    )
    logger.info(
        "Search finished",
        group=group.name,
        found=len(found),
        count=result.count,
        nodes=result.nodes_explored,
        exhausted=result.exhausted,
    )
    return result


@dataclass
class CensusResult:
    scm_count: int
    cb_count: int
    ratio: Optional[float]
    nodes_explored: int
    exhausted: bool


def scm_census(
    group: FiniteGroup,
    budget: Optional[int] = None,
    fix_identity: bool = False,
    jobs: int = 1,
) -> CensusResult:
    """
    Count strong complete mappings and, on the same search tree, colouring bijections.

    A bijection sigma is a colouring bijection exactly when tau = sigma^-1 is a
    strong complete mapping whose conjugacy map x -> tau(x)^-1 x tau(x) is a
    bijection, so every SCM leaf tau is tested for that instead of running a
    second search.

    Raises:
        GuardViolation: unbudgeted census above the configured order
    """
    guard = default_config.search.census_guard
    if budget is None and group.order > guard:
        raise GuardViolation(f"Full census limited to order {guard}; {group.name} has order {group.order}")
    config = SearchConfig(
        target=SearchTarget.STRONG_COMPLETE_MAPPING,
        order=BranchOrder.MOST_CONSTRAINED,
        mode=SearchMode.COUNT,
        fix_identity=fix_identity,
        node_budget=budget,
        jobs=jobs,
    )
    result = search(group, config, leaf_predicate=conjugacy_map_is_bijective)
    scm, cb = result.count or 0, result.filtered_count or 0
    ratio = cb / scm if scm else None
    logger.info("Census finished", group=group.name, scm=scm, cb=cb, ratio=ratio, exhausted=result.exhausted)
    return CensusResult(scm, cb, ratio, result.nodes_explored, result.exhausted)


def family_images_are_bijective(values: np.ndarray, images: Sequence[int]) -> bool:
    """True iff x -> values[c, x, images[x]] is a permutation for every family c."""
    images = np.asarray(images, dtype=np.int64)
    rows = values[:, np.arange(values.shape[1]), images]
    n = values.shape[1]
    return all(np.unique(row).size == n for row in rows)


def find_family_bijection(
    group: FiniteGroup,
    values: np.ndarray,
    node_budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> Optional[Perm]:
    """
    First identity-fixing bijection for an arbitrary stack of constraint families.

    Args:
        group: Domain of the bijection
        values: values[c, x, v] is the value family c takes when sigma(x) = v;
            every row values[c, x, :] must itself be a permutation
        node_budget: Optional assignment budget
        seed: Restart seed; defaults to the configured seed

    Returns:
        The bijection, or None when the budget runs out
    """
    n = group.order
    if values.shape[1:] != (n, n):
        raise ValueError(f"constraint families must have shape (k, {n}, {n}), got {values.shape}")
    config = SearchConfig(
        fix_identity=bool(np.all(values[:, 0, 0] == 0)),
        order=BranchOrder.MOST_CONSTRAINED,
        node_budget=node_budget,
        seed=default_config.search.seed if seed is None else seed,
    )
    outcome, restarts = _Backtracker(group, config, values=values).run_with_restarts()
    if not outcome.found:
        logger.info("No family bijection within budget", group=group.name, nodes=outcome.nodes)
        return None
    images = outcome.found[0]
    if not family_images_are_bijective(values, images):
        raise InvariantFailure("search emitted a map violating its constraint families")
    logger.debug("Found family bijection", group=group.name, nodes=outcome.nodes, restarts=restarts)
    return Perm(group, images)


def oracle_count(group: FiniteGroup, target: SearchTarget, fix_identity: bool = False) -> int:
    """Unpruned count: filter every permutation through the predicate. For tiny groups only."""
    predicate = TARGET_PREDICATES[target]
    n = group.order
    if fix_identity:
        candidates = ((0,) + rest for rest in permutations(range(1, n)))
    else:
        candidates = permutations(range(n))
    return sum(1 for images in candidates if predicate(group, Perm(group, images)))
