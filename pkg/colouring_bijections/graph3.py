"""
The Cayley graph of G^3 with connection set S3 and its colouring c(x, y, z) = x^-1 sigma(y) z.

S3 consists of the triples (g,e,e), (e,g,e), (e,e,g), (g,g,e), (e,g,g), (g,g,g)
for g != e; a vertex v is joined to s v for every s in S3. The graph is
never materialised: properness is checked move by move over the full
colour array.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, NamedTuple, Optional, Tuple, Union

import numpy as np
import structlog

from .config import default_config
from .exceptions import GuardViolation
from .groups import FiniteGroup
from .logging_setup import LogCapture
from .perm_maps import Perm, is_colouring_bijection
from .utils import ensure_directory

logger = structlog.get_logger(__name__)

PATTERNS: Tuple[Tuple[int, int, int], ...] = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (0, 1, 1),
    (1, 1, 1),
)


class Vertex(NamedTuple):
    x: int
    y: int
    z: int

    def format(self, group: FiniteGroup) -> str:
        return "(" + ", ".join(group.format_element(c) for c in self) + ")"


def neighbors(group: FiniteGroup, v: Vertex) -> Iterator[Vertex]:
    """The 6(n-1) vertices s v for s in S3, pattern by pattern, g ascending."""
    table = group.table
    for pattern in PATTERNS:
        for g in range(1, group.order):
            yield Vertex(*(table[g][c] if bit else c for bit, c in zip(pattern, v)))


def is_adjacent(group: FiniteGroup, u: Vertex, v: Vertex) -> bool:
    """v = s u for some s in S3."""
    table, inv = group.table, group.inv_list
    diff = [table[b][inv[a]] for a, b in zip(u, v)]
    support = tuple(int(d != 0) for d in diff)
    if support not in PATTERNS:
        return False
    values = {d for d in diff if d != 0}
    return len(values) == 1


def colour_value(group: FiniteGroup, sigma: Perm, v: Vertex) -> int:
    """c(x, y, z) = x^-1 sigma(y) z."""
    table, inv = group.table, group.inv_list
    return table[table[inv[v.x]][sigma(v.y)]][v.z]


def colour_array(group: FiniteGroup, sigma: Perm) -> np.ndarray:
    """All colours at once, indexed [x, y, z]."""
    dtype = np.int16 if group.order < 2 ** 15 else np.int32
    left = group.mul[group.inv][:, sigma.images]
    return group.mul[left].astype(dtype)


@dataclass
class ChromaticCertificate:
    """What an exhaustive check of the colouring established."""
    group: str
    sigma: Perm
    is_colouring_bijection: bool
    colours_used: int
    class_sizes_uniform: bool
    clique: List[Vertex]
    clique_verified: bool
    proper: bool
    vertices_checked: int
    moves_checked: int
    violation: Optional[Tuple[Vertex, Vertex]] = None
    conclusion: Optional[int] = None
    notes: List[str] = field(default_factory=list)


def _move_index(group: FiniteGroup, pattern: Tuple[int, int, int], g: int):
    n = group.order
    identity = np.arange(n)
    rows = group.mul[g]  # g c for every c
    return np.ix_(*(rows if bit else identity for bit in pattern))


def _bad_vertices(group: FiniteGroup, colours: np.ndarray, moves: List[Tuple[Tuple[int, int, int], int]]) -> np.ndarray:
    bad = np.zeros(colours.shape, dtype=bool)
    for pattern, g in moves:
        bad |= colours[_move_index(group, pattern, g)] == colours
    return bad


def _first_violation(group: FiniteGroup, colours: np.ndarray, bad: np.ndarray) -> Tuple[Vertex, Vertex]:
    n = group.order
    flat = int(np.argmax(bad.ravel()))
    u = Vertex(flat // (n * n), (flat // n) % n, flat % n)
    target = colours[u]
    candidates = [v for v in neighbors(group, u) if colours[v] == target]
    return u, min(candidates)


def verify_proper(group: FiniteGroup, sigma: Perm, jobs: int = 1) -> ChromaticCertificate:
    """
    Exhaustively check that adjacent vertices of the graph receive distinct colours.

    The check runs even when sigma is not a colouring bijection; a failure
    is reported through the certificate, with the lexicographically first
    offending (vertex, neighbour) pair.

    Args:
        group: G
        sigma: Bijection of G
        jobs: Worker threads; moves are split between them

    Returns:
        ChromaticCertificate
    """
    n = group.order
    limit = default_config.graph.max_verify_order
    if n > limit:
        raise GuardViolation(f"graph check is limited to order {limit}; {group.name} has order {n}")
    precondition = is_colouring_bijection(group, sigma)
    notes = [] if precondition else ["sigma is not a colouring bijection"]

    with LogCapture(logger, "graph check", group=group.name, jobs=jobs):
        colours = colour_array(group, sigma)
        moves = [(pattern, g) for pattern in PATTERNS for g in range(1, n)]
        if jobs > 1 and moves:
            workers = min(jobs, default_config.processing.max_workers, len(moves))
            chunks = [moves[i::workers] for i in range(workers)]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                partial = list(pool.map(lambda chunk: _bad_vertices(group, colours, chunk), chunks))
            bad = np.logical_or.reduce(partial)
        else:
            bad = _bad_vertices(group, colours, moves)

        proper = not bool(bad.any())
        violation = None if proper else _first_violation(group, colours, bad)

        counts = np.bincount(colours.ravel().astype(np.int64), minlength=n)
        colours_used = int(np.count_nonzero(counts))
        uniform = bool(np.all(counts == n * n))

        clique = [Vertex(x, 0, 0) for x in range(n)]
        clique_verified = all(
            is_adjacent(group, clique[i], clique[j]) for i in range(n) for j in range(i + 1, n)
        )

    conclusion = n if proper and clique_verified and colours_used == n else None
    if proper and not precondition:
        notes.append("proper colouring from a map failing the colouring-bijection predicate")
    certificate = ChromaticCertificate(
        group=group.name,
        sigma=sigma,
        is_colouring_bijection=precondition,
        colours_used=colours_used,
        class_sizes_uniform=uniform,
        clique=clique,
        clique_verified=clique_verified,
        proper=proper,
        vertices_checked=n ** 3,
        moves_checked=len(moves),
        violation=violation,
        conclusion=conclusion,
        notes=notes,
    )
    logger.info(
        "Graph check finished",
        group=group.name,
        proper=proper,
        colours_used=colours_used,
        conclusion=conclusion,
    )
    return certificate


def edges(group: FiniteGroup) -> Iterator[Tuple[int, int]]:
    """Unordered edges (u, v), u < v, as 0-based vertex numbers x n^2 + y n + z."""
    n = group.order
    for x in range(n):
        for y in range(n):
            for z in range(n):
                u = (x * n + y) * n + z
                seen = set()
                for w in neighbors(group, Vertex(x, y, z)):
                    v = (w.x * n + w.y) * n + w.z
                    if v > u and v not in seen:
                        seen.add(v)
                        yield u, v


def export_dimacs(group: FiniteGroup, path: Union[str, Path]) -> Path:
    """
    Write the graph in DIMACS edge format (1-based vertices).

    Raises:
        GuardViolation: above the configured export order
    """
    limit = default_config.graph.dimacs_max_order
    if group.order > limit:
        raise GuardViolation(f"DIMACS export is limited to order {limit}; {group.name} has order {group.order}")
    edge_list = list(edges(group))
    path = Path(path)
    ensure_directory(path.parent)
    with path.open("w") as handle:
        handle.write(f"c Cayley graph of {group.name}^3 with connection set S3\n")
        handle.write(f"p edge {group.order ** 3} {len(edge_list)}\n")
        for u, v in edge_list:
            handle.write(f"e {u + 1} {v + 1}\n")
    logger.info("Exported DIMACS graph", group=group.name, path=str(path), edges=len(edge_list))
    return path
