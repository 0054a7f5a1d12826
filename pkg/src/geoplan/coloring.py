"""Exact enumeration of proper k-colorings of the conflict graph.

Colorings are treated as unlabeled partitions into exactly k non-empty
independent classes; the assignment of concrete files to classes is a
separate step.  Enumeration is a backtracking search with two symmetry
breaks: a seed clique (found greedily, and in conflict graphs every
closed in-neighborhood is one) is placed first so its members pin the
k classes, and classes are only opened in first-use order so each
partition appears exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .nngraph import ExtendedGraph


@dataclass(frozen=True)
class Coloring:
    """Partition into k classes; ``classes`` sorted by smallest member."""

    classes: tuple[tuple[int, ...], ...]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of(self) -> tuple[int, ...]:
        """Per node index, the index of its class."""
        n = sum(len(c) for c in self.classes)
        out = [0] * n
        for idx, members in enumerate(self.classes):
            for v in members:
                out[v] = idx
        return tuple(out)

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Canonical comparison key."""
        return self.classes


@dataclass(frozen=True)
class Infeasible:
    """No proper k-coloring exists.

    ``certificate`` is a clique of k+1 nodes when the search found one,
    otherwise None with ``exhausted`` confirming the full search ran.
    """

    certificate: tuple[int, ...] | None
    exhausted: bool = True


def is_proper_partition(h: ExtendedGraph, classes: Sequence[Sequence[int]]) -> bool:
    """Independent-set check for every class; used as a test verifier."""
    masks = h.adjacency_masks()
    for members in classes:
        for v in members:
            for w in members:
                if w != v and (masks[v] >> w) & 1:
                    return False
    return True


def _greedy_clique(h: ExtendedGraph, stop_above: int) -> tuple[int, ...]:
    """Largest clique found greedily; stops early past ``stop_above`` nodes."""
    masks = h.adjacency_masks()
    n = h.node_count
    order = sorted(range(n), key=lambda v: (-masks[v].bit_count(), v))
    best: tuple[int, ...] = ()
    for seed in order:
        clique = [seed]
        clique_mask = 1 << seed
        for u in order:
            if u == seed or (clique_mask >> u) & 1:
                continue
            if masks[u] & clique_mask == clique_mask:
                clique.append(u)
                clique_mask |= 1 << u
                if len(clique) > stop_above:
                    return tuple(sorted(clique))
        if len(clique) > len(best):
            best = tuple(sorted(clique))
            if len(best) > stop_above:
                break
    return best


def _vertex_order(h: ExtendedGraph, k: int) -> list[int]:
    masks = h.adjacency_masks()
    seed = _greedy_clique(h, stop_above=k)[: k + 1]
    rest = sorted(
        (v for v in range(h.node_count) if v not in seed),
        key=lambda v: (-masks[v].bit_count(), v),
    )
    return list(seed) + rest


def iter_colorings(h: ExtendedGraph, k: int) -> Iterator[Coloring]:
    """Yield every partition into exactly k proper classes, each once.

    Deterministic order fixed by the internal vertex order.
    """
    n = h.node_count
    if k < 1 or n == 0:
        return
    masks = h.adjacency_masks()
    order = _vertex_order(h, k)
    class_masks = [0] * k
    assigned: list[int] = []

    def walk(pos: int, used: int) -> Iterator[Coloring]:
        if pos == n:
            if used == k:
                classes = [[] for _ in range(k)]
                for node, cls in zip(order, assigned):
                    classes[cls].append(node)
                yield Coloring(
                    classes=tuple(sorted(tuple(sorted(c)) for c in classes))
                )
            return
        if used + (n - pos) < k:
            return  # not enough nodes left to open all k classes
        v = order[pos]
        limit = min(used + 1, k)
        for cls in range(limit):
            if class_masks[cls] & masks[v]:
                continue
            class_masks[cls] |= 1 << v
            assigned.append(cls)
            yield from walk(pos + 1, max(used, cls + 1))
            assigned.pop()
            class_masks[cls] &= ~(1 << v)

    yield from walk(0, 0)


@dataclass(frozen=True)
class ColoringEnumeration:
    colorings: tuple[Coloring, ...]
    truncated: bool


def enumerate_colorings(h: ExtendedGraph, k: int, limit: int = 10_000) -> ColoringEnumeration:
    """Collect up to ``limit`` colorings; flags truncation if more exist."""
    out: list[Coloring] = []
    truncated = False
    for coloring in iter_colorings(h, k):
        if len(out) == limit:
            truncated = True
            break
        out.append(coloring)
    return ColoringEnumeration(colorings=tuple(out), truncated=truncated)


def find_coloring(h: ExtendedGraph, k: int) -> Coloring | Infeasible:
    """First coloring in enumeration order, or an infeasibility witness."""
    for coloring in iter_colorings(h, k):
        return coloring
    clique = _greedy_clique(h, stop_above=k)
    if len(clique) > k:
        return Infeasible(certificate=clique[: k + 1], exhausted=True)
    return Infeasible(certificate=None, exhausted=True)
