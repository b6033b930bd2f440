"""Stars in backward graphs and galaxy-ordering recognition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .tournament import Tournament, backward_graph, check_ordering, from_backward_edges

MAX_GALAXY_SEARCH_N = 9

Side = Literal["left", "right"]


class CapabilityError(RuntimeError):
    """Input is outside the size range an exhaustive procedure supports."""


@dataclass(frozen=True)
class StarComponent:
    """A star of the backward graph; all fields are 0-indexed positions."""

    center: int
    leaves: tuple[int, ...]
    side: Side


@dataclass(frozen=True)
class GalaxyCert:
    order: tuple[int, ...]
    stars: tuple[StarComponent, ...]
    singletons: tuple[int, ...]
    regular: bool


def _components(n: int, adj: dict[int, set[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            p = stack.pop()
            comp.append(p)
            for q in adj[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        comps.append(sorted(comp))
    return comps


def _star_center(comp: list[int], adj: dict[int, set[int]]) -> int | None:
    """Center of a star component with at least 3 vertices, else None."""
    edges = sum(len(adj[p]) for p in comp) // 2
    if edges != len(comp) - 1:
        return None
    hubs = [p for p in comp if len(adj[p]) == len(comp) - 1]
    return hubs[0] if len(hubs) == 1 else None


def _between(x: int, leaves: Sequence[int]) -> bool:
    return min(leaves) < x < max(leaves)


def is_galaxy_ordering(T: Tournament, order: Sequence[int]) -> GalaxyCert | None:
    """Certificate that ``order`` is a galaxy ordering of ``T``, or None.

    A one-edge component may take either endpoint as its center; each one is
    given the first designation whose center avoids every other star's leaf
    span. One-leaf stars have no span, so these choices are independent.
    """
    order = check_ordering(T.n, order)
    bg = backward_graph(T, order)
    adj = bg.adjacency()
    big: list[StarComponent] = []
    pairs: list[tuple[int, int]] = []
    singletons: list[int] = []
    for comp in _components(T.n, adj):
        if len(comp) == 1:
            singletons.append(comp[0])
        elif len(comp) == 2:
            pairs.append((comp[0], comp[1]))
        else:
            center = _star_center(comp, adj)
            if center is None:
                return None
            leaves = tuple(p for p in comp if p != center)
            if center < min(leaves):
                big.append(StarComponent(center, leaves, "left"))
            elif center > max(leaves):
                big.append(StarComponent(center, leaves, "right"))
            else:
                return None
    for a in big:
        for b in big:
            if a is not b and _between(a.center, b.leaves):
                return None
    stars = list(big)
    for lo, hi in pairs:
        for center, leaf, side in ((lo, hi, "left"), (hi, lo, "right")):
            if not any(_between(center, s.leaves) for s in big):
                stars.append(StarComponent(center, (leaf,), side))
                break
        else:
            return None
    stars.sort(key=lambda s: min(s.center, *s.leaves))
    return GalaxyCert(order, tuple(stars), tuple(singletons), regular=not singletons)


def _partial_ok(adj: dict[int, set[int]], placed: int) -> bool:
    """Necessary conditions on the backward graph of a prefix ordering.

    Later positions only add edges at later vertices, so a component that is
    already not a star, a center with leaves on both sides, or a center inside
    another multi-leaf star's leaf span can never be repaired.
    """
    sub = {p: {q for q in adj[p] if q < placed} for p in range(placed)}
    centres = []
    for comp in _components(placed, sub):
        if len(comp) < 3:
            continue
        center = _star_center(comp, sub)
        if center is None:
            return False
        leaves = [p for p in comp if p != center]
        if min(leaves) < center < max(leaves):
            return False
        centres.append((center, leaves))
    for c1, _ in centres:
        for c2, leaves in centres:
            if c1 != c2 and _between(c1, leaves):
                return False
    return True


def find_galaxy_ordering(T: Tournament) -> GalaxyCert | None:
    """Search orderings position by position with structural pruning."""
    n = T.n
    if n > MAX_GALAXY_SEARCH_N:
        raise CapabilityError(
            f"galaxy search is exhaustive and limited to n <= {MAX_GALAXY_SEARCH_N}"
        )
    order: list[int] = []
    used = [False] * n
    adj: dict[int, set[int]] = {p: set() for p in range(n)}

    def place(pos: int) -> GalaxyCert | None:
        if pos == n:
            return is_galaxy_ordering(T, order)
        for w in range(n):
            if used[w]:
                continue
            back = [i for i in range(pos) if T.edge(w, order[i])]
            for i in back:
                adj[i].add(pos)
                adj[pos].add(i)
            order.append(w)
            used[w] = True
            if _partial_ok(adj, pos + 1):
                found = place(pos + 1)
                if found is not None:
                    return found
            used[w] = False
            order.pop()
            for i in back:
                adj[i].discard(pos)
            adj[pos].clear()
        return None

    return place(0)


def is_galaxy(T: Tournament) -> bool:
    return find_galaxy_ordering(T) is not None


def build_star(t: int, side: Side) -> Tournament:
    """Star on ``t`` leaves under the identity ordering.

    Left: center at position 0 beaten by every leaf. Right: center at
    position ``t`` beating every leaf.
    """
    if t < 1:
        raise ValueError("a star needs at least one leaf")
    if side == "left":
        pairs = [(0, j) for j in range(1, t + 1)]
    elif side == "right":
        pairs = [(i, t) for i in range(t)]
    else:
        raise ValueError(f"unknown side {side!r}")
    return from_backward_edges(t + 1, pairs)
