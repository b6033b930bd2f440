"""Tournament representation, orderings, backward-edge graphs, density and tr.

Vertices are ``0..n-1``. Adjacency is stored as one out-neighbour bitmask per
vertex, so set operations on vertex subsets are plain integer operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class TournamentError(ValueError):
    """Raised for malformed tournaments, orderings or vertex subsets."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Tournament:
    n: int
    out: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.out) != self.n:
            raise TournamentError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.out):
            if row & ~full or row >> u & 1:
                raise TournamentError(f"bad out-neighbourhood at vertex {u}")
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if (self.out[u] >> v & 1) == (self.out[v] >> u & 1):
                    raise TournamentError(f"pair ({u}, {v}) is not oriented exactly once")

    # construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Tournament:
        out = [0] * n
        for u, v in edges:
            out[u] |= 1 << v
        return cls(n, tuple(out))

    @classmethod
    def from_predicate(cls, n: int, beats) -> Tournament:
        """Build from a function ``beats(u, v)`` consulted once for every u < v."""
        out = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if beats(u, v):
                    out[u] |= 1 << v
                else:
                    out[v] |= 1 << u
        return cls(n, tuple(out))

    @classmethod
    def transitive(cls, n: int) -> Tournament:
        return from_backward_edges(n, ())

    @classmethod
    def random(cls, n: int, rng: random.Random, p_forward: float = 0.5) -> Tournament:
        return cls.from_predicate(n, lambda u, v: rng.random() < p_forward)

    # queries ------------------------------------------------------------

    def edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def in_mask(self, v: int) -> int:
        return self.full & ~self.out[v] & ~(1 << v)

    def out_degree(self, v: int) -> int:
        return popcount(self.out[v])

    def scores(self) -> tuple[int, ...]:
        return tuple(popcount(row) for row in self.out)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.out[u]):
                yield u, v

    def relabel(self, perm: Sequence[int]) -> Tournament:
        """Return the tournament whose vertex ``i`` is old vertex ``perm[i]``."""
        pos = {old: new for new, old in enumerate(perm)}
        if sorted(pos) != list(range(self.n)):
            raise TournamentError("relabeling is not a permutation")
        return Tournament.from_edges(self.n, ((pos[u], pos[v]) for u, v in self.edges()))

    def __repr__(self) -> str:
        back = backward_graph(self, range(self.n)).pairs
        return f"Tournament(n={self.n}, backward={sorted(back)})"


@dataclass(frozen=True)
class BackwardGraph:
    """Backward pairs of a tournament under an ordering, as 0-indexed positions.

    ``pairs`` holds ``(i, j)`` with ``i < j`` whenever the vertex at position
    ``j`` beats the vertex at position ``i``.
    """

    order: tuple[int, ...]
    pairs: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.order)

    def one_indexed(self) -> set[tuple[int, int]]:
        return {(i + 1, j + 1) for i, j in self.pairs}

    def mirror(self) -> frozenset[tuple[int, int]]:
        n = self.n
        return frozenset((n - 1 - j, n - 1 - i) for i, j in self.pairs)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {p: set() for p in range(self.n)}
        for i, j in self.pairs:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def check_ordering(n: int, order: Iterable[int]) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise TournamentError(f"ordering {order} is not a permutation of 0..{n - 1}")
    return order


def from_backward_edges(n: int, pairs: Iterable[tuple[int, int]]) -> Tournament:
    """Tournament whose identity ordering has exactly ``pairs`` as backward pairs."""
    if n < 0:
        raise TournamentError("negative vertex count")
    seen: set[tuple[int, int]] = set()
    for a, b in pairs:
        if not (0 <= a < b < n):
            raise TournamentError(f"backward pair {(a, b)} out of range or not increasing")
        if (a, b) in seen:
            raise TournamentError(f"duplicate backward pair {(a, b)}")
        seen.add((a, b))
    return Tournament.from_predicate(n, lambda a, b: (a, b) not in seen)


def backward_graph(T: Tournament, order: Iterable[int]) -> BackwardGraph:
    order = check_ordering(T.n, order)
    pairs = frozenset(
        (i, j)
        for i in range(T.n)
        for j in range(i + 1, T.n)
        if T.edge(order[j], order[i])
    )
    return BackwardGraph(order, pairs)


def complement(T: Tournament) -> Tournament:
    return Tournament(T.n, tuple(T.in_mask(v) for v in range(T.n)))


def induced(T: Tournament, S: Iterable[int]) -> tuple[Tournament, tuple[int, ...]]:
    """Subtournament on ``S``; also returns the map new vertex -> host vertex."""
    members = tuple(sorted(set(S)))
    if not members:
        raise TournamentError("cannot induce on an empty vertex set")
    if members[0] < 0 or members[-1] >= T.n:
        raise TournamentError("vertex subset out of range")
    sub = Tournament.from_predicate(len(members), lambda a, b: T.edge(members[a], members[b]))
    return sub, members


def is_transitive(T: Tournament, mask: int | None = None) -> tuple[int, ...] | None:
    """Transitive ordering of ``T`` (or of the subset ``mask``), or None.

    In a transitive tournament the scores are exactly ``n-1, ..., 0``, so
    sorting by descending score and checking each vertex beats the rest is
    both necessary and sufficient.
    """
    if mask is None:
        mask = T.full
    verts = sorted(bits(mask), key=lambda v: -popcount(T.out[v] & mask))
    rest = mask
    for v in verts:
        rest &= ~(1 << v)
        if T.out[v] & rest != rest:
            return None
    return tuple(verts)


def find_triangle(T: Tournament, mask: int | None = None) -> tuple[int, int, int] | None:
    """A directed 3-cycle ``a -> b -> c -> a`` inside ``mask``, if any."""
    if mask is None:
        mask = T.full
    for a in bits(mask):
        ins_a = T.in_mask(a) & mask
        for b in bits(T.out[a] & mask):
            c = T.out[b] & ins_a
            if c:
                return a, b, (c & -c).bit_length() - 1
    return None


def _check_subset(T: Tournament, S: Iterable[int]) -> int:
    mask = 0
    for v in S:
        if not 0 <= v < T.n:
            raise TournamentError(f"vertex {v} out of range")
        mask |= 1 << v
    return mask


def edge_count(T: Tournament, X: Iterable[int], Y: Iterable[int]) -> int:
    """Number of edges from ``X`` into ``Y``."""
    ymask = _check_subset(T, Y)
    return sum(popcount(T.out[x] & ymask) for x in X)


def density(T: Tournament, X: Iterable[int], Y: Iterable[int]) -> Fraction:
    """Exact directed density from ``X`` to ``Y``."""
    X, Y = list(X), list(Y)
    xmask, ymask = _check_subset(T, X), _check_subset(T, Y)
    if not X or not Y:
        raise TournamentError("density needs nonempty sets")
    if xmask & ymask:
        raise TournamentError("density needs disjoint sets")
    edges = sum(popcount(T.out[x] & ymask) for x in bits(xmask))
    return Fraction(edges, popcount(xmask) * popcount(ymask))


# maximum transitive subtournament -------------------------------------------


def tr_exact(T: Tournament, mask: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Size of a largest transitive subset and a witness in transitive order.

    Russian-doll search: vertices get fixed positions and ``c[i]`` is the
    answer restricted to positions ``>= i``, filled from the back. A partial
    set keeps the mask of vertices that close no triangle with it, and a
    candidate mask whose lowest position is ``j`` can add at most ``c[j]``.
    Since ``c[i] <= c[i+1] + 1`` each stage stops at its first improvement.
    """
    if mask is None:
        mask = T.full
    if not mask:
        return 0, ()
    verts = sorted(bits(mask), key=lambda u: (popcount(T.out[u] & mask), u))
    k = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    full = (1 << k) - 1
    out = [sum(1 << pos[w] for w in bits(T.out[v] & mask)) for v in verts]
    inn = [full & ~out[i] & ~(1 << i) for i in range(k)]
    c = [0] * (k + 1)
    best: list[int] = []
    chosen: list[int] = []
    record = 0

    def search(C: int) -> bool:
        nonlocal record, best
        if not C:
            if len(chosen) > record:
                record, best = len(chosen), list(chosen)
                return True
            return False
        size = len(chosen)
        while C:
            if size + popcount(C) <= record:
                return False
            low = C & -C
            u = low.bit_length() - 1
            if size + c[u] <= record:
                return False
            C ^= low
            sub = C
            for x in chosen:
                # third vertices closing a cyclic triangle with u and x
                sub &= ~(out[x] & inn[u] if out[u] >> x & 1 else out[u] & inn[x])
            chosen.append(u)
            found = search(sub)
            chosen.pop()
            if found:
                return True
        return False

    for i in range(k - 1, -1, -1):
        record = c[i + 1]
        chosen.append(i)
        search(full & ~((1 << (i + 1)) - 1))
        chosen.pop()
        c[i] = record
    wmask = sum(1 << p for p in best)
    best.sort(key=lambda p: -popcount(out[p] & wmask))
    return c[0], tuple(verts[p] for p in best)


def tr_bruteforce(T: Tournament) -> int:
    """Subset enumeration oracle for small ``n``: largest triangle-free subset."""
    best = 0
    for mask in range(1 << T.n):
        k = popcount(mask)
        if k > best and find_triangle(T, mask) is None:
            best = k
    return best


def random_ordering(n: int, rng: random.Random) -> tuple[int, ...]:
    order = list(range(n))
    rng.shuffle(order)
    return tuple(order)
