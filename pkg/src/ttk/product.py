"""Index-tagged tournaments, the product, shape vectors and EH-extensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .tournament import Tournament, backward_graph, from_backward_edges

MAX_INDEX = 2**31


class ProductError(ValueError):
    pass


@dataclass(frozen=True)
class IndexedTournament:
    """A tournament with an injective map ``index[v] >= 1`` per vertex."""

    tournament: Tournament
    index: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.index) != self.tournament.n:
            raise ProductError("index function must cover every vertex")
        if len(set(self.index)) != len(self.index):
            raise ProductError("index function is not injective")
        if any(not 1 <= f < MAX_INDEX for f in self.index):
            raise ProductError("index values must be positive integers below 2^31")

    @property
    def n(self) -> int:
        return self.tournament.n

    def ordering(self) -> tuple[int, ...]:
        """Vertices sorted by ascending index."""
        return tuple(sorted(range(self.n), key=self.index.__getitem__))

    def normalized(self) -> IndexedTournament:
        """Relabel so that vertex ``p`` has the ``p``-th smallest index."""
        order = self.ordering()
        return IndexedTournament(
            self.tournament.relabel(order), tuple(self.index[v] for v in order)
        )

    def backward_index_pairs(self) -> set[tuple[int, int]]:
        """Backward pairs under the index ordering, named by index values."""
        order = self.ordering()
        bg = backward_graph(self.tournament, order)
        return {(self.index[order[i]], self.index[order[j]]) for i, j in bg.pairs}

    @classmethod
    def from_index_pairs(cls, indices: Sequence[int], backward: set[tuple[int, int]]
                         ) -> IndexedTournament:
        """Build from sorted index values and backward pairs ``(lo, hi)``
        meaning the vertex tagged ``hi`` beats the one tagged ``lo``."""
        indices = sorted(indices)
        pos = {f: p for p, f in enumerate(indices)}
        pairs = []
        for lo, hi in backward:
            a, b = sorted((pos[lo], pos[hi]))
            pairs.append((a, b))
        return cls(from_backward_edges(len(indices), pairs), tuple(indices))


EMPTY = IndexedTournament(Tournament(0, ()), ())


def orthogonal(A: IndexedTournament, B: IndexedTournament) -> bool:
    return not set(A.index) & set(B.index)


def product(A: IndexedTournament, B: IndexedTournament) -> IndexedTournament:
    """``A (+) B``: the disjoint union keeping both tournaments' own edges,
    with every cross pair oriented from the smaller index to the larger.

    Vertices of ``A`` keep their labels and those of ``B`` follow them, so
    under the merged index ordering the backward pairs are exactly those of
    ``A`` and ``B`` under their own index orderings.
    """
    if not orthogonal(A, B):
        raise ProductError(f"index collision: {sorted(set(A.index) & set(B.index))}")
    na = A.n
    index = A.index + B.index

    def beats(u: int, v: int) -> bool:
        if u < na and v < na:
            return A.tournament.edge(u, v)
        if u >= na and v >= na:
            return B.tournament.edge(u - na, v - na)
        return index[u] < index[v]

    return IndexedTournament(Tournament.from_predicate(na + B.n, beats), index)


def same_labeled(A: IndexedTournament, B: IndexedTournament) -> bool:
    """Equality as labeled tournaments under the merged index ordering."""
    return A.normalized() == B.normalized()


def family_product(F1: Sequence[IndexedTournament], F2: Sequence[IndexedTournament]
                   ) -> list[IndexedTournament]:
    for a in F1:
        for b in F2:
            if not orthogonal(a, b):
                raise ProductError("families are not orthogonal")
    return [product(a, b) for a in F1 for b in F2]


# shape vectors ---------------------------------------------------------------


@dataclass(frozen=True)
class ShapeVector:
    v: tuple[int, ...]
    eta: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.v):
            raise ProductError("v must be a 0/1 vector")
        if len(self.eta) != sum(self.v):
            raise ProductError("eta needs one entry per 1-position of v")
        if any(e < 1 for e in self.eta):
            raise ProductError("eta entries must be positive")

    @property
    def m(self) -> int:
        return len(self.v)

    @property
    def k(self) -> int:
        """Length of the long representation."""
        return self.v.count(0) + sum(self.eta)

    def cell_of_long(self, s: int) -> int:
        """Short position (1-indexed) holding long cell ``s``."""
        for j in range(1, self.m + 1):
            if gamma(self, j) >= s:
                return j
        raise ProductError(f"long cell {s} out of range 1..{self.k}")

    def long_cells(self, i: int) -> range:
        """Long cells (1-indexed) making up short position ``i``."""
        return range(gamma(self, i - 1) + 1 if i > 1 else 1, gamma(self, i) + 1)

    def blocks_at(self, i: int) -> int:
        return self.eta[zeta(self.v, i) - 1] if self.v[i - 1] else 1


def zeta(v: Sequence[int], i: int) -> int:
    """Number of ones among the first ``i`` entries of ``v``."""
    if not 1 <= i <= len(v):
        raise ProductError(f"position {i} out of range 1..{len(v)}")
    return sum(v[:i])


def gamma(shape: ShapeVector, i: int) -> int:
    """Zeros in the first ``i`` entries plus the block counts of its ones."""
    if i == 0:
        return 0
    if not 1 <= i <= shape.m:
        raise ProductError(f"position {i} out of range 1..{shape.m}")
    total = 0
    for j in range(1, i + 1):
        total += shape.eta[zeta(shape.v, j) - 1] if shape.v[j - 1] else 1
    return total


def subseq_witnesses(s1: ShapeVector, s2: ShapeVector) -> Iterator[tuple[int, ...]]:
    """All ``i_1 < ... < i_t`` (1-indexed) realising ``s1`` inside ``s2``,
    in lexicographic order."""
    for combo in itertools.combinations(range(1, s2.m + 1), s1.m):
        if any(s1.v[j] != s2.v[i - 1] for j, i in enumerate(combo)):
            continue
        ok = True
        for j, i in enumerate(combo, start=1):
            if s1.v[j - 1] and s1.eta[zeta(s1.v, j) - 1] > s2.eta[zeta(s2.v, i) - 1]:
                ok = False
                break
        if ok:
            yield combo


def shape_subseq(s1: ShapeVector, s2: ShapeVector) -> tuple[int, ...] | None:
    return next(subseq_witnesses(s1, s2), None)


# EH-extension ----------------------------------------------------------------


@dataclass
class ExtensionReport:
    accepted: bool
    witness: tuple[int, ...] | None = None
    beta: dict[int, frozenset[int]] = field(default_factory=dict)
    violated: str | None = None
    detail: str = ""
    # per rejected witness: (witness, bullet, detail)
    rejections: list[tuple[tuple[int, ...], str, str]] = field(default_factory=list)


def beta_sets(s1: ShapeVector, s2: ShapeVector, witness: tuple[int, ...]
              ) -> dict[int, frozenset[int]]:
    """``beta(s)`` for every long cell ``s`` of ``s2`` whose short position is
    a witness position ``i_r``: the long cells of ``s1`` at short position ``r``.
    Cells whose short position is not a witness position are absent."""
    where = {i: r for r, i in enumerate(witness, start=1)}
    out = {}
    for s in range(1, s2.k + 1):
        r = where.get(s2.cell_of_long(s))
        if r is not None:
            out[s] = frozenset(s1.long_cells(r))
    return out


def eh_extension_check(
    t1: tuple[Sequence[dict[int, int]], ShapeVector],
    t2: tuple[Sequence[dict[int, int]], ShapeVector],
    family: Sequence[Tournament],
) -> ExtensionReport:
    """Check that ``(F2, s2)`` EH-extends ``(F1, s1)`` for ``family``.

    ``F1[i]`` and ``F2[i]`` map vertices of ``family[i]`` to long cells
    (1-indexed). Every subsequence witness is tried before rejecting.
    """
    (F1, s1), (F2, s2) = t1, t2
    if not (len(F1) == len(F2) == len(family)):
        raise ProductError("function families must align with the tournament family")
    for fs, shape in ((F1, s1), (F2, s2)):
        for f, H in zip(fs, family):
            if sorted(f) != list(range(H.n)):
                raise ProductError("each function must be defined on every vertex")
            if len(set(f.values())) != len(f) or any(not 1 <= x <= shape.k for x in f.values()):
                raise ProductError("functions must be injective into the long cells")

    report = ExtensionReport(False)
    keys = [(i, h) for i, H in enumerate(family) for h in range(H.n)]
    order_bad = None
    for a, b in itertools.combinations(keys, 2):
        for x, y in ((a, b), (b, a)):
            if (F1[x[0]][x[1]] <= F1[y[0]][y[1]]) != (F2[x[0]][x[1]] <= F2[y[0]][y[1]]):
                order_bad = (x, y)
                break
        if order_bad:
            break

    witnesses = list(subseq_witnesses(s1, s2))
    if not witnesses:
        report.violated = "subsequence"
        report.detail = "no subsequence witness for the shapes"
        return report
    for w in witnesses:
        beta = beta_sets(s1, s2, w)
        bullet = None
        for i, h in keys:
            s = F2[i][h]
            if s not in beta:
                bullet, detail = "beta-defined", f"beta({s}) undefined (tournament {i}, vertex {h})"
                break
            if F1[i][h] not in beta[s]:
                bullet, detail = "membership", (
                    f"f1={F1[i][h]} not in beta({s})={sorted(beta[s])} (tournament {i}, vertex {h})")
                break
        if bullet is None and order_bad is not None:
            (i1, h1), (i2, h2) = order_bad
            bullet, detail = "order", (
                f"order disagreement between (tournament {i1}, vertex {h1}) and "
                f"(tournament {i2}, vertex {h2})")
        if bullet is None:
            return ExtensionReport(True, w, beta, rejections=report.rejections)
        report.rejections.append((w, bullet, detail))
    # name the bullet reached by the witness that got furthest
    rank = {"beta-defined": 0, "membership": 1, "order": 2}
    furthest = max(report.rejections, key=lambda r: rank[r[1]])
    report.violated, report.detail = furthest[1], furthest[2]
    return report
