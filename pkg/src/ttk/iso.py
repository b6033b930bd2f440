"""Canonical forms, isomorphism, induced containment and small catalogs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .tournament import Tournament, bits, popcount

MAX_CATALOG_N = 7


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Column-major upper-triangle code of the minimal relabeling, in hex.

    Bit ``(i, j)`` for ``i < j`` is 1 iff ``i -> j``; bits are read in the
    order (0,1), (0,2), (1,2), (0,3), ... and packed most significant first,
    right-padded with zeros to a whole number of hex digits.
    """

    n: int
    hex: str

    def decode(self) -> Tournament:
        return decode_form(self.n, self.hex)

    def __str__(self) -> str:
        return self.hex


def _pair_order(n: int) -> Iterator[tuple[int, int]]:
    for j in range(n):
        for i in range(j):
            yield i, j


def _hex_width(n: int) -> int:
    return (n * (n - 1) // 2 + 3) // 4


def encode_bits(bitlist: list[int], n: int) -> str:
    width = _hex_width(n)
    if width == 0:
        return ""
    value = 0
    for b in bitlist:
        value = value << 1 | b
    value <<= width * 4 - len(bitlist)
    return format(value, f"0{width}x")


def decode_form(n: int, code: str) -> Tournament:
    width = _hex_width(n)
    if len(code) != width:
        raise ValueError(f"form {code!r} has wrong length for n={n}")
    value = int(code, 16) if code else 0
    total = width * 4
    edges = []
    for k, (i, j) in enumerate(_pair_order(n)):
        if value >> (total - 1 - k) & 1:
            edges.append((i, j))
        else:
            edges.append((j, i))
    return Tournament.from_edges(n, edges)


def code_of(T: Tournament) -> str:
    return encode_bits([int(T.edge(i, j)) for i, j in _pair_order(T.n)], T.n)


def refined_cells(T: Tournament) -> list[list[int]]:
    """Isomorphism-invariant ordered partition by iterated score refinement."""
    n = T.n
    colour = [popcount(T.out[v]) for v in range(n)]
    while True:
        sig = [
            (colour[v], tuple(sorted(colour[u] for u in bits(T.out[v]))))
            for v in range(n)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colour[v], []).append(v)
    # larger colour first: high scores take the early positions
    return [cells[c] for c in sorted(cells, reverse=True)]


def canonical_form(T: Tournament) -> CanonicalForm:
    """Lexicographically minimal code over relabelings consistent with the
    refined partition, found by prefix-pruned backtracking."""
    n = T.n
    cells = refined_cells(T)
    slot_cell = [ci for ci, cell in enumerate(cells) for _ in cell]
    best: list[int] | None = None
    order: list[int] = []
    code: list[int] = []
    used = [False] * n

    def extend(pos: int) -> None:
        nonlocal best
        if pos == n:
            if best is None or code < best:
                best = list(code)
            return
        start = len(code)
        for w in cells[slot_cell[pos]]:
            if used[w]:
                continue
            column = [int(T.edge(order[i], w)) for i in range(pos)]
            if best is not None:
                # prune any prefix that already exceeds the incumbent
                if code + column > best[:start + pos]:
                    continue
            code.extend(column)
            order.append(w)
            used[w] = True
            extend(pos + 1)
            used[w] = False
            order.pop()
            del code[start:]

    extend(0)
    return CanonicalForm(n, encode_bits(best or [], n))


def are_isomorphic(A: Tournament, B: Tournament) -> dict[int, int] | None:
    """A bijection ``A -> B`` preserving every edge direction, or None.

    Plain backtracking with score matching; deliberately independent of
    :func:`canonical_form` so the two can cross-check each other.
    """
    if A.n != B.n or sorted(A.scores()) != sorted(B.scores()):
        return None
    sa, sb = A.scores(), B.scores()
    order = sorted(range(A.n), key=lambda v: (sum(sa[u] == sa[v] for u in range(A.n)), v))
    image: dict[int, int] = {}
    taken = 0

    def place(k: int) -> bool:
        nonlocal taken
        if k == len(order):
            return True
        a = order[k]
        cand = B.full & ~taken
        for prev, b_prev in image.items():
            cand &= B.out[b_prev] if A.edge(prev, a) else B.in_mask(b_prev)
        for b in bits(cand):
            if sb[b] != sa[a]:
                continue
            image[a] = b
            taken |= 1 << b
            if place(k + 1):
                return True
            del image[a]
            taken &= ~(1 << b)
        return False

    return dict(image) if place(0) else None


def contains_induced(H: Tournament, T: Tournament) -> dict[int, int] | None:
    """An induced copy of ``H`` in ``T`` as a map ``V(H) -> V(T)``, or None."""
    if H.n > T.n:
        return None
    if H.n == 0:
        return {}
    image: list[int] = []
    taken = 0

    def place(k: int) -> bool:
        nonlocal taken
        if k == H.n:
            return True
        cand = T.full & ~taken
        for prev in range(k):
            cand &= T.out[image[prev]] if H.edge(prev, k) else T.in_mask(image[prev])
            if not cand:
                return False
        for t in bits(cand):
            image.append(t)
            taken |= 1 << t
            if place(k + 1):
                return True
            image.pop()
            taken &= ~(1 << t)
        return False

    return dict(enumerate(image)) if place(0) else None


def contains_bruteforce(H: Tournament, T: Tournament) -> bool:
    """Oracle: every ordered choice of ``|H|`` host vertices."""
    for combo in itertools.permutations(range(T.n), H.n):
        if all(H.edge(a, b) == T.edge(combo[a], combo[b])
               for a in range(H.n) for b in range(H.n) if a != b):
            return True
    return H.n == 0


def all_labeled(n: int) -> Iterator[Tournament]:
    """Every labeled tournament on ``n`` vertices (``2^(n choose 2)`` of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Tournament.from_edges(
            n, ((a, b) if mask >> k & 1 else (b, a) for k, (a, b) in enumerate(pairs))
        )


def extend_vertex(T: Tournament, out_pattern: int) -> Tournament:
    """Add vertex ``n`` beating exactly the vertices in ``out_pattern``."""
    n = T.n
    out = [row | (0 if out_pattern >> v & 1 else 1 << n) for v, row in enumerate(T.out)]
    out.append(out_pattern)
    return Tournament(n + 1, tuple(out))


def enumerate_up_to_iso(n: int) -> list[CanonicalForm]:
    """One canonical form per isomorphism class, ascending."""
    if not 0 <= n <= MAX_CATALOG_N:
        raise ValueError(f"catalog enumeration supports 0 <= n <= {MAX_CATALOG_N}")
    forms = {canonical_form(Tournament(0, ()))}
    for size in range(1, n + 1):
        nxt: set[CanonicalForm] = set()
        for form in sorted(forms):
            parent = form.decode()
            for pattern in range(1 << parent.n):
                nxt.add(canonical_form(extend_vertex(parent, pattern)))
        forms = nxt
    return sorted(forms)
