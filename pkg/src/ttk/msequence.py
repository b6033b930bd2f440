"""m-sequences, strong pairs, well-embeddings and the constructive searches.

Cells and long-form cells are 1-indexed in every public structure, matching
how shapes and index functions are written; host vertices stay 0-indexed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Callable, Literal, Sequence, Union

from .product import IndexedTournament, ShapeVector, product
from .tournament import (
    Tournament,
    bits,
    density,
    induced,
    is_transitive,
    popcount,
    to_mask,
    tr_exact,
)

TR_EXACT_LIMIT = 40


class MSequenceError(ValueError):
    """Structurally malformed m-sequence or infeasible generator parameters."""


@dataclass(frozen=True)
class MSequence:
    """Disjoint cells of a host tournament with a shape and parameters.

    ``blocks[i]`` lists the ordered blocks of short cell ``i + 1``; a 0-cell
    has the single block ``(cells[i],)``. ``tr_host`` is the value used for
    ``tr(host)`` floors: exact when ``tr_kind == "exact"``, otherwise a
    certified upper bound, which only makes the floors harder to meet.
    """

    host: Tournament
    shape: ShapeVector
    cells: tuple[frozenset[int], ...]
    blocks: tuple[tuple[frozenset[int], ...], ...]
    c: Fraction
    lam: Fraction
    tr_host: int | None = None
    tr_kind: str = "exact"

    @classmethod
    def from_blocks(cls, host: Tournament, shape: ShapeVector,
                    blocks: Sequence[Sequence[Sequence[int]]], c, lam,
                    tr_host: int | None = None, tr_kind: str = "exact") -> MSequence:
        blk = tuple(tuple(frozenset(b) for b in cell) for cell in blocks)
        cells = tuple(frozenset().union(*cell) if cell else frozenset() for cell in blk)
        return cls(host, shape, cells, blk, Fraction(c), Fraction(lam), tr_host, tr_kind)

    def long_form(self) -> tuple[frozenset[int], ...]:
        return tuple(b for cell in self.blocks for b in cell)

    def long_owner(self) -> tuple[int, ...]:
        """Short position (1-indexed) of every long cell, in long order."""
        return tuple(i + 1 for i, cell in enumerate(self.blocks) for _ in cell)

    @cached_property
    def tr_value(self) -> int:
        if self.tr_host is not None:
            return self.tr_host
        return tr_upper_bound(self.host, self.cells, self.shape)[0]

    def with_cells(self, long_cells: Sequence[frozenset[int]], c, lam) -> MSequence:
        """Same host and shape with every long cell replaced."""
        it = iter(long_cells)
        blocks = [tuple(next(it) for _ in cell) for cell in self.blocks]
        return MSequence.from_blocks(self.host, self.shape, blocks, c, lam,
                                     self.tr_value, self.tr_kind)


def tr_upper_bound(host: Tournament, cells: Sequence[frozenset[int]], shape: ShapeVector
                   ) -> tuple[int, str]:
    """``tr(host)``: exact for small hosts, else the sum over cells plus the rest.

    A transitive set meets every cell in a transitive set, so summing per-cell
    maxima (and counting uncovered vertices in full) bounds it from above.
    """
    if host.n <= TR_EXACT_LIMIT:
        return tr_exact(host)[0], "exact"
    total, covered = 0, 0
    for bit, cell in zip(shape.v, cells):
        covered |= to_mask(cell)
        total += len(cell) if bit else tr_exact(host, to_mask(cell))[0]
    return total + popcount(host.full & ~covered), "upper"


# validation -------------------------------------------------------------------


@dataclass
class ValidationReport:
    structural: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.structural and not self.violations

    def lines(self) -> list[str]:
        return [f"structural: {s}" for s in self.structural] + [
            f"violation: {v}" for v in self.violations]


def validate_msequence(chi: MSequence) -> ValidationReport:
    rep = ValidationReport()
    T, shape = chi.host, chi.shape
    if len(chi.cells) != shape.m or len(chi.blocks) != shape.m:
        rep.structural.append(f"expected {shape.m} cells, got {len(chi.cells)}")
        return rep
    seen = 0
    for i, cell in enumerate(chi.cells, start=1):
        if any(not 0 <= v < T.n for v in cell):
            rep.structural.append(f"cell {i} has vertices outside the host")
            continue
        mask = to_mask(cell)
        if mask & seen:
            rep.structural.append(f"cell {i} overlaps an earlier cell")
        seen |= mask
        blocks = chi.blocks[i - 1]
        if len(blocks) != shape.blocks_at(i):
            rep.structural.append(
                f"cell {i} has {len(blocks)} blocks, shape requires {shape.blocks_at(i)}")
        union = 0
        for b in blocks:
            if to_mask(b) & union:
                rep.structural.append(f"blocks of cell {i} overlap")
            union |= to_mask(b)
        if union != mask:
            rep.structural.append(f"blocks of cell {i} do not partition it")
    if rep.structural:
        return rep

    tr = chi.tr_value
    for i, cell in enumerate(chi.cells, start=1):
        if shape.v[i - 1]:
            if is_transitive(T, to_mask(cell)) is None:
                rep.violations.append(f"cell {i}: not transitive")
            blocks = chi.blocks[i - 1]
            for a in range(len(blocks)):
                if len(blocks[a]) < chi.c * tr:
                    rep.violations.append(
                        f"cell {i} block {a + 1}: size {len(blocks[a])} < c*tr = {chi.c * tr}")
                for b in range(a + 1, len(blocks)):
                    bm = to_mask(blocks[b])
                    if any(T.out[x] & bm != bm for x in blocks[a]):
                        rep.violations.append(
                            f"cell {i}: block {a + 1} not complete to block {b + 1}")
        elif len(cell) < chi.c * T.n:
            rep.violations.append(f"cell {i}: size {len(cell)} < c*|T| = {chi.c * T.n}")
    for i in range(shape.m):
        for j in range(i + 1, shape.m):
            if not chi.cells[i] or not chi.cells[j]:
                continue
            d = density(T, chi.cells[i], chi.cells[j])
            if d < 1 - chi.lam:
                rep.violations.append(f"density d(S{i + 1},S{j + 1}) = {d} < 1 - lambda")
    return rep


def is_strong(chi: MSequence, lam: Fraction | None = None) -> list[tuple[int, int, str]]:
    """Vertices breaking the per-vertex density conditions.

    Returns ``(vertex, other cell, "forward"|"backward")`` triples; empty
    means the sequence is strong at ``lam`` (default: its own lambda).
    """
    lam = chi.lam if lam is None else Fraction(lam)
    T, bad = chi.host, []
    floor = 1 - lam
    for i, Si in enumerate(chi.cells):
        for j, Sj in enumerate(chi.cells):
            if i == j or not Sj:
                continue
            mj = to_mask(Sj)
            for v in sorted(Si):
                if i < j:
                    ok = Fraction(popcount(T.out[v] & mj), len(Sj)) >= floor
                else:
                    ok = Fraction(popcount(T.in_mask(v) & mj), len(Sj)) >= floor
                if not ok:
                    bad.append((v, j + 1, "forward" if i < j else "backward"))
    return bad


def fit_lambda(host: Tournament, cells: Sequence[frozenset[int]]) -> Fraction:
    """Smallest lambda for which every ordered cell pair has density >= 1 - lambda."""
    worst = Fraction(0)
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            worst = max(worst, 1 - density(host, cells[i], cells[j]))
    return worst


def fit_c(host: Tournament, shape: ShapeVector, blocks, tr_value: int) -> Fraction:
    """Largest c meeting every size floor of the given cells and blocks."""
    ratios = []
    for bit, cell in zip(shape.v, blocks):
        if bit:
            ratios.extend(Fraction(len(b), tr_value) for b in cell)
        else:
            ratios.append(Fraction(len(cell[0]), host.n))
    return min(ratios)


# certificates -------------------------------------------------------------------


@dataclass(frozen=True)
class StrongPairCert:
    A: frozenset[int]
    B: frozenset[int]
    direction: Literal["A->B", "B->A"]
    c: Fraction
    mode: Literal["bulk", "transitive"]
    note: str = ""


def verify_strong_pair(cert: StrongPairCert, host: Tournament, tr_value: int | None = None
                       ) -> bool:
    """Check every defining condition; ``tr_value`` defaults to ``tr_exact``."""
    A, B = cert.A, cert.B
    if not A or not B or A & B or cert.c <= 0:
        return False
    if any(not 0 <= v < host.n for v in A | B):
        return False
    if len(A) < cert.c * host.n:
        return False
    if cert.mode == "bulk":
        if len(B) < cert.c * host.n:
            return False
    elif cert.mode == "transitive":
        if is_transitive(host, to_mask(B)) is None:
            return False
        if tr_value is None:
            tr_value = tr_exact(host)[0]
        if len(B) < cert.c * tr_value:
            return False
    else:
        return False
    src, dst = (A, B) if cert.direction == "A->B" else (B, A)
    dmask = to_mask(dst)
    return all(host.out[x] & dmask == dmask for x in src)


@dataclass(frozen=True)
class EmbeddingCert:
    """Copy of ``target`` in the host: target vertex ``j`` sits at host vertex
    ``vertices[j]`` inside long cell ``cells[j]`` (1-indexed)."""

    target: Tournament
    vertices: tuple[int, ...]
    cells: tuple[int, ...]
    margin: Fraction | None = None


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    partial: dict[int, int] = field(default_factory=dict)


Outcome = Union[EmbeddingCert, StrongPairCert, Inconclusive]


def verify_embedding(cert: EmbeddingCert, chi: MSequence) -> bool:
    """Induced copy with the declared isomorphism, each vertex in its cell."""
    long = chi.long_form()
    H, vs = cert.target, cert.vertices
    if len(vs) != H.n or len(cert.cells) != H.n or len(set(vs)) != H.n:
        return False
    if len(set(cert.cells)) != H.n:
        return False
    for v, cell in zip(vs, cert.cells):
        if not 1 <= cell <= len(long) or v not in long[cell - 1]:
            return False
    return all(chi.host.edge(vs[a], vs[b]) == H.edge(a, b)
               for a in range(H.n) for b in range(H.n) if a != b)


def verify_well_embedding(cert: EmbeddingCert, chi: MSequence, lam) -> bool:
    if not verify_embedding(cert, chi):
        return False
    lam = Fraction(lam)
    T, long = chi.host, chi.long_form()
    used = set(cert.cells)
    for i, cell in enumerate(long, start=1):
        if i in used or not cell:
            continue
        cm = to_mask(cell)
        for v, fv in zip(cert.vertices, cert.cells):
            if fv < i:
                d = Fraction(popcount(T.out[v] & cm), len(cell))
            else:
                d = Fraction(popcount(T.in_mask(v) & cm), len(cell))
            if d < 1 - lam:
                return False
    return True


# strengthening ------------------------------------------------------------------


@dataclass
class StrengthenResult:
    sequence: MSequence
    C: int
    lam_hat: Fraction
    c_new: Fraction
    lam_new: Fraction
    removed: tuple[int, ...]
    diagnostics: list[str] = field(default_factory=list)


def strengthen(chi: MSequence) -> StrengthenResult:
    """Keep in every long cell only the vertices that are near-uniform toward
    every other long cell, with ``C = 2k`` and ``lam_hat = lam / c^2``.

    The declared parameters are ``c' = c (1 - k/C)`` and
    ``lam' = C lam_hat / (1 - k/C)``; ``lam'`` may exceed 1, in which case the
    density conditions it governs are vacuous.
    """
    rep = validate_msequence(chi)
    if not rep.ok:
        raise MSequenceError("strengthen needs a valid m-sequence: " + "; ".join(rep.lines()))
    T, long = chi.host, chi.long_form()
    k = len(long)
    C = 2 * k
    lam_hat = chi.lam / chi.c**2
    floor = 1 - C * lam_hat
    masks = [to_mask(t) for t in long]
    kept = []
    for i, Ti in enumerate(long):
        keep = set()
        for v in Ti:
            good = True
            for j, Tj in enumerate(long):
                if j == i or not Tj:
                    continue
                hit = T.out[v] & masks[j] if i < j else T.in_mask(v) & masks[j]
                if Fraction(popcount(hit), len(Tj)) < floor:
                    good = False
                    break
            if good:
                keep.add(v)
        kept.append(frozenset(keep))
    shrink = 1 - Fraction(k, C)
    c_new = chi.c * shrink
    lam_new = C * lam_hat / shrink
    diagnostics = []
    for i, (old, new) in enumerate(zip(long, kept), start=1):
        if len(new) < (1 - Fraction(k - 1, C)) * len(old):
            diagnostics.append(
                f"long cell {i}: kept {len(new)} of {len(old)}, below the counting bound; "
                "input is outside the filter's preconditions")
    seq = chi.with_cells(kept, c_new, lam_new)
    removed = tuple(len(o) - len(n) for o, n in zip(long, kept))
    return StrengthenResult(seq, C, lam_hat, c_new, lam_new, removed, diagnostics)


# digraph embedding --------------------------------------------------------------


@dataclass(frozen=True)
class ProperDigraph:
    """Digraph on vertices ``0..n-1`` with required edges and an injective
    placement ``phi`` into long cells (1-indexed)."""

    phi: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self) -> None:
        if len(set(self.phi)) != len(self.phi):
            raise MSequenceError("phi must be injective")
        for a, b in self.edges:
            if not (0 <= a < len(self.phi) and 0 <= b < len(self.phi)) or a == b:
                raise MSequenceError(f"bad digraph edge {(a, b)}")

    @property
    def n(self) -> int:
        return len(self.phi)

    @classmethod
    def from_cells(cls, cell_edges: Sequence[tuple[int, int]], cells: Sequence[int] = (),
                   name: str = "") -> ProperDigraph:
        """Vertices named by their cells; ``(p, q)`` requires cell p -> cell q."""
        phi = tuple(sorted(set(cells) | {x for e in cell_edges for x in e}))
        pos = {p: i for i, p in enumerate(phi)}
        return cls(phi, tuple((pos[a], pos[b]) for a, b in cell_edges), name)


@dataclass(frozen=True)
class DigraphEmbedding:
    digraph: ProperDigraph
    vertices: tuple[int, ...]

    def as_cert(self, host: Tournament) -> EmbeddingCert:
        sub, _ = induced(host, self.vertices)
        # induced() sorts its vertex set; rebuild in digraph order instead
        H = Tournament.from_predicate(
            len(self.vertices), lambda a, b: host.edge(self.vertices[a], self.vertices[b]))
        del sub
        return EmbeddingCert(H, self.vertices, self.digraph.phi)


def verify_digraph_embedding(emb: DigraphEmbedding, chi: MSequence) -> bool:
    D, vs = emb.digraph, emb.vertices
    long = chi.long_form()
    if len(vs) != D.n or len(set(vs)) != D.n:
        return False
    for v, p in zip(vs, D.phi):
        if not 1 <= p <= len(long) or v not in long[p - 1]:
            return False
    return all(chi.host.edge(vs[a], vs[b]) for a, b in D.edges)


def _is_forest(D: ProperDigraph) -> bool:
    pairs = {frozenset(e) for e in D.edges}
    if len(pairs) != len(D.edges):
        return False
    parent = list(range(D.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in D.edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def _pair_cert(chi: MSequence, R: frozenset[int], p: int, W: frozenset[int], q: int,
               r_to_w: bool, h: int) -> StrongPairCert | None:
    """Declare ``(R, W)`` as a ``c/2^h`` strong pair if some role assignment
    meets the floors. ``r_to_w`` says R is complete to W."""
    host = chi.host
    owner = chi.long_owner()
    c = chi.c / 2**h
    options = []
    for A, Acell, B, Bcell, a_to_b in ((R, p, W, q, r_to_w), (W, q, R, p, not r_to_w)):
        if chi.shape.v[owner[Acell - 1] - 1]:
            continue
        mode = "transitive" if chi.shape.v[owner[Bcell - 1] - 1] else "bulk"
        options.append(StrongPairCert(A, B, "A->B" if a_to_b else "B->A", c, mode,
                                      f"cells {Acell} and {Bcell}"))
    for cert in options:
        if verify_strong_pair(cert, host, chi.tr_value):
            return cert
    return None


def embed_digraph(D: ProperDigraph, chi: MSequence, search_budget: int = 200_000) -> Outcome:
    """Place ``D`` cell by cell, or exhibit the strong pair that blocks it.

    For forests this follows the halving argument: each vertex keeps the part
    of its cell with a correctly oriented neighbour in every child's surviving
    set. When that part is under half, the discarded half is complete toward
    the child's set and is returned as a ``c/2^h`` strong pair. Other
    digraphs fall back to exhaustive search, which cannot certify failure.
    """
    long = chi.long_form()
    if any(not 1 <= p <= len(long) for p in D.phi):
        raise MSequenceError("phi maps outside the long form")
    host = chi.host
    if not _is_forest(D):
        return _search_digraph(D, chi, search_budget)

    nbrs: dict[int, list[tuple[int, bool]]] = {u: [] for u in range(D.n)}
    for a, b in D.edges:
        nbrs[a].append((b, True))   # a must beat b
        nbrs[b].append((a, False))  # b must lose to a
    sets = {u: frozenset(long[D.phi[u] - 1]) for u in range(D.n)}
    halvings = {u: 0 for u in range(D.n)}
    chosen: dict[int, int] = {}
    visited: set[int] = set()

    def order_key(u: int) -> tuple[int, int]:
        return (-len(nbrs[u]), -D.phi[u])

    for root in sorted(range(D.n), key=order_key):
        if root in visited:
            continue
        # iterative DFS for parent links and post-order
        parent = {root: None}
        post: list[int] = []
        stack = [(root, False)]
        while stack:
            u, done = stack.pop()
            if done:
                post.append(u)
                continue
            visited.add(u)
            stack.append((u, True))
            for w, _ in sorted(nbrs[u], key=lambda e: -D.phi[e[0]]):
                if w not in parent:
                    parent[w] = u
                    stack.append((w, False))
        for u in post:
            for w, u_beats in sorted(nbrs[u], key=lambda e: D.phi[e[0]]):
                if parent.get(w) != u:
                    continue
                wmask = to_mask(sets[w])
                if u_beats:
                    keep = frozenset(x for x in sets[u] if host.out[x] & wmask)
                else:
                    keep = frozenset(x for x in sets[u] if host.in_mask(x) & wmask)
                if 2 * len(keep) < len(sets[u]):
                    R = sets[u] - keep
                    h = max(halvings[u] + 1, halvings[w])
                    cert = _pair_cert(chi, R, D.phi[u], sets[w], D.phi[w],
                                      r_to_w=not u_beats, h=h)
                    if cert is not None:
                        return cert
                    return Inconclusive(
                        f"majority failed between cells {D.phi[u]} and {D.phi[w]} "
                        "but the complete pair misses the strong-pair floors",
                        dict(chosen))
                sets[u] = keep
                halvings[u] += 1
        # top-down witness choice
        for u in reversed(post):
            p = parent[u]
            if p is None:
                chosen[u] = min(sets[u])
                continue
            x = chosen[p]
            u_beats_p = any(w == p and beats for w, beats in nbrs[u])
            pool = host.out[x] if not u_beats_p else host.in_mask(x)
            options = [y for y in sorted(sets[u]) if pool >> y & 1]
            chosen[u] = options[0]
    emb = DigraphEmbedding(D, tuple(chosen[u] for u in range(D.n)))
    if not verify_digraph_embedding(emb, chi):
        raise AssertionError("internal error: unverifiable digraph embedding")
    return emb


def _search_digraph(D: ProperDigraph, chi: MSequence, budget: int) -> Outcome:
    host, long = chi.host, chi.long_form()
    order = sorted(range(D.n), key=lambda u: D.phi[u])
    chosen: dict[int, int] = {}
    deepest: dict[int, int] = {}
    nodes = 0

    def place(k: int) -> bool:
        nonlocal nodes, deepest
        if len(chosen) > len(deepest):
            deepest = dict(chosen)
        if k == len(order):
            return True
        u = order[k]
        cand = to_mask(long[D.phi[u] - 1])
        for a, b in D.edges:
            if a == u and b in chosen:
                cand &= host.in_mask(chosen[b])
            elif b == u and a in chosen:
                cand &= host.out[chosen[a]]
        for x in bits(cand):
            nodes += 1
            if nodes > budget:
                return False
            chosen[u] = x
            if place(k + 1):
                return True
            del chosen[u]
        return False

    if place(0):
        return DigraphEmbedding(D, tuple(chosen[u] for u in range(D.n)))
    why = "search budget exhausted" if nodes > budget else "no placement exists"
    return Inconclusive(f"digraph is not a forest; {why}", deepest)


def residual(chi: MSequence, placed: Sequence[tuple[int, int]], c=None, lam=None
             ) -> MSequence:
    """Shrink every long cell holding no placed vertex to the vertices
    oriented forward with respect to all placed ``(vertex, cell)`` pairs."""
    T, long = chi.host, chi.long_form()
    used = {cell for _, cell in placed}
    new = []
    for i, Ti in enumerate(long, start=1):
        if i in used:
            new.append(Ti)
            continue
        mask = to_mask(Ti)
        for v, cell in placed:
            mask &= T.out[v] if cell < i else T.in_mask(v)
        new.append(frozenset(bits(mask)))
    return chi.with_cells(new, chi.c / 2 if c is None else c, 4 * chi.lam if lam is None else lam)


@dataclass(frozen=True)
class SequentialEmbedding:
    gadgets: tuple[ProperDigraph, ...]
    vertices: tuple[tuple[int, ...], ...]

    def by_cell(self) -> dict[int, int]:
        return {p: v for D, vs in zip(self.gadgets, self.vertices) for p, v in zip(D.phi, vs)}


def verify_sequential(emb: SequentialEmbedding, chi: MSequence) -> bool:
    """Every gadget embedded, and no backward edge between different gadgets."""
    for D, vs in zip(emb.gadgets, emb.vertices):
        if not verify_digraph_embedding(DigraphEmbedding(D, vs), chi):
            return False
    placed = [(v, p, g) for g, (D, vs) in enumerate(zip(emb.gadgets, emb.vertices))
              for p, v in zip(D.phi, vs)]
    if len({v for v, _, _ in placed}) != len(placed):
        return False
    for v, p, g in placed:
        for w, q, h in placed:
            if g != h and p > q and chi.host.edge(v, w):
                return False
    return True


def sequential_embed(gadgets: Sequence[ProperDigraph], chi: MSequence
                     ) -> SequentialEmbedding | StrongPairCert | Inconclusive:
    """Strengthen, embed the first gadget, restrict the untouched cells to the
    vertices correctly oriented toward everything placed, and repeat."""
    images = [set(D.phi) for D in gadgets]
    for a in range(len(images)):
        for b in range(a + 1, len(images)):
            if images[a] & images[b]:
                raise MSequenceError("gadget placements must use disjoint cells")
    seq = strengthen(chi).sequence
    placed: list[tuple[int, int]] = []
    found: list[tuple[int, ...]] = []
    for D in gadgets:
        out = embed_digraph(D, seq)
        if isinstance(out, StrongPairCert):
            if not verify_strong_pair(out, chi.host, chi.tr_value):
                raise AssertionError("internal error: unverifiable strong pair")
            return out
        if isinstance(out, Inconclusive):
            return Inconclusive(f"gadget {D.name or len(found) + 1}: {out.reason}", out.partial)
        found.append(out.vertices)
        placed.extend(zip(out.vertices, D.phi))
        seq = residual(seq, placed)
    emb = SequentialEmbedding(tuple(gadgets), tuple(found))
    if not verify_sequential(emb, chi):
        raise AssertionError("internal error: sequential embedding failed verification")
    return emb


def match_family(cell_vertex: dict[int, int], host: Tournament,
                 family: Sequence[IndexedTournament]) -> tuple[int, EmbeddingCert] | None:
    """First family member induced by the vertices sitting at its cells.

    Member vertex ``j`` must land at ``cell_vertex[index[j]]``.
    """
    for i, member in enumerate(family):
        if any(f not in cell_vertex for f in member.index):
            continue
        vs = tuple(cell_vertex[f] for f in member.index)
        H = member.tournament
        if all(host.edge(vs[a], vs[b]) == H.edge(a, b)
               for a in range(H.n) for b in range(H.n) if a != b):
            return i, EmbeddingCert(H, vs, member.index)
    return None


# product combiner ----------------------------------------------------------------

Searcher = Callable[[MSequence], Union[EmbeddingCert, StrongPairCert, Inconclusive, None]]


def cell_searcher(H: Tournament, cells: Sequence[int], budget: int = 200_000) -> Searcher:
    """Exhaustive search for an induced copy of ``H`` with vertex ``j`` in
    long cell ``cells[j]``."""

    def search(chi: MSequence) -> EmbeddingCert | Inconclusive:
        host, long = chi.host, chi.long_form()
        chosen: list[int] = []
        nodes = 0

        def place(j: int) -> bool:
            nonlocal nodes
            if j == H.n:
                return True
            cand = to_mask(long[cells[j] - 1])
            for a, x in enumerate(chosen):
                cand &= host.out[x] if H.edge(a, j) else host.in_mask(x)
            for y in bits(cand):
                nodes += 1
                if nodes > budget:
                    return False
                chosen.append(y)
                if place(j + 1):
                    return True
                chosen.pop()
            return False

        if place(0):
            return EmbeddingCert(H, tuple(chosen), tuple(cells))
        return Inconclusive("no induced copy at the requested cells",
                            dict(enumerate(chosen)))

    return search


@dataclass(frozen=True)
class ProductEmbedding:
    cert: EmbeddingCert
    residual_sizes: tuple[tuple[int, int], ...]  # (kept, original) per untouched cell


def combine_product_embedding(chi: MSequence, e1: EmbeddingCert, searcher: Searcher,
                              H2: Tournament | None = None, g: Sequence[int] = ()
                              ) -> ProductEmbedding | StrongPairCert | Inconclusive:
    """Extend a well-embedding of ``H1`` (margin ``1/(2k)``) to the product
    ``H1^f (+) H2^g`` by searching ``H2`` inside the residual cells."""
    k = chi.shape.k
    margin = Fraction(1, 2 * k)
    if not verify_well_embedding(e1, chi, margin):
        raise MSequenceError(f"first embedding is not well-embedded at margin {margin}")
    long = chi.long_form()
    placed = list(zip(e1.vertices, e1.cells))
    res = residual(chi, placed, c=chi.c / 2, lam=4 * chi.lam)
    rlong = res.long_form()
    sizes = tuple((len(rlong[i - 1]), len(long[i - 1]))
                  for i in range(1, k + 1) if i not in set(e1.cells))
    if any(2 * kept < orig for kept, orig in sizes):
        raise AssertionError("residual cell below half size despite the margin")
    if H2 is not None and H2.n == 0:
        return ProductEmbedding(e1, sizes)
    out = searcher(res)
    if out is None:
        return Inconclusive("second searcher returned nothing")
    if isinstance(out, StrongPairCert):
        if not verify_strong_pair(out, chi.host, chi.tr_value):
            raise AssertionError("internal error: unverifiable strong pair")
        return out
    if isinstance(out, Inconclusive):
        return out
    if H2 is None:
        H2 = out.target
    g = tuple(g) if g else out.cells
    prod = product(IndexedTournament(e1.target, e1.cells), IndexedTournament(H2, g))
    merged = EmbeddingCert(prod.tournament, e1.vertices + out.vertices, prod.index, margin)
    if not verify_embedding(merged, chi):
        raise AssertionError("internal error: merged copy is not the product")
    return ProductEmbedding(merged, sizes)


# epsilon -------------------------------------------------------------------------


def default_lambda0(c1, k: int) -> Fraction:
    """Run default for the density threshold: ``c1^2 / (8 k^2)``."""
    if k < 1:
        raise ValueError("k must be positive")
    return Fraction(c1) ** 2 / (8 * k * k)


def default_c2(c1) -> Fraction:
    """Run default for the strong-pair constant: ``c1 / 4``."""
    return Fraction(c1) / 4


def eh_epsilon_terms(N: int, c2) -> tuple[float, float, float]:
    """The three terms whose minimum is the exponent; the first is
    ``1/log2(N)``, the bound that makes every tournament on at most ``N``
    vertices satisfy ``tr >= n^eps``."""
    c2 = float(Fraction(c2))
    if N < 2:
        raise ValueError("N must be at least 2")
    if not 0 < c2 < 1:
        raise ValueError("c2 must lie strictly between 0 and 1")
    return 1 / math.log2(N), math.log(1 - c2) / math.log(c2), math.log(0.5) / math.log(c2)


def eh_epsilon(N: int, c2) -> float:
    return min(eh_epsilon_terms(N, c2))


# planted instances ----------------------------------------------------------------


def _layout(shape: ShapeVector, cell_size: int) -> list[list[list[int]]]:
    blocks, nxt = [], 0
    for i in range(1, shape.m + 1):
        cell = []
        for _ in range(shape.blocks_at(i)):
            cell.append(list(range(nxt, nxt + cell_size)))
            nxt += cell_size
        blocks.append(cell)
    return blocks


def _host_from(n: int, blocks, shape: ShapeVector, rng: random.Random, lam: Fraction,
               hubs: int = 0) -> list[int]:
    """Out-masks of a planted host.

    ``hubs`` vertices, each in a random earlier cell, lose to every vertex of
    a random later cell. Further reversed cross edges are drawn with
    probability ``lam/2``, lowered so that on average at most half of the
    budget left after the hubs is used, and redrawn per cell pair until the
    density floor holds.
    """
    out = [0] * n

    def put(u: int, v: int) -> None:
        out[u] |= 1 << v

    cells = [[v for b in cell for v in b] for cell in blocks]
    for bit, cell in zip(shape.v, cells):
        for a in range(len(cell)):
            for b in range(a + 1, len(cell)):
                u, v = cell[a], cell[b]
                if bit or rng.random() < 0.5:
                    put(u, v)
                else:
                    put(v, u)
    forced: dict[tuple[int, int], set[tuple[int, int]]] = {}
    if hubs and len(cells) > 1:
        for _ in range(hubs):
            i, j = sorted(rng.sample(range(len(cells)), 2))
            x = rng.choice(cells[i])
            forced.setdefault((i, j), set()).update((x, y) for y in cells[j])
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            fixed = forced.get((i, j), set())
            size = len(cells[i]) * len(cells[j])
            budget = math.floor(lam * size) - len(fixed)
            if budget < 0:
                raise MSequenceError(f"hub reversals between cells {i + 1} and {j + 1} "
                                     "exceed the density budget")
            p = min(float(lam) / 2, budget / (2 * size))
            while True:
                flips = [(u, v) for u in cells[i] for v in cells[j]
                         if p and (u, v) not in fixed and rng.random() < p]
                if len(flips) <= budget:
                    break
            flipped = set(flips) | fixed
            for u in cells[i]:
                for v in cells[j]:
                    if (u, v) in flipped:
                        put(v, u)
                    else:
                        put(u, v)
    return out


def random_msequence(shape: ShapeVector, cell_size: int, c, lam, seed: int, hubs: int = 0
                     ) -> MSequence:
    """Planted m-sequence: every long cell has ``cell_size`` vertices, 0-cells
    are random inside, 1-cells are transitive with complete block order.

    ``c=None`` declares the largest c the planted sizes support.
    """
    lam = Fraction(lam)
    if cell_size < 1 or not 0 <= lam <= 1:
        raise MSequenceError("need cell_size >= 1 and 0 <= lambda <= 1")
    rng = random.Random(seed)
    blocks = _layout(shape, cell_size)
    n = shape.k * cell_size
    host = Tournament(n, tuple(_host_from(n, blocks, shape, rng, lam, hubs)))
    cells = [frozenset(v for b in cell for v in b) for cell in blocks]
    tr_value, kind = tr_upper_bound(host, cells, shape)
    if lam == 0:
        kind = "exact"  # cross edges all forward: tr is the sum over cells
    best_c = fit_c(host, shape, blocks, tr_value)
    c = best_c if c is None else Fraction(c)
    if not 0 < c <= best_c:
        raise MSequenceError(f"infeasible: c = {c} outside (0, {best_c}]")
    return MSequence.from_blocks(host, shape, blocks, c, lam, tr_value, kind)


def plant_gadgets(shape: ShapeVector, gadgets: Sequence[ProperDigraph], cell_size: int,
                  seed: int, complete: tuple[int, int] | None = None) -> MSequence:
    """Host on which every gadget edge has a planted witness matching.

    For each required edge against the cell order a random perfect matching
    of reversed edges is planted between the two cells, so every vertex on
    either side has a correctly oriented partner. ``complete = (g, e)`` skips
    edge ``e`` of gadget ``g``, leaving one cell complete to the other.
    Parameters ``c`` and ``lambda`` are fitted to the result.
    """
    rng = random.Random(seed)
    blocks = _layout(shape, cell_size)
    n = shape.k * cell_size
    out = _host_from(n, blocks, shape, rng, Fraction(0))
    long = [b for cell in blocks for b in cell]
    owner = [i for i, cell in enumerate(blocks) for _ in cell]
    for g, D in enumerate(gadgets):
        for e, (a, b) in enumerate(D.edges):
            p, q = D.phi[a], D.phi[b]
            if owner[p - 1] == owner[q - 1]:
                raise MSequenceError("gadget edge inside a single short cell")
            if (g, e) == complete or p < q:
                continue
            partners = list(long[q - 1])
            rng.shuffle(partners)
            for x, y in zip(long[p - 1], partners):
                out[y] &= ~(1 << x)
                out[x] |= 1 << y
    host = Tournament(n, tuple(out))
    cells = [frozenset(v for b in cell for v in b) for cell in blocks]
    tr_value, kind = tr_upper_bound(host, cells, shape)
    c = fit_c(host, shape, blocks, tr_value)
    lam = fit_lambda(host, cells)
    return MSequence.from_blocks(host, shape, blocks, c, lam, tr_value, kind)


def flip_edge(chi: MSequence, u: int, v: int) -> MSequence:
    """Same sequence with the edge between ``u`` and ``v`` reversed."""
    out = list(chi.host.out)
    if out[u] >> v & 1:
        out[u] &= ~(1 << v)
        out[v] |= 1 << u
    else:
        out[v] &= ~(1 << u)
        out[u] |= 1 << v
    return replace(chi, host=Tournament(chi.host.n, tuple(out)))
