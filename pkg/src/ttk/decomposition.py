"""Homogeneous sets, primality and substitution."""

from __future__ import annotations

from dataclasses import dataclass

from .tournament import Tournament, bits, popcount, to_mask


@dataclass(frozen=True)
class HomogeneousCert:
    members: frozenset[int]
    # outside vertex -> True if it beats the whole set, False if it loses to it
    beats_set: dict[int, bool]

    def verify(self, T: Tournament) -> bool:
        mask = to_mask(self.members)
        if not 1 < len(self.members) < T.n:
            return False
        for w in range(T.n):
            if w in self.members:
                continue
            hit = T.out[w] & mask
            if hit not in (0, mask) or self.beats_set.get(w) != (hit == mask):
                return False
        return True


def splitter(T: Tournament, mask: int) -> int | None:
    """An outside vertex that sees ``mask`` non-uniformly, if any."""
    for w in bits(T.full & ~mask):
        hit = T.out[w] & mask
        if hit and hit != mask:
            return w
    return None


def is_homogeneous(T: Tournament, mask: int) -> bool:
    return splitter(T, mask) is None


def homogeneous_closure(T: Tournament, u: int, v: int) -> frozenset[int]:
    """Smallest homogeneous set containing ``u`` and ``v``.

    Any homogeneous superset must contain every splitter of its members,
    so absorbing splitters until none remain yields the unique minimum.
    """
    if u == v:
        raise ValueError("closure needs two distinct vertices")
    mask = 1 << u | 1 << v
    while (w := splitter(T, mask)) is not None:
        mask |= 1 << w
    return frozenset(bits(mask))


def _cert(T: Tournament, members: frozenset[int]) -> HomogeneousCert:
    mask = to_mask(members)
    return HomogeneousCert(
        members,
        {w: T.out[w] & mask == mask for w in range(T.n) if w not in members},
    )


def find_nontrivial_homogeneous(T: Tournament) -> HomogeneousCert | None:
    """A nontrivial homogeneous set, or None when ``T`` is prime.

    Every nontrivial homogeneous set contains the closure of any pair of its
    members, so scanning pair closures is complete.
    """
    if T.n < 3:
        return None
    for u in range(T.n):
        for v in range(u + 1, T.n):
            members = homogeneous_closure(T, u, v)
            if len(members) < T.n:
                return _cert(T, members)
    return None


def is_prime(T: Tournament) -> bool:
    return find_nontrivial_homogeneous(T) is None


def homogeneous_bruteforce(T: Tournament) -> frozenset[int] | None:
    """Oracle: test every vertex subset of size between 2 and n-1."""
    for mask in range(1 << T.n):
        if 1 < popcount(mask) < T.n and is_homogeneous(T, mask):
            return frozenset(bits(mask))
    return None


def substitute(T: Tournament, x: int, H: Tournament) -> Tournament:
    """Replace vertex ``x`` of ``T`` by a copy of ``H``.

    The copy occupies labels ``x .. x+|H|-1``; later vertices of ``T`` shift
    up by ``|H| - 1``.
    """
    if not 0 <= x < T.n:
        raise ValueError(f"vertex {x} out of range")
    if H.n == 0:
        raise ValueError("cannot substitute an empty tournament")
    origin: list[tuple[str, int]] = []
    for t in range(T.n):
        if t == x:
            origin.extend(("H", h) for h in range(H.n))
        else:
            origin.append(("T", t))

    def beats(a: int, b: int) -> bool:
        (ka, va), (kb, vb) = origin[a], origin[b]
        if ka == kb == "H":
            return H.edge(va, vb)
        return T.edge(x if ka == "H" else va, x if kb == "H" else vb)

    return Tournament.from_predicate(len(origin), beats)
