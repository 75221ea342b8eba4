"""Perfect matchings of an octet of coordinates and their lexicographic labels.

A matching of ``{b, ..., b+7}`` is written ``alpha_ell^m``: ``alpha`` is the
partner of the smallest point, ``ell`` the partner of the smallest point not
yet paired, ``m`` the partner of the next one (all relative to ``b``).
"""

from __future__ import annotations

from typing import NamedTuple

from .bitcode import mask, support


class NotAMatching(ValueError):
    """The given pairs do not form a perfect matching of the octet."""


class MatchingLabel(NamedTuple):
    alpha: int
    ell: int
    m: int

    def __str__(self) -> str:
        return f"{self.alpha}_{self.ell}^{self.m}"

    @classmethod
    def parse(cls, text: str) -> MatchingLabel:
        head, _, m = text.partition("^")
        alpha, _, ell = head.partition("_")
        return cls(int(alpha), int(ell), int(m))


class PairMatching:
    """Four disjoint pairs covering ``base .. base+7``.

    ``pairs`` is a tuple of sorted 2-tuples ordered by their smaller point.
    """

    __slots__ = ("pairs", "base")

    def __init__(self, pairs, base: int = 0):
        norm = tuple(sorted(tuple(sorted(int(c) for c in p)) for p in pairs))
        points = [c for p in norm for c in p]
        if (len(norm) != 4 or any(len(p) != 2 for p in norm)
                or sorted(points) != list(range(base, base + 8))):
            raise NotAMatching(f"not a perfect matching of [{base}, {base + 7}]: {norm}")
        self.pairs = norm
        self.base = base

    @classmethod
    def from_masks(cls, masks, base: int = 0) -> PairMatching:
        return cls([support(m) for m in masks], base)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask(p) for p in self.pairs)

    def partner(self, c: int) -> int:
        for a, b in self.pairs:
            if c == a:
                return b
            if c == b:
                return a
        raise KeyError(c)

    def label(self) -> MatchingLabel:
        return matching_label(self)

    def shifted(self, offset: int) -> PairMatching:
        return PairMatching([(a + offset, b + offset) for a, b in self.pairs], self.base + offset)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairMatching):
            return NotImplemented
        return self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join("%x%x" % p for p in self.pairs) + "}"

    __repr__ = __str__


def matching_label(matching: PairMatching) -> MatchingLabel:
    b = matching.base
    alpha = matching.partner(b)
    rest = [c for c in range(b, b + 8) if c not in (b, alpha)]
    x = rest[0]
    ell = matching.partner(x)
    rest = [c for c in rest if c not in (x, ell)]
    y = rest[0]
    m = matching.partner(y)
    return MatchingLabel(alpha - b, ell - b, m - b)


def matching_from_label(label: MatchingLabel, base: int = 0) -> PairMatching:
    """Rebuild the matching named by ``label`` by the lexicographic pairing rule."""
    alpha, ell, m = label
    pairs = [(0, alpha)]
    rest = [c for c in range(8) if c not in (0, alpha)]
    x = rest[0]
    if ell not in rest or ell == x:
        raise NotAMatching(f"invalid label {label}")
    pairs.append((x, ell))
    rest = [c for c in rest if c not in (x, ell)]
    y = rest[0]
    if m not in rest or m == y:
        raise NotAMatching(f"invalid label {label}")
    pairs.append((y, m))
    rest = [c for c in rest if c not in (y, m)]
    pairs.append(tuple(rest))
    return PairMatching([(a + base, c + base) for a, c in pairs], base)


def all_matchings(base: int = 0) -> list[PairMatching]:
    """The 105 perfect matchings of the octet, sorted by pairs."""
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(PairMatching(acc, base))
            return
        a = rest[0]
        for b in rest[1:]:
            rec([c for c in rest if c not in (a, b)], acc + [(a, b)])

    rec(list(range(base, base + 8)), [])
    return sorted(out, key=lambda pm: pm.pairs)
