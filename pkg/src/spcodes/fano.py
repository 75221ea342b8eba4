"""Fano-plane quadruple sets and matching products on 16 coordinates.

Quadruples are 16-bit masks.  ``X`` holds ``{0} + line`` for each line of
the Fano plane on ``1..7``; ``Y`` the complements of ``X`` inside the
octet ``0..7``; ``Z`` the reflection ``c -> 15 - c`` of ``X | Y``.
Together they are the 28 weight-4 words of two extended Hamming codes,
one on each half of the coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitcode import mask, parse_quad, quad_str, support
from .matching import PairMatching

FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 7), (2, 5, 6), (3, 4, 6), (3, 5, 7))

OCTET = 0xFF

# Z exactly as printed in the source listing; two entries are not
# reflections of X | Y (see fano_z_discrepancies).
Z_LITERAL = frozenset(parse_quad(q) for q in (
    "cdef", "abef", "89ef", "8bdf", "9adf", "9bcf", "8acf",
    "89ab", "89cd", "abcd", "9ace", "8bce", "8ace", "9bce"))


def s_supplement(quads, s: int) -> frozenset:
    """Reflect every coordinate ``c -> s - c`` inside each quadruple."""
    out = set()
    for q in quads:
        coords = support(q)
        if coords and coords[-1] > s:
            raise ValueError(f"coordinate exceeds {s} in {quad_str(q)}")
        out.add(mask(s - c for c in coords))
    return frozenset(out)


def complement_in_octet(quads) -> frozenset:
    """Replace every quadruple by its set complement inside ``0..7``."""
    out = set()
    for q in quads:
        if q & ~OCTET:
            raise ValueError(f"{quad_str(q)} is not inside 0..7")
        out.add(OCTET ^ q)
    return frozenset(out)


def _quads(*names) -> frozenset:
    return frozenset(parse_quad(n) for n in names)


@dataclass(frozen=True)
class FanoBlocks:
    X: frozenset
    Y: frozenset
    Z: frozenset
    A: frozenset
    B: frozenset
    A0: frozenset
    A1: frozenset
    B0: frozenset
    B1: frozenset

    @property
    def Ap(self):
        return complement_in_octet(self.A)

    @property
    def Bp(self):
        return complement_in_octet(self.B)

    @property
    def A0p(self):
        return complement_in_octet(self.A0)

    @property
    def A1p(self):
        return complement_in_octet(self.A1)

    @property
    def B0p(self):
        return complement_in_octet(self.B0)

    @property
    def B1p(self):
        return complement_in_octet(self.B1)

    @property
    def Xp(self):
        return self.Y | self.Z

    @property
    def Zp(self):
        return self.Z | self.Ap

    @property
    def Z0(self):
        return self.Z | self.A0p

    @property
    def all28(self):
        return self.X | self.Y | self.Z

    def block(self, name: str) -> frozenset:
        return getattr(self, BLOCK_ATTRS[name])

    def with_z(self, z) -> FanoBlocks:
        return FanoBlocks(self.X, self.Y, frozenset(z), self.A, self.B,
                          self.A0, self.A1, self.B0, self.B1)


BLOCK_ATTRS = {
    "X": "X", "Y": "Y", "Z": "Z", "A": "A", "B": "B", "A'": "Ap", "B'": "Bp",
    "A0": "A0", "A1": "A1", "B0": "B0", "B1": "B1",
    "A'0": "A0p", "A'1": "A1p", "B'0": "B0p", "B'1": "B1p",
    "X'": "Xp", "Z'": "Zp", "Z0": "Z0",
}


def build_fano_sets() -> FanoBlocks:
    X = frozenset(mask((0,) + line) for line in FANO_LINES)
    Y = complement_in_octet(X)
    Z = s_supplement(X | Y, 15)
    return FanoBlocks(
        X=X, Y=Y, Z=Z,
        A=_quads("0123", "0145", "0167"),
        B=_quads("0247", "0256", "0346", "0357"),
        A0=_quads("0123"),
        A1=_quads("0145", "0167"),
        B0=_quads("0247", "0256"),
        B1=_quads("0346", "0357"),
    )


FANO = build_fano_sets()


def fano_z_discrepancies(blocks: FanoBlocks = FANO):
    """Entries only in the definitional Z and entries only in the printed Z."""
    return sorted(blocks.Z - Z_LITERAL), sorted(Z_LITERAL - blocks.Z)


def z_variants(blocks: FanoBlocks = FANO) -> dict[str, frozenset]:
    return {"definitional": blocks.Z, "literal": Z_LITERAL}


@dataclass(frozen=True)
class BlockSchedule:
    """Which Fano blocks a loop or a link carries for a given kernel dimension.

    ``loop_blocks`` are unioned into every loop; each ``link_blocks`` entry
    is the structural part of one link.  ``loop_product`` marks the extra
    16-quadruple matching product in the loop when the dimension is 9.
    """

    kappa: int
    loop_name: str
    loop_blocks: tuple
    link_blocks: tuple
    loop_product: bool = False
    blocks: FanoBlocks = field(default=FANO, repr=False, compare=False)

    @property
    def loop_set(self) -> frozenset:
        out = frozenset()
        for name in self.loop_blocks:
            out |= self.blocks.block(name)
        return out

    @property
    def loop_multiplicity(self) -> int:
        return len(self.loop_set) + (16 if self.loop_product else 0)

    def link_set(self, name: str) -> frozenset:
        return self.blocks.block(name)

    def expected_link_sizes(self) -> dict[str, int]:
        return {name: len(self.blocks.block(name)) for name in self.link_blocks}


_SCHEDULES = {
    9: ("X'+X", ("Z", "Y", "X"), (), True),
    8: ("X'+X", ("Z", "Y", "X"), (), False),
    7: ("X'", ("Z", "Y"), ("X",), False),
    6: ("Z'", ("Z", "A'"), ("B'", "B", "A"), False),
    5: ("Z0", ("Z", "A'0"), ("A'1", "B'0", "B'1", "B1", "B0", "A1", "A0"), False),
}


def block_schedule(kappa: int, blocks: FanoBlocks = FANO) -> BlockSchedule:
    if kappa not in _SCHEDULES:
        raise ValueError(f"kernel dimension {kappa} outside 5..9")
    name, loop, links, prod = _SCHEDULES[kappa]
    return BlockSchedule(kappa, name, loop, links, prod, blocks)


@dataclass(frozen=True)
class LoqBlock:
    left_pair: tuple
    quads: tuple  # 4 masks in lexicographic order

    def __str__(self):
        return "{" + ", ".join(quad_str(q) for q in self.quads) + "}"


@dataclass(frozen=True)
class MatchingProduct:
    left: PairMatching
    right: PairMatching
    quads: frozenset

    @property
    def name(self) -> str:
        return f"{self.left.label()}{self.right.label()}"

    def sorted_quads(self) -> list[int]:
        return sorted(self.quads, key=quad_str)


def matching_product(left: PairMatching, right: PairMatching) -> MatchingProduct:
    if left.base != 0 or right.base != 8:
        raise ValueError("left matching must live on 0..7 and right on 8..15")
    quads = frozenset(a | b for a in left.masks for b in right.masks)
    return MatchingProduct(left, right, quads)


def loq_blocks(product: MatchingProduct) -> tuple[LoqBlock, ...]:
    """The four lexicographically ordered quarters, one per left pair."""
    ordered = product.sorted_quads()
    blocks = []
    for k in range(4):
        quarter = tuple(ordered[4 * k: 4 * k + 4])
        left = support(quarter[0] & OCTET)
        if any(q & OCTET != mask(left) for q in quarter):
            raise AssertionError("quarter does not share a left pair")
        blocks.append(LoqBlock(left, quarter))
    return tuple(blocks)
