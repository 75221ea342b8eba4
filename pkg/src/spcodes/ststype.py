"""STS(15)s of punctured codes, Pasch counts and STS(15)-type profiles.

A Steiner triple system is held as a frozenset of 3-bit masks.  For batch
work it is converted to a "third point" matrix ``T[a, b] = c`` for each
triple ``{a, b, c}``; a Pasch configuration ``{abc, ade, fbd, fce}`` is then
detected from an anchor ``a`` and two points ``b, d`` on different lines
through it by testing ``T[T[a,b], T[a,d]] == T[b,d]``.  Each configuration
is seen 24 times that way, 4 times per anchor point.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bitcode import POPCOUNT, Code, is_perfect, kernel, mask, puncture, puncture_words, support
from .sqsgraph import QUADS16, cosets, neighbour_table


class NotACodeword(KeyError):
    pass


@dataclass(frozen=True)
class PaschSignature:
    total: int
    per_point: tuple  # non-increasing

    def __post_init__(self):
        object.__setattr__(self, "per_point", tuple(sorted(self.per_point, reverse=True)))

    def __str__(self):
        return f"{self.total}({','.join(map(str, self.per_point))})"


# ---------------------------------------------------------------- STS basics

def is_sts(triples, points: int = 15) -> bool:
    pairs = Counter()
    for t in triples:
        s = support(t)
        if len(s) != 3 or s[-1] >= points:
            return False
        for p in combinations(s, 2):
            pairs[p] += 1
    return len(pairs) == points * (points - 1) // 2 and set(pairs.values()) == {1}


def codeword_sts(code15: Code, v: int, check: bool = True) -> frozenset:
    """Supports of ``v ^ w`` over codewords ``w`` at distance 3 from ``v``."""
    if check and not is_perfect(code15):
        raise ValueError("expected a 1-perfect code")
    if v not in code15:
        raise NotACodeword(v)
    diff = code15.words ^ int(v)
    return frozenset(diff[POPCOUNT[diff] == 3].tolist())


def third_point_matrix(triples, points: int = 15) -> np.ndarray:
    T = np.full((points, points), -1, dtype=np.int64)
    for t in triples:
        a, b, c = support(t)
        T[a, b] = T[b, a] = c
        T[a, c] = T[c, a] = b
        T[b, c] = T[c, b] = a
    return T


def pasch_counts(T: np.ndarray):
    """Pasch totals and per-point counts for a batch of third-point matrices.

    ``T`` has shape ``(N, v, v)``; returns ``(totals[N], per_point[N, v])``.
    """
    T = np.asarray(T)
    if T.ndim == 2:
        T = T[None]
    N, v, _ = T.shape
    ar = np.arange(v)
    # c[n, a, b] = T[a, b], e[n, a, d] = T[a, d], f[n, b, d] = T[b, d]
    C = T[:, :, :, None]
    E = T[:, :, None, :]
    F = T[:, None, :, :]
    n_idx = np.arange(N)[:, None, None, None]
    Cc = np.where(C >= 0, C, 0)
    Ec = np.where(E >= 0, E, 0)
    hit = (T[n_idx, Cc, Ec] == F) & (C >= 0) & (E >= 0) & (F >= 0)
    # b and d must lie on different lines through a, which also excludes b == d
    hit &= C != ar[None, None, None, :]
    hit &= (ar[None, None, :, None] != ar[None, None, None, :])
    per_anchor = hit.sum(axis=(2, 3))
    per_point = per_anchor // 4
    totals = per_anchor.sum(axis=1) // 24
    return totals, per_point


def pasch_signature(triples, points: int = 15) -> PaschSignature:
    totals, per_point = pasch_counts(third_point_matrix(triples, points))
    return PaschSignature(int(totals[0]), tuple(int(x) for x in per_point[0]))


def pasch_signature_bruteforce(triples) -> PaschSignature:
    """Scan every 4-subset of triples; independent of the anchor method."""
    triples = list(triples)
    per_point = Counter()
    total = 0
    for four in combinations(triples, 4):
        union = four[0] | four[1] | four[2] | four[3]
        if POPCOUNT[union] != 6:
            continue
        if all(POPCOUNT[x & y] == 1 for x, y in combinations(four, 2)):
            total += 1
            for p in support(union):
                per_point[p] += 1
    points = max(max(support(t)) for t in triples) + 1
    return PaschSignature(total, tuple(per_point.get(p, 0) for p in range(points)))


def pg32_sts() -> frozenset:
    """Lines of PG(3,2): triples {a, b, a^b} of the nonzero vectors of F_2^4 (point p -> p-1)."""
    out = set()
    for a in range(1, 16):
        for b in range(a + 1, 16):
            c = a ^ b
            if c > b:
                out.add(mask((a - 1, b - 1, c - 1)))
    return frozenset(out)


def fano_sts() -> frozenset:
    from .fano import FANO_LINES
    return frozenset(mask(c - 1 for c in line) for line in FANO_LINES)


# ---------------------------------------------------------------- type table

# (type, total, per-point counts) for the STS(15)-types that occur.  Rows
# for types 5 and 13 list only 14 counts; the missing one is restored from
# the rule sum(per_point) == 6 * total.
_RAW_TABLE = (
    (1, 105, (42,) * 15),
    (2, 73, (42, 30, 30, 30, 30, 30, 30, 30, 30, 26, 26, 26, 26, 26, 26)),
    (3, 57, (26, 26, 26, 24, 24, 24, 24, 24, 24, 24, 24, 18, 18, 18, 18)),
    (4, 49, (30, 26, 22, 20, 20, 20, 20, 18, 18, 18, 18, 18, 18, 14, 14)),
    (5, 49, (26, 26, 20, 20, 20, 20, 18, 18, 18, 18, 18, 18, 18, 18)),
    (6, 37, (22, 22, 22, 14, 14, 14, 14, 14, 14, 12, 12, 12, 12, 12, 12)),
    (7, 33, (18, 18, 18, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12)),
    (8, 37, (18, 18, 18, 15, 15, 15, 15, 14, 14, 14, 14, 14, 14, 14, 10)),
    (13, 33, (20, 16, 16, 14, 14, 12, 12, 12, 12, 12, 12, 12, 12, 10)),
    (14, 37, (24, 16, 16, 16, 15, 15, 15, 15, 14, 14, 14, 12, 12, 12, 12)),
    (16, 49, (21, 21, 21, 21, 21, 21, 21, 21, 18, 18, 18, 18, 18, 18, 18)),
)


def _repair(total: int, counts: tuple) -> tuple[tuple, bool]:
    if len(counts) == 15:
        return counts, False
    if len(counts) != 14:
        raise ValueError("can only restore a single missing count")
    missing = 6 * total - sum(counts)
    if missing <= 0:
        raise ValueError("sum rule leaves no room for a missing count")
    return tuple(sorted(counts + (missing,), reverse=True)), True


def build_type_table():
    table = {}
    repaired = []
    for label, total, counts in _RAW_TABLE:
        full, fixed = _repair(total, counts)
        sig = PaschSignature(total, full)
        if sum(sig.per_point) != 6 * total:
            raise ValueError(f"type {label} violates the sum rule")
        if sig in table:
            raise ValueError(f"types {table[sig]} and {label} share a signature")
        table[sig] = label
        if fixed:
            repaired.append(label)
    return table, tuple(repaired)


TYPE_TABLE, REPAIRED_TYPES = build_type_table()

UNCLASSIFIED = 0


def sts_type_lookup(sig: PaschSignature) -> int:
    """Type label of ``sig``, or :data:`UNCLASSIFIED` (0) if not tabulated."""
    return TYPE_TABLE.get(sig, UNCLASSIFIED)


_LETTERS = {10: "a", 11: "b", 12: "c", 13: "c", 14: "d", 15: "f", 16: "g"}


def type_char(t: int) -> str:
    """Single-character shorthand: digits, then c, d, g for 13, 14, 16."""
    if t == UNCLASSIFIED:
        return "?"
    if t < 10:
        return str(t)
    return _LETTERS.get(t, "?")


# ----------------------------------------------------------------- profiles

class Homogeneity(enum.Enum):
    STS_HOMOGENEOUS = "STS-homogeneous"
    SQS_HOMOGENEOUS = "SQS-homogeneous"
    HETEROGENEOUS = "heterogeneous"

    def __str__(self):
        return self.value


@dataclass
class TypeProfile:
    """STS(15)-types per codeword (rows) and punctured coordinate (columns)."""

    words: np.ndarray
    types: np.ndarray            # (len(words), 16) int, 0 = unclassified
    reps: np.ndarray             # kernel coset representatives
    rep_types: np.ndarray        # (len(reps), 16)
    signatures: dict             # (rep, coord) -> PaschSignature, unclassified only

    def tuple_of(self, v: int) -> tuple:
        i = int(np.searchsorted(self.words, v))
        return tuple(int(t) for t in self.types[i])

    def multiset(self) -> Counter:
        return Counter(tuple(int(t) for t in row) for row in self.types)

    def rep_strings(self) -> list[tuple[int, str]]:
        return [(int(r), "".join(type_char(int(t)) for t in row))
                for r, row in zip(self.reps, self.rep_types)]


def _sts_matrices(code: Code, rows: np.ndarray, coord: int, table: np.ndarray) -> np.ndarray:
    """Third-point matrices of the STSs at ``rows`` in the code punctured at ``coord``."""
    quads = QUADS16
    has = (quads >> coord) & 1
    cols = np.nonzero(has)[0]
    sub = table[np.ix_(rows, cols)]   # (R, 455) booleans
    trip = puncture_words(quads[cols] & ~(1 << coord), coord)
    pts = np.array([support(t) for t in trip.tolist()])   # (455, 3)
    out = np.full((rows.size, 15, 15), -1, dtype=np.int64)
    for r in range(rows.size):
        sel = pts[sub[r]]
        if sel.shape[0] != 35:
            raise ValueError("punctured neighbourhood is not an STS(15)")
        a, b, c = sel[:, 0], sel[:, 1], sel[:, 2]
        out[r, a, b] = c
        out[r, b, a] = c
        out[r, a, c] = b
        out[r, c, a] = b
        out[r, b, c] = a
        out[r, c, b] = a
    return out


def code_type_profile(code: Code, K=None, verify_cosets: bool = True) -> TypeProfile:
    """STS(15)-type of every codeword at every punctured coordinate.

    Types are computed at each kernel coset representative and copied to
    the rest of the coset; with ``verify_cosets`` a second member of every
    coset is recomputed and must agree.
    """
    if code.length != 16:
        raise ValueError("expected a length-16 code")
    K = kernel(code) if K is None else K
    cs = cosets(code, K)
    table = neighbour_table(code)
    words = code.words
    rep_rows = np.searchsorted(words, cs.reps)
    rows = [rep_rows]
    if verify_cosets and K.dimension:
        rows.append(np.searchsorted(words, cs.reps ^ K.basis[-1]))
    rows = np.concatenate(rows)
    n = cs.count
    types = np.zeros((rows.size, 16), dtype=np.int64)
    sigs = {}
    for i in range(16):
        totals, per_point = pasch_counts(_sts_matrices(code, rows, i, table))
        for r in range(rows.size):
            sig = PaschSignature(int(totals[r]), tuple(int(x) for x in per_point[r]))
            t = sts_type_lookup(sig)
            types[r, i] = t
            if t == UNCLASSIFIED and r < n:
                sigs[(int(cs.reps[r]), i)] = sig
    rep_types = types[:n]
    if verify_cosets and K.dimension and not (types[n:] == rep_types).all():
        raise AssertionError("STS(15)-types are not constant on kernel cosets")
    return TypeProfile(words, rep_types[cs.coset_of], cs.reps, rep_types, sigs)


def code_type_profile_direct(code: Code, words=None) -> dict:
    """Type tuples at ``words`` computed by explicit puncturing, for cross-checks."""
    words = code.words if words is None else words
    punctured = [puncture(code, i) for i in range(code.length)]
    out = {}
    for v in words:
        row = []
        for i, c15 in enumerate(punctured):
            sts = codeword_sts(c15, int(puncture_words(np.array([v]), i)[0]), check=False)
            row.append(sts_type_lookup(pasch_signature(sts)))
        out[int(v)] = tuple(row)
    return out


def homogeneity_class(profile: TypeProfile) -> Homogeneity:
    rows = np.sort(profile.types, axis=1)
    if not (rows == rows[0]).all():
        return Homogeneity.HETEROGENEOUS
    if (profile.types == profile.types[0, 0]).all():
        return Homogeneity.STS_HOMOGENEOUS
    return Homogeneity.SQS_HOMOGENEOUS


def format_profile(profile: TypeProfile) -> str:
    from .bitcode import word_hex
    return "".join(f"{word_hex(r, 16)} {s}\n" for r, s in profile.rep_strings())
