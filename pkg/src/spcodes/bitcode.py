"""Bit-level arithmetic on binary words and codes of length <= 16.

Coordinate ``i`` of a word is the bit of value ``2**i``.  Words are plain
Python ints internally; :class:`Word` is a thin length-carrying wrapper for
the public API.  Codes keep a sorted ``numpy`` array of their words plus a
membership table over all of F_2^n, which is what makes kernel and graph
computations cheap at this size.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

MAX_LENGTH = 16

# popcount of every 16-bit integer
POPCOUNT = np.array([bin(i).count("1") for i in range(1 << MAX_LENGTH)], dtype=np.int8)


class CodeFormatError(ValueError):
    """Raised when a code file cannot be parsed."""


def weight(x: int) -> int:
    return int(x).bit_count()


def support(x: int) -> tuple[int, ...]:
    """Sorted coordinates of the set bits of ``x``."""
    x = int(x)
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return tuple(out)


def mask(coords: Iterable[int]) -> int:
    m = 0
    for c in coords:
        m |= 1 << int(c)
    return m


def quad_str(x: int) -> str:
    """Render a small coordinate set as sorted hex digits, e.g. ``'0189'``."""
    return "".join(format(c, "x") for c in support(x))


def parse_quad(s: str) -> int:
    """Inverse of :func:`quad_str`."""
    coords = [int(ch, 16) for ch in s.strip()]
    if len(set(coords)) != len(coords):
        raise ValueError(f"repeated coordinate in {s!r}")
    return mask(coords)


def word_hex(x: int, n: int) -> str:
    return format(int(x), "0%dx" % hex_width(n))


def hex_width(n: int) -> int:
    return max(1, (n + 3) // 4)


@dataclass(frozen=True)
class Word:
    bits: int
    length: int

    def __post_init__(self):
        if not 0 < self.length <= MAX_LENGTH:
            raise ValueError(f"unsupported word length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} exceed length {self.length}")

    def __xor__(self, other: Word) -> Word:
        _check_same_length(self, other)
        return Word(self.bits ^ other.bits, self.length)

    def __int__(self) -> int:
        return self.bits

    @property
    def weight(self) -> int:
        return weight(self.bits)

    def hex(self) -> str:
        return word_hex(self.bits, self.length)

    @classmethod
    def from_hex(cls, text: str, length: int) -> Word:
        return cls(int(text, 16), length)

    def __str__(self) -> str:
        return self.hex()


def _check_same_length(u, v):
    if isinstance(u, Word) and isinstance(v, Word) and u.length != v.length:
        raise ValueError(f"length mismatch: {u.length} != {v.length}")


def distance(u: Word | int, v: Word | int) -> int:
    """Hamming distance between two words of equal length."""
    _check_same_length(u, v)
    return weight(int(u) ^ int(v))


class Code:
    """An immutable set of binary words of a fixed length.

    Equality and hashing are by word set.  ``words`` is a sorted, read-only
    ``int64`` array.
    """

    def __init__(self, words: Iterable[int] | np.ndarray, length: int):
        if not 0 < length <= MAX_LENGTH:
            raise ValueError(f"unsupported code length {length}")
        arr = np.unique(np.fromiter((int(w) for w in words), dtype=np.int64)
                        if not isinstance(words, np.ndarray) else words.astype(np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >> length):
            raise ValueError(f"word outside F_2^{length}")
        arr.setflags(write=False)
        self.length = length
        self.words = arr

    @cached_property
    def member(self) -> np.ndarray:
        """Boolean membership table indexed by word value."""
        table = np.zeros(1 << self.length, dtype=bool)
        table[self.words] = True
        table.setflags(write=False)
        return table

    @cached_property
    def _frozen(self) -> frozenset:
        return frozenset(self.words.tolist())

    def __len__(self) -> int:
        return int(self.words.size)

    def __iter__(self) -> Iterator[int]:
        return iter(self.words.tolist())

    def __contains__(self, x) -> bool:
        x = int(x)
        return 0 <= x < (1 << self.length) and bool(self.member[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Code):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.length, self._frozen))

    def __repr__(self) -> str:
        return f"Code(length={self.length}, size={len(self)})"

    def translate(self, x: int) -> Code:
        return Code(self.words ^ int(x), self.length)

    def permute(self, perm) -> Code:
        """Apply a coordinate permutation: coordinate ``i`` moves to ``perm[i]``."""
        return Code(permute_words(self.words, perm), self.length)

    def min_word(self) -> int:
        return int(self.words[0])


def permute_words(words: np.ndarray, perm) -> np.ndarray:
    words = np.asarray(words, dtype=np.int64)
    out = np.zeros_like(words)
    for i, p in enumerate(perm):
        out |= ((words >> i) & 1) << int(p)
    return out


class Subspace:
    """A GF(2) linear subspace of F_2^n, stored by a reduced basis."""

    def __init__(self, basis: Iterable[int], length: int):
        self.length = length
        self._pivots: dict[int, int] = {}
        kept = []
        for b in basis:
            r = self._reduce(int(b))
            if r:
                self._insert(r)
                kept.append(int(b))
        self.basis = tuple(kept)

    def _reduce(self, x: int) -> int:
        for bit in sorted(self._pivots, reverse=True):
            if x >> bit & 1:
                x ^= self._pivots[bit]
        return x

    def _insert(self, r: int):
        top = r.bit_length() - 1
        # keep pivot rows fully reduced against each other
        for bit, row in list(self._pivots.items()):
            if row >> top & 1:
                self._pivots[bit] = row ^ r
        self._pivots[top] = r

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __contains__(self, x) -> bool:
        return self._reduce(int(x)) == 0

    def __len__(self) -> int:
        return 1 << self.dimension

    def elements(self) -> np.ndarray:
        """All ``2**dim`` members, sorted."""
        out = np.zeros(1, dtype=np.int64)
        for b in self.basis:
            out = np.concatenate([out, out ^ b])
        return np.sort(out)

    def issubspace(self, other: Subspace) -> bool:
        return all(b in other for b in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.length == other.length and self.dimension == other.dimension
                and self.issubspace(other))

    def __hash__(self) -> int:
        return hash((self.length, tuple(self.elements().tolist())))

    def __repr__(self) -> str:
        return f"Subspace(length={self.length}, dim={self.dimension})"


def span_rank(words: Iterable[int]) -> int:
    """Dimension of the GF(2) span of ``words``."""
    pivots: dict[int, int] = {}
    for w in words:
        x = int(w)
        while x:
            top = x.bit_length() - 1
            if top not in pivots:
                pivots[top] = x
                break
            x ^= pivots[top]
    return len(pivots)


def rank(code: Code) -> int:
    if not len(code):
        raise ValueError("rank of an empty code")
    return span_rank(code.words.tolist())


def kernel(code: Code) -> Subspace:
    """The subspace ``{x : x + C = C}``.

    Every kernel element is ``c + c0`` for some codeword ``c``, so only those
    candidates are scanned; a cheap test against a handful of codewords
    discards most of them before the full membership check.
    """
    if not len(code):
        raise ValueError("kernel of an empty code")
    words, member = code.words, code.member
    cands = words ^ words[0]
    probe = words[: min(64, words.size)]
    cands = cands[member[cands[:, None] ^ probe[None, :]].all(axis=1)]
    elems = [int(t) for t in cands if member[words ^ t].all()]
    return Subspace(elems, code.length)


def puncture_words(words: np.ndarray, i: int) -> np.ndarray:
    words = np.asarray(words, dtype=np.int64)
    low = words & ((1 << i) - 1)
    high = words >> (i + 1)
    return low | (high << i)


def puncture(code: Code, i: int) -> Code:
    """Delete coordinate ``i``; higher coordinates shift down by one."""
    if not 0 <= i < code.length:
        raise ValueError(f"coordinate {i} out of range for length {code.length}")
    if code.length == 1:
        raise ValueError("cannot puncture a length-1 code")
    return Code(puncture_words(code.words, i), code.length - 1)


def extend_parity(code: Code) -> Code:
    """Append an overall parity coordinate at the highest index."""
    if code.length >= MAX_LENGTH:
        raise ValueError("extension would exceed the supported length")
    par = POPCOUNT[code.words].astype(np.int64) & 1
    return Code(code.words | (par << code.length), code.length + 1)


def min_distance(code: Code) -> int:
    words = code.words
    if words.size < 2:
        raise ValueError("minimum distance needs at least two words")
    best = code.length + 1
    for k in range(1, words.size):
        d = POPCOUNT[words[k:] ^ words[:-k]].min()
        best = min(best, int(d))
    return best


def is_extended_perfect(code: Code) -> bool:
    """True iff ``code`` is an extended 1-perfect code of length 8 or 16.

    Even weights, distance >= 4 and size ``2**n / (2n)`` together force the
    punctured code to meet the Hamming bound with equality.
    """
    n = code.length
    if n not in (8, 16):
        raise ValueError(f"unsupported length {n} (expected 8 or 16)")
    if len(code) != (1 << n) // (2 * n):
        return False
    if (POPCOUNT[code.words] & 1).any():
        return False
    return _min_distance_at_least(code, 4)


def _min_distance_at_least(code: Code, d: int) -> bool:
    # every word within distance d-1 of a codeword, other than itself, must be absent
    member = code.member
    n = code.length
    small = np.array([x for x in range(1, 1 << n) if POPCOUNT[x] < d], dtype=np.int64)
    return not member[code.words[:, None] ^ small[None, :]].any()


def is_perfect(code: Code) -> bool:
    """True iff ``code`` is a 1-perfect code (every word within distance 1 of exactly one codeword)."""
    n = code.length
    if len(code) * (n + 1) != 1 << n:
        return False
    balls = code.words[:, None] ^ np.array([0] + [1 << i for i in range(n)], dtype=np.int64)[None, :]
    return np.unique(balls).size == 1 << n


# ---------------------------------------------------------------- file I/O

def format_code(code: Code, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"n={code.length}")
    lines.extend(word_hex(w, code.length) for w in code)
    return "\n".join(lines) + "\n"


def parse_code(text: str, source: str = "<string>") -> Code:
    length = None
    words = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if length is None:
            if not line.startswith("n="):
                raise CodeFormatError(f"{source}:{lineno}: expected 'n=<length>' header")
            try:
                length = int(line[2:])
            except ValueError:
                raise CodeFormatError(f"{source}:{lineno}: bad length {line[2:]!r}") from None
            if not 0 < length <= MAX_LENGTH:
                raise CodeFormatError(f"{source}:{lineno}: unsupported length {length}")
            continue
        try:
            w = int(line, 16)
        except ValueError:
            raise CodeFormatError(f"{source}:{lineno}: bad hex word {line!r}") from None
        if len(line) != hex_width(length) or w >> length:
            raise CodeFormatError(f"{source}:{lineno}: word {line!r} does not fit length {length}")
        words.append(w)
    if length is None:
        raise CodeFormatError(f"{source}: missing 'n=<length>' header")
    if len(set(words)) != len(words):
        raise CodeFormatError(f"{source}: duplicate words")
    return Code(words, length)


def read_code(path) -> Code:
    with open(path) as fh:
        return parse_code(fh.read(), str(path))


def write_code(code: Code, path, comment: str | None = None):
    from .io import atomic_write
    atomic_write(path, format_code(code, comment))
