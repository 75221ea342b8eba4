"""Extended 1-perfect partitions of length 8 and the doubling construction.

An extended partition is an ordered 8-tuple of extended 1-perfect codes of
length 8 that tile the 128 even-weight words.  Two of them plus a
permutation ``sigma`` of the class indices give an extended 1-perfect code
of length 16: class ``i`` of the left partition is glued to class
``sigma[i]`` of the right one.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bitcode import POPCOUNT, Code, is_extended_perfect, mask, word_hex
from .fano import FANO_LINES
from .matching import NotAMatching, PairMatching, matching_label

EVEN8 = tuple(w for w in range(256) if not POPCOUNT[w] & 1)


class PartitionError(ValueError):
    """Raised for malformed partition input."""


def hamming8() -> Code:
    """The extended Hamming code whose weight-4 words are the Fano quadruples X and Y."""
    quads = [mask((0,) + line) for line in FANO_LINES]
    return Code([0, 0xFF] + quads + [0xFF ^ q for q in quads], 8)


@dataclass(frozen=True)
class ExtendedPartition:
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i) -> Code:
        return self.classes[i]

    def canonical(self) -> ExtendedPartition:
        """Classes reordered by their least member."""
        return ExtendedPartition(sorted(self.classes, key=Code.min_word))

    def reorder(self, order: Sequence[int]) -> ExtendedPartition:
        """New partition whose class ``k`` is old class ``order[k]``."""
        return ExtendedPartition([self.classes[o] for o in order])

    def class_of(self, x: int) -> int:
        for i, c in enumerate(self.classes):
            if x in c:
                return i
        raise KeyError(f"{x:#x} is not an even-weight word of length 8")


def partition_problem(P: ExtendedPartition) -> str | None:
    """Describe the first violated partition condition, or None if valid."""
    if len(P.classes) != 8:
        return f"expected 8 classes, got {len(P.classes)}"
    seen: dict[int, int] = {}
    for i, c in enumerate(P.classes):
        if not isinstance(c, Code) or c.length != 8:
            return f"class {i} is not a length-8 code"
        for w in c:
            if w in seen:
                return f"overlap: word {word_hex(w, 8)} in classes {seen[w]} and {i}"
            seen[w] = i
    missing = [w for w in EVEN8 if w not in seen]
    if missing:
        return f"coverage gap: even word {word_hex(missing[0], 8)} not covered"
    extra = [w for w in seen if POPCOUNT[w] & 1]
    if extra:
        return f"coverage: odd-weight word {word_hex(extra[0], 8)} present"
    for i, c in enumerate(P.classes):
        if not is_extended_perfect(c):
            return f"class {i} is not extended 1-perfect"
    return None


def validate_partition(P: ExtendedPartition) -> bool:
    return partition_problem(P) is None


def check_partition(P: ExtendedPartition):
    problem = partition_problem(P)
    if problem:
        raise PartitionError(problem)


def linear_partition() -> ExtendedPartition:
    """The eight cosets of :func:`hamming8` in the even-weight space."""
    H = hamming8()
    cosets = {}
    for w in EVEN8:
        c = H.translate(w)
        cosets[c.min_word()] = c
    return ExtendedPartition([cosets[k] for k in sorted(cosets)])


# ------------------------------------------------------------------ search

@lru_cache(maxsize=None)
def enumerate_unit_codes() -> tuple[Code, ...]:
    """All extended 1-perfect codes of length 8 containing the zero word.

    Clique search over the even words of weight >= 4, using bitsets for the
    pairwise distance >= 4 relation.
    """
    cands = [w for w in EVEN8 if w and POPCOUNT[w] >= 4]
    k = len(cands)
    compat = []
    for a in cands:
        bits = 0
        for j, b in enumerate(cands):
            if POPCOUNT[a ^ b] >= 4:
                bits |= 1 << j
        compat.append(bits)

    found = []

    def rec(chosen, avail, need):
        if need == 0:
            found.append(chosen)
            return
        while avail and avail.bit_count() >= need:
            j = (avail & -avail).bit_length() - 1
            avail &= avail - 1
            rec(chosen + (cands[j],), avail & compat[j], need - 1)

    rec((), (1 << k) - 1, 15)
    return tuple(sorted((Code((0,) + c, 8) for c in found), key=lambda c: tuple(c.words)))


@lru_cache(maxsize=None)
def unit_translates() -> tuple[Code, ...]:
    """Every extended 1-perfect code of length 8 inside the even-weight space."""
    seen = set()
    for u in enumerate_unit_codes():
        for t in EVEN8:
            seen.add(u.translate(t))
    return tuple(sorted(seen, key=lambda c: tuple(c.words)))


_EVEN_INDEX = {w: i for i, w in enumerate(EVEN8)}


def _bits(code: Code) -> int:
    b = 0
    for w in code:
        b |= 1 << _EVEN_INDEX[w]
    return b


def search_partitions(first_class: Code, limit: int | None = None) -> list[ExtendedPartition]:
    """Extended partitions with ``first_class`` as class 0, by exact cover.

    Classes after the first are chosen to cover the least uncovered word, so
    they come out ordered by least member.  Translates are tried in a fixed
    order, making the output deterministic.
    """
    if not is_extended_perfect(first_class) or 0 not in first_class:
        raise PartitionError("first class must be extended 1-perfect and contain 0")
    pool = [(c, _bits(c)) for c in unit_translates()]
    by_word = [[] for _ in EVEN8]
    for c, b in pool:
        for w in c:
            by_word[_EVEN_INDEX[w]].append((c, b))
    full = (1 << len(EVEN8)) - 1
    out: list[ExtendedPartition] = []

    def rec(classes, covered):
        if limit is not None and len(out) >= limit:
            return
        if covered == full:
            out.append(ExtendedPartition(classes))
            return
        free = ~covered & full
        j = (free & -free).bit_length() - 1
        for c, b in by_word[j]:
            if not b & covered:
                rec(classes + [c], covered | b)

    rec([first_class], _bits(first_class))
    return out


# ---------------------------------------------------------------- matchings

def distance2_masks(x_words, target: Code) -> np.ndarray:
    """Distinct supports ``x ^ x'`` over ``x`` in ``x_words``, ``x'`` in ``target`` at distance 2."""
    xs = np.asarray(x_words, dtype=np.int64).reshape(-1)
    diff = xs[:, None] ^ target.words[None, :]
    return np.unique(diff[POPCOUNT[diff] == 2])


def local_matching(x: int, target: Code) -> PairMatching:
    """The four words of ``target`` at distance 2 from ``x``, as a matching."""
    return PairMatching.from_masks(distance2_masks([x], target).tolist())


def class_matching(Ci: Code, Cj: Code) -> PairMatching:
    """Pairs ``supp(x ^ x')`` for ``x`` in ``Ci``, ``x'`` in ``Cj`` at distance 2.

    Raises :class:`NotAMatching` unless these form one perfect matching,
    which happens exactly when every word of ``Ci`` sees the same matching.
    """
    masks = distance2_masks(Ci.words, Cj).tolist()
    return PairMatching.from_masks(masks)


def partition_fingerprint(P: ExtendedPartition) -> str:
    """A digest invariant under reordering the classes."""
    labels = []
    for i in range(len(P.classes)):
        for j in range(i + 1, len(P.classes)):
            try:
                labels.append(str(matching_label(class_matching(P[i], P[j]))))
            except NotAMatching:
                labels.append("-")
    weights = sorted(
        tuple(sorted(Counter(int(POPCOUNT[w]) for w in c).items())) for c in P.classes)
    payload = repr((sorted(labels), weights))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


# ------------------------------------------------------------------ doubling

def check_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(8)):
        raise PartitionError(f"sigma must be a permutation of 0..7, got {sigma}")
    return sigma


def double(P: ExtendedPartition, Q: ExtendedPartition, sigma: Sequence[int]) -> Code:
    """The length-16 code ``U_i {(x, y) : x in P[i], y in Q[sigma[i]]}``.

    ``x`` occupies coordinates 0..7 and ``y`` coordinates 8..15.
    """
    check_partition(P)
    check_partition(Q)
    sigma = check_permutation(sigma)
    parts = []
    for i in range(8):
        x = P[i].words
        y = Q[sigma[i]].words
        parts.append((x[:, None] | (y[None, :] << 8)).ravel())
    words = np.concatenate(parts)
    code = Code(words, 16)
    assert len(code) == words.size, "doubling produced a collision"
    return code


# ------------------------------------------------------------------ file I/O

def format_partition(P: ExtendedPartition, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append("n=8")
    for i, c in enumerate(P.classes):
        lines.append(f"C{i}:")
        lines.extend(word_hex(w, 8) for w in c)
    return "\n".join(lines) + "\n"


def parse_partition(text: str, source: str = "<string>") -> ExtendedPartition:
    from .bitcode import CodeFormatError

    header = False
    sections: dict[int, list[int]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header:
            if line != "n=8":
                raise CodeFormatError(f"{source}:{lineno}: expected 'n=8' header")
            header = True
            continue
        if line.startswith("C") and line.endswith(":"):
            try:
                current = int(line[1:-1])
            except ValueError:
                raise CodeFormatError(f"{source}:{lineno}: bad section header {line!r}") from None
            if current in sections or not 0 <= current < 8:
                raise CodeFormatError(f"{source}:{lineno}: unexpected section {line!r}")
            sections[current] = []
            continue
        if current is None:
            raise CodeFormatError(f"{source}:{lineno}: word before any 'C<i>:' section")
        if len(line) != 2:
            raise CodeFormatError(f"{source}:{lineno}: expected two hex digits, got {line!r}")
        try:
            sections[current].append(int(line, 16))
        except ValueError:
            raise CodeFormatError(f"{source}:{lineno}: bad hex word {line!r}") from None
    if not header:
        raise CodeFormatError(f"{source}: missing 'n=8' header")
    if sorted(sections) != list(range(8)):
        raise CodeFormatError(f"{source}: expected sections C0..C7")
    for i, ws in sections.items():
        if len(ws) != 16:
            raise CodeFormatError(f"{source}: section C{i} has {len(ws)} words, expected 16")
    return ExtendedPartition([Code(sections[i], 8) for i in range(8)])


def read_partition(path) -> ExtendedPartition:
    with open(path) as fh:
        return parse_partition(fh.read(), str(path))


def write_partition(P: ExtendedPartition, path, comment: str | None = None):
    from .io import atomic_write
    atomic_write(path, format_partition(P, comment))
