"""Minimum-distance graphs, per-codeword SQS(16)s and quotients mod kernel subspaces.

Most work happens on one dense table: for every codeword ``u`` (row) and
every weight-4 mask ``q`` (column), the index of the coset containing
``u ^ q``, or -1 when ``u ^ q`` is not a codeword.  Foldability over ``L``
is the statement that rows of the same coset are identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .bitcode import POPCOUNT, Code, Subspace, is_extended_perfect, kernel, mask, quad_str, word_hex

QUADS16 = np.array(sorted((mask(c) for c in combinations(range(16), 4)), key=quad_str),
                   dtype=np.int64)
QUADS16.setflags(write=False)
_QUAD_INDEX = {int(q): i for i, q in enumerate(QUADS16)}


class NotInKernel(ValueError):
    """A subspace that was expected to lie in the kernel does not."""


class NotFoldable(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"code does not fold: {witness}")


def _require_extended16(code: Code):
    if code.length != 16 or not is_extended_perfect(code):
        raise ValueError("expected an extended 1-perfect code of length 16")


def neighbour_table(code: Code) -> np.ndarray:
    """Boolean ``(len(code), 1820)`` table: is ``u ^ q`` a codeword."""
    return code.member[code.words[:, None] ^ QUADS16[None, :]]


@dataclass
class MinDistGraph:
    code: Code
    table: np.ndarray = field(repr=False)  # neighbour_table(code)

    def degree(self, v: int) -> int:
        return int(self.table[self.index(v)].sum())

    def index(self, v: int) -> int:
        i = int(np.searchsorted(self.code.words, v))
        if i >= len(self.code) or self.code.words[i] != v:
            raise KeyError(f"{word_hex(v, 16)} is not a codeword")
        return i

    def neighbours(self, v: int) -> list[tuple[int, int]]:
        """``(neighbour, quadruple)`` pairs at distance 4 from ``v``."""
        row = self.table[self.index(v)]
        return [(int(v ^ q), int(q)) for q in QUADS16[row]]

    def labels(self, v: int) -> frozenset:
        return frozenset(QUADS16[self.table[self.index(v)]].tolist())


def min_dist_graph(code: Code) -> MinDistGraph:
    _require_extended16(code)
    return MinDistGraph(code, neighbour_table(code))


def codeword_sqs(graph: MinDistGraph, v: int) -> frozenset:
    """Labels of the 140 edges at ``v``: the Steiner quadruple system S(C, v)."""
    return graph.labels(v)


def is_sqs(quads, points: int = 16) -> bool:
    """Every 3-subset of the points lies in exactly one block."""
    count = np.zeros(1 << points, dtype=np.int16)
    for q in quads:
        coords = [1 << c for c in range(points) if q >> c & 1]
        if len(coords) != 4:
            return False
        for a, b, c in combinations(coords, 3):
            count[a | b | c] += 1
    triples = [mask(t) for t in combinations(range(points), 3)]
    return bool((count[triples] == 1).all())


@dataclass
class CosetSystem:
    code: Code
    subspace: Subspace
    reps: np.ndarray        # least member of each coset, sorted
    coset_of: np.ndarray    # coset index per codeword (aligned with code.words)

    @property
    def count(self) -> int:
        return int(self.reps.size)

    def members(self, k: int) -> np.ndarray:
        return self.code.words[self.coset_of == k]

    def index_of(self, v: int) -> int:
        return int(self.coset_of[np.searchsorted(self.code.words, v)])


def check_in_kernel(code: Code, L: Subspace):
    for b in L.basis:
        if not code.member[code.words ^ b].all():
            raise NotInKernel(f"{word_hex(b, code.length)} does not preserve the code")


def cosets(code: Code, L: Subspace) -> CosetSystem:
    check_in_kernel(code, L)
    elems = L.elements()
    words = code.words
    # least member of each word's coset
    least = (words[:, None] ^ elems[None, :]).min(axis=1)
    reps, coset_of = np.unique(least, return_inverse=True)
    return CosetSystem(code, L, reps, coset_of.astype(np.int64))


def coset_table(cs: CosetSystem) -> np.ndarray:
    """Target coset index per (codeword, weight-4 mask), -1 where absent."""
    code = cs.code
    lookup = np.full(1 << code.length, -1, dtype=np.int64)
    lookup[code.words] = cs.coset_of
    return lookup[code.words[:, None] ^ QUADS16[None, :]]


def check_foldable(code: Code, L: Subspace):
    """Return ``(True, None)`` if the code folds over ``L``, else ``(False, witness)``.

    The witness is ``(member, rep_of_own_coset, rep_of_target_coset)`` for a
    member whose label set toward the target coset differs from the
    representative's.
    """
    cs = cosets(code, L)
    table = coset_table(cs)
    return _fold_check(cs, table)


def _fold_check(cs: CosetSystem, table: np.ndarray):
    first = np.zeros(cs.count, dtype=np.int64)
    # index of the representative row for every coset
    first[cs.coset_of[::-1]] = np.arange(cs.coset_of.size)[::-1]
    ref = table[first[cs.coset_of]]
    bad = np.nonzero((ref != table).any(axis=1))[0]
    if bad.size == 0:
        return True, None
    i = int(bad[0])
    col = int(np.nonzero(ref[i] != table[i])[0][0])
    target = table[i, col] if table[i, col] >= 0 else ref[i, col]
    witness = (int(cs.code.words[i]), int(cs.reps[cs.coset_of[i]]), int(cs.reps[target]))
    return False, witness


@dataclass
class QuotientGraph:
    """The SQS-graph of a code folded over ``L``.

    ``edges`` maps a representative pair ``(a, b)`` with ``a <= b`` to the
    frozenset of quadruple masks labelling the fibre; loops have ``a == b``.
    """

    cosets: CosetSystem
    edges: dict

    @property
    def vertices(self) -> list[int]:
        return self.cosets.reps.tolist()

    def multiplicity(self, a: int, b: int) -> int:
        return len(self.edges.get((min(a, b), max(a, b)), ()))

    def loop(self, a: int) -> frozenset:
        return self.edges.get((a, a), frozenset())

    def incident(self, a: int) -> dict:
        """Neighbour representative -> quadruple set, for links and the loop."""
        out = {}
        for (u, v), qs in self.edges.items():
            if u == a:
                out[v] = qs
            elif v == a:
                out[u] = qs
        return out

    def degree_sum(self, a: int) -> int:
        return sum(len(q) for q in self.incident(a).values())

    @cached_property
    def links(self) -> dict:
        return {k: v for k, v in self.edges.items() if k[0] != k[1]}


def quotient_graph(code: Code, L: Subspace) -> QuotientGraph:
    _require_extended16(code)
    cs = cosets(code, L)
    table = coset_table(cs)
    ok, witness = _fold_check(cs, table)
    if not ok:
        raise NotFoldable(witness)
    edges = {}
    reps = cs.reps
    for k in range(cs.count):
        row = table[np.searchsorted(cs.code.words, reps[k])]
        for t in np.unique(row[row >= 0]):
            a, b = int(reps[k]), int(reps[t])
            if a > b:
                continue
            edges[(a, b)] = frozenset(QUADS16[row == t].tolist())
    return QuotientGraph(cs, edges)


def trivial_subspace(n: int = 16) -> Subspace:
    return Subspace([], n)


def kernel_quotient(code: Code) -> QuotientGraph:
    return quotient_graph(code, kernel(code))


def _parity(x: np.ndarray) -> np.ndarray:
    return (POPCOUNT[x] & 1).astype(np.int64)


def functional_sets(dim: int, codim: int):
    """Each ``codim``-dimensional space of functionals on F_2^dim, once.

    Yielded as a tuple of ``codim`` independent functionals (bitmasks);
    only codim 0, 1 and 2 are supported.
    """
    if codim == 0:
        yield ()
    elif codim == 1:
        for f in range(1, 1 << dim):
            yield (f,)
    elif codim == 2:
        # {0, f, g, f^g}: take f < g as its two smallest nonzero members
        for f in range(1, 1 << dim):
            for g in range(f + 1, 1 << dim):
                if f ^ g > g:
                    yield (f, g)
    else:
        raise ValueError("only codimension 0, 1 or 2 is supported")


def _kernel_coords(K: Subspace):
    """Lookup from kernel element to its coefficient vector over ``K.basis``."""
    elems = np.zeros(1, dtype=np.int64)
    for b in K.basis:
        elems = np.concatenate([elems, elems ^ b])
    coord = np.full(1 << K.length, -1, dtype=np.int64)
    coord[elems] = np.arange(elems.size)
    return elems, coord


def subspace_from_functionals(K: Subspace, fs) -> Subspace:
    elems, _ = _kernel_coords(K)
    idx = np.arange(elems.size)
    keep = np.ones(elems.size, dtype=bool)
    for f in fs:
        keep &= _parity(idx & f) == 0
    return Subspace(elems[keep].tolist(), K.length)


def subspaces_of_codim(K: Subspace, codim: int) -> list[Subspace]:
    """All subspaces of ``K`` of codimension ``codim`` (0, 1 or 2)."""
    if codim > K.dimension:
        return []
    return [subspace_from_functionals(K, fs) for fs in functional_sets(K.dimension, codim)]


class FoldingFamily:
    """Foldability checks over many subspaces of one kernel.

    Each codeword is written as (K-coset, coefficient vector over K's basis);
    the L-coset of a word is then its K-coset plus the values of the
    functionals cutting out ``L``.  Rows are stored compressed to the 140
    neighbours of each codeword, so one subspace costs a few lookups per
    edge instead of a full table rebuild.
    """

    def __init__(self, code: Code, K: Subspace):
        check_in_kernel(code, K)
        self.code = code
        self.K = K
        cs = cosets(code, K)
        self.kcosets = cs
        elems, coord = _kernel_coords(K)
        words = code.words
        rep = cs.reps[cs.coset_of]
        self.own_kcoset = cs.coset_of
        self.own_coord = coord[words ^ rep]
        nb = neighbour_table(code)
        counts = nb.sum(axis=1)
        if not (counts == counts[0]).all():
            raise ValueError("codewords have different degrees")
        cols = np.nonzero(nb)[1].reshape(len(words), -1)
        self.quad_cols = cols
        nbw = words[:, None] ^ QUADS16[cols]
        index = np.searchsorted(words, nbw)
        self.nb_kcoset = cs.coset_of[index]
        self.nb_coord = coord[nbw ^ cs.reps[self.nb_kcoset]]
        self.dim = K.dimension
        # row of the word rep_k ^ elems[a], for every K-coset k and coefficient vector a
        self.row_at = np.searchsorted(words, cs.reps[:, None] ^ elems[None, :])
        # identical label sets get identical ids
        _, self.label_id = np.unique(cols, axis=0, return_inverse=True)
        self.label_id = self.label_id.reshape(-1)

    def check(self, fs=()):
        """``(True, None)`` or ``(False, witness)`` for the subspace cut out by ``fs``."""
        c = len(fs)
        idx = np.arange(1 << self.dim)
        table = np.zeros(1 << self.dim, dtype=np.int64)
        for j, f in enumerate(fs):
            table |= _parity(idx & f) << j
        # one fixed coefficient vector per functional value picks each L-coset's reference word
        lift = np.zeros(1 << c, dtype=np.int64)
        lift[table[::-1]] = idx[::-1]
        own_val = table[self.own_coord]
        ref = self.row_at[self.own_kcoset, lift[own_val]]
        nb = (self.nb_kcoset << c) | table[self.nb_coord]
        same_cols = self.label_id[ref] == self.label_id
        same_targets = (nb[ref] == nb).all(axis=1)
        bad = np.nonzero(~(same_cols & same_targets))[0]
        if bad.size == 0:
            return True, None
        i = int(bad[0])
        words = self.code.words
        return False, (int(words[i]), int(words[ref[i]]))

    def check_all(self, max_codim: int = 2):
        """Check every subspace of ``K`` with codimension <= ``max_codim``.

        Returns ``(number_checked, failures)``; each failure is
        ``(functionals, witness)``.
        """
        n = 0
        failures = []
        for c in range(min(max_codim, self.dim) + 1):
            for fs in functional_sets(self.dim, c):
                ok, witness = self.check(fs)
                n += 1
                if not ok:
                    failures.append((fs, witness))
        return n, failures


def format_quotient(graph: QuotientGraph) -> str:
    """One line per edge: ``repU repV mult q1,q2,...``."""
    lines = []
    for (a, b) in sorted(graph.edges):
        qs = sorted(quad_str(q) for q in graph.edges[(a, b)])
        lines.append(f"{word_hex(a, 16)} {word_hex(b, 16)} {len(qs)} {','.join(qs)}")
    return "\n".join(lines) + "\n"


def parse_quotient(text: str) -> dict:
    from .bitcode import parse_quad
    edges = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 4 fields")
        a, b, mult = int(parts[0], 16), int(parts[1], 16), int(parts[2])
        qs = frozenset(parse_quad(q) for q in parts[3].split(","))
        if len(qs) != mult:
            raise ValueError(f"line {lineno}: multiplicity {mult} != {len(qs)} quadruples")
        edges[(a, b)] = qs
    return edges
