"""Mechanical check of the loop/link structure of H_K for doubling codes.

For a code of kernel dimension 5..9 the loop at every vertex should be a
fixed union of Fano blocks (plus one matching product when the dimension
is 9), and every link a union of lexicographically ordered quarters (LOQs)
of matching products plus at most one Fano block.  Everything here only
decomposes computed quotient graphs; a mismatch is a verdict, not an error.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass, field

from .bitcode import POPCOUNT, Code, Subspace, kernel, quad_str, rank, word_hex
from .fano import FANO, OCTET, FanoBlocks, MatchingProduct, block_schedule, loq_blocks, matching_product, z_variants
from .matching import NotAMatching, PairMatching
from .partitions import ExtendedPartition, local_matching
from .sqsgraph import functional_sets, quotient_graph, subspace_from_functionals

RIGHT = OCTET << 8


class NoSuchSubspace(LookupError):
    pass


class NotADoubling(ValueError):
    pass


def quads_text(quads) -> str:
    return ",".join(sorted(quad_str(q) for q in quads)) or "-"


def is_split(q: int) -> bool:
    return bool(q & OCTET) and bool(q & RIGHT)


# ------------------------------------------------------------ Z resolution

class ZLock:
    """The Z variant chosen from the first kappa-8 loop seen, kept for the session."""

    def __init__(self):
        self.name = None
        self.evidence = None

    def reset(self):
        self.name = None
        self.evidence = None

    def resolve(self, loopset, blocks: FanoBlocks = FANO) -> str | None:
        if self.name is None:
            right = frozenset(q for q in loopset if not q & OCTET)
            for name, z in z_variants(blocks).items():
                if z == right:
                    self.name = name
                    self.evidence = quads_text(loopset)
                    break
        return self.name

    def blocks(self, blocks: FanoBlocks = FANO) -> FanoBlocks:
        if self.name is None:
            return blocks
        return blocks.with_z(z_variants(blocks)[self.name])


Z_LOCK = ZLock()


# ------------------------------------------------------- doubling structure

@dataclass(frozen=True)
class Doubling:
    left: ExtendedPartition
    right: ExtendedPartition
    sigma: tuple

    def left_class(self, x: int) -> int:
        return self.left.class_of(x)


def split_doubling(code: Code) -> Doubling:
    """Recover ``(P, Q, sigma)`` from a doubling code.

    Left halves that pair with the same set of right halves form a class of
    ``P``; those right-half sets are the classes of ``Q``.
    """
    from .partitions import check_partition, PartitionError

    pairs = defaultdict(set)
    for w in code.words.tolist():
        pairs[w & OCTET].add(w >> 8)
    groups = defaultdict(list)
    for x, ys in pairs.items():
        groups[frozenset(ys)].append(x)
    if len(groups) != 8:
        raise NotADoubling(f"expected 8 left classes, found {len(groups)}")
    left_sorted = sorted(groups.items(), key=lambda kv: min(kv[1]))
    right_sorted = sorted((ys for ys, _ in left_sorted), key=min)
    P = ExtendedPartition([Code(xs, 8) for _, xs in left_sorted])
    Q = ExtendedPartition([Code(ys, 8) for ys in right_sorted])
    sigma = tuple(right_sorted.index(ys) for ys, _ in left_sorted)
    try:
        check_partition(P)
        check_partition(Q)
    except PartitionError as exc:
        raise NotADoubling(str(exc)) from None
    return Doubling(P, Q, sigma)


def bunch_products(dbl: Doubling, v: int) -> dict[int, MatchingProduct]:
    """The seven products of local matchings at codeword ``v``, keyed by left class."""
    x, y = v & OCTET, v >> 8
    i = dbl.left_class(x)
    out = {}
    for j in range(8):
        if j == i:
            continue
        left = local_matching(x, dbl.left[j])
        right = local_matching(y, dbl.right[dbl.sigma[j]]).shifted(8)
        out[j] = matching_product(left, right)
    return out


def class_products(dbl: Doubling) -> list[MatchingProduct]:
    """Products of class matchings ``C_i x D_sigma(j)``, where both are matchings."""
    from .partitions import class_matching

    out = []
    for i in range(8):
        for j in range(i + 1, 8):
            try:
                left = class_matching(dbl.left[i], dbl.left[j])
                right = class_matching(dbl.right[dbl.sigma[i]], dbl.right[dbl.sigma[j]]).shifted(8)
            except NotAMatching:
                continue
            out.append(matching_product(left, right))
    return out


# ---------------------------------------------------------- decompositions

@dataclass
class LoopDecomposition:
    vertex: int
    kappa: int
    size: int
    matched_blocks: tuple
    expected_blocks: tuple
    product_component: MatchingProduct | None
    residual: frozenset
    notes: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.residual and self.matched_blocks == self.expected_blocks and not self.notes


def _recover_product(quads) -> MatchingProduct | None:
    quads = frozenset(quads)
    if len(quads) != 16 or not all(is_split(q) for q in quads):
        return None
    try:
        left = PairMatching.from_masks({q & OCTET for q in quads})
        right = PairMatching.from_masks({q >> 8 for q in quads}).shifted(8)
    except NotAMatching:
        return None
    prod = matching_product(left, right)
    return prod if prod.quads == quads else None


def decompose_loop(loopset, kappa: int, products=None, blocks: FanoBlocks = FANO,
                   vertex: int = 0) -> LoopDecomposition:
    """Subtract the scheduled Fano blocks, then (dimension 9) one product.

    ``products`` lists the admissible matching products for the extra
    component; if given, the recovered product must be one of them.
    """
    sched = block_schedule(kappa, blocks)
    residual = frozenset(loopset)
    matched = []
    for name in sched.loop_blocks:
        b = blocks.block(name)
        if b <= residual:
            matched.append(name)
            residual -= b
    prod = None
    notes = []
    if sched.loop_product:
        prod = _recover_product(residual)
        if prod is None:
            notes.append("remainder is not a single matching product")
        else:
            residual = frozenset()
            if products is not None and prod.quads not in {p.quads for p in products}:
                notes.append(f"product {prod.name} is not a product of partition classes")
    return LoopDecomposition(vertex, kappa, len(loopset), tuple(matched), tuple(sched.loop_blocks),
                             prod, residual, notes)


@dataclass
class LinkDecomposition:
    edge: tuple
    kappa: int
    size: int
    loq_parts: list          # (MatchingProduct, tuple of LoqBlock)
    structural_part: str | None
    residual: frozenset
    notes: list = field(default_factory=list)

    @property
    def loq_count(self) -> int:
        return sum(len(b) for _, b in self.loq_parts)

    @property
    def valid(self) -> bool:
        return not self.residual and not self.notes

    def summary(self) -> str:
        parts = [f"{p.name}[{len(b)}]" for p, b in self.loq_parts]
        if self.structural_part:
            parts.insert(0, self.structural_part)
        return "+".join(parts) + f"({self.size})"


def _kappa_rule(kappa: int, loq_parts, structural) -> list[str]:
    notes = []
    counts = [len(b) for _, b in loq_parts]
    if kappa == 9 and counts != [4, 4]:
        notes.append(f"expected 8 LOQs from 2 products, got {counts}")
    elif kappa == 8 and counts != [4]:
        notes.append(f"expected 4 LOQs from 1 product, got {counts}")
    elif kappa <= 7:
        if len(counts) > 1:
            notes.append(f"LOQs from {len(counts)} products")
        elif counts and not 1 <= counts[0] <= 3:
            notes.append(f"expected 1 to 3 LOQs, got {counts[0]}")
    if structural and kappa >= 8:
        notes.append("structural block on a link")
    return notes


def decompose_link(linkset, kappa: int, products, blocks: FanoBlocks = FANO,
                   edge: tuple = (0, 0)) -> LinkDecomposition:
    """Cover the 2+2 quadruples by whole LOQs of ``products``, the rest by one Fano block."""
    linkset = frozenset(linkset)
    split = frozenset(q for q in linkset if is_split(q))
    whole = linkset - split
    residual = set(split)
    parts = []
    for prod in products:
        got = tuple(b for b in loq_blocks(prod) if set(b.quads) <= split)
        if got:
            parts.append((prod, got))
            for b in got:
                residual -= set(b.quads)
    structural = None
    if whole:
        sched = block_schedule(kappa, blocks)
        for name in sched.link_blocks:
            if blocks.block(name) == whole:
                structural = name
                break
        else:
            residual |= whole
    notes = _kappa_rule(kappa, parts, structural)
    return LinkDecomposition(edge, kappa, len(linkset), parts, structural, frozenset(residual), notes)


# ------------------------------------------------------------ subspaces

def hyperplanes(K: Subspace):
    """Every index-2 subspace of ``K``, in a fixed order."""
    for fs in functional_sets(K.dimension, 1):
        yield subspace_from_functionals(K, fs)


def find_index2_subspace(code: Code, K: Subspace | None = None, blocks: FanoBlocks | None = None,
                         all_matches: bool = False):
    """First hyperplane ``L`` of a dimension-9 kernel whose ``H_L`` has 8 vertices, each looped by X|Y|Z.

    With ``all_matches`` a list of every qualifying ``L`` is returned instead.
    """
    K = kernel(code) if K is None else K
    if K.dimension != 9:
        raise ValueError(f"needs kernel dimension 9, got {K.dimension}")
    blocks = Z_LOCK.blocks() if blocks is None else blocks
    target = blocks.all28
    found = []
    for L in hyperplanes(K):
        # a loop of H_L is labelled by the weight-4 words of L, so screen on those first
        elems = L.elements()
        if frozenset(elems[POPCOUNT[elems] == 4].tolist()) != target:
            continue
        Q = quotient_graph(code, L)
        if len(Q.vertices) == 8 and all(Q.loop(v) == target for v in Q.vertices):
            if not all_matches:
                return L
            found.append(L)
    if all_matches:
        return found
    raise NoSuchSubspace("no index-2 subspace gives X|Y|Z loops")


def bit_hyperplane(K: Subspace, coord: int = 0) -> Subspace:
    """``K`` intersected with ``{x : x_coord = 0}``."""
    elems = K.elements()
    return Subspace(elems[((elems >> coord) & 1) == 0].tolist(), K.length)


# ----------------------------------------------------------------- report

@dataclass
class Thm5Report:
    fingerprint: str
    kappa: int
    rank: int
    subspace_dim: int
    vertices: list
    loops: list
    links: list
    degree_sums: dict
    z_variant: str | None
    index2: dict | None = None
    epsilon: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def expected_vertices(self) -> int:
        return 1 << (11 - self.kappa)

    @property
    def verdict(self) -> bool:
        return (not self.notes
                and len(self.vertices) == self.expected_vertices
                and all(s == 140 for s in self.degree_sums.values())
                and all(d.valid for d in self.loops)
                and all(d.valid for d in self.links))

    def problems(self) -> list[str]:
        out = list(self.notes)
        if len(self.vertices) != self.expected_vertices:
            out.append(f"{len(self.vertices)} vertices, expected {self.expected_vertices}")
        for v, s in self.degree_sums.items():
            if s != 140:
                out.append(f"vertex {word_hex(v, 16)}: multiplicity sum {s}")
        for d in self.loops:
            if not d.valid:
                out.append(f"loop at {word_hex(d.vertex, 16)} ({d.size}): blocks {list(d.matched_blocks)}"
                           f" of {list(d.expected_blocks)}, residual {quads_text(d.residual)}"
                           + "".join("; " + n for n in d.notes))
        for d in self.links:
            if not d.valid:
                a, b = d.edge
                out.append(f"link {word_hex(a, 16)}-{word_hex(b, 16)}: {d.summary()}"
                           f" residual {quads_text(d.residual)}" + "".join("; " + n for n in d.notes))
        return out


def code_fingerprint(code: Code) -> str:
    return hashlib.sha256(code.words.astype("<u2").tobytes()).hexdigest()[:16]


def verify_theorem5(code: Code, L: Subspace | None = None, kappa: int | None = None,
                    blocks: FanoBlocks | None = None) -> Thm5Report:
    """Decompose every loop and link of ``H_L`` (``L`` defaults to the kernel).

    ``kappa`` selects the block schedule and defaults to ``dim L``; passing
    a smaller subspace with its own ``kappa`` checks the tables against a
    finer quotient.
    """
    K = kernel(code)
    L = K if L is None else L
    kappa = L.dimension if kappa is None else kappa
    dbl = split_doubling(code)
    Q = quotient_graph(code, L)
    reps = Q.vertices
    sums = {v: Q.degree_sum(v) for v in reps}
    report = Thm5Report(code_fingerprint(code), kappa, rank(code), L.dimension, reps, [], [], sums, None)
    if not 5 <= kappa <= 9:
        report.notes.append(f"kernel dimension {kappa} outside 5..9")
        return report

    if blocks is None:
        if kappa == 8 and L == K:
            Z_LOCK.resolve(Q.loop(reps[0]))
        blocks = Z_LOCK.blocks()
    report.z_variant = Z_LOCK.name or "definitional"

    allowed = class_products(dbl)
    index = {v: k for k, v in enumerate(reps)}
    for v in reps:
        report.loops.append(decompose_loop(Q.loop(v), kappa, allowed if kappa == 9 else None,
                                           blocks, vertex=v))
    prods_at = {v: list(bunch_products(dbl, v).values()) for v in reps}
    for (a, b), quads in sorted(Q.links.items()):
        report.links.append(decompose_link(quads, kappa, prods_at[a], blocks, edge=(a, b)))

    # where each LOQ of each bunch goes, per source vertex
    for v in reps:
        rows = []
        inc = Q.incident(v)
        owner = {}
        for t, qs in inc.items():
            for q in qs:
                owner[q] = t
        for prod in prods_at[v]:
            targets = []
            for blk in loq_blocks(prod):
                dest = {owner.get(q) for q in blk.quads}
                if len(dest) != 1:
                    report.notes.append(f"LOQ {blk} at {word_hex(v, 16)} split over several edges")
                targets.append(index.get(dest.pop(), -1) if len(dest) == 1 else -1)
            rows.append((prod.name, tuple(targets)))
        report.epsilon[v] = rows

    if kappa == 9 and L == K:
        try:
            found = find_index2_subspace(code, K, blocks, all_matches=True)
        except NoSuchSubspace:
            found = []
        report.index2 = {"count": len(found),
                         "basis": [word_hex(b, 16) for b in found[0].basis] if found else None}
        if not found:
            report.notes.append("no index-2 subspace with X|Y|Z loops")
    return report


# ----------------------------------------------------------------- render

def _cell(report: Thm5Report, a: int, b: int, loops: dict, links: dict) -> str:
    if a == b:
        d = loops[a]
        name = "+".join(d.matched_blocks) or "?"
        if d.product_component is not None:
            name += "+" + d.product_component.name
        return f"{name}({d.size})"
    d = links.get((min(a, b), max(a, b)))
    return d.summary() if d else "."


def render_tables(report: Thm5Report) -> str:
    lines = ["VERDICT", "pass" if report.verdict else "fail"]
    lines.append(f"fingerprint {report.fingerprint} rank {report.rank} kappa {report.kappa}"
                 f" subspace {report.subspace_dim} vertices {len(report.vertices)}"
                 f" z {report.z_variant or '-'}")
    lines.extend("problem: " + p for p in report.problems())
    if report.index2 is not None:
        lines.append(f"index-2 subspaces {report.index2['count']}"
                     f" first {' '.join(report.index2['basis'] or ['-'])}")

    lines += ["", "LOOPS"]
    for d in report.loops:
        extra = f" product {d.product_component.name}" if d.product_component else ""
        lines.append(f"{word_hex(d.vertex, 16)} {d.size} {'+'.join(d.matched_blocks) or '-'}{extra}"
                     f" residual {quads_text(d.residual)}")
    if not report.loops:
        for v in report.vertices:
            lines.append(f"{word_hex(v, 16)} {report.degree_sums[v]}")

    lines += ["", "LINKS"]
    for d in report.links:
        a, b = d.edge
        lines.append(f"{word_hex(a, 16)} {word_hex(b, 16)} {d.summary()}"
                     f" residual {quads_text(d.residual)}")
        for prod, blks in d.loq_parts:
            lines.append("  " + prod.name + " " + " ".join(str(b) for b in blks))

    lines += ["", "TABLES"]
    loops = {d.vertex: d for d in report.loops}
    links = {d.edge: d for d in report.links}
    reps = report.vertices
    if loops or len(reps) == 1:
        header = ["", *(f"v{k}" for k in range(len(reps)))]
        rows = [header]
        for i, a in enumerate(reps):
            if loops:
                rows.append([f"v{i}", *(_cell(report, a, b, loops, links) for b in reps)])
            else:
                rows.append([f"v{i}", f"({report.degree_sums[a]})"])
        widths = [max(len(r[c]) for r in rows if c < len(r)) for c in range(len(header))]
        for r in rows:
            lines.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
    if report.epsilon:
        lines += ["", "LOQ targets (vertex index per quarter)"]
        for i, v in enumerate(reps):
            cells = [f"{name}:{'.'.join(map(str, tg))}" for name, tg in report.epsilon[v]]
            lines.append(f"v{i} " + " ".join(cells))
    return "\n".join(lines) + "\n"
