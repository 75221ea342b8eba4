import pytest

from spcodes.bitcode import kernel, parse_quad
from spcodes.fano import FANO, matching_product
from spcodes.matching import PairMatching
from spcodes.partitions import double, linear_partition
from spcodes.sqsgraph import quotient_graph
from spcodes.verify import (Z_LOCK, NoSuchSubspace, bit_hyperplane, bunch_products,
                            decompose_link, decompose_loop, find_index2_subspace, render_tables,
                            split_doubling, verify_theorem5)

Q = parse_quad
M0 = PairMatching([(0, 1), (2, 3), (4, 5), (6, 7)])


def test_split_doubling_recovers_construction(partitions):
    P, R = partitions[40], partitions[3]
    sigma = (2, 0, 1, 3, 7, 6, 5, 4)
    d = split_doubling(double(P, R, sigma))
    assert {c for c in d.left.classes} == set(P.classes)
    assert {c for c in d.right.classes} == set(R.classes)
    for i in range(8):
        assert d.right[d.sigma[i]] == R[sigma[P.classes.index(d.left[i])]]


def test_bunches_cover_split_quads(kappa_codes):
    code = kappa_codes[7][0]
    d = split_doubling(code)
    v = int(code.words[11])
    quads = set()
    for prod in bunch_products(d, v).values():
        assert all(v ^ q in code for q in prod.quads)
        quads |= prod.quads
    assert len(quads) == 112


def test_decompose_loop_examples():
    d = decompose_loop(FANO.all28, 8)
    assert d.valid and d.matched_blocks == ("Z", "Y", "X")
    d = decompose_loop(FANO.Z | {Q("4567")}, 5)
    assert d.valid and d.size == 15
    prod = matching_product(M0, M0.shifted(8))
    d = decompose_loop(FANO.all28 | prod.quads, 9)
    assert d.valid and d.size == 44 and d.product_component.quads == prod.quads
    bad = decompose_loop(FANO.Z | {Q("0123")}, 5)
    assert not bad.valid and bad.residual == {Q("0123")}


def test_decompose_link_examples():
    prod = matching_product(M0, M0.shifted(8))
    d = decompose_link(prod.quads, 8, [prod])
    assert d.valid and d.loq_count == 4
    two = prod.sorted_quads()[:8]
    d = decompose_link(frozenset(two) | FANO.X, 7, [prod])
    assert d.structural_part == "X" and d.loq_count == 2 and d.valid
    d = decompose_link(FANO.B | FANO.A, 6, [prod])
    assert not d.valid
    d = decompose_link(frozenset(two), 8, [prod])
    assert not d.valid


@pytest.mark.parametrize("kappa", [8, 9])
def test_high_kappa_codes_pass(kappa_codes, kappa):
    for code in kappa_codes[kappa][:2]:
        r = verify_theorem5(code)
        assert r.verdict, r.problems()
        assert len(r.vertices) == 2 ** (11 - kappa)
        assert {d.size for d in r.loops} == {28 if kappa == 8 else 44}


def test_z_lock_picks_definitional(kappa_codes):
    Z_LOCK.reset()
    verify_theorem5(kappa_codes[8][0])
    assert Z_LOCK.name == "definitional"


def test_index2_subspace(kappa_codes):
    code = kappa_codes[9][0]
    K = kernel(code)
    L = find_index2_subspace(code, K)
    assert L.dimension == 8 and L.issubspace(K)
    HL = quotient_graph(code, L)
    HK = quotient_graph(code, K)
    assert len(HL.vertices) == 8
    assert all(HL.loop(v) == FANO.all28 for v in HL.vertices)
    # each K-class is the union of two L-classes
    merged = {}
    for k, rep in enumerate(HL.cosets.reps.tolist()):
        merged.setdefault(HK.cosets.index_of(rep), []).append(k)
    assert sorted(len(g) for g in merged.values()) == [2, 2, 2, 2]
    with pytest.raises(ValueError):
        find_index2_subspace(kappa_codes[8][0])


def test_no_index2_for_wrong_target(kappa_codes):
    code = kappa_codes[9][0]
    with pytest.raises(NoSuchSubspace):
        find_index2_subspace(code, blocks=FANO.with_z(FANO.Y))


def test_sums_and_vertex_counts_all_kappa(kappa_codes):
    for kappa, codes in kappa_codes.items():
        r = verify_theorem5(codes[0])
        assert r.kappa == kappa
        assert len(r.vertices) == r.expected_vertices
        assert set(r.degree_sums.values()) == {140}


def test_hyperplane_of_kappa8_matches_kappa7_tables():
    P = linear_partition()
    code = double(P, P, (2, 3, 4, 6, 5, 1, 7, 0))
    K = kernel(code)
    assert K.dimension == 8
    r = verify_theorem5(code, L=bit_hyperplane(K), kappa=7)
    assert r.verdict, r.problems()
    assert {d.size for d in r.loops} == {21}


def test_render_is_stable(kappa_codes, linear_code):
    code = kappa_codes[8][0]
    a = render_tables(verify_theorem5(code))
    b = render_tables(verify_theorem5(code))
    assert a == b
    assert a.split("\n")[0] == "VERDICT"
    for section in ("LOOPS", "LINKS", "TABLES"):
        assert section in a
    lin = render_tables(verify_theorem5(linear_code))
    assert "(140)" in lin and lin.splitlines()[1] == "fail"
