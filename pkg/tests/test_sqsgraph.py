import itertools

import numpy as np
import pytest

from spcodes.bitcode import Subspace, kernel, support
from spcodes.sqsgraph import (FoldingFamily, NotInKernel, check_foldable, codeword_sqs,
                              format_quotient, functional_sets, is_sqs, kernel_quotient,
                              min_dist_graph, parse_quotient, quotient_graph,
                              subspaces_of_codim, trivial_subspace)


def brute_is_sqs(quads, n=16):
    cover = {}
    for q in quads:
        for t in itertools.combinations(support(q), 3):
            cover[t] = cover.get(t, 0) + 1
    return len(cover) == n * (n - 1) * (n - 2) // 6 and set(cover.values()) == {1}


def test_codeword_sqs(kappa_codes, linear_code):
    for code in [linear_code, kappa_codes[5][0]]:
        G = min_dist_graph(code)
        for v in code.words[:20].tolist():
            S = codeword_sqs(G, v)
            assert len(S) == 140
            assert is_sqs(S) and brute_is_sqs(S)


def test_is_sqs_rejects():
    assert not is_sqs(set())
    assert not brute_is_sqs({0xF})


def test_linear_quotient(linear_code):
    Q = kernel_quotient(linear_code)
    assert len(Q.vertices) == 1
    assert len(Q.loop(0)) == 140


def test_trivial_quotient_is_min_dist_graph(kappa_codes):
    code = kappa_codes[9][0]
    Q = quotient_graph(code, trivial_subspace())
    assert len(Q.vertices) == 2048
    G = min_dist_graph(code)
    v = int(code.words[5])
    assert frozenset(q for qs in Q.incident(v).values() for q in qs) == codeword_sqs(G, v)


@pytest.mark.parametrize("kappa", [5, 6, 7, 8, 9])
def test_multiplicity_sums(kappa_codes, kappa):
    for code in kappa_codes[kappa]:
        Q = kernel_quotient(code)
        assert len(Q.vertices) == 2 ** (11 - kappa)
        assert all(Q.degree_sum(v) == 140 for v in Q.vertices)


def test_members_share_label_sets(kappa_codes):
    code = kappa_codes[6][0]
    K = kernel(code)
    Q = quotient_graph(code, K)
    cs = Q.cosets
    G = min_dist_graph(code)
    for k in range(0, cs.count, 5):
        members = cs.members(k)
        ref = codeword_sqs(G, int(members[0]))
        assert all(codeword_sqs(G, int(m)) == ref for m in members[:8])


def test_not_in_kernel(kappa_codes):
    code = kappa_codes[5][0]
    K = kernel(code)
    outsider = next(w for w in range(1, 1 << 16) if w not in K and bin(w).count("1") % 2 == 0)
    with pytest.raises(NotInKernel):
        check_foldable(code, Subspace([outsider], 16))


def test_functional_sets_count():
    assert sum(1 for _ in functional_sets(5, 1)) == 31
    # number of 2-dim subspaces of F_2^5 = (31*30)/(3*2)
    assert sum(1 for _ in functional_sets(5, 2)) == 155
    K = Subspace([1, 2, 4, 8, 16], 16)
    subs = subspaces_of_codim(K, 2)
    assert len(set(subs)) == 155 and all(s.dimension == 3 for s in subs)


def test_folding_family_agrees_with_direct_check(kappa_codes):
    code = kappa_codes[5][0]
    K = kernel(code)
    fam = FoldingFamily(code, K)
    for fs in itertools.islice(functional_sets(K.dimension, 2), 0, 155, 17):
        ok_fast, _ = fam.check(fs)
        from spcodes.sqsgraph import subspace_from_functionals
        ok_slow, _ = check_foldable(code, subspace_from_functionals(K, fs))
        assert ok_fast and ok_slow


def test_quotient_file_roundtrip(kappa_codes):
    Q = kernel_quotient(kappa_codes[7][0])
    text = format_quotient(Q)
    parsed = parse_quotient(text)
    assert parsed == {k: v for k, v in Q.edges.items()}


def test_folding_family_detects_corruption(kappa_codes):
    code = kappa_codes[7][0]
    fam = FoldingFamily(code, kernel(code))
    assert fam.check(())[0]
    fam.nb_kcoset = fam.nb_kcoset.copy()
    fam.nb_kcoset[5, 3] = (fam.nb_kcoset[5, 3] + 1) % fam.kcosets.count
    ok, witness = fam.check(())
    assert not ok
    assert int(code.words[5]) in witness
