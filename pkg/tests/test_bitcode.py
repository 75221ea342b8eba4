import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spcodes.bitcode import (Code, CodeFormatError, Subspace, Word, distance, extend_parity,
                             format_code, is_extended_perfect, is_perfect, kernel, mask,
                             min_distance, parse_code, parse_quad, puncture, quad_str, rank,
                             read_code, support, weight, write_code)
from spcodes.partitions import hamming8

words16 = st.integers(0, 0xFFFF)


def span_closure(words):
    """All XOR combinations, by repeated closure (no elimination)."""
    span = {0}
    for w in words:
        span |= {s ^ w for s in span}
    return span


def brute_kernel(code: Code):
    cs = set(code)
    c0 = min(cs)
    return {c ^ c0 for c in cs if {w ^ c ^ c0 for w in cs} == cs}


@given(words16)
def test_support_mask_roundtrip(x):
    assert mask(support(x)) == x
    assert weight(x) == len(support(x)) == bin(x).count("1")


@given(st.sets(st.integers(0, 15), min_size=4, max_size=4))
def test_quad_text_roundtrip(coords):
    q = mask(coords)
    assert parse_quad(quad_str(q)) == q
    assert quad_str(q) == "".join("%x" % c for c in sorted(coords))


def test_word_ops():
    a, b = Word.from_hex("00ff", 16), Word.from_hex("0f0f", 16)
    assert (a ^ b).hex() == "0ff0"
    assert distance(a, b) == 8
    assert a.weight == 8
    with pytest.raises(ValueError):
        distance(a, Word(3, 8))
    with pytest.raises(ValueError):
        Word(1 << 9, 8)


def test_code_basics():
    H = hamming8()
    assert len(H) == 16 and 0xFF in H and 1 not in H
    assert H.translate(3) == Code([w ^ 3 for w in H], 8)
    assert H.min_word() == 0
    perm = [1, 0, 2, 3, 4, 5, 6, 7]
    assert H.permute(perm).permute(perm) == H
    assert min_distance(H) == 4


@given(st.lists(words16, max_size=12))
def test_subspace_matches_closure(ws):
    S = Subspace(ws, 16)
    span = span_closure(ws)
    assert len(S) == len(span)
    assert set(S.elements().tolist()) == span
    assert all(w in S for w in ws)


def test_rank_and_kernel_oracles(kappa_codes, linear_code):
    codes = [linear_code] + [cs[0] for cs in kappa_codes.values()]
    for code in codes:
        assert rank(code) == len(span_closure(code)).bit_length() - 1
        K = kernel(code)
        assert set(K.elements().tolist()) == brute_kernel(code)


def test_linear_invariants(linear_code):
    assert rank(linear_code) == 11
    assert kernel(linear_code).dimension == 11


def test_hamming_punctured_is_perfect():
    H = hamming8()
    for i in range(8):
        C7 = puncture(H, i)
        assert len(C7) == 16 and is_perfect(C7)
        # covering: every word of F_2^7 within distance 1 of exactly one codeword
        for x in range(128):
            assert sum(bin(x ^ c).count("1") <= 1 for c in C7) == 1
        assert extend_parity(C7).length == 8


def test_extended_perfect_checks(linear_code):
    assert is_extended_perfect(hamming8())
    assert is_extended_perfect(linear_code)
    bad = Code(list(hamming8())[:-1] + [3], 8)
    assert not is_extended_perfect(bad)


def test_code_file_roundtrip(tmp_path, linear_code):
    path = tmp_path / "c.code"
    write_code(linear_code, path, comment="linear")
    assert read_code(path) == linear_code
    text = format_code(hamming8())
    assert parse_code(text) == hamming8()


@pytest.mark.parametrize("text, where", [
    ("n=8\n00\nzz\n", ":3:"),
    ("n=8\n00\n0f0\n", ":3:"),
    ("00\n", ":1:"),
])
def test_code_parse_errors_name_line(text, where):
    with pytest.raises(CodeFormatError, match=where):
        parse_code(text)


def test_code_rejects_wide_words():
    with pytest.raises(ValueError):
        Code([1 << 8], 8)


def test_permuted_code_keeps_invariants(kappa_codes):
    code = kappa_codes[7][0]
    perm = list(np.random.default_rng(1).permutation(16))
    other = code.permute(perm)
    assert rank(other) == rank(code)
    assert kernel(other).dimension == kernel(code).dimension


def test_all_pairs_distance_at_least_4_small():
    H = hamming8()
    assert all(bin(a ^ b).count("1") >= 4 for a, b in itertools.combinations(H, 2))
