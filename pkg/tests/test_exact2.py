from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girthforge.exact2 import (
    A,
    B,
    I,
    J,
    ExactMatrix,
    ModMatrix,
    eta_check,
    eval_word,
    inf_norm,
    inv,
    invert_word,
    is_reduced,
    mul,
    reduce_mod,
    reduce_word,
    sigma,
    tau,
)

Ainv = ExactMatrix(1, -2, 0, 1)
Binv = ExactMatrix(1, 0, -2, 1)


def reduced_words(max_len):
    out = [""]
    for n in range(1, max_len + 1):
        for letters in product("aAbB", repeat=n):
            w = "".join(letters)
            if reduce_word(w) == w:
                out.append(w)
    return out


words = st.lists(st.sampled_from("aAbB"), max_size=20).map(lambda xs: reduce_word("".join(xs)))


def test_mul_examples():
    assert mul(A, B) == ExactMatrix(5, 2, 2, 1)
    g = ExactMatrix(3, 7, 2, 5)
    assert mul(I, g) == g
    assert mul(A, inv(A)) == I


def test_inv_examples():
    assert inv(ExactMatrix(5, 2, 2, 1)) == ExactMatrix(1, -2, -2, 5)
    assert inv(I) == I
    assert inv(A) == Ainv
    # det -1 case
    assert mul(J, inv(J)) == I


def test_rejects_bad_determinant():
    with pytest.raises(ValueError):
        ExactMatrix(2, 0, 0, 1)


def test_sigma_tau_examples():
    assert sigma(A) == Binv == ExactMatrix(1, 0, -2, 1)
    assert sigma(I) == I
    AB = mul(A, B)
    assert sigma(sigma(AB)) == AB
    assert tau(A) == B
    assert tau(I) == I
    assert tau(AB) == mul(B, A) == ExactMatrix(1, 2, 2, 5)
    assert tau(A) == mul(mul(J, A), J)


def test_inf_norm_examples():
    assert inf_norm(ExactMatrix(5, 2, 2, 1)) == 5
    assert inf_norm(I) == 1
    assert mul(A, Binv) == ExactMatrix(-3, 2, -2, 1)
    assert inf_norm(mul(A, Binv)) == 3


def test_eval_word_examples():
    assert eval_word("ab") == ExactMatrix(5, 2, 2, 1)
    assert eval_word("") == I
    with pytest.raises(ValueError):
        eval_word("aA")
    with pytest.raises(ValueError):
        eval_word("ax")


def test_word_helpers():
    assert reduce_word("abBAb") == "b"
    assert invert_word("aB") == "bA"
    assert is_reduced("abAB") and not is_reduced("abBa")


def test_reduce_mod_examples():
    assert reduce_mod(Ainv, 3).entries() == (1, 1, 0, 1)
    assert reduce_mod(I, 7).entries() == (1, 0, 0, 1)
    assert reduce_mod(A, 5).encode() == 176


def test_encode_decode_roundtrip_exhaustive_small_p():
    p = 5
    for entries in product(range(p), repeat=4):
        m = ModMatrix(p, *entries)
        assert ModMatrix.decode(p, m.encode()) == m


def test_eta_examples():
    assert eta_check(A, B)
    assert eta_check(I, ExactMatrix(7, 3, 2, 1))


def test_eta_exhaustive_length_6():
    mats = [eval_word(w) for w in reduced_words(6)]
    norms = [inf_norm(m) for m in mats]
    for g, ng in zip(mats, norms):
        for h, nh in zip(mats, norms):
            assert inf_norm(g @ h) <= 2 * ng * nh


def test_sanov_free_to_length_12():
    # depth-first over reduced words with prefix products; no nonempty word is I
    stack = [("", I)]
    inverse = {"a": "A", "A": "a", "b": "B", "B": "b"}
    letters = {"a": A, "A": Ainv, "b": B, "B": Binv}
    count = 0
    while stack:
        w, g = stack.pop()
        if w:
            count += 1
            assert g != I, w
        if len(w) == 12:
            continue
        for s in "aAbB":
            if w and inverse[w[-1]] == s:
                continue
            stack.append((w + s, mul(g, letters[s])))
    assert count == sum(4 * 3 ** (n - 1) for n in range(1, 13))


def test_generators_single_orbit():
    orbit = {A}
    for _ in range(3):
        orbit |= {sigma(g) for g in orbit} | {tau(g) for g in orbit}
    assert orbit == {A, Ainv, B, Binv}


@given(words)
def test_automorphism_properties(w):
    g = eval_word(w)
    assert sigma(sigma(g)) == g
    assert tau(tau(g)) == g
    assert sigma(tau(g)) == tau(sigma(g))
    assert inf_norm(sigma(g)) == inf_norm(tau(g)) == inf_norm(g)


@given(words, words)
def test_sigma_tau_are_homomorphisms(u, v):
    g, h = eval_word(u), eval_word(v)
    assert sigma(g @ h) == sigma(g) @ sigma(h)
    assert tau(g @ h) == tau(g) @ tau(h)


@settings(max_examples=200)
@given(words, words, st.sampled_from([2, 3, 5, 7, 11, 101, 1009]))
def test_reduce_mod_homomorphism(u, v, p):
    g, h = eval_word(u), eval_word(v)
    assert reduce_mod(g @ h, p) == reduce_mod(g, p) @ reduce_mod(h, p)
    assert reduce_mod(g, p).det == 1 % p


@given(words)
def test_mod_inverse(w):
    m = reduce_mod(eval_word(w), 13)
    assert (m @ m.inverse()).is_identity()
    assert m.inverse() == reduce_mod(inv(eval_word(w)), 13)
