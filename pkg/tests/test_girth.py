import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girthforge.exact2 import A, B, ModMatrix, inv, mul, reduce_mod
from girthforge.forge import build_genset, margulis_genset
from girthforge.girth import (
    CayleySpec,
    MemoryBudgetExceeded,
    ambient_order,
    build_gl_spec,
    cayley_spec,
    check_injective,
    component_size,
    even_girth,
    even_girth_bfs,
    evaluate_witness,
    girth_bfs,
    girth_oracle,
    is_cyclically_reduced,
)
from girthforge.harness import lemma_bound

W1 = build_genset(1)
W2 = build_genset(2)
MARG = margulis_genset()

# component sizes recorded from oracle_closure below
W1_MOD_5 = 120
W1_MOD_17 = 48


def oracle_closure(gens, p):
    """Subgroup generated by residue tuples, by plain set-based search."""
    def mul4(x, y):
        return (
            (x[0] * y[0] + x[1] * y[2]) % p,
            (x[0] * y[1] + x[1] * y[3]) % p,
            (x[2] * y[0] + x[3] * y[2]) % p,
            (x[2] * y[1] + x[3] * y[3]) % p,
        )

    seen = {(1, 0, 0, 1)}
    todo = [(1, 0, 0, 1)]
    while todo:
        x = todo.pop()
        for g in gens:
            y = mul4(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen)


def residues(spec):
    return [g.entries() for g in spec.generators]


def test_check_injective_examples():
    assert check_injective(W2, 149)
    assert check_injective(MARG, 3)
    assert not check_injective(W2, 2)


def test_component_size_margulis():
    assert component_size(cayley_spec(MARG, 3)) == 24
    assert component_size(cayley_spec(MARG, 5)) == 120
    for p in (7, 11, 13):
        assert component_size(cayley_spec(MARG, p)) == p * (p * p - 1)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_component_size_matches_oracle(p):
    for W in (MARG, W1, W2):
        spec = cayley_spec(W, p)
        assert component_size(spec) == oracle_closure(residues(spec), p)


def test_component_size_w1_fixtures():
    assert component_size(cayley_spec(W1, 5)) == W1_MOD_5 == oracle_closure(residues(cayley_spec(W1, 5)), 5)
    assert component_size(cayley_spec(W1, 17)) == W1_MOD_17


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_gl_component_size_matches_oracle(p):
    for W in (MARG, W1, W2):
        spec = build_gl_spec(W, p)
        assert component_size(spec) == oracle_closure(residues(spec), p)


def test_component_size_divides_group_order():
    for p in (19, 23, 29, 37, 41):
        for W in (W1, W2):
            n = component_size(cayley_spec(W, p))
            assert (p * (p * p - 1)) % n == 0


def test_component_size_budget():
    with pytest.raises(MemoryBudgetExceeded):
        component_size(cayley_spec(MARG, 101), budget=1000)
    assert ambient_order(5) == 120 and ambient_order(5, gl=True) == 240


def test_margulis_mod_3_girth():
    spec = cayley_spec(MARG, 3)
    res = girth_bfs(spec)
    assert res.girth == 3
    assert len(set(res.witness)) == 1
    assert reduce_mod(mul(mul(A, A), A), 3).is_identity()
    assert girth_oracle(spec, 4).girth == 3


def test_oracle_edge_cases():
    assert girth_oracle(cayley_spec(MARG, 5), 0) is None
    assert girth_oracle(cayley_spec(W2, 149), 2) is None


MARGULIS_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23]


@pytest.mark.parametrize("p", MARGULIS_PRIMES)
def test_bfs_matches_oracle_margulis(p):
    spec = cayley_spec(MARG, p)
    res = girth_bfs(spec)
    ref = girth_oracle(spec, res.girth)
    assert ref is not None and ref.girth == res.girth
    assert girth_oracle(spec, res.girth - 1) is None


@pytest.mark.parametrize("W,p", [(W1, 5), (W1, 7), (W1, 37), (W1, 41), (W2, 149), (W2, 151)])
def test_bfs_matches_oracle_gensets(W, p):
    spec = cayley_spec(W, p)
    res = girth_bfs(spec)
    ref = girth_oracle(spec, res.girth)
    assert ref is not None and ref.girth == res.girth


def test_margulis_girth_meets_lemma_bound():
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97):
        g = girth_bfs(cayley_spec(MARG, p)).girth
        assert g >= lemma_bound(p, 2, 2)
        assert 4 ** (-(-g // 2)) >= p


def test_witnesses_are_valid():
    for W, p in [(MARG, 7), (MARG, 31), (W1, 37), (W2, 149)]:
        spec = cayley_spec(W, p)
        for res in (girth_bfs(spec), even_girth_bfs(spec)):
            assert len(res.witness) == res.girth
            assert evaluate_witness(spec, res.witness).is_identity()
            assert is_cyclically_reduced(spec, res.witness)
            assert not res.degenerate


def test_even_girth_bounds():
    for W, p in [(MARG, 3), (MARG, 5), (MARG, 7), (MARG, 11), (W1, 37), (W1, 41), (W2, 149)]:
        spec = cayley_spec(W, p)
        g, e = girth_bfs(spec).girth, even_girth(spec)
        assert g <= e <= 2 * g
        assert e % 2 == 0
        if g % 2 == 0:
            assert e == g
        assert girth_oracle(spec, e, even=True).girth == e


def test_even_girth_margulis_mod_3():
    spec = cayley_spec(MARG, 3)
    e = even_girth(spec)
    assert e >= 4
    assert e == girth_oracle(spec, 6, even=True).girth


def test_gl_spec_examples():
    spec = build_gl_spec(W1, 37)
    assert spec.bipartite_gl and spec.degree == 4
    assert all(g.det == 36 for g in spec.generators)
    # AB J = column swap of AB
    J = ModMatrix(37, 0, 1, 1, 0)
    assert reduce_mod(mul(A, B), 37) @ J == ModMatrix(37, 2, 5, 1, 2)
    assert ModMatrix(37, 2, 5, 1, 2) in spec.generators
    assert build_gl_spec(MARG, 5).degree == 4


def test_gl_girth_is_even_girth():
    for W, p in [(W1, 37), (W1, 41), (W2, 149), (MARG, 5), (MARG, 7)]:
        gl = build_gl_spec(W, p)
        res = girth_bfs(gl)
        assert res.girth % 2 == 0
        assert res.girth == even_girth(cayley_spec(W, p))
        assert evaluate_witness(gl, res.witness).is_identity()


def test_gl_spec_requires_tau_closure():
    from girthforge.forge import GeneratorSet, GenRecord

    C = mul(A, A)
    W = GeneratorSet(None, [GenRecord("aa", C), GenRecord("AA", inv(C))])
    with pytest.raises(ValueError):
        build_gl_spec(W, 7)


def test_degenerate_mod_2():
    # every Sanov element is I mod 2; the formal pairing still works
    spec = cayley_spec(W2, 2)
    assert not spec.injective
    res = girth_bfs(spec)
    assert res.degenerate and res.girth <= 2


def test_degenerate_collision():
    # <A> mod 5 is a 5-cycle; mod 3, A^2 = A^-1 so residues collide
    spec = CayleySpec.from_residues(5, [reduce_mod(m, 5) for m in (A, inv(A))])
    assert girth_bfs(spec).girth == 5
    with pytest.raises(ValueError):
        CayleySpec.from_residues(3, [reduce_mod(m, 3) for m in (A, inv(A), mul(A, A))])


def test_spec_validation():
    g = ModMatrix(5, 1, 1, 0, 1)
    with pytest.raises(ValueError):
        CayleySpec(5, (g, g.inverse()), (0, 1))
    with pytest.raises(ValueError):
        CayleySpec(5, (g,), (1,))
    with pytest.raises(ValueError):
        CayleySpec(5, (ModMatrix(5, 0, 1, 1, 0),) * 2, (1, 0))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 17, 19, 23]), st.sampled_from(["margulis", "w1"]))
def test_bfs_witness_property(p, which):
    W = MARG if which == "margulis" else W1
    spec = cayley_spec(W, p)
    res = girth_bfs(spec)
    assert evaluate_witness(spec, res.witness).is_identity()
    assert is_cyclically_reduced(spec, res.witness)
    assert girth_oracle(spec, res.girth - 1) is None
