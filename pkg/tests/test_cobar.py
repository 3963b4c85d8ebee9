import random

import pytest

from loophomology.homalg import Chain, ZZ, check_d_squared
from loophomology.simplicial import SimplicialError, adjoin_inverses, builtin_space
from loophomology.cobar import (
    CobarAlgebra,
    bar_differential,
    cobar_basis,
    cobar_differential,
    cobar_slice,
    hat_cobar_basis,
    hochschild_basis,
    reduce_word,
    truncated_boundary_dA,
    words_between,
)


def test_cobar_differential_sphere2():
    S2 = builtin_space("sphere2")
    assert cobar_differential(S2, ("s",)).is_zero
    assert cobar_differential(S2, ()).is_zero
    assert cobar_differential(S2, ("s", "s")).is_zero


def test_cobar_differential_nontrivial():
    # collapsed 3-simplex: the top letter has all four faces alive.
    CD = builtin_space("collapsed-delta3")
    d = cobar_differential(CD, ("w",))
    assert d == Chain(ZZ, {("q0",): -1, ("q1",): 1, ("q2",): -1, ("q3",): 1})


def test_cobar_differential_unknown_letter():
    with pytest.raises(SimplicialError):
        cobar_differential(builtin_space("sphere2"), ("nope",))


def test_truncated_boundary_examples():
    circle = adjoin_inverses(builtin_space("circle"))
    assert truncated_boundary_dA(circle, "t").is_zero
    sphere = builtin_space("sphere2")
    assert truncated_boundary_dA(sphere, "s").is_zero
    bd = adjoin_inverses(builtin_space("boundary-delta3"))
    assert truncated_boundary_dA(bd, "012") == Chain(ZZ, {"02": -1})


def test_reduce_word_examples():
    ops = adjoin_inverses(builtin_space("circle")).op_pairs
    assert reduce_word(("t", "t~"), ops) == ()
    assert reduce_word(("t~", "t"), ops) == ()
    assert reduce_word(("t", "t"), ops) == ("t", "t")
    assert reduce_word(("t", "t~", "t"), ops) == ("t",)


def _all_normal_forms(word, ops):
    # Brute force: reduce by deleting any one cancelable pair, all orders.
    pairs = [
        i for i in range(len(word) - 1) if ops.get(word[i]) == word[i + 1]
    ]
    if not pairs:
        return {word}
    forms = set()
    for i in pairs:
        forms |= _all_normal_forms(word[:i] + word[i + 2 :], ops)
    return forms


def test_reduce_word_confluence():
    ops = {"a": "a~", "a~": "a", "b": "b~", "b~": "b"}
    alphabet = list(ops)
    rng = random.Random(3)
    for _ in range(300):
        word = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 6)))
        forms = _all_normal_forms(word, ops)
        assert forms == {reduce_word(word, ops)}


def test_hat_cobar_basis_circle():
    circle = adjoin_inverses(builtin_space("circle"))
    assert hat_cobar_basis(circle, 0, 2) == [
        (),
        ("t",),
        ("t~",),
        ("t", "t"),
        ("t~", "t~"),
    ]
    for L in range(1, 7):
        assert len(hat_cobar_basis(circle, 0, L)) == 2 * L + 1


def test_hat_cobar_basis_spheres_and_point():
    S2 = adjoin_inverses(builtin_space("sphere2"))
    for k in range(1, 6):
        assert hat_cobar_basis(S2, k, max(k, 1)) == [("s",) * k]
    point = adjoin_inverses(builtin_space("point"))
    assert hat_cobar_basis(point, 0, 3) == [()]
    assert hat_cobar_basis(point, 1, 3) == []


def test_words_between_chain_condition():
    bd = adjoin_inverses(builtin_space("boundary-delta3"))
    from loophomology.simplicial import endpoints, nondeg

    for w in words_between(bd, "0", "3", 0, 3):
        ends = [endpoints(bd.space, nondeg(a)) for a in w]
        assert ends[0][0] == "0" and ends[-1][1] == "3"
        assert all(ends[i][1] == ends[i + 1][0] for i in range(len(w) - 1))
        assert reduce_word(w, bd.op_pairs) == w


def test_cobar_basis_requires_one_reduced():
    with pytest.raises(SimplicialError):
        cobar_basis(builtin_space("torus"), 2)


def test_bar_differential_examples():
    S2 = builtin_space("sphere2")
    alg = CobarAlgebra(S2)
    assert bar_differential(alg, ()).is_zero
    assert bar_differential(alg, (("s",),)).is_zero
    one = bar_differential(alg, (("s",), ("s",)))
    assert one == Chain(ZZ, {(("s", "s"),): -1})
    with pytest.raises(SimplicialError):
        bar_differential(alg, ((),))


def test_bar_differential_squares_to_zero():
    CD = builtin_space("collapsed-delta3")
    alg = CobarAlgebra(CD)
    for n in range(6):
        for b, u in hochschild_basis(alg, n):
            if u != ():
                continue
            total = Chain(ZZ)
            for key, c in bar_differential(alg, b).terms.items():
                total.add_chain(bar_differential(alg, key), c)
            assert total.is_zero


def test_hat_algebra_multiplication_reduces():
    circle = adjoin_inverses(builtin_space("circle"))
    alg = CobarAlgebra(circle)
    assert alg.multiply(("t",), ("t~",)) == ()
    assert alg.multiply(("t", "t"), ("t~",)) == ("t",)


def test_cobar_slice_d_squared_small():
    for name in ("sphere2", "collapsed-delta3"):
        sl = cobar_slice(builtin_space(name), 6)
        assert check_d_squared(sl) == []
    for name in ("circle", "boundary-delta3"):
        sl = cobar_slice(adjoin_inverses(builtin_space(name)), 3, max_word_length=3)
        assert check_d_squared(sl) == []
        assert sl.truncated_at == 3
    # the circle tolerates a deep cap cheaply: degree 0 words to length 6
    sl = cobar_slice(adjoin_inverses(builtin_space("circle")), 4, max_word_length=6)
    assert check_d_squared(sl) == []


def test_hat_basis_degrees_and_basedness():
    bd = adjoin_inverses(builtin_space("boundary-delta3"))
    from loophomology.cobar import word_degree

    for degree in range(3):
        for w in hat_cobar_basis(bd, degree, 3):
            assert word_degree(bd, w) == degree
            if w:
                from loophomology.simplicial import endpoints, nondeg

                assert endpoints(bd.space, nondeg(w[0]))[0] == "0"
                assert endpoints(bd.space, nondeg(w[-1]))[1] == "0"


def test_cobar_slice_requires_cap_for_loops():
    with pytest.raises(SimplicialError):
        cobar_slice(adjoin_inverses(builtin_space("circle")), 2)
