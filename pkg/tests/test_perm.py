import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coset_ewens.perm import (
    Permutation,
    compose,
    conjugate,
    cycle_string,
    cycle_type,
    disjoint_cycles,
    from_cycles,
    identity,
    inverse,
    one_line_string,
    parse_permutation,
)


def rand_perm(rng, n):
    images = list(range(n))
    rng.shuffle(images)
    return Permutation(tuple(images))


class TestCompose:
    def test_identity_composes_to_identity(self):
        assert compose(identity(4), identity(4)) == identity(4)

    def test_involution_squares_to_identity(self):
        t = from_cycles(3, [(1, 2)])
        assert compose(t, t) == identity(3)

    def test_left_action_pointwise(self):
        # apply (2 3) first, then (1 2): 1->1->2, 2->3->3, 3->2->1
        got = compose(from_cycles(3, [(1, 2)]), from_cycles(3, [(2, 3)]))
        assert got.apply(1) == 2 and got.apply(2) == 3 and got.apply(3) == 1
        assert cycle_string(got) == "(1 2 3)"

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            compose(identity(3), identity(4))


class TestConjugate:
    def test_by_identity(self):
        g = from_cycles(5, [(1, 4, 2)])
        assert conjugate(g, identity(5)) == g

    def test_hand_example(self):
        got = conjugate(from_cycles(4, [(1, 3)]), from_cycles(4, [(3, 4)]))
        assert cycle_string(got) == "(1 4)"

    def test_preserves_cycle_type(self):
        rng = random.Random(1)
        for _ in range(1000):
            n = rng.randrange(2, 21)
            g, a = rand_perm(rng, n), rand_perm(rng, n)
            assert cycle_type(conjugate(g, a)) == cycle_type(g)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            conjugate(identity(3), identity(5))


class TestCycleType:
    def test_identity(self):
        assert str(cycle_type(identity(6))) == "1^6"

    def test_two_transpositions(self):
        assert str(cycle_type(from_cycles(8, [(2, 4), (6, 8)]))) == "1^4 2^2"

    def test_three_cycle(self):
        assert str(cycle_type(from_cycles(6, [(2, 4, 6)]))) == "1^3 3^1"


@given(st.integers(1, 10).flatmap(
    lambda n: st.tuples(*[st.permutations(list(range(n))) for _ in range(3)])))
def test_associativity(triple):
    p, q, r = (Permutation(tuple(t)) for t in triple)
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(st.integers(1, 12).flatmap(lambda n: st.permutations(list(range(n)))))
def test_inverse_both_orders(images):
    p = Permutation(tuple(images))
    assert compose(p, inverse(p)) == identity(p.n)
    assert compose(inverse(p), p) == identity(p.n)


@given(st.integers(1, 12).flatmap(lambda n: st.permutations(list(range(n)))))
def test_cycle_roundtrip(images):
    p = Permutation(tuple(images))
    assert from_cycles(p.n, disjoint_cycles(p)) == p


@settings(max_examples=200)
@given(st.integers(2, 20).flatmap(
    lambda n: st.tuples(st.permutations(list(range(n))),
                        st.permutations(list(range(n))))))
def test_conjugation_invariance_property(pair):
    g, a = Permutation(tuple(pair[0])), Permutation(tuple(pair[1]))
    assert cycle_type(conjugate(g, a)) == cycle_type(g)


class TestTextFormats:
    def test_cycle_string_roundtrip(self):
        rng = random.Random(3)
        for _ in range(50):
            p = rand_perm(rng, 9)
            assert parse_permutation(cycle_string(p), 9) == p
            assert parse_permutation(one_line_string(p), 9) == p

    def test_identity_forms(self):
        assert parse_permutation("()", 4) == identity(4)
        assert one_line_string(from_cycles(4, [(1, 3), (2, 4)])) == "[3,4,1,2]"
        assert parse_permutation("[3,4,1,2]", 4) == from_cycles(4, [(1, 3), (2, 4)])

    def test_rejects_repeated_symbols(self):
        with pytest.raises(ValueError):
            parse_permutation("(1 2)(2 3)", 4)
        with pytest.raises(ValueError):
            parse_permutation("[1,1,2,3]", 4)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            parse_permutation("(1 9)", 4)
        with pytest.raises(ValueError):
            parse_permutation("[1,2,3,5]", 4)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_permutation("(1 2) extra", 4)
        with pytest.raises(ValueError):
            parse_permutation("[1,2,3", 3)
