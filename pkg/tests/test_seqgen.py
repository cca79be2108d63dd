from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from pigroups import InputError, PreconditionError, parse_word
from pigroups.gog import parse_gog
from pigroups.picore import FiniteGroup, MarkedGroup, Morphism, check_morphism
from pigroups.seqgen import (
    abelian_family, abelian_sequence, asymmetric_combine, ball, closest_int, constant_family,
    discriminate_ball, discriminate_box, factorial_exponents, growth_ratio, sc_bullets,
    small_cancellation_family, transversal, twist_exponents, twist_schedule,
)

W = parse_word
Z2 = FiniteGroup.cyclic(2)
T = FiniteGroup.trivial()


def test_factorial_exponents():
    assert factorial_exponents(2, [1], 1) == [5]
    assert factorial_exponents(3, [0, 2], 2) == [3 * 6, 3 * 24 + 2]


def test_transversal_is_shortlex():
    F = MarkedGroup.free(["x", "y"], Z2, {"x": 1, "y": 0})
    assert transversal(F) == {0: W("1"), 1: W("x")}


@pytest.mark.parametrize("m", [3, 5, 8])
@pytest.mark.parametrize("rank", [1, 2, 3])
def test_small_cancellation_family(m, rank):
    src = MarkedGroup.free([f"g{i}" for i in range(rank)], Z2, {f"g{i}": i % 2 for i in range(rank)})
    tgt = MarkedGroup.free(["x", "y"], Z2, {"x": 1, "y": 0})
    f = small_cancellation_family(src, tgt, m)
    imgs = [f.images[g] for g in src.gens]
    assert sc_bullets(imgs, m)[0]
    assert O.brute_bullets(imgs, m)
    assert check_morphism(f)


def test_small_cancellation_preconditions():
    src = MarkedGroup.free(["a"], Z2, {"a": 1})
    with pytest.raises(PreconditionError):
        small_cancellation_family(src, MarkedGroup.free(["x"], Z2, {"x": 1}), 3)
    with pytest.raises(PreconditionError):
        # pi(F2) is trivial so the odd generator has nowhere to go
        small_cancellation_family(src, MarkedGroup.free(["x", "y"], Z2), 3)


def test_bullet_reasons():
    assert sc_bullets([W("a b a^-1")], 3) == (False, "image not longer than m")
    assert sc_bullets([W("a b a b^2"), W("a b^3 a b^4 a b^5 a")], 3) == (False, "cores fail C'(3)")


def _brute_box(K, r, B, n):
    es = [1] + factorial_exponents(K, r, n)
    return not any(any(v) and sum(c * e for c, e in zip(v, es)) == 0
                   for v in product(range(-B, B + 1), repeat=len(es)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data(), st.integers(1, 3), st.integers(1, 4))
def test_box_matches_brute_force(K, data, B, n):
    m = data.draw(st.integers(1, min(2, K)))
    r = data.draw(st.lists(st.integers(0, K - 1), min_size=m, max_size=m, unique=True))
    assert discriminate_box(K, r, B, n) == _brute_box(K, r, B, n)


def test_box_small_n_fails():
    assert not discriminate_box(1, [0], 2, 1)     # 2 - 2·1 = 0
    assert discriminate_box(1, [0], 1, 1)


def test_abelian_sequence_preconditions():
    Z4 = FiniteGroup.cyclic(4)
    M = MarkedGroup.abelian(["x", "y"], Z4, {"x": 1, "y": 3})
    f = abelian_sequence(M, 4, [3], 2)
    assert f.images["y"] == (4 * 6 + 3,) and check_morphism(f)
    with pytest.raises(PreconditionError):
        abelian_sequence(M, 2, [1], 2)           # order of pi(x) does not divide K
    with pytest.raises(PreconditionError):
        abelian_sequence(M, 4, [1], 2)           # pi(y) is not pi(x)^1
    with pytest.raises(PreconditionError):
        abelian_sequence(M, 4, [4], 2)
    with pytest.raises(InputError):
        abelian_sequence(M, 4, [1, 2], 2)


def test_ball_sizes():
    assert len(list(ball(MarkedGroup.free(["a", "b"], T), 2))) == 4 + 12
    assert len(list(ball(MarkedGroup.abelian(["a", "b"], T), 2))) == 12


def test_discriminate_ball():
    M = MarkedGroup.abelian(["x", "y"], T)
    fam = abelian_family(M, 1, [0])
    res = discriminate_ball(fam, 3)
    # member n sends y to x^((n+1)!); the ball element x^-2 y dies at n = 1
    assert res.found and res.index == 2 and str(res) == "N = 2"
    bad = constant_family(Morphism(M, MarkedGroup.abelian(["t"], T), {"x": (1,), "y": (1,)}))
    r2 = discriminate_ball(bad, 2, cap=5)
    assert not r2.found and str(r2) == "not found up to index 5"
    with pytest.raises(InputError):
        discriminate_ball(fam, 99)


def test_growth_ratio():
    M = MarkedGroup.abelian(["x", "y"], T)
    f1, f2 = abelian_sequence(M, 1, [0], 1), abelian_sequence(M, 1, [0], 2)
    assert growth_ratio(f1, (0, 1), f2, (0, 1)) == Fraction(2, 6)
    with pytest.raises(PreconditionError):
        growth_ratio(f1, (0, 1), f2, (-6, 1))


def test_asymmetric_combine():
    X = MarkedGroup.abelian(["t"], T)
    fa = abelian_family(MarkedGroup.abelian(["a", "b"], T), 1, [0], X)
    fb = abelian_family(MarkedGroup.abelian(["c", "d"], T), 1, [0], X)
    comb = asymmetric_combine([fa, fb], [(0, 1), (0, 1)])
    for n in range(1, 5):
        i, j = comb.index(0, n), comb.index(1, n)
        l1 = sum(map(abs, fa(i).image((0, 1))))
        l2 = sum(map(abs, fb(j).image((0, 1))))
        assert Fraction(l1, l2) * n < 1
        assert comb.index(1, n) >= comb.index(1, max(n - 1, 1))
    assert comb(3).source.gens == ("a", "b", "c", "d")
    assert asymmetric_combine([fa], [(0, 1)]) is fa
    with pytest.raises(InputError):
        asymmetric_combine([fa, fb], [(0, 0), (0, 1)])


def test_closest_int_ties_round_down():
    assert closest_int(Fraction(7, 2)) == 3
    assert closest_int(Fraction(-7, 2)) == -4
    assert closest_int(Fraction(11, 3)) == 4


def test_twist_schedule():
    g = parse_gog("vertex u free gens=a,c\nvertex w free gens=b,d\nedge e u w egens=c image=d\ntree: e")
    exps = twist_exponents(g, {"e": 1}, {"e": "c"}, {"c": W("c^2")}, 7)
    assert exps == {"e": (3, 2)}
    phi = twist_schedule(g, {"e": 1}, {"e": "c"}, {"c": W("c^2")}, 7)
    assert len(phi) == 1 and phi(W("b")) == W("c^-3 b c^3")
    assert len(twist_schedule(g, {"e": 1}, {"e": "c"}, {"c": W("c^2")}, 0)) == 0
    with pytest.raises(PreconditionError):
        twist_exponents(g, {"e": 1}, {"e": "c"}, {"c": W("1")}, 7)
    with pytest.raises(InputError):
        twist_exponents(g, {"f": 1}, {"f": "c"}, {}, 7)
