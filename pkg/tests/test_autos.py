import random
from pathlib import Path

import pytest

import oracles as O
from pigroups import InputError, PreconditionError, parse_word
from pigroups.autos import (
    ModularWord, dehn_twist, identity_automorphism, inner, is_pi_modular, parse_automorphisms,
    twist_factorization_check, vertex_extension,
)
from pigroups.gog import parse_gog
from pigroups.picore import FiniteGroup

FIX = Path(__file__).parent / "fixtures"
W = parse_word


def load(name, group=None):
    return parse_gog((FIX / name).read_text(), group)


@pytest.fixture(scope="module")
def star():
    return load("star_abelian.gog")


@pytest.fixture(scope="module")
def s3_host():
    return load("s3_fcb.gog", FiniteGroup.parse((FIX / "s3.grp").read_text()))


def test_tree_twist_conjugates_far_side(star):
    t = dehn_twist(star, "e", "a")
    assert t(W("a b")) == W("a b")
    assert t(W("x")) == W("a^-1 x a")
    assert t.describe() == "twist e by a"


def test_loop_twist_moves_stable_letter():
    z = load("z2_hnn.gog")
    assert dehn_twist(z, "t", "a")(W("t")) == W("a^-1 t")
    assert dehn_twist(z, "~t", "a")(W("t")) == W("t a")


def test_twist_preconditions(star):
    with pytest.raises(PreconditionError):
        dehn_twist(star, "e", "b")          # not in the edge group of a free vertex
    with pytest.raises(PreconditionError):
        dehn_twist(star, "e", "x")          # x lives at the other end


def test_abelian_origin_allows_any_twister(star):
    t = dehn_twist(star, "e1", "y")
    assert t(W("p")) == W("y^-1 p y")


def test_inverse_and_relators(star):
    rng = random.Random(11)
    auts = [
        dehn_twist(star, "e", "a^2"), dehn_twist(star, "~e", "x y"), dehn_twist(star, "e2", "x^-3"),
        inner(star, W("a p")), identity_automorphism(star),
        vertex_extension(star, "u", {"b": W("b a")}, {"b": W("b a^-1")}),
    ]
    rels = star.fundamental_presentation().relators
    for _ in range(20):
        phi = ModularWord(tuple(rng.choice(auts) for _ in range(3)))
        both = phi.inverse() * phi
        for g in star.generator_words():
            assert star.equal(both(g), g)
        for r in rels:
            assert star.equal(phi(r), W("1"))


def test_vertex_extension_checks(star):
    with pytest.raises(PreconditionError):
        vertex_extension(star, "u", {"a": W("b")}, {"b": W("a")})      # moves the edge group
    with pytest.raises(PreconditionError):
        vertex_extension(star, "u", {"b": W("b a")}, {"b": W("b")})    # bad inverse
    with pytest.raises(InputError):
        vertex_extension(star, "u", {"z": W("b")}, {"z": W("b")})
    v = vertex_extension(star, "u", {"a": W("b a b^-1")}, {"a": W("b^-1 a b")}, {"e": W("b^-1")})
    assert v(W("x")) == W("b x b^-1")


def test_factorization_identity(star):
    for c in ("a", "a^2", "a^-3"):
        assert twist_factorization_check(star, "e", c)
    with pytest.raises(PreconditionError):
        twist_factorization_check(star, "~e", "x")


def test_pi_modularity(s3_host):
    Q = s3_host.group
    assert O.central_elements(Q) == {0}
    assert is_pi_modular(dehn_twist(s3_host, "e", "c"))
    # a is a transposition, so conjugating by it is not modular
    assert not is_pi_modular(inner(s3_host, "a"))
    assert not is_pi_modular(parse_automorphisms(s3_host, "twist e by c; inner a"))


def test_parse_automorphisms(s3_host):
    m = parse_automorphisms(s3_host, "twist e by c; inner b")
    assert len(m) == 2
    assert m(W("b")) == W("c^-1 b c")
    for bad in ("twist e c", "rotate a", "vext u sigma=a:a", "vext u inv=a"):
        with pytest.raises(InputError):
            parse_automorphisms(s3_host, bad)
