"""Explicit test-sequence generators and growth diagnostics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Sequence

from .autos import ModularWord, dehn_twist
from .errors import InputError, PreconditionError
from .gog import GraphOfGroups
from .picore import MarkedGroup, Morphism, abelian_pi_admissible, pi_free_product
from .words import (
    IDENTITY, Alphabet, Word, as_word, check_small_cancellation, cyclically_reduce,
)
from . import config


# ----------------------------------------------------------------------
# small cancellation embeddings

def transversal(F: MarkedGroup) -> dict[int, Word]:
    """Shortlex-minimal word of F for each element of pi(F)."""
    Q = F.Q
    target = Q.generated(F.pi.images[g] for g in F.gens)
    found: dict[int, Word] = {}
    letters = Alphabet(F.gens).letters()
    level = [()]
    found[0] = IDENTITY
    while len(found) < len(target):
        level = [w + (x,) for w in level for x in letters if not (w and w[-1] == -x)]
        for w in level:
            found.setdefault(F.pi_of(Word._make(w)), Word._make(w))
    return found


def sc_bullets(images: Sequence[Word], m: int) -> tuple[bool, str]:
    """Check the four length/cancellation requirements; returns (ok, first failure)."""
    ys = list(images)
    zs = [cyclically_reduce(y).core for y in ys]
    if any(not z for z in zs):
        return False, "trivial core"
    if not check_small_cancellation(zs, m):
        return False, f"cores fail C'({m})"
    if any(len(y) <= m for y in ys):
        return False, "image not longer than m"
    lens = [len(y) for y in ys]
    if Fraction(max(lens), min(lens)) >= 1 + Fraction(1, m):
        return False, "length ratio too large"
    if any(m * len(z) < (m - 1) * len(y) for y, z in zip(ys, zs)):
        return False, "core too short"
    return True, ""


def _seed(n: int, i: int, blocks: int, g1: Word, g2: Word) -> Word:
    out = IDENTITY
    for t in range(blocks):
        out = out * g1 * g2 ** (1 + i + n * t)
    return out


def small_cancellation_family(F1: MarkedGroup, F2: MarkedGroup, m: int, max_blocks: int = 400) -> Morphism:
    """The m-th member: a pi-morphism F1 -> F2 whose images satisfy C'(m) and the
    balanced length conditions."""
    if F2.kind != "free" or len(F2.gens) < 2:
        raise PreconditionError("target must be a non-abelian free group")
    if F1.kind != "free":
        raise InputError("source must be a free group")
    if not F1.Q.same_as(F2.Q):
        raise InputError("source and target are marked by different finite groups")
    if m < 1:
        raise InputError("m must be positive")
    Q = F1.Q
    T = transversal(F2)
    n = len(F1.gens)
    g1, g2 = Word.gen(F2.gens[0]), Word.gen(F2.gens[1])
    for blocks in range(2, max_blocks + 1):
        images = {}
        for i, x in enumerate(F1.gens):
            y = _seed(n, i, blocks, g1, g2)
            need = Q.mul(Q.inv(F2.pi_of(y)), F1.pi.images[x])
            if need not in T:
                raise PreconditionError(f"pi(F2) does not contain the element needed for {x}")
            images[x] = y * T[need]
        if sc_bullets(list(images.values()), m)[0]:
            return Morphism(F1, F2, images)
    raise PreconditionError("no admissible block count found")  # pragma: no cover


# ----------------------------------------------------------------------
# factorial abelian sequences

def factorial_exponents(K: int, r: Sequence[int], n: int) -> list[int]:
    return [K * math.factorial(n + i) + ri for i, ri in enumerate(r, 1)]


def _check_residues(K: int, r: Sequence[int]):
    if K < 1:
        raise InputError("K must be positive")
    if len(set(r)) != len(r) or any(not 0 <= x < K for x in r):
        raise PreconditionError("residues must be distinct and lie in [0, K)")


def abelian_sequence(M: MarkedGroup, K: int, r: Sequence[int], n: int, target: MarkedGroup | None = None) -> Morphism:
    """Retraction of M = <x, y_1..y_m> onto <x> with y_i -> x^(K (n+i)! + r_i).

    ``target`` may name a different infinite cyclic group to land in.
    """
    if M.kind != "abelian" or not M.gens:
        raise InputError("M must be free abelian with basis x, y_1, ..., y_m")
    if len(r) != len(M.gens) - 1:
        raise InputError("one residue per y_i is required")
    _check_residues(K, r)
    if not abelian_pi_admissible(M):
        raise PreconditionError("pi(M) is not cyclic")
    Q = M.Q
    px = M.pi.images[M.gens[0]]
    if K % Q.element_order(px):
        raise PreconditionError("K is not divisible by the order of pi(x)")
    for y, ri in zip(M.gens[1:], r):
        if M.pi.images[y] != Q.power(px, ri):
            raise PreconditionError(f"pi({y}) is not pi(x)^{ri}")
    X = MarkedGroup.abelian([M.gens[0]], Q, {M.gens[0]: px}) if target is None else target
    if X.kind != "abelian" or len(X.gens) != 1:
        raise InputError("target must be infinite cyclic")
    images = {M.gens[0]: (1,)}
    for y, e in zip(M.gens[1:], factorial_exponents(K, r, n)):
        images[y] = (e,)
    return Morphism(M, X, images)


def discriminate_box(K: int, r: Sequence[int], B: int, n: int) -> bool:
    """True iff no nonzero (c_0..c_m) with |c_i| <= B has c_0 + sum c_i e_{i,n} = 0."""
    if B < 1:
        raise InputError("B must be at least 1")
    _check_residues(K, r)
    coeffs = [1] + factorial_exponents(K, r, n)
    half = len(coeffs) // 2 + len(coeffs) % 2
    rng = range(-B, B + 1)

    def sums(cs):
        return Counter(sum(c * e for c, e in zip(v, cs)) for v in product(rng, repeat=len(cs)))

    left, right = sums(coeffs[:half]), sums(coeffs[half:])
    pairs = sum(k * right.get(-s, 0) for s, k in left.items())
    return pairs == 1  # only the zero vector


# ----------------------------------------------------------------------
# families and ball discrimination

@dataclass(frozen=True)
class MorphismFamily:
    source: MarkedGroup
    target: MarkedGroup
    member: Callable[[int], Morphism] = field(compare=False)
    start: int = 1

    def __call__(self, n: int) -> Morphism:
        return self.member(n)


def abelian_family(M: MarkedGroup, K: int, r: Sequence[int], target: MarkedGroup | None = None) -> MorphismFamily:
    f1 = abelian_sequence(M, K, r, 1, target)
    return MorphismFamily(M, f1.target, lambda n: abelian_sequence(M, K, r, n, target), 1)


def constant_family(f: Morphism, start: int = 1) -> MorphismFamily:
    return MorphismFamily(f.source, f.target, lambda n: f, start)


def ball(G: MarkedGroup, radius: int):
    """Nontrivial elements of length <= radius (words, or vectors with L1 norm <= radius)."""
    if G.kind == "abelian":
        k = len(G.gens)
        for v in product(range(-radius, radius + 1), repeat=k):
            if any(v) and sum(map(abs, v)) <= radius:
                yield v
    else:
        for w in Alphabet(G.gens).words(radius):
            if w:
                yield w


@dataclass(frozen=True)
class BallResult:
    found: bool
    index: int | None
    cap: int

    def __str__(self):
        return f"N = {self.index}" if self.found else f"not found up to index {self.cap}"


def discriminate_ball(fam: MorphismFamily, radius: int, cap: int | None = None) -> BallResult:
    caps = config.load()
    if radius > caps.ball_radius:
        raise InputError(f"radius {radius} exceeds the configured bound {caps.ball_radius}")
    cap = caps.index_cap if cap is None else min(cap, caps.index_cap)
    if fam.source.kind not in ("free", "abelian"):
        raise InputError("ball enumeration needs a free or free abelian source")
    elems = list(ball(fam.source, radius))
    for N in range(fam.start, cap + 1):
        f = fam(N)
        if not any(f.target.is_trivial(f.image(w)) for w in elems):
            return BallResult(True, N, cap)
    return BallResult(False, None, cap)


# ----------------------------------------------------------------------
# growth

def image_length(f: Morphism, g) -> int:
    img = f.image(as_word(g) if not isinstance(g, tuple) else g)
    if isinstance(img, tuple):
        return sum(abs(x) for x in img)
    return len(cyclically_reduce(img).core)


def growth_ratio(f1: Morphism, g1, f2: Morphism, g2) -> Fraction:
    den = image_length(f2, g2)
    if den == 0:
        raise PreconditionError("denominator image has trivial cyclic core")
    return Fraction(image_length(f1, g1), den)


class CombinedFamily(MorphismFamily):
    pass


def asymmetric_combine(families: Sequence[MorphismFamily], witnesses: Sequence, schedule=None,
                       cap: int | None = None) -> MorphismFamily:
    """Combine families on G_1..G_k into one family on G_1 * ... * G_k.

    Member n uses family i at index s_i(n), chosen so that for i < j the witness
    ratio |f^i(w_i)| / |f^j(w_j)| is below 1/n (later factors grow faster).
    """
    families = list(families)
    if not families:
        raise InputError("no families given")
    if len(witnesses) != len(families):
        raise InputError("one witness per family is required")
    ws = []
    for fam, w in zip(families, witnesses):
        if isinstance(w, tuple):
            if not any(w):
                raise InputError("witness element is trivial")
        else:
            w = as_word(w)
            if not w:
                raise InputError("witness element is trivial")
        ws.append(w)
    if len(families) == 1:
        return families[0]
    tgt = families[0].target
    for fam in families[1:]:
        if fam.target.gens != tgt.gens or fam.target.kind != tgt.kind:
            raise InputError("families must share the target group")
    src = families[0].source
    for fam in families[1:]:
        src = pi_free_product(src, fam.source)
    cap = config.load().index_cap if cap is None else cap
    memo: dict = {}

    def index(j: int, n: int) -> int:
        if schedule is not None:
            return schedule[j](n)
        key = (j, n)
        if key in memo:
            return memo[key]
        lo = max(families[j].start, n)
        if n > 1:
            lo = max(lo, index(j, n - 1))
        if j == 0:
            memo[key] = lo
            return lo
        prev = image_length(families[j - 1](index(j - 1, n)), ws[j - 1])
        for s in range(lo, cap + 1):
            if Fraction(prev, max(image_length(families[j](s), ws[j]), 1)) * n < 1 and image_length(families[j](s), ws[j]):
                memo[key] = s
                return s
        raise PreconditionError(f"family {j + 1} does not grow fast enough within index {cap}")

    def member(n: int) -> Morphism:
        images = {}
        for j, fam in enumerate(families):
            images.update(fam(index(j, n)).images)
        return Morphism(src, tgt, images)

    out = CombinedFamily(src, tgt, member, 1)
    object.__setattr__(out, "index", index)
    return out


# ----------------------------------------------------------------------
# Dehn twist exponent schedules

def closest_int(q: Fraction) -> int:
    """Closest integer, ties rounded down."""
    return math.ceil(q - Fraction(1, 2))


def _away_from_base(gog: GraphOfGroups, name: str):
    e = gog.edge(name)
    if name not in gog.tree:
        raise PreconditionError(f"{name} is not a tree edge")
    path = gog.tree_path(gog.base, e.origin)
    return (name, False) if any(oe[0] == name for oe in path) else (name, True)


def twist_exponents(gog: GraphOfGroups, weights: Mapping, twisters: Mapping, f, n: int) -> dict:
    """exp_e(n): the integer closest to n·alpha_e / tl_e, with tl_e = |core f(c_e)|."""
    out = {}
    for e in gog.edges:
        if e.name not in weights:
            continue
        alpha = Fraction(weights[e.name])
        if alpha <= 0:
            raise InputError(f"weight of {e.name} must be positive")
        if e.name not in twisters:
            raise InputError(f"no twister for {e.name}")
        c = as_word(twisters[e.name])
        img = f.image(c) if isinstance(f, Morphism) else c.substitute(f)
        tl = len(cyclically_reduce(img).core)
        if tl == 0:
            raise PreconditionError(f"twister of {e.name} does not act hyperbolically (tl = 0)")
        out[e.name] = (closest_int(n * alpha / tl), tl)
    unknown = set(weights) - {e.name for e in gog.edges}
    if unknown:
        raise InputError(f"unknown edge {sorted(unknown)[0]!r}")
    return out


def twist_schedule(gog: GraphOfGroups, weights: Mapping, twisters: Mapping, f, n: int) -> ModularWord:
    exps = twist_exponents(gog, weights, twisters, f, n)
    factors = []
    for name, (k, _) in exps.items():
        if k:
            oe = _away_from_base(gog, name)
            factors.append(dehn_twist(gog, oe, as_word(twisters[name]) ** k))
    return ModularWord(tuple(factors))
