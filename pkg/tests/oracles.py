"""Slow, independent reference implementations used only by the tests.

Words are handled here as tuples of (name, ±1) pairs so nothing below
depends on the package's letter encoding.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from pigroups.words import Word, name_of, symbol


def pairs(w: Word) -> tuple:
    return tuple((name_of(x), 1 if x > 0 else -1) for x in w.letters)


def from_pairs(p) -> Word:
    return Word([symbol(n) * s for n, s in p])


def naive_reduce(p) -> tuple:
    """Delete cancelling pairs until none is left (quadratic, on purpose)."""
    p = list(p)
    changed = True
    while changed:
        changed = False
        for i in range(len(p) - 1):
            if p[i][0] == p[i + 1][0] and p[i][1] == -p[i + 1][1]:
                del p[i:i + 2]
                changed = True
                break
    return tuple(p)


def inv(p) -> tuple:
    return tuple((n, -s) for n, s in reversed(p))


def mul(*ps) -> tuple:
    out = ()
    for p in ps:
        out = naive_reduce(out + tuple(p))
    return out


def naive_cyclic_core(p) -> tuple:
    p = naive_reduce(p)
    while len(p) > 1 and p[0][0] == p[-1][0] and p[0][1] == -p[-1][1]:
        p = p[1:-1]
    return p


def rotations(p) -> list:
    return [p[i:] + p[:i] for i in range(len(p))] or [()]


def naive_conjugate(p, q) -> bool:
    a, b = naive_cyclic_core(p), naive_cyclic_core(q)
    return len(a) == len(b) and b in rotations(a)


def all_words(gens, max_len: int) -> list:
    """Reduced words up to max_len, built by plain recursion."""
    letters = [(g, s) for g in gens for s in (1, -1)]
    out = [()]

    def grow(w):
        if len(w) == max_len:
            return
        for x in letters:
            if w and w[-1][0] == x[0] and w[-1][1] == -x[1]:
                continue
            out.append(w + (x,))
            grow(w + (x,))

    grow(())
    return out


# ----------------------------------------------------------------------
# pieces and small cancellation

def _period(p) -> int:
    n = len(p)
    for d in range(1, n + 1):
        if n % d == 0 and p[d:] + p[:d] == p:
            return d
    return n


def _windows(p, length: int):
    """(offset, subword) for each cyclic subword of the given length."""
    n = len(p)
    q = p * (length // n + 2)
    return [(i, q[i:i + length]) for i in range(n)]


def has_piece(x, y, length: int, both_signs: bool = True, same: bool | None = None) -> bool:
    """Is there a piece of exactly this length between cyclic words x and y?

    For x == y two occurrences count only if their offsets differ modulo the
    period.  With ``both_signs`` an occurrence in y^-1 counts as well.
    """
    if length == 0:
        return True
    if length > min(len(x), len(y)):
        return False
    same = x == y if same is None else same
    px = _period(x)
    seen = {}
    for off, s in _windows(x, length):
        seen.setdefault(s, set()).add(off % px)
    if same:
        if any(len(v) > 1 for v in seen.values()):
            return True
    elif any(s in seen for _, s in _windows(y, length)):
        return True
    return both_signs and any(s in seen for _, s in _windows(inv(y), length))


def brute_max_piece(x, y) -> int:
    """Longest piece of x against y itself (no inverse)."""
    n = 0
    while has_piece(x, y, n + 1, both_signs=False):
        n += 1
    return n


def brute_c_prime(cores, m: int) -> bool:
    """C'(m): every piece between two members is shorter than 1/m of the shorter one."""
    for i, x in enumerate(cores):
        for j in range(i, len(cores)):
            y = cores[j]
            t = math.ceil(Fraction(min(len(x), len(y)), m))
            if has_piece(x, y, t, same=i == j):
                return False
    return True


def brute_bullets(images, m: int) -> bool:
    ys = [pairs(y) for y in images]
    zs = [naive_cyclic_core(y) for y in ys]
    if not all(zs) or not brute_c_prime(zs, m):
        return False
    if not all(len(y) > m for y in ys):
        return False
    if Fraction(max(map(len, ys)), min(map(len, ys))) >= 1 + Fraction(1, m):
        return False
    return all(m * len(z) >= (m - 1) * len(y) for y, z in zip(ys, zs))


# ----------------------------------------------------------------------
# axes in the Cayley tree

def axis_vertices(p, g=(), periods: int = 6) -> set:
    """Vertices of g·axis(p) within a window of the given number of periods."""
    p = naive_cyclic_core(p)
    pts = set()
    power = ()
    for _ in range(periods):
        for k in range(len(p)):
            pts.add(mul(g, power, p[:k]))
            pts.add(mul(g, inv(power), inv(p[len(p) - k:])) if k else mul(g, inv(power)))
        power = mul(power, p)
    return pts


def brute_axis_overlap(u, v, g=(), periods: int = 6):
    """Edges shared by axis(u) and g·axis(v); None when it keeps growing."""
    def count(k):
        common = axis_vertices(u, (), k) & axis_vertices(v, g, k)
        return max(len(common) - 1, 0)

    a, b = count(periods), count(2 * periods)
    return a if a == b else None


# ----------------------------------------------------------------------
# group-specific word problems

def _laurent_mul(p, q):
    out = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, 0) + a * b
    return {k: v for k, v in out.items() if v}


def _laurent_add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _mat_mul(A, B):
    return tuple(
        tuple(_laurent_add(_laurent_mul(A[i][0], B[0][j]), _laurent_mul(A[i][1], B[1][j])) for j in range(2))
        for i in range(2)
    )


ONE, ZERO = {0: 1}, {}
# reduced Burau matrices of the standard generators of the 3-strand braid group
S1 = (({1: -1}, ONE), (ZERO, ONE))
S1i = (({-1: -1}, {-1: 1}), (ZERO, ONE))
S2 = ((ONE, ZERO), ({1: 1}, {1: -1}))
S2i = ((ONE, ZERO), (ONE, {-1: -1}))
IDM = ((ONE, ZERO), (ZERO, ONE))


def trefoil_trivial(p) -> bool:
    """Word problem for <a, b | a^2 = b^3> via a = s1 s2 s1, b = s1 s2 in B_3.

    The reduced Burau representation of B_3 is faithful.
    """
    mats = {
        ("a", 1): [S1, S2, S1], ("a", -1): [S1i, S2i, S1i],
        ("b", 1): [S1, S2], ("b", -1): [S2i, S1i],
    }
    M = IDM
    for x in p:
        for A in mats[x]:
            M = _mat_mul(M, A)
    return M == IDM


def z2_trivial(p) -> bool:
    """<a, t | [a, t]> is free abelian on a, t."""
    return all(sum(s for n, s in p if n == g) == 0 for g in ("a", "t"))


def free_trivial(p) -> bool:
    return not naive_reduce(p)


# ----------------------------------------------------------------------
# formal solutions

def recursive_formal_search(equations, ys, allowed, pi_ok, L):
    """All witness tuples up to length L, tried in nested recursion; returns the
    first one making every equation freely trivial, else None."""
    cands = [[w for w in all_words(allowed[k], L) if pi_ok(k, w)] for k in range(len(ys))]
    cands = [sorted(c, key=lambda w: (len(w), _lexkey(w, allowed[k]))) for k, c in enumerate(cands)]

    def subst(eq, sol):
        out = []
        for n, s in eq:
            if n in sol:
                out.extend(sol[n] if s == 1 else inv(sol[n]))
            else:
                out.append((n, s))
        return naive_reduce(out)

    def go(k, sol):
        if k == len(ys):
            return dict(sol) if all(not subst(e, sol) for e in equations) else None
        for w in cands[k]:
            sol[ys[k]] = w
            r = go(k + 1, sol)
            if r is not None:
                return r
        sol.pop(ys[k], None)
        return None

    return go(0, {})


def _lexkey(w, gens):
    order = {(g, s): 2 * i + (s == -1) for i, g in enumerate(gens) for s in (1, -1)}
    return [order[x] for x in w]


# ----------------------------------------------------------------------
# tree preorder

def brute_root(e: int, k: int, Q, peg: int, target: int, bound: int = 50):
    for l in range(-bound, bound + 1):
        if l * k == e and Q.power(peg, l) == target:
            return l
    return None


def central_elements(Q) -> set:
    n = Q.order
    return {a for a in range(n) if all(Q.mul(a, b) == Q.mul(b, a) for b in range(n))}
