"""Reduced words in free groups.

Letters are nonzero integers: ``+k`` is the generator interned as ``k`` and
``-k`` its inverse.  Names are interned once in a process-wide registry, so
words over different alphabets can be multiplied freely.
"""
from __future__ import annotations

import math
import re
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InputError

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_TOKEN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^([+-]?\d+))?\Z")

_lock = threading.Lock()
_ids: dict[str, int] = {}
_names: list[str] = [""]

INFINITE = math.inf


def symbol(name: str) -> int:
    """Intern a generator name and return its positive letter."""
    i = _ids.get(name)
    if i is not None:
        return i
    if not isinstance(name, str) or not NAME_RE.match(name):
        raise InputError(f"invalid generator name {name!r}")
    with _lock:
        i = _ids.get(name)
        if i is None:
            i = len(_names)
            _names.append(name)
            _ids[name] = i
    return i


def name_of(letter: int) -> str:
    return _names[abs(letter)]


def _free_reduce(seq: Iterable[int]) -> tuple:
    out: list[int] = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """An immutable freely reduced word.  Reduction happens on construction."""

    __slots__ = ("letters", "_h")

    def __init__(self, letters: Iterable[int] = ()):
        letters = tuple(letters)
        for x in letters:
            if not isinstance(x, int) or x == 0 or abs(x) >= len(_names):
                raise InputError(f"invalid letter {x!r}")
        self.letters = _free_reduce(letters)
        self._h = None

    @classmethod
    def _make(cls, reduced: tuple) -> "Word":
        w = object.__new__(cls)
        w.letters = reduced
        w._h = None
        return w

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        x = symbol(name)
        return cls._make((x,) * power if power >= 0 else (-x,) * (-power))

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    # sequence protocol
    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word._make(self.letters[i])
        return self.letters[i]

    def __bool__(self):
        return bool(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.letters)
        return self._h

    # group operations
    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self.letters, other.letters
        i, n = 0, min(len(a), len(b))
        while i < n and a[-1 - i] == -b[i]:
            i += 1
        return Word._make(a[: len(a) - i] + b[i:])

    def inverse(self) -> "Word":
        return Word._make(tuple(-x for x in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0 or not self.letters:
            return IDENTITY
        d = cyclically_reduce(self)
        return d.prefix * Word._make(d.core.letters * k) * d.prefix.inverse()

    def conj(self, c: "Word") -> "Word":
        """``c^-1 self c``."""
        return c.inverse() * self * c

    # inspection
    def pairs(self) -> list[tuple[str, int]]:
        return [(name_of(x), 1 if x > 0 else -1) for x in self.letters]

    def generators(self) -> set[str]:
        return {name_of(x) for x in self.letters}

    def exponent_sum(self, name: str) -> int:
        x = symbol(name)
        return sum(1 if y == x else -1 if y == -x else 0 for y in self.letters)

    def substitute(self, images: Mapping[str, "Word"]) -> "Word":
        """Replace each generator by its image; unmapped generators are kept."""
        out: list[int] = []
        for x in self.letters:
            img = images.get(name_of(x))
            if img is None:
                seg = (x,)
            elif x > 0:
                seg = img.letters
            else:
                seg = tuple(-y for y in reversed(img.letters))
            for y in seg:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return Word._make(tuple(out))

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        i, L = 0, self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            k = (j - i) * (1 if L[i] > 0 else -1)
            parts.append(name_of(L[i]) if k == 1 else f"{name_of(L[i])}^{k}")
            i = j
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self)!r})"


IDENTITY = Word._make(())


def parse_word(text: str) -> Word:
    """Parse the shared word grammar: ``a b^-1 c^3``, ``*`` also separates, ``1`` is the identity."""
    if not isinstance(text, str):
        raise InputError("word literal must be a string")
    out: list[int] = []
    for tok in text.replace("*", " ").split():
        if tok == "1":
            continue
        m = _TOKEN_RE.match(tok)
        if not m:
            raise InputError(f"malformed word token {tok!r}")
        k = int(m.group(2)) if m.group(2) is not None else 1
        if k == 0:
            raise InputError(f"zero exponent in {tok!r}")
        x = symbol(m.group(1))
        out.extend([x] * k if k > 0 else [-x] * (-k))
    return Word(out)


def parse_word_list(text: str) -> list[Word]:
    text = text.strip()
    if not text:
        return []
    return [parse_word(t) for t in text.split(",")]


def as_word(w) -> Word:
    return w if isinstance(w, Word) else parse_word(w)


class Alphabet:
    """Ordered generator names; fixes the shortlex order a < a^-1 < b < ..."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise InputError("duplicate generator names")
        self.names = names
        self.ids = tuple(symbol(n) for n in names)
        self._pos = {}
        for i, x in enumerate(self.ids):
            self._pos[x] = 2 * i
            self._pos[-x] = 2 * i + 1

    @property
    def rank(self) -> int:
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def __repr__(self):
        return f"Alphabet({list(self.names)})"

    def letters(self) -> list[int]:
        return sorted(self._pos, key=self._pos.__getitem__)

    def letter_rank(self, x: int) -> int:
        return self._pos[x]

    def contains_word(self, w: Word) -> bool:
        return all(x in self._pos for x in w.letters)

    def check(self, w: Word) -> Word:
        for x in w.letters:
            if x not in self._pos:
                raise InputError(f"generator {name_of(x)!r} not in alphabet {list(self.names)}")
        return w

    def key(self, w: Word):
        return (len(w), tuple(self._pos[x] for x in w.letters))

    def reduce(self, raw: Iterable[tuple[int, int]]) -> Word:
        """Reduce a sequence of ``(generator index, sign)`` pairs."""
        out = []
        for i, s in raw:
            if not (0 <= i < self.rank) or s not in (1, -1):
                raise InputError(f"letter ({i}, {s}) outside alphabet of rank {self.rank}")
            out.append(self.ids[i] * s)
        return Word(out)

    def words(self, max_len: int) -> Iterator[Word]:
        """All reduced words of length <= max_len in shortlex order."""
        letters = self.letters()
        level = [()]
        yield IDENTITY
        for _ in range(max_len):
            level = [w + (x,) for w in level for x in letters if not (w and w[-1] == -x)]
            for w in level:
                yield Word._make(w)


def reduce(raw: Iterable, alphabet: Alphabet | None = None) -> Word:
    """Freely reduce raw letters: signed ints, or ``(index, sign)`` pairs with an alphabet."""
    if alphabet is not None:
        return alphabet.reduce(raw)
    return Word(raw)


@dataclass(frozen=True)
class CyclicDecomposition:
    prefix: Word
    core: Word

    def word(self) -> Word:
        return self.prefix * self.core * self.prefix.inverse()


def cyclically_reduce(w: Word) -> CyclicDecomposition:
    L = w.letters
    i, j = 0, len(L) - 1
    while i < j and L[i] == -L[j]:
        i += 1
        j -= 1
    return CyclicDecomposition(Word._make(L[:i]), Word._make(L[i : j + 1]))


def translation_length(w: Word) -> int:
    return len(cyclically_reduce(w).core)


def is_cyclically_reduced(w: Word) -> bool:
    L = w.letters
    return len(L) < 2 or L[0] != -L[-1]


# ---------------------------------------------------------------------------
# pieces and small cancellation

def _enc(letters: Sequence[int]) -> str:
    return "".join(chr(2 * abs(x) + (x < 0)) for x in letters)


def _root_period(s: str) -> int:
    n = len(s)
    for d in range(1, n + 1):
        if n % d == 0 and s[d:] + s[:d] == s:
            return d
    return n


def _cyc_subs(s: str, ell: int) -> set:
    ss = s + s
    return {ss[i : i + ell] for i in range(len(s))}


def _has_cross_piece(s: str, t: str, ell: int) -> bool:
    if ell == 0:
        return True
    if ell > min(len(s), len(t)):
        return False
    return not _cyc_subs(s, ell).isdisjoint(_cyc_subs(t, ell))


def _has_self_piece(s: str, ell: int, period: int) -> bool:
    if ell == 0:
        return True
    if ell > len(s):
        return False
    ss = s + s
    seen: dict[str, int] = {}
    for i in range(len(s)):
        r = seen.setdefault(ss[i : i + ell], i % period)
        if r != i % period:
            return True
    return False


def _max_piece(s: str, t: str | None) -> int:
    """Longest piece; ``t is None`` means the self case for ``s``."""
    if t is None:
        period = _root_period(s)
        test = lambda ell: _has_self_piece(s, ell, period)
        hi = len(s)
    else:
        test = lambda ell: _has_cross_piece(s, t, ell)
        hi = min(len(s), len(t))
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if test(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def max_common_piece(x: Word, y: Word) -> int:
    """Length of the longest common piece of the cyclic cores of x and y.

    When ``x == y`` the two occurrences must differ by an offset that is not
    a multiple of the primitive root's length.
    """
    if not x or not y:
        raise InputError("pieces are defined for nontrivial words only")
    cx = _enc(cyclically_reduce(x).core.letters)
    cy = _enc(cyclically_reduce(y).core.letters)
    return _max_piece(cx, None if x == y else cy)


def check_small_cancellation(words: Sequence[Word], m: int) -> bool:
    """C'(m): every piece among the z_i^{+-1} is shorter than min(|z_i|,|z_j|)/m."""
    if m < 1:
        raise InputError("m must be positive")
    cores = []
    for z in words:
        if not z:
            raise InputError("small cancellation entries must be nontrivial")
        if not is_cyclically_reduced(z):
            raise InputError(f"entry {z} is not cyclically reduced")
        cores.append((_enc(z.letters), _enc(z.inverse().letters)))
    periods = [_root_period(s) for s, _ in cores]
    for i in range(len(cores)):
        for j in range(i, len(cores)):
            s = cores[i][0]
            n = min(len(s), len(cores[j][0]))
            ell = -(-n // m)
            if i == j:
                if _has_self_piece(s, ell, periods[i]):
                    return False
            elif _has_cross_piece(s, cores[j][0], ell):
                return False
            if _has_cross_piece(s, cores[j][1], ell):
                return False
    return True


# ---------------------------------------------------------------------------
# axes in the Cayley tree

def _lcp(f, g, cap: int) -> int:
    k = 0
    while k < cap and f(k) == g(k):
        k += 1
    return k


def axis_overlap(u: Word, v: Word, g: Word = IDENTITY):
    """Number of edges of Ax(u) ∩ g·Ax(v), or INFINITE when the axes coincide."""
    for w in (u, v):
        if not w:
            raise InputError("axes of the identity are not defined")
        if not is_cyclically_reduced(w):
            raise InputError(f"{w} is not cyclically reduced")
    U, V, p = u.letters, v.letters, g.letters
    l1, l2 = len(U), len(V)
    bound = l1 + l2  # Fine-Wilf: agreement this long forces equal lines
    k1 = _lcp(lambda t: p[t], lambda s: U[s % l1], len(p))
    k2 = _lcp(lambda t: p[t], lambda s: -U[(-1 - s) % l1], len(p))
    P, k = (k1, k1) if k1 >= k2 else (-k2, k2)
    a_f = lambda s: U[(P + s) % l1]
    a_b = lambda s: -U[(P - 1 - s) % l1]
    rest = p[k:]
    if rest:
        # g lies off Ax(u); g·Ax(v) meets Ax(u) only through the projection
        s = [-x for x in reversed(rest)]
        d = len(s)
        if all(s[t] == V[t % l2] for t in range(d)):
            cont = lambda t: V[(d + t) % l2]
        elif all(s[t] == -V[(-1 - t) % l2] for t in range(d)):
            cont = lambda t: -V[(-d - 1 - t) % l2]
        else:
            return 0
        ov = max(_lcp(cont, a_f, bound), _lcp(cont, a_b, bound))
    else:
        v_f = lambda t: V[t % l2]
        v_b = lambda t: -V[(-1 - t) % l2]
        ov = max(
            _lcp(v_f, a_f, bound) + _lcp(v_b, a_b, bound),
            _lcp(v_f, a_b, bound) + _lcp(v_b, a_f, bound),
        )
    return INFINITE if ov >= bound else ov


def conjugacy(u: Word, v: Word) -> Word | None:
    """Return g with g^-1 u g = v, or None if u and v are not conjugate."""
    du, dv = cyclically_reduce(u), cyclically_reduce(v)
    cu, cv = du.core.letters, dv.core.letters
    if len(cu) != len(cv):
        return None
    if not cu:
        return IDENTITY
    i = (_enc(cu) * 2).find(_enc(cv))
    if i < 0:
        return None
    return du.prefix * Word._make(cu[:i]) * dv.prefix.inverse()


# ---------------------------------------------------------------------------
# Stallings graphs

class SubgroupBasis:
    """Finitely generated subgroup of a free group via a folded labeled graph.

    Each edge carries a word over the basis symbols ``g1, g2, ...``; tracing
    an element from the base vertex multiplies these labels into an
    expression of the element in the given generators.
    """

    def __init__(self, generators: Sequence[Word], alphabet: Alphabet | None = None):
        gens = tuple(as_word(g) for g in generators)
        if any(not g for g in gens):
            raise InputError("subgroup generators must be nontrivial")
        self.generators = gens
        self.symbols = tuple(Word.gen(f"g{i + 1}") for i in range(len(gens)))
        self._sym_index = {s.letters[0]: i for i, s in enumerate(self.symbols)}
        if alphabet is None:
            names = sorted({n for g in gens for n in g.generators()})
            alphabet = Alphabet(names)
        self.alphabet = alphabet
        self._build()

    # graph storage: edges[eid] = (src, x, dst, label); adj[v][letter] = eid
    def _view(self, v, y):
        src, x, dst, lab = self._edges[self._adj[v][y]]
        if src == v and x == y:
            return dst, lab
        return src, lab.inverse()

    def _build(self):
        self._edges: dict[int, tuple] = {}
        self._adj: dict[int, dict[int, int]] = {0: {}}
        self._fwd: dict[int, tuple[int, Word]] = {}
        self._next_v = 1
        self._next_e = 0
        todo: deque = deque()
        for sym, g in zip(self.symbols, self.generators):
            verts = [0] + [self._new_vertex() for _ in range(len(g) - 1)] + [0]
            for k, x in enumerate(g.letters):
                todo.append((verts[k], x, verts[k + 1], sym if k == 0 else IDENTITY))
        while todo:
            self._insert(todo.popleft(), todo)
        self._vertices = sorted(self._adj)
        self._tree_paths()

    def _new_vertex(self):
        v = self._next_v
        self._next_v += 1
        self._adj[v] = {}
        return v

    def _resolve(self, v):
        d = IDENTITY
        while v in self._fwd:
            v, delta = self._fwd[v]
            d = delta * d
        return v, d

    def _insert(self, item, todo):
        u, x, v, lab = item
        u, du = self._resolve(u)
        v, dv = self._resolve(v)
        lab = du * lab * dv.inverse()
        if x in self._adj[u]:
            w, M = self._view(u, x)
            if w == v:
                return  # parallel edge: carries only a relation among generators
            if v != 0:
                self._kill(v, w, M.inverse() * lab, todo)
            else:
                self._kill(w, v, lab.inverse() * M, todo)
            todo.appendleft((u, x, v, lab))
            return
        if -x in self._adj[v]:
            todo.appendleft((v, -x, u, lab.inverse()))
            return
        eid = self._next_e
        self._next_e += 1
        self._edges[eid] = (u, x, v, lab)
        self._adj[u][x] = eid
        self._adj[v][-x] = eid

    def _kill(self, dead, into, delta, todo):
        removed = {eid for eid in self._adj[dead].values()}
        for eid in sorted(removed):
            src, x, dst, lab = self._edges.pop(eid)
            self._adj[src].pop(x, None)
            self._adj[dst].pop(-x, None)
            todo.appendleft((src, x, dst, lab))
        del self._adj[dead]
        self._fwd[dead] = (into, delta)

    def _tree_paths(self):
        order = self.alphabet.letters()
        for x in (y for v in self._adj.values() for y in v):
            if x not in order:
                order.append(x)
        self._order = order
        self._dist = None
        self._tp = {0: IDENTITY}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in order:
                if x in self._adj[v]:
                    w, _ = self._view(v, x)
                    if w not in self._tp:
                        self._tp[w] = Word._make(self._tp[v].letters + (x,))
                        queue.append(w)

    # queries
    @property
    def rank(self) -> int:
        return len(self._edges) - len(self._vertices) + 1

    def is_basis(self) -> bool:
        """True when the generators are a free basis of the subgroup they generate."""
        return self.rank == len(self.generators)

    def _trace(self, w: Word):
        v, expr = 0, IDENTITY
        for k, x in enumerate(w.letters):
            if x not in self._adj[v]:
                return v, expr, k
            v, lab = self._view(v, x)
            expr = expr * lab
        return v, expr, len(w)

    def express(self, w: Word) -> Word | None:
        """An expression of w over the symbols g1..gk, or None if w is not in the subgroup."""
        v, expr, k = self._trace(w)
        if k == len(w) and v == 0:
            return expr
        return None

    def contains(self, w: Word) -> bool:
        return self.express(w) is not None

    def evaluate(self, expr: Word, images: Sequence | None = None, mul=None, inv=None, one=None):
        """Substitute the basis (or the given images) for the symbols of ``expr``."""
        if images is None:
            images = self.generators
        if mul is None:
            out = IDENTITY
            for x in expr.letters:
                g = images[self._sym_index[abs(x)]]
                out = out * (g if x > 0 else g.inverse())
            return out
        out = one
        for x in expr.letters:
            g = images[self._sym_index[abs(x)]]
            out = mul(out, g if x > 0 else inv(g))
        return out

    def symbol_index(self, letter: int) -> int:
        return self._sym_index[abs(letter)]

    def right_coset_rep(self, h: Word) -> Word:
        """Shortlex-minimal element of the right coset H·h."""
        v, _, k = self._trace(h)
        return self._tp[v] * h[k:]

    def left_coset_rep(self, g: Word) -> Word:
        """Shortlex-minimal element r of g·H (so r^-1 g lies in H)."""
        v, _, k = self._trace(g.inverse())
        head = g.inverse()[k:].inverse()
        if self._dist is None:
            self._dist = {0: 0}
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    z, _ = self._view(x, y)
                    if z not in self._dist:
                        self._dist[z] = self._dist[x] + 1
                        queue.append(z)
        order = self._order
        path = []
        while v != 0:
            for x in order:
                if x in self._adj[v]:
                    z, _ = self._view(v, x)
                    if self._dist[z] == self._dist[v] - 1:
                        path.append(x)
                        v = z
                        break
        return head * Word._make(tuple(path))


def subgroup_membership(basis: SubgroupBasis, w: Word) -> Word | None:
    return basis.express(w)
