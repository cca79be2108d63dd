"""Finite groups given by tables, pi-markings, and pi-compatible morphisms."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Sequence

from .errors import InputError, PreconditionError, Unsupported
from .words import IDENTITY, Word, as_word, name_of, symbol
from .vgroups import commutator

_ELEM_RE = re.compile(r"[^\s:,()]+\Z")


class FiniteGroup:
    """A finite group given extensionally; element 0 is the identity."""

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[int]], name: str = "Q", check: bool = True):
        self.name = name
        self.names = tuple(str(n) for n in names)
        self.table = tuple(tuple(r) for r in table)
        self.order = len(self.names)
        self._index = {n: i for i, n in enumerate(self.names)}
        if check:
            problem = self._axiom_failure()
            if problem:
                raise InputError(f"group {name}: {problem}")
        self._inv = tuple(next(j for j in range(self.order) if self.table[i][j] == 0) for i in range(self.order))
        self._orders: dict[int, int] = {}

    def _axiom_failure(self) -> str | None:
        n = self.order
        if n == 0:
            return "empty element list"
        if len(self._index) != n:
            return "duplicate element names"
        if len(self.table) != n or any(len(r) != n for r in self.table):
            return "closure fails: table is not square"
        for i, r in enumerate(self.table):
            for j, x in enumerate(r):
                if not (isinstance(x, int) and 0 <= x < n):
                    return f"closure fails at {self.names[i]}*{self.names[j]}"
        T = self.table
        if n <= 24:
            triples = product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(10_000))
        for a, b, c in triples:
            if T[T[a][b]][c] != T[a][T[b][c]]:
                return f"associativity fails at ({self.names[a]},{self.names[b]},{self.names[c]})"
        for i in range(n):
            if T[0][i] != i or T[i][0] != i:
                return f"identity fails: {self.names[0]} is not a two-sided identity"
        for i in range(n):
            if not any(T[i][j] == 0 and T[j][i] == 0 for j in range(n)):
                return f"inverses fail: {self.names[i]} has no inverse"
        return None

    # constructors
    @classmethod
    def cyclic(cls, n: int, name: str | None = None) -> "FiniteGroup":
        return cls([str(i) for i in range(n)], [[(i + j) % n for j in range(n)] for i in range(n)], name or f"Z{n}", check=False)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(["1"], [[0]], "trivial", check=False)

    @classmethod
    def direct_product(cls, G: "FiniteGroup", H: "FiniteGroup", name: str | None = None) -> "FiniteGroup":
        pairs = [(g, h) for g in range(G.order) for h in range(H.order)]
        idx = {p: i for i, p in enumerate(pairs)}
        names = [f"({G.names[g]},{H.names[h]})" for g, h in pairs]
        table = [[idx[(G.table[a][c], H.table[b][d])] for c, d in pairs] for a, b in pairs]
        return cls(names, table, name or f"{G.name}x{H.name}", check=False)

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]], name: str = "P") -> "FiniteGroup":
        """Permutation group generated by the given images of 0..d-1; names are image tuples."""
        d = len(generators[0])
        ident = tuple(range(d))
        elems = [ident]
        seen = {ident}
        frontier = [ident]
        gens = [tuple(g) for g in generators]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(d))
                    if q not in seen:
                        seen.add(q)
                        elems.append(q)
                        nxt.append(q)
            frontier = nxt
        elems = [ident] + sorted(e for e in elems if e != ident)
        idx = {p: i for i, p in enumerate(elems)}
        # (p*q)(i) = q(p(i)): left-to-right composition
        table = [[idx[tuple(q[p[i]] for i in range(d))] for q in elems] for p in elems]
        names = ["e" if p == ident else "p" + "".join(map(str, p)) for p in elems]
        return cls(names, table, name)

    @classmethod
    def parse(cls, text: str) -> "FiniteGroup":
        lines = [(k + 1, ln.split("#", 1)[0].strip()) for k, ln in enumerate(text.splitlines())]
        lines = [(k, ln) for k, ln in lines if ln]
        if not lines:
            raise InputError("empty group description")
        k, head = lines[0]
        m = re.fullmatch(r"group\s+(\S+)\s+order\s+(\d+)", head)
        if not m:
            raise InputError(f"line {k}: expected 'group <name> order <n>'")
        gname, n = m.group(1), int(m.group(2))
        if len(lines) < 2 or not lines[1][1].startswith("elements:"):
            raise InputError(f"line {lines[1][0] if len(lines) > 1 else k}: expected 'elements:' line")
        k, el = lines[1]
        names = el[len("elements:"):].split()
        if len(names) != n:
            raise InputError(f"line {k}: {len(names)} elements listed, order says {n}")
        if len(set(names)) != n:
            raise InputError(f"line {k}: duplicate element names")
        index = {x: i for i, x in enumerate(names)}
        rows: dict[int, list[int]] = {}
        for k, ln in lines[2:]:
            m = re.fullmatch(r"row\s+(\S+)\s*:(.*)", ln)
            if not m:
                raise InputError(f"line {k}: expected 'row <element>: ...'")
            if m.group(1) not in index:
                raise InputError(f"line {k}: unknown element {m.group(1)!r}")
            entries = m.group(2).split()
            if len(entries) != n:
                raise InputError(f"line {k}: row has {len(entries)} entries, expected {n}")
            bad = [x for x in entries if x not in index]
            if bad:
                raise InputError(f"line {k}: closure fails: unknown element {bad[0]!r}")
            i = index[m.group(1)]
            if i in rows:
                raise InputError(f"line {k}: duplicate row for {m.group(1)!r}")
            rows[i] = [index[x] for x in entries]
        if len(rows) != n:
            missing = [names[i] for i in range(n) if i not in rows]
            raise InputError(f"missing row for {missing[0]!r}")
        return cls(names, [rows[i] for i in range(n)], gname)

    def to_text(self) -> str:
        out = [f"group {self.name} order {self.order}", "elements: " + " ".join(self.names)]
        for i, r in enumerate(self.table):
            out.append(f"row {self.names[i]}: " + " ".join(self.names[j] for j in r))
        return "\n".join(out) + "\n"

    # arithmetic
    @property
    def identity(self) -> int:
        return 0

    def index(self, name) -> int:
        if isinstance(name, int) and not isinstance(name, bool):
            if 0 <= name < self.order:
                return name
            raise InputError(f"element index {name} outside group {self.name}")
        try:
            return self._index[str(name)]
        except KeyError:
            raise InputError(f"unknown element {name!r} of group {self.name}") from None

    def __getitem__(self, name) -> int:
        return self.index(name)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def element_order(self, a: int) -> int:
        o = self._orders.get(a)
        if o is None:
            o, x = 1, a
            while x != 0:
                x = self.table[x][a]
                o += 1
            self._orders[a] = o
        return o

    def power(self, a: int, k: int) -> int:
        k %= self.element_order(a)
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def product(self, elems) -> int:
        out = 0
        for x in elems:
            out = self.table[out][x]
        return out

    def center(self) -> list[int]:
        T = self.table
        return [a for a in range(self.order) if all(T[a][b] == T[b][a] for b in range(self.order))]

    def is_central(self, a: int) -> bool:
        return all(self.table[a][b] == self.table[b][a] for b in range(self.order))

    def generated(self, S) -> set[int]:
        H = {0}
        frontier = [0]
        S = list(S)
        while frontier:
            nxt = []
            for h in frontier:
                for s in S:
                    x = self.table[h][s]
                    if x not in H:
                        H.add(x)
                        nxt.append(x)
            frontier = nxt
        return H

    def same_as(self, other: "FiniteGroup") -> bool:
        return self is other or (self.names == other.names and self.table == other.table)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


def cyclic_image_check(Q: FiniteGroup, S) -> bool:
    """True iff the subgroup of Q generated by S is cyclic."""
    S = [Q.index(s) for s in S]
    H = Q.generated(S)
    return any(Q.element_order(h) == len(H) for h in H)


# ---------------------------------------------------------------------------
# markings

@dataclass(frozen=True)
class PiMap:
    """Generator images in a finite group Q."""

    Q: FiniteGroup
    images: Mapping[str, int]

    def __call__(self, w) -> int:
        return evaluate_pi(self, w)


def evaluate_pi(pi: PiMap, w) -> int:
    """Image of a word (or of an exponent vector over ``pi.images`` order) in Q."""
    Q = pi.Q
    out = 0
    for x in as_word(w).letters:
        g = pi.images.get(name_of(x))
        if g is None:
            raise InputError(f"generator {name_of(x)!r} has no pi image")
        out = Q.table[out][g if x > 0 else Q.inv(g)]
    return out


@dataclass(frozen=True)
class MarkedGroup:
    """A pi-group: free, free abelian, or a graph-of-groups fundamental group."""

    kind: str
    gens: tuple
    pi: PiMap
    relators: tuple = ()
    gog: object = None
    solver: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("free", "abelian", "gog", "presented"):
            raise InputError(f"unknown group kind {self.kind!r}")
        if len(set(self.gens)) != len(self.gens):
            raise InputError("duplicate generator names")
        for g in self.gens:
            symbol(g)
            if g not in self.pi.images:
                raise InputError(f"generator {g!r} has no pi image")
        for r in self.relators:
            if evaluate_pi(self.pi, r) != 0:
                raise InputError(f"relator {r} does not map to the identity of Q")

    @property
    def Q(self) -> FiniteGroup:
        return self.pi.Q

    @classmethod
    def free(cls, gens, Q: FiniteGroup, images: Mapping | None = None) -> "MarkedGroup":
        images = images or {}
        return cls("free", tuple(gens), PiMap(Q, {g: Q.index(images.get(g, 0)) for g in gens}))

    @classmethod
    def abelian(cls, gens, Q: FiniteGroup, images: Mapping | None = None) -> "MarkedGroup":
        images = images or {}
        return cls("abelian", tuple(gens), PiMap(Q, {g: Q.index(images.get(g, 0)) for g in gens}))

    @classmethod
    def of_gog(cls, gog) -> "MarkedGroup":
        if gog.group is None or gog.pi is None:
            raise InputError("graph of groups carries no pi data")
        pres = gog.fundamental_presentation()
        return cls("gog", pres.generators, PiMap(gog.group, dict(gog.pi)), tuple(pres.relators), gog)

    def all_relators(self) -> list[Word]:
        rels = list(self.relators)
        if self.kind == "abelian":
            ws = [Word.gen(g) for g in self.gens]
            rels += [commutator(ws[i], ws[j]) for i in range(len(ws)) for j in range(i + 1, len(ws))]
        return rels

    def vector(self, w: Word) -> tuple:
        """Exponent vector of w over the generators (abelian kinds)."""
        pos = {symbol(g): i for i, g in enumerate(self.gens)}
        v = [0] * len(self.gens)
        for x in w.letters:
            if abs(x) not in pos:
                raise InputError(f"generator {name_of(x)!r} not in {list(self.gens)}")
            v[pos[abs(x)]] += 1 if x > 0 else -1
        return tuple(v)

    def is_trivial(self, elem) -> bool:
        if self.kind == "abelian":
            if isinstance(elem, Word):
                elem = self.vector(elem)
            return not any(elem)
        if self.kind == "free":
            return not elem
        if self.kind == "gog":
            return self.gog.normal_form(elem).is_identity()
        if self.solver is not None:
            return self.solver(elem)
        raise Unsupported("no word problem solver for a presented group")

    def pi_of(self, elem) -> int:
        if isinstance(elem, tuple):
            Q = self.Q
            return Q.product(Q.power(self.pi.images[g], k) for g, k in zip(self.gens, elem))
        return evaluate_pi(self.pi, elem)

    def check_word(self, w: Word) -> Word:
        allowed = {symbol(g) for g in self.gens}
        for x in w.letters:
            if abs(x) not in allowed:
                raise InputError(f"generator {name_of(x)!r} not in {list(self.gens)}")
        return w


def abelian_pi_admissible(M: MarkedGroup) -> bool:
    """Free abelian pi-groups admit discriminating retractions only with cyclic image."""
    if M.kind != "abelian":
        raise InputError("abelian_pi_admissible needs a free abelian marked group")
    return cyclic_image_check(M.Q, [M.pi.images[g] for g in M.gens])


def pi_free_product(G: MarkedGroup, H: MarkedGroup) -> MarkedGroup:
    if not G.Q.same_as(H.Q):
        raise InputError("free product needs both factors marked by the same Q")
    clash = set(G.gens) & set(H.gens)
    if clash:
        raise InputError(f"generator name clash: {sorted(clash)}")
    images = {**G.pi.images, **H.pi.images}
    if G.kind == H.kind == "free":
        return MarkedGroup("free", G.gens + H.gens, PiMap(G.Q, images))
    rels = tuple(G.all_relators()) + tuple(H.all_relators())

    def solver(w, G=G, H=H):
        raise Unsupported("word problem in free products of non-free factors is not implemented")

    return MarkedGroup("presented", G.gens + H.gens, PiMap(G.Q, images), rels, solver=solver)


# ---------------------------------------------------------------------------
# morphisms

def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class Morphism:
    """Generator images: Words for non-abelian targets, exponent vectors for abelian ones."""

    source: MarkedGroup
    target: MarkedGroup
    images: Mapping[str, object]

    def __post_init__(self):
        missing = [g for g in self.source.gens if g not in self.images]
        if missing:
            raise InputError(f"no image for generator {missing[0]!r}")
        for g, img in self.images.items():
            if g not in self.source.gens:
                raise InputError(f"image given for unknown generator {g!r}")
            if self.target.kind == "abelian":
                if not (isinstance(img, tuple) and len(img) == len(self.target.gens)):
                    raise InputError(f"image of {g!r} must be an exponent vector")
            else:
                if not isinstance(img, Word):
                    raise InputError(f"image of {g!r} must be a word")
                self.target.check_word(img)

    def image(self, elem):
        """Image of a source word (or exponent vector if the source is abelian)."""
        if isinstance(elem, tuple):
            pairs = zip(self.source.gens, elem)
        else:
            self.source.check_word(elem)
            pairs = ((name_of(x), 1 if x > 0 else -1) for x in elem.letters)
        if self.target.kind == "abelian":
            out = (0,) * len(self.target.gens)
            for g, k in pairs:
                if k:
                    out = _vec_add(out, tuple(k * c for c in self.images[g]))
            return out
        out = IDENTITY
        for g, k in pairs:
            if k:
                out = out * (self.images[g] ** k)
        return out

    def __call__(self, elem):
        return self.image(elem)

    def image_word(self, g: str) -> Word:
        img = self.images[g]
        if isinstance(img, tuple):
            out = IDENTITY
            for name, k in zip(self.target.gens, img):
                out = out * Word.gen(name, k)
            return out
        return img


def identity_morphism(G: MarkedGroup) -> Morphism:
    if G.kind == "abelian":
        n = len(G.gens)
        return Morphism(G, G, {g: tuple(int(i == j) for j in range(n)) for i, g in enumerate(G.gens)})
    return Morphism(G, G, {g: Word.gen(g) for g in G.gens})


def check_morphism(f: Morphism) -> bool:
    """pi-compatibility on generators and triviality of relator images."""
    if not f.source.Q.same_as(f.target.Q):
        raise InputError("source and target are marked by different finite groups")
    for g in f.source.gens:
        if f.target.pi_of(f.images[g]) != f.source.pi.images[g]:
            return False
    for r in f.source.all_relators():
        if not f.target.is_trivial(f.image(r)):
            return False
    return True


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g∘f (apply f first)."""
    if f.target != g.source and f.target.gens != g.source.gens:
        raise InputError("morphisms are not composable")
    return Morphism(f.source, g.target, {x: g.image(f.images[x]) for x in f.source.gens})
