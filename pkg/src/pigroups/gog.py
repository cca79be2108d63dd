"""Graphs of groups with free and free abelian vertex groups.

Conventions
-----------
* Each edge is stored once, from ``origin`` to ``terminus``.  An oriented
  edge is a pair ``(name, forward)``; ``"~e"`` denotes the reverse of ``e``.
* ``egens`` are words in the origin basis, ``images`` their images under the
  embedding into the terminus group.
* Edges outside the maximal tree contribute a stable letter named after the
  edge, with ``g^t = t^-1 g t = i_e(g)`` for ``g`` in the edge group.
"""
from __future__ import annotations

import shlex
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InputError, PreconditionError, Unsupported
from .picore import FiniteGroup
from .vgroups import commutator, make_vertex_group
from .words import IDENTITY, NAME_RE, Word, as_word, name_of, parse_word, symbol

KINDS = ("free", "abelian", "surface", "presented")
TYPE_TAGS = ("rigid", "abelian", "surface")


@dataclass(frozen=True)
class Vertex:
    name: str
    kind: str
    gens: tuple
    rels: tuple = ()
    type: str | None = None
    per: tuple = ()


@dataclass(frozen=True)
class Edge:
    name: str
    origin: str
    terminus: str
    egens: tuple = ()
    images: tuple = ()


@dataclass(frozen=True)
class Validation:
    ok: bool
    diagnostic: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    def __str__(self):
        return "< " + ", ".join(self.generators) + " | " + ", ".join(str(r) for r in self.relators) + " >"


def parse_edge_ref(ref) -> tuple[str, bool]:
    if isinstance(ref, tuple):
        return ref
    ref = str(ref).strip()
    return (ref[1:], False) if ref.startswith("~") else (ref, True)


def edge_ref_str(oe) -> str:
    return oe[0] if oe[1] else "~" + oe[0]


def reverse(oe):
    return (oe[0], not oe[1])


@dataclass(frozen=True)
class LoopForm:
    """g0 e0 g1 ... e_{k-1} g_k along a closed path at ``base``."""

    base: str
    segments: tuple
    edges: tuple
    tree: frozenset = field(default=frozenset(), compare=False)

    def is_identity(self) -> bool:
        return not self.edges and not self.segments[0]

    @property
    def path_length(self) -> int:
        return len(self.edges)

    @property
    def m(self) -> int:
        """Number of stable letters (edges outside the maximal tree)."""
        return sum(1 for e, _ in self.edges if e not in self.tree)

    def to_word(self) -> Word:
        out = self.segments[0]
        for (e, fwd), g in zip(self.edges, self.segments[1:]):
            if e not in self.tree:
                out = out * Word.gen(e, 1 if fwd else -1)
            out = out * g
        return out

    def __str__(self):
        parts = [str(self.segments[0])]
        for oe, g in zip(self.edges, self.segments[1:]):
            parts.append(f"[{edge_ref_str(oe)}]")
            parts.append(str(g))
        return " ".join(parts)


def word_token(w: Word) -> str:
    return str(w).replace(" ", "*")


class GraphOfGroups:
    """Finite graph of groups with a chosen maximal tree.

    Construction performs only structural bookkeeping; call :meth:`validate`
    for the full set of invariants.  Operations that need a valid graph
    raise :class:`PreconditionError` otherwise.
    """

    def __init__(
        self,
        vertices: Sequence[Vertex],
        edges: Sequence[Edge],
        tree: Iterable[str],
        base: str | None = None,
        group: FiniteGroup | None = None,
        pi: Mapping[str, int] | None = None,
        constants: Sequence[str] = (),
    ):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.tree = frozenset(tree)
        self.group = group
        self.pi = dict(pi) if pi is not None else None
        self.constants = tuple(constants)
        self._v = {v.name: v for v in self.vertices}
        self._e = {e.name: e for e in self.edges}
        if base is None and self.vertices:
            base = min(self._v)
        self.base = base
        self._vg: dict = {}
        self._sub: dict = {}

    # ------------------------------------------------------------------
    # lookup
    def vertex(self, name: str) -> Vertex:
        try:
            return self._v[name]
        except KeyError:
            raise InputError(f"unknown vertex {name!r}") from None

    def edge(self, name: str) -> Edge:
        try:
            return self._e[name]
        except KeyError:
            raise InputError(f"unknown edge {name!r}") from None

    def oriented(self, ref) -> tuple[str, bool]:
        oe = parse_edge_ref(ref)
        self.edge(oe[0])
        return oe

    def origin(self, oe) -> str:
        e = self._e[oe[0]]
        return e.origin if oe[1] else e.terminus

    def terminus(self, oe) -> str:
        e = self._e[oe[0]]
        return e.terminus if oe[1] else e.origin

    def src_words(self, oe) -> tuple:
        e = self._e[oe[0]]
        return e.egens if oe[1] else e.images

    def dst_words(self, oe) -> tuple:
        e = self._e[oe[0]]
        return e.images if oe[1] else e.egens

    def vgroup(self, name: str):
        g = self._vg.get(name)
        if g is None:
            v = self.vertex(name)
            g = self._vg[name] = make_vertex_group(v.kind, v.gens, v.rels)
        return g

    def src_subgroup(self, oe):
        s = self._sub.get(oe)
        if s is None:
            s = self._sub[oe] = self.vgroup(self.origin(oe)).subgroup(self.src_words(oe))
        return s

    def transfer(self, oe, elem):
        """i_oe(elem) for elem in the edge group at the origin of oe."""
        sub = self.src_subgroup(oe)
        expr = sub.express(elem)
        if expr is None:
            raise InputError(f"element not in the edge group of {edge_ref_str(oe)}")
        tg = self.vgroup(self.terminus(oe))
        return sub.evaluate(expr, tg, [tg.from_word(w) for w in self.dst_words(oe)])

    @cached_property
    def _letters(self) -> dict:
        out = {}
        for v in self.vertices:
            for g in v.gens:
                out[symbol(g)] = ("v", v.name)
        for e in self.edges:
            if e.name not in self.tree:
                out[symbol(e.name)] = ("t", e.name)
        return out

    def generators(self) -> tuple:
        return tuple(g for v in self.vertices for g in v.gens) + tuple(
            e.name for e in self.edges if e.name not in self.tree
        )

    def generator_words(self) -> list[Word]:
        return [Word.gen(g) for g in self.generators()]

    def check_word(self, w: Word) -> Word:
        for x in w.letters:
            if abs(x) not in self._letters:
                raise InputError(f"generator {name_of(x)!r} is not a letter of this graph of groups")
        return w

    def incident(self, v: str) -> list:
        """Oriented edges originating at v (loops contribute both orientations)."""
        out = []
        for e in self.edges:
            if e.origin == v:
                out.append((e.name, True))
            if e.terminus == v:
                out.append((e.name, False))
        return out

    def tree_path(self, u: str, w: str) -> list:
        """Oriented tree edges from u to w."""
        if u == w:
            return []
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for e in self.edges:
                if e.name not in self.tree:
                    continue
                for oe in ((e.name, True), (e.name, False)):
                    if self.origin(oe) == x and self.terminus(oe) not in prev:
                        prev[self.terminus(oe)] = oe
                        queue.append(self.terminus(oe))
        if w not in prev:
            raise PreconditionError(f"no tree path from {u} to {w}")
        path = []
        x = w
        while x != u:
            oe = prev[x]
            path.append(oe)
            x = self.origin(oe)
        return path[::-1]

    def tree_side(self, oe) -> set:
        """Vertices on the terminus side of the tree edge oe once it is removed."""
        start = self.terminus(oe)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for e in self.edges:
                if e.name not in self.tree or e.name == oe[0]:
                    continue
                for a, b in ((e.origin, e.terminus), (e.terminus, e.origin)):
                    if a == x and b not in seen:
                        seen.add(b)
                        queue.append(b)
        return seen

    # ------------------------------------------------------------------
    # validation
    def validate(self) -> Validation:
        if "_validation" not in self.__dict__:
            self.__dict__["_validation"] = self._validate()
        return self.__dict__["_validation"]

    def require_valid(self):
        r = self.validate()
        if not r.ok:
            raise PreconditionError(f"invalid graph of groups: {r.diagnostic}")

    def _validate(self) -> Validation:
        def bad(msg):
            return Validation(False, msg)

        if not self.vertices:
            return bad("no vertices")
        if len(self._v) != len(self.vertices):
            return bad("duplicate vertex name")
        if len(self._e) != len(self.edges):
            return bad("duplicate edge name")
        seen: set = set()
        for v in self.vertices:
            if v.kind not in KINDS:
                return bad(f"vertex {v.name}: unknown kind {v.kind!r}")
            if v.type is not None and v.type not in TYPE_TAGS:
                return bad(f"vertex {v.name}: unknown type tag {v.type!r}")
            for g in v.gens:
                if not NAME_RE.match(g):
                    return bad(f"vertex {v.name}: invalid generator name {g!r}")
                if g in seen:
                    return bad(f"generator name {g!r} used twice")
                seen.add(g)
            if not set(v.per) <= set(v.gens):
                return bad(f"vertex {v.name}: peripheral sub-basis is not part of the basis")
            if v.per and v.kind != "abelian":
                return bad(f"vertex {v.name}: peripheral sub-basis on a non-abelian vertex")
        for e in self.edges:
            if not NAME_RE.match(e.name):
                return bad(f"invalid edge name {e.name!r}")
            if e.name in seen:
                return bad(f"edge name {e.name!r} clashes with a generator")
            seen.add(e.name)
            if e.origin not in self._v or e.terminus not in self._v:
                return bad(f"edge {e.name}: unknown endpoint")
        # connectivity
        adj = {v: set() for v in self._v}
        for e in self.edges:
            adj[e.origin].add(e.terminus)
            adj[e.terminus].add(e.origin)
        if len(_reach(adj, self.vertices[0].name)) != len(self._v):
            return bad("graph is disconnected")
        # maximal tree
        for t in self.tree:
            if t not in self._e:
                return bad(f"tree edge {t!r} is not an edge")
        tadj = {v: set() for v in self._v}
        for e in self.edges:
            if e.name in self.tree:
                if e.origin == e.terminus:
                    return bad(f"tree contains the loop {e.name}")
                tadj[e.origin].add(e.terminus)
                tadj[e.terminus].add(e.origin)
        if len(self.tree) != len(self._v) - 1 or len(_reach(tadj, self.vertices[0].name)) != len(self._v):
            return bad("tree is not a spanning tree")
        if self.base not in self._v:
            return bad(f"base vertex {self.base!r} is not a vertex")
        # edge groups
        for e in self.edges:
            if len(e.egens) != len(e.images):
                return bad(f"edge {e.name}: edge-group basis and images differ in length")
            go, gt = self.vgroup(e.origin), self.vgroup(e.terminus)
            try:
                src = [go.from_word(w) for w in e.egens]
            except InputError:
                return bad(f"edge {e.name}: edge group escapes origin vertex group")
            try:
                dst = [gt.from_word(w) for w in e.images]
            except InputError:
                return bad(f"edge {e.name}: embedding escapes vertex group")
            kinds = {go.kind, gt.kind}
            if "free" in kinds and "abelian" in kinds and len(e.egens) > 1:
                return bad(f"edge {e.name}: edge group of rank {len(e.egens)} cannot be both free and abelian")
            if go.computable and not self.src_subgroup((e.name, True)).is_basis():
                return bad(f"edge {e.name}: edge-group generators are not a basis in the origin")
            if gt.computable and not self.src_subgroup((e.name, False)).is_basis():
                return bad(f"edge {e.name}: edge-group images are not a basis in the terminus")
        # markings
        if self.pi is not None:
            if self.group is None:
                return bad("pi images given without a finite group")
            Q = self.group
            for g in self.generators():
                if g not in self.pi:
                    return bad(f"missing pi image for {g!r}")
            ev = lambda w: _pi_eval(Q, self.pi, w)
            for v in self.vertices:
                if v.kind == "abelian":
                    for a in v.gens:
                        for b in v.gens:
                            if Q.mul(self.pi[a], self.pi[b]) != Q.mul(self.pi[b], self.pi[a]):
                                return bad(f"vertex {v.name}: pi images of an abelian vertex do not commute")
                for r in v.rels:
                    if ev(r) != 0:
                        return bad(f"vertex {v.name}: relator {r} is not killed by pi")
            for e in self.edges:
                for a, b in zip(e.egens, e.images):
                    lhs = ev(a)
                    if e.name not in self.tree:
                        t = self.pi[e.name]
                        lhs = Q.mul(Q.mul(Q.inv(t), lhs), t)
                    if lhs != ev(b):
                        return bad(f"edge {e.name}: pi does not respect the edge relation")
        for c in self.constants:
            if symbol(c) not in self._letters:
                return bad(f"constant {c!r} is not a generator")
        return Validation(True, "")

    # ------------------------------------------------------------------
    # presentation and word problem
    def fundamental_presentation(self) -> Presentation:
        self.require_valid()
        rels = []
        for v in self.vertices:
            ws = [Word.gen(g) for g in v.gens]
            if v.kind == "abelian":
                rels += [commutator(ws[i], ws[j]) for i in range(len(ws)) for j in range(i + 1, len(ws))]
            rels += list(v.rels)
        for e in self.edges:
            for g, img in zip(e.egens, e.images):
                if e.name in self.tree:
                    rels.append(img.inverse() * g)
                else:
                    t = Word.gen(e.name)
                    rels.append(img.inverse() * g.conj(t))
        return Presentation(self.generators(), tuple(rels))

    def normal_form(self, w, base: str | None = None) -> LoopForm:
        self.require_valid()
        w = self.check_word(as_word(w))
        base = self.base if base is None else base
        self.vertex(base)
        gs = [self.vgroup(base).identity]
        es: list = []
        cur = base

        def push(oe):
            nonlocal cur
            if es and es[-1] == reverse(oe):
                top = es[-1]
                g = gs[-1]
                sub = self.src_subgroup(oe)
                if sub.contains(g):
                    a = self.transfer(oe, g)
                    es.pop()
                    gs.pop()
                    gs[-1] = self.vgroup(self.origin(top)).mul(gs[-1], a)
                    cur = self.origin(top)
                    return
            es.append(oe)
            cur = self.terminus(oe)
            gs.append(self.vgroup(cur).identity)

        def move(target):
            for oe in self.tree_path(cur, target):
                push(oe)

        for x in w.letters:
            kind, where = self._letters[abs(x)]
            if kind == "v":
                move(where)
                G = self.vgroup(where)
                gs[-1] = G.mul(gs[-1], G.letter(x))
            else:
                oe = (where, x > 0)
                move(self.origin(oe))
                push(oe)
        move(base)
        # canonical coset representatives, left to right
        for i, oe in enumerate(es):
            G = self.vgroup(self.origin(oe))
            rep, a = self.src_subgroup(oe).coset(gs[i])
            gs[i] = rep
            H = self.vgroup(self.terminus(oe))
            gs[i + 1] = H.mul(self.transfer(oe, a), gs[i + 1])
        verts = [base] + [self.terminus(oe) for oe in es]
        segs = tuple(self.vgroup(v).word(g) for v, g in zip(verts, gs))
        if not es:
            self.vgroup(base).is_identity(gs[0])  # raises for opaque groups
        return LoopForm(base, segs, tuple(es), self.tree)

    def equal(self, u, v) -> bool:
        return self.normal_form(as_word(u) * as_word(v).inverse()).is_identity()

    # ------------------------------------------------------------------
    # text format
    def to_text(self) -> str:
        Q = self.group
        lines = []
        pi = self.pi or {}

        def pi_part(names):
            items = [f"{n}:{Q.names[pi[n]]}" for n in names if n in pi]
            return f" pi={','.join(items)}" if items and Q is not None else ""

        for v in self.vertices:
            s = f"vertex {v.name} {v.kind} gens={','.join(v.gens)}"
            if v.rels:
                s += " rels=" + ",".join(word_token(r) for r in v.rels)
            if v.type:
                s += f" type={v.type}"
            if v.per:
                s += " per=" + ",".join(v.per)
            lines.append(s + pi_part(v.gens))
        for e in self.edges:
            s = f"edge {e.name} {e.origin} {e.terminus}"
            s += " egens=" + ",".join(word_token(w) for w in e.egens)
            s += " image=" + ",".join(word_token(w) for w in e.images)
            if e.name not in self.tree:
                s += pi_part([e.name])
            lines.append(s)
        lines.append(("tree: " + ",".join(e.name for e in self.edges if e.name in self.tree)).rstrip())
        lines.append(f"base: {self.base}")
        if self.constants:
            lines.append("constants: " + ",".join(self.constants))
        return "\n".join(lines) + "\n"

    def same_quotient(self, other: "GraphOfGroups") -> bool:
        """Equality of quotient data up to basis order."""
        def key(g):
            vs = sorted((v.name, v.kind, tuple(sorted(v.gens))) for v in g.vertices)
            es = sorted((e.name, e.origin, e.terminus, e.egens, e.images) for e in g.edges)
            return vs, es, g.tree
        return key(self) == key(other)

    def replace(self, **kw) -> "GraphOfGroups":
        args = dict(
            vertices=self.vertices, edges=self.edges, tree=self.tree, base=self.base,
            group=self.group, pi=self.pi, constants=self.constants,
        )
        args.update(kw)
        return GraphOfGroups(**args)

    def __repr__(self):
        return f"GraphOfGroups({len(self.vertices)} vertices, {len(self.edges)} edges)"


def _reach(adj, start) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _pi_eval(Q, pi, w: Word) -> int:
    out = 0
    for x in w.letters:
        g = pi[name_of(x)]
        out = Q.mul(out, g if x > 0 else Q.inv(g))
    return out


def validate(gog: GraphOfGroups) -> Validation:
    return gog.validate()


def fundamental_presentation(gog: GraphOfGroups) -> Presentation:
    return gog.fundamental_presentation()


def normal_form(gog: GraphOfGroups, w, base=None) -> LoopForm:
    return gog.normal_form(w, base)


def equal(gog: GraphOfGroups, u, v) -> bool:
    return gog.equal(u, v)


# ----------------------------------------------------------------------
# parsing

def parse_gog(text: str, group: FiniteGroup | None = None) -> GraphOfGroups:
    vertices, edges = [], []
    tree = None
    base = None
    constants: list = []
    pi: dict = {}

    def elem(k, s):
        if group is None:
            raise InputError(f"line {k}: pi images need a finite group (--group)")
        try:
            return group.index(s)
        except InputError as exc:
            raise InputError(f"line {k}: {exc}") from None

    def assoc(k, s):
        out = {}
        for item in filter(None, (p.strip() for p in s.split(","))):
            if ":" not in item:
                raise InputError(f"line {k}: expected name:element in {item!r}")
            a, b = item.split(":", 1)
            out[a.strip()] = elem(k, b.strip())
        return out

    def words(k, s):
        try:
            return tuple(parse_word(t) for t in s.split(",") if t.strip() or len(s.split(",")) > 1)
        except InputError as exc:
            raise InputError(f"line {k}: {exc}") from None

    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            toks = shlex.split(line)
        except ValueError as exc:
            raise InputError(f"line {k}: {exc}") from None
        head = toks[0]
        if head in ("tree:", "base:", "constants:") or head.startswith(("tree:", "base:", "constants:")):
            key, _, rest = line.partition(":")
            rest = rest.strip()
            if key == "tree":
                tree = [t.strip() for t in rest.replace(",", " ").split()]
            elif key == "base":
                base = rest
            else:
                constants = [t.strip() for t in rest.replace(",", " ").split()]
            continue
        opts = {}
        pos = []
        for t in toks[1:]:
            if "=" in t:
                a, b = t.split("=", 1)
                opts[a] = b
            else:
                pos.append(t)
        if head == "vertex":
            if len(pos) != 2:
                raise InputError(f"line {k}: expected 'vertex <name> <kind> gens=...'")
            name, kind = pos
            if kind not in KINDS:
                raise InputError(f"line {k}: unknown vertex kind {kind!r}")
            unknown = set(opts) - {"gens", "per", "pi", "type", "rels"}
            if unknown:
                raise InputError(f"line {k}: unknown option {sorted(unknown)[0]!r}")
            gens = tuple(g.strip() for g in opts.get("gens", "").split(",") if g.strip())
            for g in gens:
                if not NAME_RE.match(g):
                    raise InputError(f"line {k}: invalid generator name {g!r}")
            per = tuple(g.strip() for g in opts.get("per", "").split(",") if g.strip())
            rels = words(k, opts["rels"]) if "rels" in opts else ()
            vtype = opts.get("type")
            if vtype == "abelian-type":
                vtype = "abelian"
            if vtype == "surface-type":
                vtype = "surface"
            if vtype is not None and vtype not in TYPE_TAGS:
                raise InputError(f"line {k}: unknown type tag {vtype!r}")
            if "pi" in opts:
                pi.update(assoc(k, opts["pi"]))
            vertices.append(Vertex(name, kind, gens, rels, vtype, per))
        elif head == "edge":
            if len(pos) != 3:
                raise InputError(f"line {k}: expected 'edge <name> <from> <to> egens=... image=...'")
            name, o, t = pos
            unknown = set(opts) - {"egens", "image", "images", "pi"}
            if unknown:
                raise InputError(f"line {k}: unknown option {sorted(unknown)[0]!r}")
            if not NAME_RE.match(name):
                raise InputError(f"line {k}: invalid edge name {name!r}")
            eg = words(k, opts.get("egens", ""))
            im = words(k, opts.get("image", opts.get("images", "")))
            if "pi" in opts:
                p = opts["pi"]
                pi[name] = elem(k, p.split(":", 1)[1] if ":" in p else p)
            edges.append(Edge(name, o, t, eg, im))
        else:
            raise InputError(f"line {k}: unknown directive {head!r}")
    if tree is None:
        raise InputError("missing 'tree:' line")
    return GraphOfGroups(vertices, edges, tree, base, group, pi if pi else None, constants)


# ----------------------------------------------------------------------
# moves

def _exp_sums(w: Word) -> dict:
    out: dict = {}
    for x in w.letters:
        out[abs(x)] = out.get(abs(x), 0) + (1 if x > 0 else -1)
    return {k: v for k, v in out.items() if v}


def _classify(sub: GraphOfGroups, gens: tuple, rels: Sequence[Word], name: str, protected=(), prefer=()):
    """Recognize the group <gens | rels> (realized by ``sub``) as free or free abelian.

    Returns (Vertex, substitution) where the substitution rewrites eliminated
    generators as words in the surviving ones.
    """
    computable = all(sub.vgroup(v.name).computable for v in sub.vertices)
    rels = [r for r in rels if r]

    def commuting(gs):
        ws = [Word.gen(g) for g in gs]
        return all(sub.equal(ws[i] * ws[j], ws[j] * ws[i]) for i in range(len(ws)) for j in range(i + 1, len(ws)))

    if computable:
        if not rels:
            return Vertex(name, "free", gens), {}
        if all(not _exp_sums(r) for r in rels) and commuting(gens):
            return Vertex(name, "abelian", gens), {}
        # Tietze eliminations of generators occurring exactly once in a relator
        subst: dict = {}
        live = list(gens)
        work = list(rels)
        progress = True
        while progress and work:
            progress = False
            for r in work:
                counts: dict = {}
                for x in r.letters:
                    counts[abs(x)] = counts.get(abs(x), 0) + 1
                cand = [x for x in r.letters if counts[abs(x)] == 1 and name_of(x) not in protected]
                if not cand:
                    continue
                x = next((c for c in cand if name_of(c) in prefer), cand[-1])
                i = r.letters.index(x)
                # r = A x B = 1  =>  x = A^-1 B^-1
                sol = (Word._make(r.letters[:i]).inverse() * Word._make(r.letters[i + 1:]).inverse())
                if x < 0:
                    sol = sol.inverse()
                g = name_of(x)
                subst = {k: v.substitute({g: sol}) for k, v in subst.items()}
                subst[g] = sol
                live.remove(g)
                work = [w.substitute({g: sol}) for w in work if w is not r]
                work = [w for w in work if w]
                progress = True
                break
        if not work:
            return Vertex(name, "free", tuple(live)), subst
        if all(not _exp_sums(r) for r in work) and commuting(live):
            return Vertex(name, "abelian", tuple(live)), subst
    return Vertex(name, "presented", gens, tuple(rels)), {}


def _merge(gog: GraphOfGroups, verts: list, edges: list, name: str):
    sub = GraphOfGroups(
        [gog.vertex(v) for v in verts],
        [gog.edge(e) for e in edges],
        [e for e in edges if e in gog.tree],
        verts[0],
    )
    sub.require_valid()
    pres = sub.fundamental_presentation()
    prefer = {e for e in edges if e not in gog.tree}
    return _classify(sub, pres.generators, pres.relators, name, set(gog.constants), prefer)


def collapse(gog: GraphOfGroups, F: Iterable, names: Mapping | None = None) -> GraphOfGroups:
    """Collapse every connected component of the edge set F to a single vertex.

    ``names`` optionally maps a component (given by any of its vertices) to
    the name of the merged vertex; by default the first vertex's name is kept.
    """
    gog.require_valid()
    F = {gog.oriented(e)[0] for e in F}
    if not F:
        return gog
    names = dict(names or {})
    parent = {v.name: v.name for v in gog.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in gog.edges:
        if e.name in F:
            parent[find(e.origin)] = find(e.terminus)
    comps: dict = {}
    for v in gog.vertices:
        comps.setdefault(find(v.name), []).append(v.name)
    new_vertex = {}
    subst: dict = {}
    merged: dict = {}
    for root, vs in comps.items():
        ces = [e.name for e in gog.edges if e.name in F and find(e.origin) == root]
        if not ces:
            new_vertex[vs[0]] = vs[0]
            continue
        tree_here = [e for e in ces if e in gog.tree]
        if len(tree_here) != len(vs) - 1:
            raise PreconditionError(
                "collapse needs the maximal tree to restrict to a spanning tree of each collapsed component"
            )
        label = next((names[v] for v in vs if v in names), vs[0])
        vtx, s = _merge(gog, vs, ces, label)
        merged[root] = vtx
        subst.update(s)
        for v in vs:
            new_vertex[v] = label
    vertices, done = [], set()
    for v in gog.vertices:
        root = find(v.name)
        if root in merged:
            if root not in done:
                vertices.append(merged[root])
                done.add(root)
        else:
            vertices.append(v)
    edges = []
    for e in gog.edges:
        if e.name in F:
            continue
        edges.append(Edge(
            e.name, new_vertex[e.origin], new_vertex[e.terminus],
            tuple(w.substitute(subst) for w in e.egens),
            tuple(w.substitute(subst) for w in e.images),
        ))
    pi = None if gog.pi is None else {k: g for k, g in gog.pi.items() if k not in subst}
    out = GraphOfGroups(vertices, edges, gog.tree - F, new_vertex[gog.base], gog.group, pi, gog.constants)
    out.require_valid()
    return out


def blow_up(gog: GraphOfGroups, v: str, S: GraphOfGroups, attach: Mapping) -> GraphOfGroups:
    """Replace vertex v by the graph of groups S (presented on v's basis)."""
    gog.require_valid()
    S.require_valid()
    vert = gog.vertex(v)
    G = gog.vgroup(v)
    if not G.computable:
        raise Unsupported(f"cannot blow up a {vert.kind} vertex")
    pres = S.fundamental_presentation()
    if set(pres.generators) != set(vert.gens) or len(pres.generators) != len(vert.gens):
        raise PreconditionError(f"S is not presented on the basis of {v}")
    for r in pres.relators:
        if vert.kind == "free" and r:
            raise PreconditionError(f"relator {r} of S is not trivial in the free group at {v}")
        if vert.kind == "abelian" and _exp_sums(r):
            raise PreconditionError(f"relator {r} of S is not trivial in the abelian group at {v}")
    if vert.kind == "abelian":
        ws = [Word.gen(g) for g in vert.gens]
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                if not S.equal(ws[i] * ws[j], ws[j] * ws[i]):
                    raise PreconditionError(f"S is not abelian although {v} is")
    others = {x.name for x in gog.vertices if x.name != v}
    clash = others & {x.name for x in S.vertices}
    if clash:
        raise InputError(f"vertex name clash: {sorted(clash)}")
    eclash = {e.name for e in gog.edges} & {e.name for e in S.edges}
    if eclash:
        raise InputError(f"edge name clash: {sorted(eclash)}")
    # attach points keyed by oriented edge
    att = {}
    for key, u in attach.items():
        oe = parse_edge_ref(key)
        e = gog.edge(oe[0])
        if not str(key).startswith("~") and e.origin != v and e.terminus == v:
            oe = (oe[0], False)
        S.vertex(u)
        att[oe] = u
    new_words = {}
    for oe in gog.incident(v):
        if oe not in att:
            raise PreconditionError(f"no attach point for edge {edge_ref_str(oe)}")
        u = att[oe]
        ws = []
        for w in gog.src_words(oe):
            lf = S.normal_form(w, base=u)
            if lf.path_length:
                raise PreconditionError(
                    f"edge {edge_ref_str(oe)}: edge group is not contained in the vertex group of {u}"
                )
            ws.append(lf.segments[0])
        new_words[oe] = tuple(ws)
    vertices = []
    for x in gog.vertices:
        vertices.extend(S.vertices if x.name == v else [x])
    edges = []
    for e in gog.edges:
        o, t, eg, im = e.origin, e.terminus, e.egens, e.images
        if (e.name, True) in new_words:
            o, eg = att[(e.name, True)], new_words[(e.name, True)]
        if (e.name, False) in new_words:
            t, im = att[(e.name, False)], new_words[(e.name, False)]
        edges.append(Edge(e.name, o, t, eg, im))
    edges.extend(S.edges)
    base = gog.base if gog.base != v else S.base
    out = GraphOfGroups(vertices, edges, gog.tree | S.tree, base, gog.group, gog.pi, gog.constants)
    out.require_valid()
    return out


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def fold(gog: GraphOfGroups, v: str, folds: Sequence) -> GraphOfGroups:
    """Enlarge the edge groups of edges at v to H_j, amalgamating H_j into v."""
    gog.require_valid()
    gog.vertex(v)
    taken = {g for x in gog.vertices for g in x.gens} | {e.name for e in gog.edges} | {x.name for x in gog.vertices}
    seen_edges = set()
    temp_vertices = [gog.vertex(v)]
    temp_edges = []
    new_edge_words = {}
    pi = dict(gog.pi) if gog.pi is not None else None
    for ref, H in folds:
        oe = gog.oriented(ref)
        if oe[0] in seen_edges:
            raise InputError(f"edge {oe[0]} folded twice")
        seen_edges.add(oe[0])
        if gog.origin(oe) != v:
            raise PreconditionError(f"edge {edge_ref_str(oe)} does not originate at {v}")
        tau = gog.terminus(oe)
        if tau == v:
            raise PreconditionError(f"edge {edge_ref_str(oe)} ends at {v} itself")
        Gt = gog.vgroup(tau)
        if not Gt.computable:
            raise Unsupported(f"cannot fold into a {Gt.kind} vertex")
        H = [as_word(h) for h in H]
        try:
            Hel = [Gt.from_word(h) for h in H]
        except InputError:
            raise PreconditionError(f"H escapes the vertex group of {tau}") from None
        Hsub = Gt.subgroup(H)
        if any(not h for h in H) or not Hsub.is_basis():
            raise PreconditionError("the generators of H are not a basis")
        B = [Gt.from_word(w) for w in gog.dst_words(oe)]
        if not all(Hsub.contains(b) for b in B):
            raise PreconditionError(f"H does not contain the edge group of {edge_ref_str(oe)}")
        Bsub = Gt.subgroup(gog.dst_words(oe))
        if all(Bsub.contains(h) for h in Hel):
            continue  # H equals the edge group: nothing to fold
        hnames = [_fresh(f"{oe[0]}_h{k + 1}", taken) for k in range(len(H))]
        hv = _fresh(f"{oe[0]}_H", taken)
        temp_vertices.append(Vertex(hv, Gt.kind, tuple(hnames)))
        HG = make_vertex_group(Gt.kind, hnames)
        hel = [HG.from_word(Word.gen(n)) for n in hnames]
        imgs = tuple(HG.word(Hsub.evaluate(Hsub.express(b), HG, hel)) for b in B)
        temp_edges.append(Edge(_fresh(f"{oe[0]}_f", taken), v, hv, gog.src_words(oe), imgs))
        new_edge_words[oe] = (tuple(Word.gen(n) for n in hnames), tuple(H))
        if pi is not None:
            for n, h in zip(hnames, H):
                pi[n] = _pi_eval(gog.group, gog.pi, h)
    if not temp_edges:
        return gog
    tmp = GraphOfGroups(temp_vertices, temp_edges, [e.name for e in temp_edges], v)
    tmp.require_valid()
    pres = tmp.fundamental_presentation()
    new_names = {g for x in temp_vertices[1:] for g in x.gens}
    vtx, subst = _classify(tmp, pres.generators, pres.relators, v, set(gog.constants), new_names)
    edges = []
    for e in gog.edges:
        eg, im = e.egens, e.images
        if (e.name, True) in new_edge_words:
            eg, im = new_edge_words[(e.name, True)]
        elif (e.name, False) in new_edge_words:
            im, eg = new_edge_words[(e.name, False)]
        if e.origin == v:
            eg = tuple(w.substitute(subst) for w in eg)
        if e.terminus == v:
            im = tuple(w.substitute(subst) for w in im)
        edges.append(Edge(e.name, e.origin, e.terminus, eg, im))
    vertices = [vtx if x.name == v else x for x in gog.vertices]
    if pi is not None:
        pi = {k: g for k, g in pi.items() if k not in subst}
    out = GraphOfGroups(vertices, edges, gog.tree, gog.base, gog.group, pi, gog.constants)
    out.require_valid()
    return out


def _letter(gog: GraphOfGroups, oe) -> Word:
    if oe[0] in gog.tree:
        return IDENTITY
    return Word.gen(oe[0], 1 if oe[1] else -1)


def slide(gog: GraphOfGroups, e, f) -> GraphOfGroups:
    """Slide the origin of e along f (requires Stab(e) <= Stab(f))."""
    gog.require_valid()
    oe, of = gog.oriented(e), gog.oriented(f)
    if oe[0] == of[0]:
        raise PreconditionError("cannot slide an edge along itself or its reverse")
    v = gog.origin(oe)
    if gog.origin(of) != v:
        raise PreconditionError(f"{edge_ref_str(oe)} and {edge_ref_str(of)} do not share an origin")
    if oe[0] in gog.tree and of[0] not in gog.tree:
        raise PreconditionError("cannot slide a tree edge along an edge outside the tree")
    G = gog.vgroup(v)
    sub = gog.src_subgroup(of)
    new = []
    for w in gog.src_words(oe):
        a = G.from_word(w)
        if not sub.contains(a):
            raise PreconditionError(
                f"edge group of {edge_ref_str(oe)} is not contained in the edge group of {edge_ref_str(of)}"
            )
        new.append(gog.vgroup(gog.terminus(of)).word(gog.transfer(of, a)))
    target = gog.terminus(of)
    edges = []
    for x in gog.edges:
        if x.name == oe[0]:
            if oe[1]:
                x = Edge(x.name, target, x.terminus, tuple(new), x.images)
            else:
                x = Edge(x.name, x.origin, target, x.egens, tuple(new))
        edges.append(x)
    out = gog.replace(edges=edges)
    out.require_valid()
    return out


def slide_correspondence(gog: GraphOfGroups, e, f) -> dict:
    """Images in the slid graph of the old generators that change (only t_e)."""
    oe, of = gog.oriented(e), gog.oriented(f)
    if oe[0] in gog.tree:
        return {}
    tf = _letter(gog, of)
    te = Word.gen(oe[0])
    return {oe[0]: tf * te if oe[1] else te * tf.inverse()}
