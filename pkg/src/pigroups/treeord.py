"""Labeled finite rooted trees over a well-founded preorder, and the tree preorder."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Sequence

from . import config
from .errors import InputError


# ----------------------------------------------------------------------
# base orders

class BaseOrder:
    """A preorder given by a comparison oracle ``leq`` and a label parser."""

    def __init__(self, leq: Callable, parse: Callable, domain: Sequence | None = None, name: str = "P"):
        self.leq = leq
        self._parse = parse
        self.domain = None if domain is None else tuple(domain)
        self.name = name

    def parse(self, token: str):
        p = self._parse(token)
        if self.domain is not None and p not in self.domain:
            raise InputError(f"label {token!r} is outside {self.name}")
        return p

    def less(self, p, q) -> bool:
        return self.leq(p, q) and not self.leq(q, p)

    def equiv(self, p, q) -> bool:
        return self.leq(p, q) and self.leq(q, p)

    def below(self, p) -> list:
        """Strictly smaller elements (finite domains only)."""
        if self.domain is None:
            raise InputError(f"{self.name} has no finite domain")
        return [q for q in self.domain if self.less(q, p)]

    def show(self, p) -> str:
        if isinstance(p, tuple):
            return ":".join(map(str, p))
        return str(p)


def _int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InputError(f"label {token!r} is not an integer") from None


def chain(n: int | None = None) -> BaseOrder:
    """Integers 0..n-1 (or all naturals) in their usual order."""
    def parse(t):
        v = _int(t)
        if v < 0:
            raise InputError(f"label {t!r} is negative")
        return v
    return BaseOrder(lambda a, b: a <= b, parse, None if n is None else range(n), f"chain({n})")


def table_order(elements: Sequence[str], relations: Iterable[tuple]) -> BaseOrder:
    """Preorder generated by (a, op, b) with op in {'<=', '<'}; strict pairs must stay strict."""
    elements = tuple(elements)
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    le = [[i == j for j in range(n)] for i in range(n)]
    strict = []
    for a, op, b in relations:
        if a not in idx or b not in idx:
            raise InputError(f"unknown element in {a} {op} {b}")
        if op not in ("<", "<="):
            raise InputError(f"unknown relation {op!r}")
        le[idx[a]][idx[b]] = True
        if op == "<":
            strict.append((a, b))
    for k in range(n):
        for i in range(n):
            if le[i][k]:
                for j in range(n):
                    if le[k][j]:
                        le[i][j] = True
    for a, b in strict:
        if le[idx[b]][idx[a]]:
            raise InputError(f"strict cycle through {a} < {b}")
    return BaseOrder(lambda p, q: le[idx[p]][idx[q]], lambda t: t, elements, "table")


def parse_order(text: str) -> BaseOrder:
    """``elements: a b c`` then ``a < b`` / ``a <= b`` lines; or ``chain <n>``."""
    elements, rels = None, []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"chain\s+(\d+)", line)
        if m:
            return chain(int(m.group(1)))
        if line.startswith("elements:"):
            elements = line[len("elements:"):].replace(",", " ").split()
            continue
        m = re.fullmatch(r"(\S+)\s*(<=|<)\s*(\S+)", line)
        if not m:
            raise InputError(f"line {n}: expected 'a < b' or 'a <= b'")
        rels.append(m.groups())
    if elements is None:
        raise InputError("missing 'elements:' line")
    return table_order(elements, rels)


def product_order(o1: BaseOrder, o2: BaseOrder) -> BaseOrder:
    """p <= q iff p <_1 q, or p ~_1 q and p <=_2 q.  Labels are written ``x:y``."""
    def leq(p, q):
        return o1.less(p[0], q[0]) or (o1.equiv(p[0], q[0]) and o2.leq(p[1], q[1]))

    def parse(t):
        parts = t.split(":")
        if len(parts) != 2:
            raise InputError(f"product label {t!r} must look like x:y")
        return (o1.parse(parts[0]), o2.parse(parts[1]))

    dom = None
    if o1.domain is not None and o2.domain is not None:
        dom = tuple(product(o1.domain, o2.domain))
    return BaseOrder(leq, parse, dom, f"{o1.name}x{o2.name}")


# ----------------------------------------------------------------------
# trees

@dataclass(frozen=True)
class Tree:
    """Nodes 0..n-1 with node 0 the root; ``parent[0] == -1``."""

    parent: tuple
    labels: tuple
    names: tuple = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"n{i}" for i in range(len(self.parent))))

    def __len__(self):
        return len(self.parent)

    @cached_property
    def children(self) -> tuple:
        ch = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    def leaves(self) -> set:
        return {v for v in range(len(self)) if not self.children[v]}

    def check(self, order: BaseOrder) -> "Tree":
        """Labels weakly decrease from the root and strictly below its children."""
        for v, p in enumerate(self.parent):
            if p < 0:
                continue
            if not order.leq(self.labels[v], self.labels[p]):
                raise InputError(f"label of {self.names[v]} exceeds that of its parent")
            if p != 0 and not order.less(self.labels[v], self.labels[p]):
                raise InputError(f"label of {self.names[v]} is not strictly below its parent")
        return self

    def to_text(self, order: BaseOrder | None = None, names: bool = True) -> str:
        show = order.show if order else str

        def go(v):
            head = f"{self.names[v]}={show(self.labels[v])}" if names else show(self.labels[v])
            if self.children[v]:
                head += "(" + ", ".join(go(c) for c in self.children[v]) + ")"
            return head
        return go(0)

    def canonical(self) -> tuple:
        """Shape-and-label key invariant under reordering children."""
        def go(v):
            return (self.labels[v], tuple(sorted(go(c) for c in self.children[v])))
        return go(0)


_TOKEN = re.compile(r"\s*(?:([(),])|([^(),\s]+))")


def parse_tree(text: str, order: BaseOrder) -> Tree:
    """``r=3(a=2(b=1), c=2)``; names are optional (``3(2(1), 2)``)."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"unexpected character at position {pos}")
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    parent, labels, names = [], [], []
    i = 0

    def node(par):
        nonlocal i
        if i >= len(toks) or toks[i] in "(),":
            raise InputError("expected a node label")
        tok = toks[i]
        i += 1
        name, sep, lab = tok.partition("=")
        if not sep:
            name, lab = f"n{len(parent)}", tok
        me = len(parent)
        parent.append(par)
        labels.append(order.parse(lab))
        names.append(name)
        if i < len(toks) and toks[i] == "(":
            i += 1
            node(me)
            while i < len(toks) and toks[i] == ",":
                i += 1
                node(me)
            if i >= len(toks) or toks[i] != ")":
                raise InputError("unbalanced parentheses")
            i += 1

    node(-1)
    if i != len(toks):
        raise InputError(f"trailing input {' '.join(toks[i:])!r}")
    if len(set(names)) != len(names):
        raise InputError("duplicate node name")
    return Tree(tuple(parent), tuple(labels), tuple(names)).check(order)


# ----------------------------------------------------------------------
# the comparator

def _subtrees(t: Tree):
    """Parent-closed node sets containing the root."""
    def go(v):
        opts = [frozenset([v])]
        kids = t.children[v]
        for r in range(1, len(kids) + 1):
            for chosen in combinations(kids, r):
                for parts in product(*(go(c) for c in chosen)):
                    opts.append(frozenset([v]).union(*parts))
        return opts
    return go(0)


def _embeddings(S: frozenset, t: Tree, t2: Tree):
    """Root-preserving injective maps S -> t2 respecting the parent relation."""
    def go(v, w):
        kids = [c for c in t.children[v] if c in S]
        if len(kids) > len(t2.children[w]):
            return
        for img in permutations(t2.children[w], len(kids)):
            for parts in product(*(list(go(c, d)) for c, d in zip(kids, img))):
                f = {v: w}
                for p in parts:
                    f.update(p)
                yield f
    yield from go(0, 0)


def _extends(t: Tree, S) -> bool:
    """Every node outside S lies below a leaf of S."""
    for v in S:
        kids = t.children[v]
        inside = [c for c in kids if c in S]
        if inside and len(inside) != len(kids):
            return False
    return True


def tr_less(t1: Tree, t2: Tree, order: BaseOrder, witness: bool = False):
    """Whether t2 sits strictly below t1 in the tree preorder.

    Searches subtrees S of t1 and maps f onto subtrees of t2.  Besides the
    four defining clauses, f must not raise any label and must lower at
    least one (this makes the relation irreflexive).
    """
    cap = config.load().tree_nodes
    if max(len(t1), len(t2)) > cap:
        raise InputError(f"trees are limited to {cap} nodes")
    L1, L2 = t1.labels, t2.labels
    leaves1 = t1.leaves()
    for S in _subtrees(t1):
        if not _extends(t1, S):
            continue
        leavesS = {u for u in S if not any(c in S for c in t1.children[u])}
        for f in _embeddings(S, t1, t2):
            if not all(order.leq(L2[f[u]], L1[u]) for u in S):
                continue
            drop = {u for u in S if order.less(L2[f[u]], L1[u])}
            if not drop:
                continue
            if any(u not in drop for u in leavesS - leaves1):
                continue
            image = set(f.values())
            if not _extends(t2, image):
                continue
            anchors = {f[u] for u in leavesS & drop}
            ok = True
            for v in range(len(t2)):
                if v in image:
                    continue
                a = t2.parent[v]
                while a not in image:
                    a = t2.parent[a]
                if a not in anchors:
                    ok = False
                    break
            if ok:
                return (S, f) if witness else True
    return None if witness else False


# ----------------------------------------------------------------------
# enumeration and descending chains

def all_trees(max_nodes: int, order: BaseOrder) -> list:
    """Every valid labeled tree up to isomorphism with at most max_nodes nodes."""
    if order.domain is None:
        raise InputError("enumeration needs a finite base order")
    seen, out = set(), []
    shapes = [[-1]]
    frontier = [[-1]]
    for _ in range(max_nodes - 1):
        nxt = []
        for par in frontier:
            for p in range(len(par)):
                nxt.append(par + [p])
        frontier = nxt
        shapes += nxt
    for par in shapes:
        for labs in product(order.domain, repeat=len(par)):
            t = Tree(tuple(par), tuple(labs))
            try:
                t.check(order)
            except InputError:
                continue
            key = t.canonical()
            if key not in seen:
                seen.add(key)
                out.append(t)
    return out


def _rebuild(parent, labels) -> Tree:
    return Tree(tuple(parent), tuple(labels))


def successors(t: Tree, order: BaseOrder, max_nodes: int) -> list:
    """Candidate trees below t: lower a label, prune a leaf, or sprout a child."""
    out = []
    n = len(t)
    for v in range(n):
        for q in order.below(t.labels[v]):
            labs = list(t.labels)
            labs[v] = q
            out.append(_rebuild(t.parent, labs))
    for v in t.leaves() - {0}:
        keep = [u for u in range(n) if u != v]
        pos = {u: i for i, u in enumerate(keep)}
        for q in order.below(t.labels[t.parent[v]]) + [t.labels[t.parent[v]]]:
            labs = [t.labels[u] for u in keep]
            labs[pos[t.parent[v]]] = q
            out.append(_rebuild([pos[t.parent[u]] if t.parent[u] >= 0 else -1 for u in keep], labs))
    if n < max_nodes:
        for v in t.leaves():
            for q in order.below(t.labels[v]):
                for c in ([t.labels[v]] if v == 0 else []) + order.below(q if v else t.labels[v]):
                    labs = list(t.labels) + [c]
                    labs[v] = q
                    out.append(_rebuild(list(t.parent) + [v], labs))
    valid = []
    for c in out:
        try:
            c.check(order)
        except InputError:
            continue
        if tr_less(t, c, order):
            valid.append(c)
    return valid


def descending_chain(t: Tree, order: BaseOrder, max_steps: int = 1000, max_nodes: int | None = None,
                     seed: int = 0) -> list:
    """Follow random successors until none is left (or max_steps is hit)."""
    rng = random.Random(seed)
    max_nodes = config.load().tree_nodes if max_nodes is None else max_nodes
    out = [t]
    for _ in range(max_steps):
        nxt = successors(out[-1], order, max_nodes)
        if not nxt:
            break
        out.append(rng.choice(nxt))
    return out
