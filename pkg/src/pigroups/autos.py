"""Dehn twists, natural extensions of vertex automorphisms, inner automorphisms.

Every automorphism is stored by its generator images over the host's
combined alphabet (vertex generators plus stable letters).
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InputError, PreconditionError
from .gog import GraphOfGroups, _pi_eval, edge_ref_str, parse_edge_ref, reverse
from .words import IDENTITY, Word, as_word, parse_word


@dataclass(frozen=True)
class ElementaryAutomorphism:
    kind: str  # "twist" | "vext" | "inner"
    host: GraphOfGroups = field(repr=False)
    images: Mapping[str, Word] = field(repr=False)
    data: Mapping = field(default_factory=dict)

    def __call__(self, w) -> Word:
        return as_word(w).substitute(self.images)

    def twisters(self) -> list[Word]:
        if self.kind == "vext":
            return list(self.data["twisters"].values())
        return [self.data["c"]]

    def inverse(self) -> "ElementaryAutomorphism":
        d = self.data
        if self.kind == "twist":
            return dehn_twist(self.host, d["edge"], d["c"].inverse())
        if self.kind == "inner":
            return inner(self.host, d["c"].inverse())
        sig, inv = d["sigma"], d["inv"]
        tw = {edge_ref_str(oe): as_word(c).inverse().substitute(inv) for oe, c in d["twisters"].items()}
        return vertex_extension(self.host, d["vertex"], inv, sig, tw)

    def describe(self) -> str:
        d = self.data
        if self.kind == "twist":
            return f"twist {edge_ref_str(d['edge'])} by {d['c']}"
        if self.kind == "inner":
            return f"inner {d['c']}"
        return f"vext {d['vertex']}"


@dataclass(frozen=True)
class ModularWord:
    """phi_1 ∘ ... ∘ phi_k (phi_k is applied first)."""

    factors: tuple = ()

    def __post_init__(self):
        hosts = {id(f.host) for f in self.factors}
        if len(hosts) > 1:
            raise InputError("all factors of a modular word must share the host")

    def __call__(self, w) -> Word:
        w = as_word(w)
        for f in reversed(self.factors):
            w = f(w)
        return w

    def inverse(self) -> "ModularWord":
        return ModularWord(tuple(f.inverse() for f in reversed(self.factors)))

    def __mul__(self, other: "ModularWord") -> "ModularWord":
        return ModularWord(self.factors + other.factors)

    def images(self, host: GraphOfGroups | None = None) -> dict:
        host = host or (self.factors[0].host if self.factors else None)
        if host is None:
            return {}
        return {g: self(Word.gen(g)) for g in host.generators()}

    def __len__(self):
        return len(self.factors)


def apply(aut, w) -> Word:
    """Image of w; ``aut`` is an automorphism or a modular word."""
    return aut(w)


def _vertex_word(host: GraphOfGroups, v: str, w, what: str) -> Word:
    w = as_word(w)
    try:
        host.vgroup(v).from_word(w)
    except InputError:
        raise PreconditionError(f"{what} {w} is not in the vertex group of {v}") from None
    return w


def dehn_twist(host: GraphOfGroups, e, c) -> ElementaryAutomorphism:
    """The Dehn twist over the oriented edge e by c.

    c must lie in the vertex group at the origin of e and centralize the edge
    group there; for free origins it must lie in the edge group itself.  For
    a tree edge, every vertex group on the terminus side is conjugated by c.
    For an edge outside the tree, only its stable letter changes: t -> c^-1 t.
    """
    host.require_valid()
    oe = host.oriented(e)
    v = host.origin(oe)
    c = _vertex_word(host, v, c, "twister")
    G = host.vgroup(v)
    ce = G.from_word(c)
    sub = host.src_subgroup(oe)
    if G.kind != "abelian" and not sub.contains(ce):
        raise PreconditionError(f"twister {c} is not in the edge group of {edge_ref_str(oe)}")
    for a in host.src_words(oe):
        if not G.commute(ce, G.from_word(a)):
            raise PreconditionError(f"twister {c} does not commute with the edge group of {edge_ref_str(oe)}")
    images: dict = {}
    if oe[0] in host.tree:
        side = host.tree_side(oe)
        const = lambda u: c if u in side else IDENTITY
        for x in host.vertices:
            for g in x.gens:
                images[g] = Word.gen(g).conj(const(x.name))
        for f in host.edges:
            if f.name not in host.tree:
                images[f.name] = const(f.origin).inverse() * Word.gen(f.name) * const(f.terminus)
    else:
        for g in host.generators():
            images[g] = Word.gen(g)
        t = Word.gen(oe[0])
        images[oe[0]] = c.inverse() * t if oe[1] else t * c
    return ElementaryAutomorphism("twist", host, images, {"edge": oe, "c": c})


def inner(host: GraphOfGroups, c) -> ElementaryAutomorphism:
    host.require_valid()
    c = host.check_word(as_word(c))
    return ElementaryAutomorphism("inner", host, {g: Word.gen(g).conj(c) for g in host.generators()}, {"c": c})


def identity_automorphism(host: GraphOfGroups) -> ElementaryAutomorphism:
    return inner(host, IDENTITY)


def vertex_extension(host: GraphOfGroups, v: str, sigma: Mapping, inv: Mapping, twisters: Mapping | None = None) -> ElementaryAutomorphism:
    """Natural extension of the automorphism sigma of the vertex group at v.

    ``twisters`` maps oriented edges leaving v to c_e with
    sigma(a) = c_e^-1 a c_e on that edge group (missing entries mean 1).
    """
    host.require_valid()
    vert = host.vertex(v)
    G = host.vgroup(v)
    sig = {g: _vertex_word(host, v, sigma.get(g, Word.gen(g)), "sigma image") for g in vert.gens}
    sinv = {g: _vertex_word(host, v, inv.get(g, Word.gen(g)), "inverse image") for g in vert.gens}
    for table in (sigma, inv):
        extra = set(table) - set(vert.gens)
        if extra:
            raise InputError(f"{sorted(extra)[0]!r} is not a generator of {v}")
    eq = lambda a, b: G.from_word(a) == G.from_word(b)
    for g in vert.gens:
        x = Word.gen(g)
        if not (eq(x.substitute(sig).substitute(sinv), x) and eq(x.substitute(sinv).substitute(sig), x)):
            raise PreconditionError(f"sigma: the supplied inverse does not invert sigma on {g}")
    incident = host.incident(v)
    tw = {}
    for key, c in (twisters or {}).items():
        oe = host.oriented(key)
        if oe not in incident:
            oe = reverse(oe) if reverse(oe) in incident and not str(key).startswith("~") else oe
        if oe not in incident:
            raise InputError(f"edge {edge_ref_str(oe)} does not leave {v}")
        tw[oe] = _vertex_word(host, v, c, "twister")
    for oe in incident:
        c = tw.setdefault(oe, IDENTITY)
        for a in host.src_words(oe):
            if not eq(a.substitute(sig), a.conj(c)):
                raise PreconditionError(
                    f"edge clause: sigma is not conjugation by {c} on the edge group of {edge_ref_str(oe)}"
                )
    if vert.type == "abelian":
        for p in vert.per:
            if not eq(Word.gen(p).substitute(sig), Word.gen(p)):
                raise PreconditionError(f"peripheral clause: sigma does not fix {p}")
    # constant attached to each vertex: twister of the first tree edge from v
    cv = {v: IDENTITY}
    for x in host.vertices:
        if x.name != v:
            cv[x.name] = tw[host.tree_path(v, x.name)[0]]
    images: dict = dict(sig)
    for x in host.vertices:
        if x.name != v:
            for g in x.gens:
                images[g] = Word.gen(g).conj(cv[x.name])
    for f in host.edges:
        if f.name in host.tree:
            continue
        ko = tw[(f.name, True)] if f.origin == v else cv[f.origin]
        kt = tw[(f.name, False)] if f.terminus == v else cv[f.terminus]
        images[f.name] = ko.inverse() * Word.gen(f.name) * kt
    data = {"vertex": v, "sigma": sig, "inv": sinv, "twisters": tw}
    return ElementaryAutomorphism("vext", host, images, data)


def is_pi_modular(aut) -> bool:
    """Twisters central in Q, pi preserved on every generator, constants fixed."""
    if isinstance(aut, ModularWord):
        return all(is_pi_modular(f) for f in aut.factors)
    host = aut.host
    if host.pi is None or host.group is None:
        raise InputError("the host carries no pi data")
    Q = host.group
    ev = lambda w: _pi_eval(Q, host.pi, w)
    for c in aut.twisters():
        if not Q.is_central(ev(c)):
            return False
    for g in host.generators():
        if ev(aut(Word.gen(g))) != host.pi[g]:
            return False
    for a in host.constants:
        x = Word.gen(a)
        if not host.equal(aut(x), x):
            return False
    return True


def twist_factorization_check(host: GraphOfGroups, e, c, edges: Sequence | None = None) -> bool:
    """Compare the twist over e (abelian terminus v) with the product of twists
    over the other edges leaving v, by the transported twister."""
    host.require_valid()
    oe = host.oriented(e)
    if oe[0] not in host.tree:
        raise PreconditionError("the factorization identity is checked for tree edges")
    v = host.terminus(oe)
    if host.vertex(v).kind != "abelian":
        raise PreconditionError(f"terminus {v} is not abelian")
    lhs = dehn_twist(host, oe, c)
    G = host.vgroup(host.origin(oe))
    cv = host.vgroup(v).word(host.transfer(oe, G.from_word(as_word(c))))
    if edges is None:
        edges = [f for f in host.incident(v) if f != reverse(oe)]
    rhs = ModularWord(tuple(dehn_twist(host, f, cv) for f in edges))
    return all(host.equal(lhs(g), rhs(g)) for g in host.generator_words())


# ----------------------------------------------------------------------
# text format

def _assoc(text: str) -> dict:
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        if ":" not in item:
            raise InputError(f"expected name:word in {item!r}")
        k, w = item.split(":", 1)
        out[k.strip()] = parse_word(w)
    return out


def parse_automorphisms(host: GraphOfGroups, text: str) -> ModularWord:
    """``twist <edge> by <word>`` | ``vext <v> sigma=.. inv=.. twisters=..`` | ``inner <word>``, ';'-separated."""
    factors = []
    for part in filter(None, (p.strip() for p in text.replace("\n", ";").split(";"))):
        try:
            toks = shlex.split(part)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        head = toks[0]
        if head == "twist":
            if len(toks) < 4 or toks[2] != "by":
                raise InputError(f"expected 'twist <edge> by <word>' in {part!r}")
            factors.append(dehn_twist(host, toks[1], parse_word(" ".join(toks[3:]))))
        elif head == "inner":
            factors.append(inner(host, parse_word(" ".join(toks[1:]))))
        elif head == "vext":
            if len(toks) < 2:
                raise InputError("expected 'vext <vertex> ...'")
            opts = {}
            for t in toks[2:]:
                if "=" not in t:
                    raise InputError(f"expected key=value in {t!r}")
                k, val = t.split("=", 1)
                if k not in ("sigma", "inv", "twisters"):
                    raise InputError(f"unknown vext option {k!r}")
                opts[k] = _assoc(val)
            if "inv" not in opts:
                raise InputError("vext needs an explicit inverse table inv=")
            factors.append(vertex_extension(host, toks[1], opts.get("sigma", {}), opts["inv"], opts.get("twisters", {})))
        else:
            raise InputError(f"unknown automorphism {head!r}")
    return ModularWord(tuple(factors))
