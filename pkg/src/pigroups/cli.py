"""Command-line front end.

Exit status: 0 affirmative, 1 negative (or a failed precondition), 2 malformed input.
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import autos, closures, config, gog as gogmod, picore, seqgen, treeord, words
from .errors import InputError, PreconditionError
from .picore import FiniteGroup, MarkedGroup
from .words import INFINITE, SubgroupBasis, Word, parse_word, parse_word_list

OK, NO, BAD = 0, 1, 2


class Report:
    def __init__(self, fmt: str):
        self.verbose = fmt == "verbose"
        self.lines: list[str] = []

    def out(self, text, label: str | None = None):
        text = str(text)
        self.lines.append(f"{label}: {text}" if label and self.verbose else text)

    def note(self, text):
        if self.verbose:
            self.lines.append(str(text))


# ----------------------------------------------------------------------
# input helpers

def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _text(arg: str) -> str:
    """Inline text, or the contents of a file when written @path."""
    return _read(arg[1:]) if arg.startswith("@") else arg


def _word(arg: str) -> Word:
    return parse_word(_text(arg))


def _group(args) -> FiniteGroup:
    if getattr(args, "group", None):
        return FiniteGroup.parse(_read(args.group))
    if getattr(args, "cyclic", None):
        return FiniteGroup.cyclic(args.cyclic)
    return FiniteGroup.trivial()


def _assoc(text: str | None) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in (text or "").split(","))):
        k, sep, v = item.partition(":")
        if not sep or not k.strip():
            raise InputError(f"expected name:value in {item!r}")
        out[k.strip()] = v.strip()
    return out


def _ints(text: str | None) -> list[int]:
    try:
        return [int(t) for t in (text or "").replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected integers in {text!r}") from None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected a rational number, got {text!r}") from None


def _names(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split() if t]


def _gog(args, path=None) -> gogmod.GraphOfGroups:
    return gogmod.parse_gog(_read(path or args.gog), _group(args) if (args.group or args.cyclic) else None)


def _pi_images(Q: FiniteGroup, text: str | None) -> dict:
    return {k: Q.index(v) for k, v in _assoc(text).items()}


# ----------------------------------------------------------------------
# words

def cmd_reduce(a, r: Report):
    w = _word(a.word)
    r.out(w, "reduced")
    return OK if w else NO


def cmd_cyc(a, r):
    d = words.cyclically_reduce(_word(a.word))
    r.out(d.prefix, "prefix")
    r.out(d.core, "core")
    return OK if d.core else NO


def cmd_piece(a, r):
    n = words.max_common_piece(_word(a.x), _word(a.y))
    r.out(n, "longest piece")
    return OK if n else NO


def cmd_sc_check(a, r):
    ws = parse_word_list(_text(a.words))
    ok = words.check_small_cancellation(ws, a.m)
    if r.verbose:
        for i, x in enumerate(ws):
            for y in ws[i:]:
                r.note(f"piece({x}, {y}) = {words.max_common_piece(x, y)}")
    r.out(f"C'({a.m}) {'holds' if ok else 'fails'}")
    return OK if ok else NO


def cmd_axis(a, r):
    n = words.axis_overlap(_word(a.u), _word(a.v), _word(a.g))
    r.out("infinite" if n == INFINITE else n, "overlap")
    return NO if n == INFINITE else OK


def cmd_conj(a, r):
    u, v = _word(a.u), _word(a.v)
    g = words.conjugacy(u, v)
    if g is None:
        r.out("not conjugate")
        return NO
    r.out(g, "conjugator")
    return OK


def cmd_member(a, r):
    B = SubgroupBasis(parse_word_list(_text(a.gens)))
    r.note(f"rank {B.rank}; basis {'yes' if B.is_basis() else 'no'}")
    e = words.subgroup_membership(B, _word(a.word))
    if e is None:
        r.out("not a member")
        return NO
    r.out(e, "expression")
    return OK


# ----------------------------------------------------------------------
# pi

def cmd_pi_eval(a, r):
    Q = _group(a)
    pi = picore.PiMap(Q, _pi_images(Q, a.pi))
    q = picore.evaluate_pi(pi, _word(a.word))
    r.out(Q.names[q], "pi")
    if a.expect is not None:
        return OK if q == Q.index(a.expect) else NO
    return OK


def cmd_pi_check(a, r):
    Q = _group(a)
    S = [Q.index(t) for t in _names(a.elements)]
    ok = picore.cyclic_image_check(Q, S)
    r.out("cyclic" if ok else "not cyclic")
    return OK if ok else NO


# ----------------------------------------------------------------------
# graphs of groups

def cmd_gog_validate(a, r):
    v = _gog(a).validate()
    r.out("valid" if v.ok else f"invalid: {v.diagnostic}")
    return OK if v.ok else NO


def cmd_present(a, r):
    g = _gog(a)
    g.require_valid()
    p = g.fundamental_presentation()
    r.out(p)
    return OK


def cmd_nf(a, r):
    g = _gog(a)
    lf = g.normal_form(_word(a.word), base=a.base)
    r.out(lf, "normal form")
    r.note(f"path length {lf.path_length}; stable letters {lf.m}")
    return NO if lf.is_identity() else OK


def cmd_equal(a, r):
    ok = _gog(a).equal(_word(a.u), _word(a.v))
    r.out("equal" if ok else "not equal")
    return OK if ok else NO


def _emit_gog(g, r):
    r.lines.append(g.to_text().rstrip("\n"))
    return OK


def cmd_collapse(a, r):
    return _emit_gog(gogmod.collapse(_gog(a), _names(a.edges)), r)


def cmd_blowup(a, r):
    g = _gog(a)
    S = _gog(a, a.sub)
    return _emit_gog(gogmod.blow_up(g, a.vertex, S, _assoc(a.attach)), r)


def cmd_fold(a, r):
    g = _gog(a)
    folds = []
    for spec in a.fold:
        ref, sep, ws = spec.partition(":")
        if not sep:
            raise InputError(f"expected edge:words in {spec!r}")
        folds.append((ref.strip(), parse_word_list(ws)))
    return _emit_gog(gogmod.fold(g, a.vertex, folds), r)


def cmd_slide(a, r):
    return _emit_gog(gogmod.slide(_gog(a), a.e, a.f), r)


def _emit_images(aut, g, r):
    for x in g.generators():
        r.out(f"{x} -> {aut(Word.gen(x))}")
    return OK


def cmd_twist(a, r):
    g = _gog(a)
    return _emit_images(autos.dehn_twist(g, a.edge, _word(a.by)), g, r)


def cmd_vext(a, r):
    g = _gog(a)
    conv = lambda s: {k: parse_word(v) for k, v in _assoc(s).items()}
    aut = autos.vertex_extension(g, a.vertex, conv(a.sigma), conv(a.inv), conv(a.twisters))
    return _emit_images(aut, g, r)


def cmd_apply(a, r):
    g = _gog(a)
    aut = autos.parse_automorphisms(g, _text(a.auts))
    img = aut(_word(a.word))
    r.out(img, "image")
    r.note(f"normal form {g.normal_form(img)}")
    return OK


def cmd_pi_modular(a, r):
    g = _gog(a)
    ok = autos.is_pi_modular(autos.parse_automorphisms(g, _text(a.auts)))
    r.out("pi-modular" if ok else "not pi-modular")
    return OK if ok else NO


# ----------------------------------------------------------------------
# sequences

def _marked(kind, gens, Q, pi):
    images = {g: pi.get(g, 0) for g in gens}
    return MarkedGroup.free(gens, Q, images) if kind == "free" else MarkedGroup.abelian(gens, Q, images)


def cmd_gen_sc(a, r):
    Q = _group(a)
    pi = _pi_images(Q, a.pi)
    F1 = _marked("free", _names(a.source), Q, pi)
    F2 = _marked("free", _names(a.target), Q, pi)
    f = seqgen.small_cancellation_family(F1, F2, a.m)
    for g in F1.gens:
        r.out(f"{g} -> {f.images[g]}")
    r.note(f"lengths {[len(f.images[g]) for g in F1.gens]}")
    return OK


def _abelian_source(a):
    Q = _group(a)
    gens = _names(a.gens)
    return _marked("abelian", gens, Q, _pi_images(Q, a.pi))


def cmd_gen_abelian(a, r):
    M = _abelian_source(a)
    f = seqgen.abelian_sequence(M, a.K, _ints(a.r), a.n)
    x = M.gens[0]
    for g in M.gens:
        e = f.images[g][0]
        r.out(f"{g} -> " + (x if e == 1 else "1" if e == 0 else f"{x}^{e}"))
    return OK


def cmd_discriminate(a, r):
    if a.radius is None:
        if a.B is None or a.n is None:
            raise InputError("box mode needs --B and --n (or give --radius)")
        ok = seqgen.discriminate_box(a.K, _ints(a.r), a.B, a.n)
        r.out("no box vector is killed" if ok else "some box vector is killed")
        return OK if ok else NO
    fam = seqgen.abelian_family(_abelian_source(a), a.K, _ints(a.r))
    res = seqgen.discriminate_ball(fam, a.radius, a.cap)
    r.out(res)
    return OK if res.found else NO


def cmd_growth(a, r):
    M = _abelian_source(a)
    rs = _ints(a.r)
    f1 = seqgen.abelian_sequence(M, a.K, rs, a.n1)
    f2 = seqgen.abelian_sequence(M, a.K, rs, a.n2)
    q = seqgen.growth_ratio(f1, parse_word(a.g1), f2, parse_word(a.g2 or a.g1))
    r.out(q, "ratio")
    return OK


def cmd_schedule(a, r):
    g = _gog(a)
    weights = {k: _frac(v) for k, v in _assoc(a.weights).items()}
    tw = {k: parse_word(v) for k, v in _assoc(a.twisters).items()}
    f = {k: parse_word(v) for k, v in _assoc(a.map).items()}
    exps = seqgen.twist_exponents(g, weights, tw, f, a.n)
    for e, (k, tl) in exps.items():
        r.out(f"{e}: exp {k}" + (f" (tl {tl})" if r.verbose else ""))
    mw = seqgen.twist_schedule(g, weights, tw, f, a.n)
    r.note("factors: " + ("; ".join(x.describe() for x in mw.factors) or "none"))
    return OK


# ----------------------------------------------------------------------
# closures

def cmd_ext_check(a, r):
    Q = _group(a)
    k = _ints(a.k)
    pm = [Q.index(t) for t in _names(a.pi_mbar)] if a.pi_mbar else [0] * len(k)
    peg = Q.index(a.pi_peg) if a.pi_peg else 0
    pair = closures.PeggedAbelianPair(tuple(k), Q, peg, tuple(Q.power(p, kj) for p, kj in zip(pm, k)), tuple(pm))
    roots = closures.extension_exists(pair, _ints(a.e))
    if roots is None:
        r.out("no extension")
        return NO
    r.out(" ".join(map(str, roots)) or "nothing to extend", "root exponents")
    return OK


def cmd_cong(a, r):
    c1 = closures.parse_condition(_read(a.cond))
    if a.op == "complement":
        res = c1.complement()
    elif a.op == "member":
        if a.point is None:
            raise InputError("member needs --point")
        q = tuple(_names(a.q)) if a.q else ()
        ok = c1.contains(_ints(a.point), q)
        r.out("member" if ok else "not a member")
        return OK if ok else NO
    else:
        if not a.other:
            raise InputError(f"{a.op} needs a second condition file")
        c2 = closures.parse_condition(_read(a.other))
        res = c1.intersect(c2) if a.op == "intersect" else c1.union(c2)
    r.lines.append(res.to_text())
    return NO if res.is_empty() else OK


def _witness(text: str):
    return [[parse_word(w) for w in blk.split(",")] if blk.strip() else [] for blk in _text(text).split(";")]


def cmd_verify_formal(a, r):
    prob = closures.parse_problem(_read(a.problem), _group(a))
    res = closures.verify_scp_witness(prob, _witness(a.witness))
    r.out("valid" if res else f"invalid: {res.reason}")
    return OK if res else NO


def cmd_search_formal(a, r):
    prob = closures.parse_problem(_read(a.problem), _group(a))
    res = closures.search_formal_solution(prob, a.length)
    if not res.found:
        r.out(f"no witness up to length {a.length}")
        return NO
    r.lines.append(closures.format_witness(prob, res.witness))
    return OK


# ----------------------------------------------------------------------
# trees

def cmd_tr_compare(a, r):
    order = treeord.parse_order(_read(a.order)) if a.order else treeord.chain(a.chain)
    t1 = treeord.parse_tree(_text(a.t1), order)
    t2 = treeord.parse_tree(_text(a.t2), order)
    w = treeord.tr_less(t1, t2, order, witness=True)
    if w is None:
        r.out("not below")
        return NO
    r.out("below")
    S, f = w
    r.note("map: " + ", ".join(f"{t1.names[u]}->{t2.names[f[u]]}" for u in sorted(S)))
    return OK


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pigroups", description="Free groups, graphs of groups and test sequences.")
    p.add_argument("--format", choices=("compact", "verbose"), default="compact")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="cmd", metavar="<command>")
    sub.required = True

    def cmd(name, fn, help, group=False, gog=False):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        if group or gog:
            sp.add_argument("--group", help="finite group table file")
            sp.add_argument("--cyclic", type=int, help="use Z/n as the finite group")
        if gog:
            sp.add_argument("gog", help="graph of groups file")
        return sp

    s = cmd("reduce", cmd_reduce, "freely reduce a word")
    s.add_argument("word")
    s = cmd("cyc", cmd_cyc, "cyclic decomposition")
    s.add_argument("word")
    s = cmd("piece", cmd_piece, "longest common piece")
    s.add_argument("x")
    s.add_argument("y")
    s = cmd("sc-check", cmd_sc_check, "check C'(m) for a comma-separated tuple")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("words")
    s = cmd("axis", cmd_axis, "overlap of the axes of u and g v g^-1")
    s.add_argument("u")
    s.add_argument("v")
    s.add_argument("--g", default="1")
    s = cmd("conj", cmd_conj, "conjugacy with certificate")
    s.add_argument("u")
    s.add_argument("v")
    s = cmd("member", cmd_member, "subgroup membership")
    s.add_argument("--gens", required=True)
    s.add_argument("word")

    s = cmd("pi-eval", cmd_pi_eval, "evaluate pi on a word", group=True)
    s.add_argument("--pi", required=True)
    s.add_argument("--expect")
    s.add_argument("word")
    s = cmd("pi-check", cmd_pi_check, "is the generated subgroup cyclic", group=True)
    s.add_argument("elements")

    cmd("gog-validate", cmd_gog_validate, "validate a graph of groups", gog=True)
    cmd("present", cmd_present, "fundamental group presentation", gog=True)
    s = cmd("nf", cmd_nf, "loop normal form", gog=True)
    s.add_argument("word")
    s.add_argument("--base")
    s = cmd("equal", cmd_equal, "word problem", gog=True)
    s.add_argument("u")
    s.add_argument("v")
    s = cmd("collapse", cmd_collapse, "collapse edges", gog=True)
    s.add_argument("--edges", required=True)
    s = cmd("blowup", cmd_blowup, "blow up a vertex", gog=True)
    s.add_argument("--vertex", required=True)
    s.add_argument("--sub", required=True)
    s.add_argument("--attach", default="")
    s = cmd("fold", cmd_fold, "fold edge groups into a vertex", gog=True)
    s.add_argument("--vertex", required=True)
    s.add_argument("--fold", action="append", required=True, help="edge:word,word")
    s = cmd("slide", cmd_slide, "slide e along f", gog=True)
    s.add_argument("e")
    s.add_argument("f")
    s = cmd("twist", cmd_twist, "Dehn twist images", gog=True)
    s.add_argument("--edge", required=True)
    s.add_argument("--by", required=True)
    s = cmd("vext", cmd_vext, "natural extension images", gog=True)
    s.add_argument("--vertex", required=True)
    s.add_argument("--sigma", default="")
    s.add_argument("--inv", required=True)
    s.add_argument("--twisters", default="")
    s = cmd("apply", cmd_apply, "apply automorphisms to a word", gog=True)
    s.add_argument("--auts", required=True)
    s.add_argument("word")
    s = cmd("pi-modular", cmd_pi_modular, "pi-modularity check", gog=True)
    s.add_argument("--auts", required=True)

    s = cmd("gen-sc", cmd_gen_sc, "small cancellation morphism", group=True)
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--pi", default="")
    s.add_argument("--m", type=int, required=True)

    def abel(s):
        s.add_argument("--gens", required=True)
        s.add_argument("--pi", default="")
        s.add_argument("--K", type=int, required=True)
        s.add_argument("--r", default="")

    s = cmd("gen-abelian", cmd_gen_abelian, "factorial abelian sequence member", group=True)
    abel(s)
    s.add_argument("--n", type=int, required=True)
    s = cmd("discriminate", cmd_discriminate, "box or ball discrimination", group=True)
    s.add_argument("--gens", default="x")
    s.add_argument("--pi", default="")
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--r", default="")
    s.add_argument("--B", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--radius", type=int)
    s.add_argument("--cap", type=int)
    s = cmd("growth", cmd_growth, "growth ratio between two sequence members", group=True)
    abel(s)
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--n2", type=int, required=True)
    s.add_argument("--g1", required=True)
    s.add_argument("--g2")
    s = cmd("schedule", cmd_schedule, "Dehn twist exponent schedule", gog=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--twisters", required=True)
    s.add_argument("--map", default="")
    s.add_argument("--n", type=int, required=True)

    s = cmd("ext-check", cmd_ext_check, "root extension to the closure", group=True)
    s.add_argument("--k", required=True)
    s.add_argument("--e", required=True)
    s.add_argument("--pi-peg")
    s.add_argument("--pi-mbar")
    s = cmd("cong", cmd_cong, "congruence condition algebra")
    s.add_argument("op", choices=("intersect", "union", "complement", "member"))
    s.add_argument("cond")
    s.add_argument("other", nargs="?")
    s.add_argument("--point")
    s.add_argument("--q")
    s = cmd("verify-formal", cmd_verify_formal, "verify a formal solution", group=True)
    s.add_argument("problem")
    s.add_argument("--witness", required=True, help="blocks separated by ';', words by ','")
    s = cmd("search-formal", cmd_search_formal, "bounded formal solution search", group=True)
    s.add_argument("problem")
    s.add_argument("--length", type=int, default=3)

    s = cmd("tr-compare", cmd_tr_compare, "is t2 below t1 in the tree preorder")
    s.add_argument("t1")
    s.add_argument("t2")
    s.add_argument("--chain", type=int, default=10)
    s.add_argument("--order", help="base order file")
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    report = Report(args.format)
    try:
        config.load()
        code = args.fn(args, report)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=stderr)
        return NO
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return BAD
    except RecursionError:
        print("error: input too deeply nested", file=stderr)
        return BAD
    if report.lines:
        print("\n".join(report.lines), file=stdout)
    return code


def entry():  # pragma: no cover
    sys.exit(main())
