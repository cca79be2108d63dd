"""Pegged abelian extensions, K-congruence conditions and formal solutions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from . import config
from .errors import InputError
from .picore import FiniteGroup, PiMap, evaluate_pi
from .words import IDENTITY, Alphabet, NAME_RE, Word, as_word, name_of, parse_word


# ----------------------------------------------------------------------
# pegged abelian pairs

@dataclass(frozen=True)
class PeggedAbelianPair:
    """M = <pg, m_1..m_r> inside Mbar = <pg, mbar_1..mbar_r> with m_j = mbar_j^k_j.

    ``pi_peg``, ``pi_m`` and ``pi_mbar`` are the images in Q.
    """

    k: tuple
    Q: FiniteGroup
    pi_peg: int = 0
    pi_m: tuple = ()
    pi_mbar: tuple = ()

    def __post_init__(self):
        r = len(self.k)
        pm = tuple(self.pi_m) or (0,) * r
        pb = tuple(self.pi_mbar) or (0,) * r
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        object.__setattr__(self, "pi_m", pm)
        object.__setattr__(self, "pi_mbar", pb)
        if len(pm) != r or len(pb) != r:
            raise InputError("pi data must match the number of basis elements")
        for j, kj in enumerate(self.k):
            if kj < 1:
                raise InputError("divisibilities must be positive")
            if pm[j] != self.Q.power(pb[j], kj):
                raise InputError(f"pi(m_{j + 1}) is not pi(mbar_{j + 1})^{kj}")

    @property
    def rank(self) -> int:
        return len(self.k)


def extension_exists(pair: PeggedAbelianPair, e: Sequence[int]) -> tuple | None:
    """Exponents of the extension to Mbar for f(m_j) = f(pg)^e_j, or None."""
    if len(e) != pair.rank:
        raise InputError(f"expected {pair.rank} exponents, got {len(e)}")
    Q = pair.Q
    out = []
    for ej, kj, pb in zip(e, pair.k, pair.pi_mbar):
        if ej % kj:
            return None
        root = ej // kj
        if Q.power(pair.pi_peg, root) != pb:
            return None
        out.append(root)
    return tuple(out)


# ----------------------------------------------------------------------
# congruence conditions

def _crt(r1: int, m1: int, r2: int, m2: int) -> int | None:
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    l = m1 // g * m2
    t = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * t) % l


@dataclass(frozen=True)
class CongruenceCondition:
    """A finite union of atoms (q, residues): q a free-hanging Q-tuple, residues mod K.

    ``qs`` is the universe of admissible q-tuples and ``arity`` the number of
    basis elements constrained; a data point (q, e) satisfies the condition
    when some atom has the same q and e_j = residue_j mod K for all j.
    """

    modulus: int
    arity: int
    qs: tuple = ((),)
    atoms: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.modulus < 1:
            raise InputError("modulus must be positive")
        qs = tuple(tuple(q) for q in self.qs)
        object.__setattr__(self, "qs", qs)
        atoms = set()
        for q, res in self.atoms:
            q, res = tuple(q), tuple(int(x) % self.modulus for x in res)
            if q not in qs:
                raise InputError(f"q-tuple {q} is not in the universe")
            if len(res) != self.arity:
                raise InputError(f"atom needs {self.arity} residues")
            atoms.add((q, res))
        object.__setattr__(self, "atoms", frozenset(atoms))

    @classmethod
    def full(cls, K: int, arity: int, qs=((),)) -> "CongruenceCondition":
        return cls(K, arity, qs, frozenset((q, r) for q in qs for r in product(range(K), repeat=arity)))

    @classmethod
    def empty(cls, K: int, arity: int, qs=((),)) -> "CongruenceCondition":
        return cls(K, arity, qs)

    def is_empty(self) -> bool:
        return not self.atoms

    def contains(self, e: Sequence[int], q=()) -> bool:
        return (tuple(q), tuple(x % self.modulus for x in e)) in self.atoms

    def _compatible(self, other: "CongruenceCondition"):
        if self.arity != other.arity or set(self.qs) != set(other.qs):
            raise InputError("conditions constrain different index sets")

    def intersect(self, other: "CongruenceCondition") -> "CongruenceCondition":
        self._compatible(other)
        K = math.lcm(self.modulus, other.modulus)
        by_q: dict = {}
        for q, r in other.atoms:
            by_q.setdefault(q, []).append(r)
        atoms = set()
        for q, r1 in self.atoms:
            for r2 in by_q.get(q, ()):
                res = [_crt(a, self.modulus, b, other.modulus) for a, b in zip(r1, r2)]
                if None not in res:
                    atoms.add((q, tuple(res)))
        return CongruenceCondition(K, self.arity, self.qs, frozenset(atoms))

    def union(self, other: "CongruenceCondition") -> "CongruenceCondition":
        self._compatible(other)
        K = math.lcm(self.modulus, other.modulus)
        a, b = self.lift(K), other.lift(K)
        return CongruenceCondition(K, self.arity, self.qs, a.atoms | b.atoms)

    def complement(self) -> "CongruenceCondition":
        return CongruenceCondition(
            self.modulus, self.arity, self.qs, CongruenceCondition.full(self.modulus, self.arity, self.qs).atoms - self.atoms
        )

    def lift(self, K: int) -> "CongruenceCondition":
        """The same set written modulo a multiple K of the modulus."""
        if K % self.modulus:
            raise InputError(f"{K} is not a multiple of {self.modulus}")
        steps = range(K // self.modulus)
        atoms = set()
        for q, r in self.atoms:
            for shift in product(steps, repeat=self.arity):
                atoms.add((q, tuple(x + s * self.modulus for x, s in zip(r, shift))))
        return CongruenceCondition(K, self.arity, self.qs, frozenset(atoms))

    def project(self, K: int) -> "CongruenceCondition":
        """Residues reduced to a divisor K of the modulus (a superset in general)."""
        if self.modulus % K:
            raise InputError(f"{K} does not divide {self.modulus}")
        return CongruenceCondition(K, self.arity, self.qs, frozenset((q, r) for q, r in self.atoms))

    def check_pi_order(self, order: int):
        if self.modulus % order:
            raise InputError(f"|pi(M)| = {order} does not divide K = {self.modulus}")

    def to_text(self) -> str:
        head = f"K = {self.modulus}"
        if not self.atoms:
            return head + "\nempty"
        lines = [head]
        for q, r in sorted(self.atoms):
            qs = " q=" + ",".join(map(str, q)) if q else ""
            lines.append(f"atom {' '.join(map(str, r))}{qs}")
        return "\n".join(lines)


def satisfies_atom(pair: PeggedAbelianPair, e: Sequence[int], atom, K: int, q=()) -> bool:
    """e_j = xi(m_j) mod K for every j, and the free-hanging choice q matches."""
    aq, res = atom
    if len(res) != pair.rank or len(e) != pair.rank:
        raise InputError("atom and exponent tuple must match the pair rank")
    return tuple(aq) == tuple(q) and all((x - r) % K == 0 for x, r in zip(e, res))


def parse_condition(text: str) -> CongruenceCondition:
    """``K = <n>``, optional ``arity = <n>``, then ``atom r_1 .. r_k [q=..]`` lines."""
    K = arity = None
    atoms, qs = [], []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("K") and "=" in line:
                K = int(line.split("=", 1)[1])
            elif line.startswith("arity") and "=" in line:
                arity = int(line.split("=", 1)[1])
            elif line.startswith("qs") and "=" in line:
                qs = [tuple(t.split(",")) if t != "-" else () for t in line.split("=", 1)[1].split()]
            elif line.split()[0] == "atom":
                toks = line.split()[1:]
                q = ()
                if toks and toks[-1].startswith("q="):
                    q = tuple(toks.pop()[2:].split(","))
                atoms.append((q, tuple(int(t) for t in toks)))
            elif line == "empty":
                continue
            else:
                raise InputError(f"unrecognized line {line!r}")
        except ValueError:
            raise InputError(f"line {n}: expected integers") from None
        except InputError as exc:
            raise InputError(f"line {n}: {exc}") from None
    if K is None:
        raise InputError("missing 'K = <modulus>' line")
    if arity is None:
        if not atoms:
            raise InputError("an empty condition needs an 'arity = <n>' line")
        arity = len(atoms[0][1])
    universe = set(qs) | {q for q, _ in atoms} or {()}
    return CongruenceCondition(K, arity, tuple(sorted(universe)), frozenset(atoms))


# ----------------------------------------------------------------------
# formal solutions

def _letters(w: Word) -> set:
    return {name_of(x) for x in w.letters}


def verify_merzlyakov_witness(sigma: Iterable, ys: Sequence[str], w: Sequence) -> bool:
    """Every equation becomes trivial in the free group on x and a after y := w."""
    ys = list(ys)
    w = [as_word(t) for t in w]
    if len(w) != len(ys):
        raise InputError(f"{len(ys)} witness words needed, got {len(w)}")
    for wi in w:
        if _letters(wi) & set(ys):
            raise InputError("witness words may not mention the y variables")
    sub = dict(zip(ys, w))
    return all(not as_word(u).substitute(sub) for u in sigma)


@dataclass(frozen=True)
class Block:
    xs: tuple
    p: tuple
    ys: tuple
    q: tuple


@dataclass(frozen=True)
class FormalSolutionProblem:
    constants: tuple
    blocks: tuple
    equations: tuple
    Q: FiniteGroup = field(default_factory=FiniteGroup.trivial)
    pi_constants: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = set(self.constants)
        if len(seen) != len(self.constants):
            raise InputError("duplicate constant")
        for b in self.blocks:
            if len(b.xs) != len(b.p) or len(b.ys) != len(b.q):
                raise InputError("Q-tuple size does not match its block")
            for v in b.xs + b.ys:
                if v in seen:
                    raise InputError(f"variable {v!r} declared twice")
                seen.add(v)
        for u in self.equations:
            stray = _letters(u) - seen
            if stray:
                raise InputError(f"equation {u} mentions undeclared {sorted(stray)[0]!r}")
        for a in self.constants:
            self.pi_constants.setdefault(a, 0)

    @property
    def y_vars(self) -> list:
        return [y for b in self.blocks for y in b.ys]

    def allowed(self, j: int) -> list:
        """Letters a witness for block j may use."""
        return [x for b in self.blocks[: j + 1] for x in b.xs] + list(self.constants)

    def pi_map(self, j: int) -> PiMap:
        images = dict(self.pi_constants)
        for b in self.blocks[: j + 1]:
            images.update(zip(b.xs, b.p))
        return PiMap(self.Q, images)


def parse_problem(text: str, Q: FiniteGroup | None = None) -> FormalSolutionProblem:
    """Lines: ``constants: a b``, ``pi: a=g, ..``, ``forall <vars> in <elements>``,
    ``exists <vars> in <elements>``, ``eq: <word>``."""
    Q = Q or FiniteGroup.trivial()
    constants: list = []
    pi: dict = {}
    blocks: list = []
    open_x = None
    eqs = []

    def elems(toks, n, where):
        toks = [t for t in " ".join(toks).replace("(", " ").replace(")", " ").replace(",", " ").split()]
        if len(toks) != n:
            raise InputError(f"{where}: {n} Q-elements needed, got {len(toks)}")
        return tuple(Q.index(t) for t in toks)

    def names(toks, where):
        for t in toks:
            if not NAME_RE.fullmatch(t):
                raise InputError(f"{where}: bad variable name {t!r}")
        return tuple(toks)

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {n}"
        try:
            head, _, rest = line.partition(" ")
            if line.startswith("constants:"):
                constants += names(line[len("constants:"):].replace(",", " ").split(), where)
            elif line.startswith("pi:"):
                for item in filter(None, (s.strip() for s in line[3:].split(","))):
                    k, sep, g = item.partition("=")
                    if not sep:
                        raise InputError(f"{where}: expected name=element")
                    pi[k.strip()] = Q.index(g.strip())
            elif line.startswith("eq:"):
                eqs.append(parse_word(line[3:]))
            elif head in ("forall", "exists"):
                toks = rest.split()
                if "in" not in toks:
                    raise InputError(f"{where}: expected '{head} <vars> in <elements>'")
                i = toks.index("in")
                vs = names(toks[:i], where)
                qs = elems(toks[i + 1:], len(vs), where)
                if head == "forall":
                    if open_x is not None:
                        blocks.append(Block(open_x[0], open_x[1], (), ()))
                    open_x = (vs, qs)
                else:
                    xs, ps = open_x or ((), ())
                    blocks.append(Block(xs, ps, vs, qs))
                    open_x = None
            else:
                raise InputError(f"{where}: unrecognized line {line!r}")
        except InputError as exc:
            msg = str(exc)
            raise InputError(msg if msg.startswith("line ") else f"{where}: {msg}") from None
    if open_x is not None:
        blocks.append(Block(open_x[0], open_x[1], (), ()))
    unknown = set(pi) - set(constants)
    if unknown:
        raise InputError(f"pi given for unknown constant {sorted(unknown)[0]!r}")
    return FormalSolutionProblem(tuple(constants), tuple(blocks), tuple(eqs), Q, pi)


@dataclass(frozen=True)
class ScpResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _shape(prob: FormalSolutionProblem, w) -> list:
    w = [[as_word(t) for t in blk] for blk in w]
    if len(w) != len(prob.blocks):
        raise InputError(f"{len(prob.blocks)} witness blocks needed, got {len(w)}")
    for b, wb in zip(prob.blocks, w):
        if len(wb) != len(b.ys):
            raise InputError(f"block needs {len(b.ys)} words, got {len(wb)}")
    return w


def verify_scp_witness(prob: FormalSolutionProblem, w) -> ScpResult:
    w = _shape(prob, w)
    for j, wb in enumerate(w):
        allowed = set(prob.allowed(j))
        for word in wb:
            if not _letters(word) <= allowed:
                return ScpResult(False, "scope")
    for j, (b, wb) in enumerate(zip(prob.blocks, w)):
        pi = prob.pi_map(j)
        if any(evaluate_pi(pi, word) != q for word, q in zip(wb, b.q)):
            return ScpResult(False, "pi-mismatch")
    sub = {y: word for b, wb in zip(prob.blocks, w) for y, word in zip(b.ys, wb)}
    for u in prob.equations:
        if u.substitute(sub):
            return ScpResult(False, "equation-nontrivial")
    return ScpResult(True)


@dataclass(frozen=True)
class SearchResult:
    witness: tuple | None
    bound: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def search_formal_solution(prob: FormalSolutionProblem, L: int) -> SearchResult:
    """First witness in the order: shortlex per variable, variables left to right."""
    cap = config.load().search_length
    if L > cap:
        raise InputError(f"length bound {L} exceeds the configured cap {cap}")
    if L < 0:
        raise InputError("length bound must be non-negative")
    slots = []
    for j, b in enumerate(prob.blocks):
        pi = prob.pi_map(j)
        words = list(Alphabet(prob.allowed(j)).words(L)) if prob.allowed(j) else [IDENTITY]
        for y, q in zip(b.ys, b.q):
            slots.append((j, y, [u for u in words if evaluate_pi(pi, u) == q]))
    for choice in product(*(c for _, _, c in slots)):
        sub = {y: u for (_, y, _), u in zip(slots, choice)}
        if all(not u.substitute(sub) for u in prob.equations):
            it = iter(choice)
            return SearchResult(tuple(tuple(next(it) for _ in b.ys) for b in prob.blocks), L)
    return SearchResult(None, L)


def format_witness(prob: FormalSolutionProblem, w) -> str:
    return "\n".join(f"{y} = {u}" for b, wb in zip(prob.blocks, w) for y, u in zip(b.ys, wb))
