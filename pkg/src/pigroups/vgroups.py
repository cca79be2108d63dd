"""Vertex groups: free, free abelian, and opaque (carried but not computable).

Each group exposes the same small interface so that graphs of groups can
treat them uniformly: elements, multiplication, subgroups with membership,
expressions in a subgroup basis and canonical left-coset representatives.
"""
from __future__ import annotations

from typing import Sequence

from .errors import InputError, Unsupported
from .words import IDENTITY, Alphabet, SubgroupBasis, Word, name_of, symbol


def echelon(rows: Sequence[Sequence[int]], dim: int):
    """Integer row echelon form E = U·rows with positive pivots.

    Returns (E, U, pivots) where only the first len(pivots) rows of E are nonzero.
    """
    A = [list(r) for r in rows]
    k = len(A)
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    pivots: list[int] = []
    r = 0
    for c in range(dim):
        if r == k:
            break
        while True:
            nz = [i for i in range(r, k) if A[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, k):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    clean = clean and not A[i][c]
            if clean:
                break
        if r < k and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
                U[r] = [-a for a in U[r]]
            pivots.append(c)
            r += 1
    return A, U, pivots


class Lattice:
    """Subgroup of Z^n given by generating vectors."""

    def __init__(self, gens: Sequence[Sequence[int]], dim: int):
        self.gens = [tuple(g) for g in gens]
        self.dim = dim
        for g in self.gens:
            if len(g) != dim:
                raise InputError("lattice generator has wrong dimension")
        E, U, piv = echelon(self.gens, dim)
        self._E = E[: len(piv)]
        self._U = U[: len(piv)]
        self._piv = piv

    @property
    def rank(self) -> int:
        return len(self._piv)

    def is_basis(self) -> bool:
        return self.rank == len(self.gens)

    def reduce(self, x: Sequence[int]):
        """Return (residue, y) with x = residue + sum y_j E_j and residue canonical."""
        x = list(x)
        y = []
        for row, c in zip(self._E, self._piv):
            q = x[c] // row[c]
            y.append(q)
            if q:
                x = [a - q * b for a, b in zip(x, row)]
        return tuple(x), y

    def contains(self, x) -> bool:
        return not any(self.reduce(x)[0])

    def express(self, x):
        """Coefficients c with x = sum c_i gens_i, or None."""
        res, y = self.reduce(x)
        if any(res):
            return None
        k = len(self.gens)
        return tuple(sum(y[j] * self._U[j][i] for j in range(len(y))) for i in range(k))


class VertexGroup:
    kind = "abstract"
    computable = True

    def __init__(self, gens: Sequence[str]):
        self.gens = tuple(gens)
        self.alphabet = Alphabet(self.gens)

    def from_word(self, w: Word):
        self.alphabet.check(w)
        return self._from_word(w)


class FreeVertexGroup(VertexGroup):
    kind = "free"

    def _from_word(self, w):
        return w

    identity = IDENTITY

    def letter(self, x: int):
        return Word._make((x,))

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def power(self, a, k):
        return a ** k

    def is_identity(self, a):
        return not a

    def word(self, a) -> Word:
        return a

    def subgroup(self, words: Sequence[Word]) -> "FreeSubgroup":
        return FreeSubgroup(self, [self.from_word(w) for w in words])

    def commute(self, a, b) -> bool:
        return a * b == b * a


class FreeSubgroup:
    def __init__(self, group: FreeVertexGroup, gens):
        self.group = group
        self.gens = list(gens)
        self._sb = SubgroupBasis(self.gens, group.alphabet) if all(self.gens) else None

    def is_basis(self) -> bool:
        if not self.gens:
            return True
        return self._sb is not None and self._sb.is_basis()

    def contains(self, a) -> bool:
        if not a:
            return True
        return self._sb is not None and self._sb.contains(a)

    def express(self, a):
        if not a:
            return IDENTITY
        return None if self._sb is None else self._sb.express(a)

    def evaluate(self, expr, group, images):
        if not self.gens:
            return group.identity
        return self._sb.evaluate(expr, images, group.mul, group.inv, group.identity)

    def coset(self, a):
        """Split a = r·h with r the canonical left-coset representative."""
        if self._sb is None:
            return a, IDENTITY
        r = self._sb.left_coset_rep(a)
        return r, r.inverse() * a


class AbelianVertexGroup(VertexGroup):
    kind = "abelian"

    def __init__(self, gens):
        super().__init__(gens)
        self.identity = (0,) * len(self.gens)
        self._index = {symbol(g): i for i, g in enumerate(self.gens)}

    def _from_word(self, w):
        v = [0] * len(self.gens)
        for x in w.letters:
            v[self._index[abs(x)]] += 1 if x > 0 else -1
        return tuple(v)

    def letter(self, x: int):
        v = [0] * len(self.gens)
        v[self._index[abs(x)]] = 1 if x > 0 else -1
        return tuple(v)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def power(self, a, k):
        return tuple(k * x for x in a)

    def is_identity(self, a):
        return not any(a)

    def word(self, a) -> Word:
        out: list[int] = []
        for g, k in zip(self.gens, a):
            x = symbol(g)
            out.extend([x] * k if k > 0 else [-x] * (-k))
        return Word._make(tuple(out))

    def subgroup(self, words):
        return AbelianSubgroup(self, [self.from_word(w) for w in words])

    def commute(self, a, b) -> bool:
        return True


class AbelianSubgroup:
    def __init__(self, group: AbelianVertexGroup, gens):
        self.group = group
        self.gens = list(gens)
        self._lat = Lattice(self.gens, len(group.gens))

    def is_basis(self) -> bool:
        return self._lat.is_basis()

    def contains(self, a) -> bool:
        return self._lat.contains(a)

    def express(self, a):
        return self._lat.express(a)

    def evaluate(self, expr, group, images):
        out = group.identity
        for img, k in zip(images, expr):
            if k:
                out = group.mul(out, group.power(img, k))
        return out

    def coset(self, a):
        r, _ = self._lat.reduce(a)
        return r, tuple(x - y for x, y in zip(a, r))


class OpaqueVertexGroup(FreeVertexGroup):
    """Surface or presented vertex: elements are carried as words but not solved."""

    computable = False

    def __init__(self, gens, kind="surface", rels=()):
        super().__init__(gens)
        self.kind = kind
        self.rels = tuple(rels)

    def is_identity(self, a):
        if not a:
            return True
        raise Unsupported(f"word problem in a {self.kind} vertex group is not supported")

    def subgroup(self, words):
        return OpaqueSubgroup(self, [self.from_word(w) for w in words])

    def commute(self, a, b):
        if a * b == b * a:
            return True
        raise Unsupported(f"word problem in a {self.kind} vertex group is not supported")


class OpaqueSubgroup(FreeSubgroup):
    def __init__(self, group, gens):
        self.group = group
        self.gens = list(gens)
        self._sb = None

    def is_basis(self) -> bool:
        return True

    def contains(self, a) -> bool:
        if not a:
            return True
        raise Unsupported(f"membership in a {self.group.kind} vertex group is not supported")

    def express(self, a):
        if not a:
            return IDENTITY
        raise Unsupported(f"membership in a {self.group.kind} vertex group is not supported")

    def coset(self, a):
        if not a:
            return a, IDENTITY
        raise Unsupported(f"coset representatives in a {self.group.kind} vertex group are not supported")


def make_vertex_group(kind: str, gens, rels=()):
    if kind == "free":
        return FreeVertexGroup(gens)
    if kind == "abelian":
        return AbelianVertexGroup(gens)
    if kind in ("surface", "presented"):
        return OpaqueVertexGroup(gens, kind, rels)
    raise InputError(f"unknown vertex kind {kind!r}")


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    return a.inverse() * b.inverse() * a * b
