"""Compound matrices, exterior algebra coordinates and the maps Theta / Xi.

Conventions.  A linear map ``V -> W`` (``dim V = m``, ``dim W = n``) is an
``m x n`` matrix ``B`` acting on row vectors, ``v -> v B``.  Its ``t``-th
exterior power is the compound matrix whose ``(I, J)`` entry is the minor
``[I|J]_B``; rows are indexed by ``t``-subsets of the domain basis and columns
by ``t``-subsets of the codomain basis, both in lexicographic order.

Contraction ``x -| alpha`` is the right action of ``V*`` on ``/\\V``:

    (x_1 ^ ... ^ x_u) -| alpha = sum_i (-1)**(i-1) alpha(x_i) x_1 ^ .. x_i^ .. ^ x_u

and iterated contraction follows the right-module rule
``x -| (a ^ b) = (x -| a) -| b``.  With this convention ``Theta`` is, in
adapted bases, exactly the substitution ``E[I,J] -> E'[I-,J-]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Matrix,
    check_combination,
    combination_index,
    combinations,
    format_rational,
    inverse,
    parse_rational,
    rank,
)


def _all_minors(B: Matrix, t: int) -> dict:
    """Every minor of size <= t of B, keyed by (rows, cols); Laplace along the first row."""
    m, n = B.shape
    table = {((), ()): 1}
    prev = {((), ()): 1}
    for s in range(1, t + 1):
        cur = {}
        for I in itertools.combinations(range(1, m + 1), s):
            i1, rest = I[0], I[1:]
            brow = B.rows[i1 - 1]
            for J in itertools.combinations(range(1, n + 1), s):
                total = 0
                for r, j in enumerate(J):
                    a = brow[j - 1]
                    if a:
                        sub = prev[(rest, J[:r] + J[r + 1:])]
                        if sub:
                            total = total + a * sub if r % 2 == 0 else total - a * sub
                cur[(I, J)] = total
        table.update(cur)
        prev = cur
    return table


@dataclass(frozen=True)
class ExteriorPoint:
    """A point of L_t(m, n) = Hom(/\\^t K^m, /\\^t K^n) in lex-ordered coordinates."""

    m: int
    n: int
    t: int
    coords: Matrix

    def __post_init__(self):
        shape = (math.comb(self.m, self.t), math.comb(self.n, self.t))
        if self.coords.shape != shape:
            raise ValueError(f"coords shape {self.coords.shape} does not match C(m,t) x C(n,t) = {shape}")

    @classmethod
    def from_entries(cls, m: int, n: int, t: int, entries) -> "ExteriorPoint":
        """Build from ``{(I, J): value}`` (missing coordinates are zero)."""
        rows = [[0] * math.comb(n, t) for _ in range(math.comb(m, t))]
        for (I, J), val in dict(entries).items():
            I = check_combination(I, m)
            J = check_combination(J, n)
            if len(I) != t or len(J) != t:
                raise ValueError(f"index ({I}, {J}) does not have size {t}")
            rows[combination_index(I, m)][combination_index(J, n)] = val
        return cls(m, n, t, Matrix(rows, math.comb(n, t)))

    @classmethod
    def zero(cls, m: int, n: int, t: int) -> "ExteriorPoint":
        return cls(m, n, t, Matrix.zeros(math.comb(m, t), math.comb(n, t)))

    def entry(self, I: Sequence[int], J: Sequence[int]):
        return self.coords[combination_index(I, self.m), combination_index(J, self.n)]

    def nonzero_entries(self):
        rows = combinations(self.m, self.t)
        cols = combinations(self.n, self.t)
        for i, r in enumerate(self.coords.rows):
            for j, v in enumerate(r):
                if v:
                    yield rows[i], cols[j], v

    def transpose(self) -> "ExteriorPoint":
        return ExteriorPoint(self.n, self.m, self.t, self.coords.T)

    def rank(self) -> int:
        return rank(self.coords)

    def is_zero(self) -> bool:
        return self.coords.is_zero()

    def __add__(self, other: "ExteriorPoint") -> "ExteriorPoint":
        self._check_same(other)
        return ExteriorPoint(self.m, self.n, self.t, self.coords + other.coords)

    def __sub__(self, other: "ExteriorPoint") -> "ExteriorPoint":
        self._check_same(other)
        return ExteriorPoint(self.m, self.n, self.t, self.coords - other.coords)

    def scale(self, c) -> "ExteriorPoint":
        return ExteriorPoint(self.m, self.n, self.t, self.coords.scale(c))

    def act(self, P: Matrix, Q: Matrix) -> "ExteriorPoint":
        """``/\\P . x . /\\Q``; on ``compound(B, t)`` this is ``compound(P B Q, t)``."""
        return ExteriorPoint(
            self.m, self.n, self.t, compound(P, self.t).coords @ self.coords @ compound(Q, self.t).coords
        )

    def _check_same(self, other):
        if (self.m, self.n, self.t) != (other.m, other.n, other.t):
            raise ValueError("points live in different spaces")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "t": self.t,
            "entries": [[list(I), list(J), format_rational(v)] for I, J, v in self.nonzero_entries()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExteriorPoint":
        try:
            m, n, t = int(data["m"]), int(data["n"]), int(data["t"])
            entries = {(tuple(I), tuple(J)): parse_rational(str(v)) for I, J, v in data["entries"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed exterior point: {exc}") from None
        return cls.from_entries(m, n, t, entries)


def compound(B: Matrix, t: int) -> ExteriorPoint:
    """The ``t``-th compound matrix of ``B`` as a point of ``Y_t``."""
    m, n = B.shape
    if not 0 <= t <= min(m, n):
        raise ValueError(f"t={t} out of range for a {m}x{n} matrix")
    table = _all_minors(B, t)
    rows = combinations(m, t)
    cols = combinations(n, t)
    return ExteriorPoint(m, n, t, Matrix([[table[(I, J)] for J in cols] for I in rows], len(cols)))


def _merge_sign(I: Sequence[int], J: Sequence[int]) -> int:
    inv = 0
    for i in I:
        for j in J:
            if i > j:
                inv += 1
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class Multivector:
    """Homogeneous element of /\\^grade K^dim, coefficients keyed by lex combinations."""

    dim: int
    grade: int
    coeffs: tuple  # sorted ((I, value), ...) with nonzero values

    @classmethod
    def make(cls, dim: int, grade: int, coeffs) -> "Multivector":
        items = {}
        for I, v in dict(coeffs).items():
            I = check_combination(I, dim)
            if len(I) != grade:
                raise ValueError(f"basis element {I} does not have grade {grade}")
            if v:
                items[I] = v
        return cls(dim, grade, tuple(sorted(items.items())))

    @classmethod
    def basis(cls, dim: int, I: Sequence[int]) -> "Multivector":
        return cls.make(dim, len(I), {tuple(I): 1})

    @classmethod
    def vector(cls, coords: Sequence) -> "Multivector":
        return cls.make(len(coords), 1, {(i + 1,): c for i, c in enumerate(coords) if c})

    @classmethod
    def wedge_all(cls, dim: int, vectors: Sequence[Sequence]) -> "Multivector":
        out = cls.make(dim, 0, {(): 1})
        for v in vectors:
            out = wedge(out, cls.vector(v))
        return out

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Multivector") -> "Multivector":
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise ValueError("cannot add multivectors of different dimension or grade")
        d = self.as_dict()
        for I, v in other.coeffs:
            d[I] = d.get(I, 0) + v
        return Multivector.make(self.dim, self.grade, d)

    def scale(self, c) -> "Multivector":
        return Multivector.make(self.dim, self.grade, {I: c * v for I, v in self.coeffs})


def wedge(x: Multivector, y: Multivector) -> Multivector:
    if x.dim != y.dim:
        raise ValueError("ambient dimensions differ")
    if x.grade + y.grade > x.dim:
        raise ValueError(f"grade {x.grade}+{y.grade} exceeds dimension {x.dim}")
    out: dict = {}
    for I, a in x.coeffs:
        sI = set(I)
        for J, b in y.coeffs:
            if sI.intersection(J):
                continue
            K = tuple(sorted(I + J))
            out[K] = out.get(K, 0) + _merge_sign(I, J) * a * b
    return Multivector.make(x.dim, x.grade + y.grade, out)


def contract(x: Multivector, alpha: Sequence) -> Multivector:
    """Right contraction ``x -| alpha`` by a covector given by its values on the basis."""
    if x.grade < 1:
        raise ValueError("cannot contract a grade-0 multivector")
    if len(alpha) != x.dim:
        raise ValueError("covector length does not match dimension")
    out: dict = {}
    for I, a in x.coeffs:
        for r, i in enumerate(I):
            c = alpha[i - 1]
            if c:
                K = I[:r] + I[r + 1:]
                out[K] = out.get(K, 0) + (-1) ** r * c * a
    return Multivector.make(x.dim, x.grade - 1, out)


def contract_by(x: Multivector, phi: Multivector) -> Multivector:
    """Contraction by a covector multivector ``phi`` of grade ``v`` (closed form).

    ``e_I -| phi = sum_{K c I, |K| = v} sign(K, I\\K) phi(e_K) e_{I\\K}``, which agrees
    with the iterated right action.
    """
    if phi.dim != x.dim:
        raise ValueError("ambient dimensions differ")
    if phi.grade > x.grade:
        raise ValueError("contraction grade exceeds multivector grade")
    ph = phi.as_dict()
    out: dict = {}
    for I, a in x.coeffs:
        for K in itertools.combinations(I, phi.grade):
            c = ph.get(K)
            if c:
                rest = tuple(i for i in I if i not in K)
                out[rest] = out.get(rest, 0) + _merge_sign(K, rest) * c * a
    return Multivector.make(x.dim, x.grade - phi.grade, out)


@dataclass(frozen=True)
class Decomposable:
    """A nonzero decomposable ``a_1 ^ ... ^ a_v`` given by its factors (rows)."""

    factors: tuple
    dim: int

    @classmethod
    def make(cls, factors: Sequence[Sequence], dim: int | None = None) -> "Decomposable":
        factors = tuple(tuple(f) for f in factors)
        if dim is None:
            if not factors:
                raise ValueError("dimension required for the empty product")
            dim = len(factors[0])
        if any(len(f) != dim for f in factors):
            raise ValueError("factor lengths differ from the ambient dimension")
        if factors and rank(Matrix(factors, dim)) < len(factors):
            raise ValueError("wedge of the factors is zero")
        return cls(factors, dim)

    @property
    def v(self) -> int:
        return len(self.factors)

    def multivector(self) -> Multivector:
        return Multivector.wedge_all(self.dim, self.factors)


def _complete_basis(factors: Sequence[Sequence], dim: int) -> list[list]:
    rows = [list(f) for f in factors]
    for i in range(dim):
        e = [int(j == i) for j in range(dim)]
        if rank(Matrix(rows + [e], dim)) > len(rows):
            rows.append(e)
        if len(rows) == dim:
            break
    return rows


def adapted_bases(alpha: Decomposable, y: Decomposable) -> tuple[Matrix, Matrix]:
    """Matrices ``(A, T)``: columns of ``A`` extend ``alpha`` to a basis of V*,
    rows of ``T`` extend ``y`` to a basis of W.

    The adapted basis of V is the dual basis (rows of ``A^-1``).  A point with
    adapted coordinates ``x_ad`` has standard coordinates ``/\\A . x_ad . /\\T``.
    """
    if alpha.v != y.v:
        raise ValueError("alpha and y must have the same number of factors")
    A = Matrix(_complete_basis(alpha.factors, alpha.dim), alpha.dim).T
    T = Matrix(_complete_basis(y.factors, y.dim), y.dim)
    return A, T


def standard_decomposables(m: int, n: int, v: int) -> tuple[Decomposable, Decomposable]:
    """``alpha = e_1* ^ .. ^ e_v*`` and ``y = e_1 ^ .. ^ e_v``, for which the standard bases are adapted."""
    alpha = Decomposable.make([[int(j == i) for j in range(m)] for i in range(v)], m)
    y = Decomposable.make([[int(j == i) for j in range(n)] for i in range(v)], n)
    return alpha, y


def _theta_adapted(f: ExteriorPoint, v: int) -> ExteriorPoint:
    m, n, t = f.m + v, f.n + v, f.t + v
    head = tuple(range(1, v + 1))
    entries = {}
    for L, M, val in f.nonzero_entries():
        entries[(head + tuple(l + v for l in L), head + tuple(c + v for c in M))] = val
    return ExteriorPoint.from_entries(m, n, t, entries)


def theta(alpha: Decomposable, y: Decomposable, f: ExteriorPoint) -> ExteriorPoint:
    """``Theta_{alpha,y}(f)``: the point ``x -> y ^ f(x -| alpha)`` of ``L_t(V, W)``.

    ``f`` lives in ``L_{t-v}(V_alpha, W_y)`` written in the adapted bases of
    :func:`adapted_bases`.
    """
    v = alpha.v
    if y.v != v:
        raise ValueError("alpha and y must have the same number of factors")
    m, n = alpha.dim, y.dim
    if (f.m, f.n) != (m - v, n - v):
        raise ValueError(f"f must live in L_(t-v)({m - v}, {n - v}), got ({f.m}, {f.n})")
    out = _theta_adapted(f, v)
    A, T = adapted_bases(alpha, y)
    if A == Matrix.identity(m) and T == Matrix.identity(n):
        return out
    return ExteriorPoint(m, n, out.t, compound(A, out.t).coords @ out.coords @ compound(T, out.t).coords)


def retract_project(x: ExteriorPoint, v: int, alpha: Decomposable | None = None,
                    y: Decomposable | None = None) -> ExteriorPoint:
    """The retraction ``L_t(m, n) -> L_{t-v}(m-v, n-v)``: ``E'[L, M] = E[L+, M+]``.

    Without ``alpha``/``y`` the coordinates of ``x`` are taken to be adapted
    already; otherwise ``x`` is first rewritten in the adapted bases.
    """
    if not 0 <= v <= x.t:
        raise ValueError(f"v={v} out of range 0..{x.t}")
    if (alpha is None) != (y is None):
        raise ValueError("give both alpha and y or neither")
    if alpha is not None:
        A, T = adapted_bases(alpha, y)
        x = ExteriorPoint(
            x.m, x.n, x.t, compound(inverse(A), x.t).coords @ x.coords @ compound(inverse(T), x.t).coords
        )
    m, n, t = x.m - v, x.n - v, x.t - v
    if m < t or n < t:
        raise ValueError("retraction target is empty")
    head = tuple(range(1, v + 1))
    rows = [[x.entry(head + tuple(l + v for l in L), head + tuple(c + v for c in M))
             for M in combinations(n, t)] for L in combinations(m, t)]
    return ExteriorPoint(m, n, t, Matrix(rows, math.comb(n, t)))


def apply_point(f: ExteriorPoint, z: Multivector) -> Multivector:
    """Apply the map with coordinates ``f`` to ``z`` in /\\^t of the domain."""
    if z.grade != f.t or z.dim != f.m:
        raise ValueError("multivector does not lie in the domain of f")
    out: dict = {}
    cols = combinations(f.n, f.t)
    for I, a in z.coeffs:
        row = f.coords.rows[combination_index(I, f.m)]
        for j, c in enumerate(row):
            if c:
                out[cols[j]] = out.get(cols[j], 0) + a * c
    return Multivector.make(f.n, f.t, out)


def theta_direct(alpha: Decomposable, y: Decomposable, f: ExteriorPoint) -> ExteriorPoint:
    """``x -> y ^ f(x -| alpha)`` evaluated literally with ``f`` in ``L_{t-v}(V, W)``."""
    v = alpha.v
    t = f.t + v
    m, n = alpha.dim, y.dim
    a = alpha.multivector()
    yy = y.multivector()
    rows = []
    for I in combinations(m, t):
        z = contract_by(Multivector.basis(m, I), a) if v else Multivector.basis(m, I)
        w = wedge(yy, apply_point(f, z))
        d = w.as_dict()
        rows.append([d.get(J, 0) for J in combinations(n, t)])
    return ExteriorPoint(m, n, t, Matrix(rows, math.comb(n, t)))


def lift_adapted(alpha: Decomposable, y: Decomposable, f: ExteriorPoint) -> ExteriorPoint:
    """Extend ``f`` on ``(V_alpha, W_y)`` by zero to a point of ``L_{t-v}(V, W)``."""
    v = alpha.v
    entries = {}
    for L, M, val in f.nonzero_entries():
        entries[(tuple(l + v for l in L), tuple(c + v for c in M))] = val
    g = ExteriorPoint.from_entries(alpha.dim, y.dim, f.t, entries)
    A, T = adapted_bases(alpha, y)
    return ExteriorPoint(g.m, g.n, g.t, compound(A, g.t).coords @ g.coords @ compound(T, g.t).coords)
