"""Differential of the compound map, low-degree relation ideals, and tangent dimensions.

The coordinate ring of ``X_t`` is presented as ``K[Y_gamma] / I`` with one
variable per ``t``-minor.  :func:`relation_ideal_slice` computes the part of
``I`` of degree ``<= d`` exactly, one ``Z^m x Z^n`` multidegree at a time.
Since this may miss generators of higher degree, the Jacobian rank of the
slice at ``x`` bounds the true codimension from below, so the tangent
dimension it yields is an upper bound for the Zariski tangent space of ``X_t``
at ``x`` and a certificate of smoothness when it equals ``mn``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .core import Matrix, minor, rank
from .exterior import ExteriorPoint
from .polys import MinorSymbol, RelationExpr, SpanReducer, poly_mul, symbol_multidegree, _minor_dict
from .localization import all_minors

SLICE_BUDGET = 40
MAX_SLICE_DEGREE = 3


def d_lambda_matrix(B: Matrix, t: int) -> Matrix:
    """Jacobian of ``B -> compound(B, t)``: rows ``(I, J)`` in lex order, columns ``(i, j)`` row-major."""
    m, n = B.shape
    if not 0 <= t <= min(m, n):
        raise ValueError(f"t={t} out of range for a {m}x{n} matrix")
    rows = []
    for I in combinations(range(1, m + 1), t):
        for J in combinations(range(1, n + 1), t):
            r = [0] * (m * n)
            for p, i in enumerate(I):
                Ir = I[:p] + I[p + 1 :]
                for q, j in enumerate(J):
                    Jr = J[:q] + J[q + 1 :]
                    r[(i - 1) * n + (j - 1)] = (-1) ** (p + q) * (minor(B, Ir, Jr) if Ir else 1)
            rows.append(r)
    return Matrix(rows, m * n)


def d_lambda_rank(B: Matrix, t: int) -> int:
    return rank(d_lambda_matrix(B, t))


def _check_budget(m: int, n: int, t: int, d: int):
    size = math.comb(m, t) * math.comb(n, t)
    if size > SLICE_BUDGET:
        raise ValueError(f"relation slice needs C(m,t)*C(n,t) <= {SLICE_BUDGET}, got {size} for ({m}, {n}, {t})")
    if not 1 <= d <= MAX_SLICE_DEGREE:
        raise ValueError(f"relation slice degree must be in 1..{MAX_SLICE_DEGREE}, got {d}")


@dataclass
class RelationIdealSlice:
    """Basis of the degree ``<= d`` part of the ideal of relations among ``t``-minors."""

    m: int
    n: int
    t: int
    d: int
    symbols: tuple[MinorSymbol, ...]
    basis: list[RelationExpr]
    _reducers: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.basis)

    def contains(self, rel: RelationExpr) -> bool:
        """Whether ``rel`` (a combination of products of ``t``-minors) lies in the span."""
        blocks: dict = {}
        for c, fs in rel.terms:
            if any(f.size != self.t for f in fs) or len(fs) > self.d:
                return False
            blocks.setdefault(symbol_multidegree(fs), {})[fs] = c
        for md, vec in blocks.items():
            red = self._reducers.get(md)
            if red is None or red.express(vec) is None:
                return False
        return True

    def evaluate(self, x: ExteriorPoint) -> list:
        return [_eval_rel(rel, x) for rel in self.basis]


def _eval_rel(rel: RelationExpr, x: ExteriorPoint):
    total = 0
    for c, fs in rel.terms:
        term = c
        for f in fs:
            term = term * x.entry(f.rows, f.cols)
        total = total + term
    return total


@lru_cache(maxsize=None)
def relation_ideal_slice(m: int, n: int, t: int, d: int) -> RelationIdealSlice:
    """Exact kernel of ``K[Y]_{<= d} -> K[X]``, ``Y_gamma -> gamma``, by multidegree blocks."""
    _check_budget(m, n, t, d)
    symbols = tuple(all_minors(m, n, t))
    basis: list[RelationExpr] = []
    reducers: dict = {}
    for e in range(1, d + 1):
        blocks: dict = {}
        for mono in combinations_with_replacement(symbols, e):
            blocks.setdefault(symbol_multidegree(mono), []).append(mono)
        for md in sorted(blocks):
            image = SpanReducer()
            for mono in blocks[md]:
                prod: dict = {(): 1}
                for f in mono:
                    prod = poly_mul(prod, _minor_dict(f.rows, f.cols))
                dep = image.add(prod, mono)
                if dep is not None:
                    rel = RelationExpr((c, fs) for fs, c in dep.items())
                    basis.append(rel)
                    red = reducers.setdefault(md, SpanReducer())
                    red.add(dict((fs, c) for c, fs in rel.terms), len(basis) - 1)
    return RelationIdealSlice(m, n, t, d, symbols, basis, reducers)


def first_violated_relation(x: ExteriorPoint, max_degree: int = 2) -> int | None:
    """Least degree ``e <= max_degree`` of a relation among ``t``-minors that is nonzero at ``x``."""
    for e in range(2, max_degree + 1):
        sl = relation_ideal_slice(x.m, x.n, x.t, e)
        if any(_eval_rel(rel, x) for rel in sl.basis):
            return e
    return None


def jacobian_at(slice_: RelationIdealSlice, x: ExteriorPoint) -> Matrix:
    """Rows: basis relations; columns: ``Y_gamma`` in lex order; entries: partial derivatives at ``x``."""
    index = {s: k for k, s in enumerate(slice_.symbols)}
    vals = {s: x.entry(s.rows, s.cols) for s in slice_.symbols}
    rows = []
    for rel in slice_.basis:
        r = [0] * len(index)
        for c, fs in rel.terms:
            counts = Counter(fs)
            for s, k in counts.items():
                term = c * k
                for f, kk in counts.items():
                    p = kk - 1 if f == s else kk
                    if p:
                        term = term * vals[f] ** p
                r[index[s]] += term
        rows.append(r)
    return Matrix(rows, len(index)) if rows else Matrix.zeros(0, len(index))


def tangent_dim_at(x: ExteriorPoint, slice_: RelationIdealSlice) -> int:
    """``#Y - rank(Jacobian)``: an upper bound for the tangent dimension of ``X_t`` at ``x``."""
    if (x.m, x.n, x.t) != (slice_.m, slice_.n, slice_.t):
        raise ValueError(f"point in L_{x.t}({x.m},{x.n}) but slice for L_{slice_.t}({slice_.m},{slice_.n})")
    if not slice_.basis:
        return len(slice_.symbols)
    return len(slice_.symbols) - rank(jacobian_at(slice_, x))


def tangent_verdict(x: ExteriorPoint, dim: int) -> str:
    mn = x.m * x.n
    if dim == mn:
        return "smooth"
    if dim > mn:
        return "singularity-consistent"
    return "below-variety-dimension"


@dataclass(frozen=True)
class SingCount:
    m: int
    n: int
    t: int
    enumerated: int
    closed_form: int
    mn: int

    @property
    def ok(self) -> bool:
        return self.enumerated == self.closed_form and self.closed_form > self.mn

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "t": self.t, "count": self.enumerated, "closed_form": self.closed_form, "mn": self.mn, "exceeds_mn": self.closed_form > self.mn}


def sing_counting_check(m: int, n: int, t: int) -> SingCount:
    """Count ``t``-minors sharing a ``(t+1) x (t+1)`` submatrix with ``[1..t|1..t]``.

    These minors are the generators whose classes do not vanish in the
    conormal space at a rank-1 point; there are more of them than ``mn``.
    """
    if m > n:
        m, n = n, m
    if not 1 < t < m:
        raise ValueError(f"counting check needs 1 < t < min(m, n), got t={t}, (m, n)=({m}, {n})")
    if m == n and t == m - 1:
        raise ValueError("counting check excludes t = m - 1 = n - 1")
    head = set(range(1, t + 1))
    count = sum(
        1 for g in all_minors(m, n, t) if len(head | set(g.rows)) <= t + 1 and len(head | set(g.cols)) <= t + 1
    )
    return SingCount(m, n, t, count, (t * (m - t) + 1) * (t * (n - t) + 1), m * n)
