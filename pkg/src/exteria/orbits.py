"""Rank, small rank, the test functions f_v, normal forms and orbit classification.

Small rank of ``x`` in ``L_t(m, n)`` is the largest rank of ``x`` restricted to
``/\\^t U`` for subspaces ``U`` of the domain with ``dim U <= t + 1``.  With the
row-vector convention of :mod:`exteria.exterior`, if the rows of a
``(t+1) x m`` matrix ``P`` span ``U`` then the restriction is
``compound(P, t) . x``.
"""

from __future__ import annotations

import math
import random
from itertools import combinations
from dataclasses import dataclass
from fractions import Fraction

from .core import Matrix, combination_index, combinations as lex_combinations, det, random_int_matrix, random_invertible, rank
from .exterior import ExteriorPoint, compound
from .shapes import orbit_to_prime


@dataclass(frozen=True)
class OrbitDescriptor:
    """A G-orbit of ``X_t(m, n)``; ``k`` is ``None`` for the zero and rank-1 orbits."""

    u: int
    rank: int
    k: int | None
    dimension: int
    prime_label: str

    def to_json(self) -> dict:
        return {"sr": self.u, "rank": self.rank, "k": self.k, "dim": self.dimension, "prime": self.prime_label}


def admissible_orbits(m: int, n: int, t: int) -> list[tuple[int, int | None]]:
    """All ``(u, k)`` labelling orbits of ``X_t(m, n)``: ``(0, None)``, ``(1, None)``, then ``u >= 2``."""
    mm = min(m, n)
    out: list[tuple[int, int | None]] = [(0, None), (1, None)]
    out += [(u, k) for u in range(2, t + 2) for k in range(1, mm - t + 1)]
    return out


def orbit_rank(u: int, k: int | None) -> int:
    if u in (0, 1):
        return u
    return math.comb(u + k - 1, u - 1)


def _check_admissible(u, k, m, n, t):
    if u in (0, 1):
        if k not in (None, 0):
            raise ValueError(f"orbit u={u} takes no k, got k={k}")
        return
    mm = min(m, n)
    if not (2 <= u <= t + 1 and k is not None and 1 <= k <= mm - t):
        raise ValueError(f"inadmissible (u, k) = ({u}, {k}) for (m, n, t) = ({m}, {n}, {t})")


def normal_form(u: int, k: int | None, m: int, n: int, t: int) -> ExteriorPoint:
    """The 0/1 diagonal point ``d_{u,u+k-1}`` of ``L_t(m, n)``."""
    _check_admissible(u, k, m, n, t)
    if u == 0:
        return ExteriorPoint.zero(m, n, t)
    head_all = tuple(range(1, t + 1))
    if u == 1:
        return ExteriorPoint.from_entries(m, n, t, {(head_all, head_all): 1})
    v = t + 1 - u
    head = tuple(range(1, v + 1))
    entries = {}
    for I in combinations(range(v + 1, t + k + 1), t - v):
        idx = head + I
        entries[(idx, idx)] = 1
    return ExteriorPoint.from_entries(m, n, t, entries)


def orbit_dimension(u: int, k: int | None, m: int, n: int, t: int) -> int:
    _check_admissible(u, k, m, n, t)
    if u == 0:
        return 0
    if u == 1:
        return (m - t) * t + (n - t) * t + 1
    return m * n - (t - u + 1) ** 2 - (m - (t + k)) * (n - (t + k))


def describe_orbit(u: int, k: int | None, m: int, n: int, t: int) -> OrbitDescriptor:
    return OrbitDescriptor(
        u, orbit_rank(u, k), k, orbit_dimension(u, k, m, n, t), orbit_to_prime(u, k, min(m, n), t).label
    )


def _replace_index(I, i, j):
    """``e_I`` with ``e_i`` replaced by ``e_j``, as ``(sign, sorted index)``; ``None`` if it vanishes."""
    if i not in I or (j != i and j in I):
        return None
    K = [j if a == i else a for a in I]
    inv = sum(1 for p in range(len(K)) for q in range(p + 1, len(K)) if K[p] > K[q])
    return (-1) ** inv, tuple(sorted(K))


def infinitesimal_orbit_dim(x: ExteriorPoint) -> int:
    """Dimension of the orbit through ``x``: rank of the infinitesimal action of gl_m x gl_n.

    ``E_ij`` acts on ``e_I`` by replacing ``e_i`` with ``e_j``; the left factor
    acts on row indices and the right factor on column indices.
    """
    rows_c, cols_c = lex_combinations(x.m, x.t), lex_combinations(x.n, x.t)
    nz = {(I, J): v for I, J, v in x.nonzero_entries()}
    width = len(rows_c) * len(cols_c)
    vecs = []
    for i in range(1, x.m + 1):
        for j in range(1, x.m + 1):
            vec = [0] * width
            for a, I in enumerate(rows_c):
                s = _replace_index(I, i, j)
                if s:
                    for b, J in enumerate(cols_c):
                        vec[a * len(cols_c) + b] += s[0] * nz.get((s[1], J), 0)
            vecs.append(vec)
    for i in range(1, x.n + 1):
        for j in range(1, x.n + 1):
            vec = [0] * width
            for (I, K), v in nz.items():
                s = _replace_index(K, i, j)
                if s:
                    vec[combination_index(I, x.m) * len(cols_c) + combination_index(s[1], x.n)] += s[0] * v
            vecs.append(vec)
    return rank(Matrix(vecs, width))


def restriction(x: ExteriorPoint, P: Matrix) -> Matrix:
    """Matrix of ``x`` restricted to ``/\\^t`` of the row space of ``P``."""
    return compound(P, x.t).coords @ x.coords


def f_v_eval(x: ExteriorPoint, v: int):
    """``det((-1)^(i+j) E[{1..t+1}\\i, {1..t+1}\\j])`` over ``i, j = v+1..t+1``."""
    t = x.t
    if min(x.m, x.n) < t + 1:
        raise ValueError(f"f_v needs m, n >= t+1 = {t + 1}")
    if not 0 <= v <= t + 1:
        raise ValueError(f"v={v} out of range 0..{t + 1}")
    full = tuple(range(1, t + 2))
    idx = range(v + 1, t + 2)
    rows = [
        [(-1) ** (i + j) * x.entry(tuple(a for a in full if a != i), tuple(b for b in full if b != j)) for j in idx]
        for i in idx
    ]
    return det(Matrix(rows, len(idx))) if rows else 1


def small_rank(x: ExteriorPoint, strategy: str = "randomized", seed: int = 0, trials: int = 20) -> int:
    """Small rank of ``x``.

    ``randomized`` returns the best restriction rank over ``trials`` random
    ``(t+1)``-dimensional subspaces, a certified lower bound that is attained
    generically.  ``certificate`` returns ``t+1 - min{v : f_v(g.x) != 0}`` over
    random ``g`` in ``G`` and is only meaningful for points of ``X_t``.
    """
    if x.is_zero():
        return 0
    rng = random.Random(seed)
    t = x.t
    if strategy == "randomized":
        if x.m <= t + 1:
            return x.rank()
        best = 0
        for _ in range(trials):
            r = rank(restriction(x, random_int_matrix(rng, t + 1, x.m)))
            best = max(best, r)
            if best == t + 1:
                break
        return best
    if strategy == "certificate":
        best_v = t + 1
        for _ in range(trials):
            gx = x.act(random_invertible(x.m, rng), random_invertible(x.n, rng))
            for v in range(0, best_v):
                if f_v_eval(gx, v) != 0:
                    best_v = v
                    break
            if best_v == 0:
                break
        return t + 1 - best_v
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class Classification:
    """Outcome of :func:`classify`: an orbit descriptor, or a certified non-membership."""

    sr: int
    rank: int
    descriptor: OrbitDescriptor | None
    reason: str

    @property
    def in_orbit_catalog(self) -> bool:
        return self.descriptor is not None

    def to_json(self) -> dict:
        if self.descriptor is not None:
            return self.descriptor.to_json()
        return {"sr": self.sr, "rank": self.rank, "verdict": "not in X_t", "reason": self.reason}


def match_invariants(u: int, r: int, m: int, n: int, t: int) -> OrbitDescriptor | None:
    for uu, k in admissible_orbits(m, n, t):
        if uu == u and orbit_rank(uu, k) == r:
            return describe_orbit(uu, k, m, n, t)
    return None


def classify(x: ExteriorPoint, seed: int = 0, trials: int = 20, relation_degree: int | None = 2) -> Classification:
    """Classify ``x`` by (small rank, rank).

    An inadmissible pair certifies ``x`` is not in ``X_t``.  When the ambient
    space is small enough, ``x`` is also tested against the degree
    ``<= relation_degree`` relations among ``t``-minors; a nonzero value is a
    second kind of non-membership certificate.  An admissible pair that passes
    these tests is reported as the matching orbit, which is a necessary
    condition for membership only.
    """
    u = small_rank(x, "randomized", seed, trials)
    r = x.rank()
    desc = match_invariants(u, r, x.m, x.n, x.t)
    if desc is None:
        return Classification(u, r, None, "invariant pair (sr, rank) is not admissible")
    if relation_degree and x.t >= 2 and min(x.m, x.n) > x.t:
        from .tangent import SLICE_BUDGET, first_violated_relation

        if math.comb(x.m, x.t) * math.comb(x.n, x.t) <= SLICE_BUDGET:
            bad = first_violated_relation(x, relation_degree)
            if bad is not None:
                return Classification(u, r, None, f"violates a degree-{bad} relation among {x.t}-minors")
    return Classification(u, r, desc, "admissible invariant pair")


def same_fiber_high_rank(f: Matrix, g: Matrix, t: int) -> bool:
    """Whether ``compound(f, t) == compound(g, t)`` for maps of rank ``> t``.

    Over an algebraically closed field the fibre is ``f * mu_t``; over the
    rationals the only roots of unity are ``+-1``.
    """
    if f.shape != g.shape:
        raise ValueError("maps have different shapes")
    if rank(f) <= t or rank(g) <= t:
        raise ValueError(f"both maps must have rank > {t}")
    if f == g:
        return True
    return f == -g and t % 2 == 0


@dataclass(frozen=True)
class FiberVerdict:
    proportional: bool
    scalar: Fraction | int | None

    @property
    def equal(self) -> bool:
        return self.proportional and self.scalar == 1


def same_fiber_rank_t(f: Matrix, g: Matrix, t: int) -> FiberVerdict:
    """Compare ``compound(f, t)`` and ``compound(g, t)`` for maps of rank exactly ``t``.

    They are proportional iff ``f`` and ``g`` have the same kernel and image;
    the scalar is 1 exactly when ``g`` differs from ``f`` by a unimodular map.
    """
    if f.shape != g.shape:
        raise ValueError("maps have different shapes")
    if rank(f) != t or rank(g) != t:
        raise ValueError(f"both maps must have rank {t}")
    m, n = f.shape
    same_ker = rank(Matrix([fr + gr for fr, gr in zip(f.rows, g.rows)], 2 * n)) == t
    same_im = rank(Matrix(f.rows + g.rows, n)) == t
    if not (same_ker and same_im):
        return FiberVerdict(False, None)
    cf, cg = compound(f, t), compound(g, t)
    for I, J, val in cf.nonzero_entries():
        return FiberVerdict(True, _ratio(cg.entry(I, J), val))
    raise AssertionError("rank-t map with zero compound")


def _ratio(a, b):
    q = Fraction(a) / Fraction(b)
    return q.numerator if q.denominator == 1 else q
