"""Relations among minors of a generic matrix: generation, verification and solving.

Every generator returns a :class:`~exteria.polys.RelationExpr` whose exact
expansion is the zero polynomial.  ``anti_straighten`` and
``subalgebra_membership`` find coefficients by exact linear algebra.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .core import Matrix, _normalize, combinations as lex_combinations, minor, rref
from .polys import (
    MinorSymbol,
    RelationExpr,
    SpanReducer,
    SparsePoly,
    _perm_sign,
    expand,
    poly_mul,
)


def binet_check(A: Matrix, B: Matrix, a: Sequence[int], b: Sequence[int]) -> bool:
    """``[a|b]_{AB} == sum_c [a|c]_A [c|b]_B`` over increasing ``c``."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot compose {A.shape} with {B.shape}")
    t = len(a)
    lhs = minor(A @ B, a, b)
    rhs = sum((minor(A, a, c) * minor(B, c, b) for c in lex_combinations(A.shape[1], t)), 0)
    return lhs == rhs


def plucker_relation(a: Sequence[int], b: Sequence[int]) -> RelationExpr:
    """``sum_j (-1)^(j+1) [a, b_j] [b without b_j]`` among maximal minors of a ``t x n`` matrix."""
    a, b = tuple(a), tuple(b)
    t = len(a) + 1
    if len(b) != t + 1:
        raise ValueError(f"need |a| = t-1 and |b| = t+1, got |a|={len(a)}, |b|={len(b)}")
    rows = tuple(range(1, t + 1))
    return RelationExpr.from_products(
        ((-1) ** j, [(rows, a + (b[j],)), (rows, b[:j] + b[j + 1 :])]) for j in range(t + 1)
    )


def _multiset_minus(u: Sequence[int], c: Sequence[int]) -> tuple[int, ...]:
    left = Counter(u)
    left.subtract(c)
    return tuple(sorted(left.elements()))


def pushforward_relation(rel: RelationExpr, A: Matrix, u: Sequence[int]) -> RelationExpr:
    """Transport a homogeneous quadratic relation among maximal minors through ``A``.

    ``rel`` is a combination of products ``[alpha][beta]`` of maximal minors of a
    generic ``t x n`` matrix; ``A`` is ``t x m`` and ``u`` a multiset of size
    ``2t`` in ``[m]``.  The output is
    ``sum_c [c]_A [c']_A sum_i lambda_i [c|alpha_i][c'|beta_i]`` over increasing
    ``c`` in ``u`` with ``c' = u - c``, which vanishes on every ``m x n`` matrix.
    """
    t, m = A.shape
    u = tuple(sorted(u))
    if len(u) != 2 * t or any(not 1 <= i <= m for i in u):
        raise ValueError(f"u must be a multiset of size {2 * t} in [1, {m}]")
    if not rel.is_homogeneous():
        raise ValueError("pushforward needs a homogeneous relation")
    for _, fs in rel.terms:
        if len(fs) != 2 or any(f.rows != tuple(range(1, t + 1)) for f in fs):
            raise ValueError(f"pushforward needs products of two maximal minors of a {t}-row matrix")
    out = []
    for c in sorted(set(combinations(u, t))):
        if len(set(c)) < t:
            continue
        cp = _multiset_minus(u, c)
        if len(set(cp)) < t:
            continue
        w = minor(A, tuple(range(1, t + 1)), c) * minor(A, tuple(range(1, t + 1)), cp)
        if not w:
            continue
        for lam, (alpha, beta) in rel.terms:
            out.append((lam * w, [(c, alpha.cols), (cp, beta.cols)]))
    return RelationExpr.from_products(out)


def genplu2_index_set(s: int, t: int) -> list[tuple[int, ...]]:
    """Subsets ``b`` of ``{s+1..2t-s}`` of size ``t-s`` meeting each ``{i, i+t-s}``, ``i = s+1..t``, once."""
    w = range(s + 1, 2 * t - s + 1)
    return [
        b for b in combinations(w, t - s) if all(len({i, i + t - s} & set(b)) == 1 for i in range(s + 1, t + 1))
    ]


def genplu2_sign(b: Sequence[int], s: int, t: int) -> int:
    """``+1`` if ``t-s`` is odd or ``b`` has an even number of entries ``<= t``, else ``-1``."""
    if (t - s) % 2 == 1 or sum(1 for i in b if i <= t) % 2 == 0:
        return 1
    return -1


def genplu2_relation(s: int, t: int) -> RelationExpr:
    """The relation on ``t``-minors obtained by pushing the Plucker relation with
    ``a = 1..t-1``, ``b = t..2t`` through the block matrix ``[[I_s,0,0],[0,I,I]]``.

    Terms are ``sign(b) (-1)^(j-t) [1..s,b | 1..t-1,j][1..s,b' | t..2t without j]``
    for ``b`` in :func:`genplu2_index_set`; the alternating sign counts the
    position of ``j`` in ``t..2t``, which makes the result agree term by term
    with :func:`genplu2_via_pushforward`.
    """
    if not 0 <= s <= t:
        raise ValueError(f"need 0 <= s <= t, got s={s}, t={t}")
    w = set(range(s + 1, 2 * t - s + 1))
    head = tuple(range(1, s + 1))
    cols_a = tuple(range(1, t))
    cols_b = tuple(range(t, 2 * t + 1))
    out = []
    for b in genplu2_index_set(s, t):
        bp = tuple(sorted(w - set(b)))
        sgn = genplu2_sign(b, s, t)
        for j in cols_b:
            out.append(
                (sgn * (-1) ** (j - t), [(head + b, cols_a + (j,)), (head + bp, tuple(c for c in cols_b if c != j))])
            )
    return RelationExpr.from_products(out)


def genplu2_block_matrix(s: int, t: int) -> tuple[Matrix, tuple[int, ...]]:
    """The ``t x (2t-s)`` block matrix and multiset ``u`` realizing :func:`genplu2_relation`."""
    rows = []
    for i in range(1, t + 1):
        r = [0] * (2 * t - s)
        r[i - 1] = 1
        if i > s:
            r[i - 1 + t - s] = 1
        rows.append(r)
    u = tuple(i for i in range(1, s + 1) for _ in range(2)) + tuple(range(s + 1, 2 * t - s + 1))
    return Matrix(rows, 2 * t - s), u


def genplu2_via_pushforward(s: int, t: int) -> RelationExpr:
    A, u = genplu2_block_matrix(s, t)
    return pushforward_relation(plucker_relation(tuple(range(1, t)), tuple(range(t, 2 * t + 1))), A, u)


_TWELVE = [
    (+1, "12", "14", "34", "23"), (-1, "14", "14", "23", "23"), (-1, "23", "14", "14", "23"), (+1, "34", "14", "12", "23"),
    (-1, "12", "13", "34", "24"), (+1, "14", "13", "23", "24"), (+1, "23", "13", "14", "24"), (-1, "34", "13", "12", "24"),
    (+1, "12", "12", "34", "34"), (-1, "14", "12", "23", "34"), (-1, "23", "12", "14", "34"), (+1, "34", "12", "12", "34"),
]


def _ix(text: str) -> tuple[int, ...]:
    return tuple(int(ch) for ch in text)


def twelve_term_relation() -> RelationExpr:
    """The quadratic relation among 2-minors of a 4 x 4 matrix whose term ``[12|12][34|34]`` is ``delta_2 [34|34]``."""
    return RelationExpr.from_products(
        (c, [(_ix(r1), _ix(c1)), (_ix(r2), _ix(c2))]) for c, r1, c1, r2, c2 in _TWELVE
    )


def append_index(rel: RelationExpr) -> RelationExpr:
    """Add a new first row and column index to every minor, shifting the others up by one."""
    return RelationExpr(
        (c, tuple(MinorSymbol((1,) + tuple(i + 1 for i in f.rows), (1,) + tuple(j + 1 for j in f.cols)) for f in fs))
        for c, fs in rel.terms
    )


def compound_minor(row_sets: Sequence[Sequence[int]], col_sets: Sequence[Sequence[int]]) -> RelationExpr:
    """Determinant of the matrix ``([R_i | C_j])`` of minors, as a formal expression."""
    if len(row_sets) != len(col_sets):
        raise ValueError("compound minor needs as many row sets as column sets")
    k = len(row_sets)
    return RelationExpr.from_products(
        (_perm_sign(p), [(tuple(row_sets[i]), tuple(col_sets[p[i]])) for i in range(k)]) for p in permutations(range(k))
    )


def _cm(rows: str, cols: str) -> RelationExpr:
    return compound_minor([_ix(x) for x in rows.split()], [_ix(x) for x in cols.split()])


def _sym(rows: str, cols: str) -> RelationExpr:
    return RelationExpr.from_products([(1, [(_ix(rows), _ix(cols))])])


def degree3_catalog() -> list[tuple[str, RelationExpr]]:
    """Five cubic relations among 2-minors of a 4 x 4 matrix, each written as ``lhs - rhs``."""
    g = (
        _sym("12", "23") * _sym("13", "14").scale(-1)
        + _sym("12", "24") * _sym("13", "13")
        - _sym("12", "34") * _sym("13", "12")
    )
    return [
        ("cubic-a", _cm("12 13 24", "12 13 24") - _cm("12 14 23", "12 14 23")),
        ("cubic-b", _cm("12 13 23", "12 13 24") - _cm("12 13 23", "12 14 23")),
        ("cubic-c", _cm("12 13 14", "12 13 24") + _cm("12 13 14", "12 14 23")),
        ("cubic-d", _cm("12 13 14", "12 13 23")),
        ("cubic-e", _sym("13", "24") * _cm("12 13", "12 13") - _sym("13", "23") * _cm("12 13", "12 14") - _sym("13", "12") * g),
    ]


# ---------------------------------------------------------------------------
# Anti-straightening


@dataclass(frozen=True)
class AntiStraightening:
    """``delta * eta == sum coefficients[(k, l)] * products[(k, l)]``."""

    delta: MinorSymbol | None
    eta: MinorSymbol
    sign: int
    coefficients: dict
    relation: RelationExpr

    def to_json(self) -> dict:
        return {
            "coefficients": [[k, l, str(v)] for (k, l), v in sorted(self.coefficients.items())],
            "relation": self.relation.to_json(),
        }


def anti_straighten_products(a, b, A, B) -> dict:
    """The products ``[a A_k | b B_l][A - A_k | B - B_l]`` for ``k, l = u+1..v`` (1-based)."""
    u, v = len(a), len(A)
    out = {}
    for k in range(u + 1, v + 1):
        for l in range(u + 1, v + 1):
            first = (tuple(a) + (A[k - 1],), tuple(b) + (B[l - 1],))
            second = (tuple(A[: k - 1]) + tuple(A[k:]), tuple(B[: l - 1]) + tuple(B[l:]))
            out[(k, l)] = RelationExpr.from_products([(1, [first, second])])
    return out


def anti_straighten(a, b, A, B, row_order=None) -> AntiStraightening:
    """Solve for ``lambda_kl`` with ``[a|b][A|B] = sum lambda_kl [a A_k|b B_l][A-A_k|B-B_l]``.

    ``a, b`` must be prefixes of ``A, B`` and ``len(a) < len(A) - 1``.  The
    returned solution is the reduced-echelon one (free unknowns set to zero,
    unknowns ordered by ``(k, l)``), which is independent of how the coefficient
    equations are ordered; ``row_order`` permutes them to check exactly that.
    """
    a, b, A, B = map(tuple, (a, b, A, B))
    u, v = len(a), len(A)
    if len(b) != u or len(B) != v:
        raise ValueError("row and column tuples must have equal lengths")
    if tuple(A[:u]) != a or tuple(B[:u]) != b:
        raise ValueError("delta must be nested in eta: its indices must be prefixes of eta's")
    if not u < v - 1:
        raise ValueError(f"need u < v - 1, got u={u}, v={v}")
    lhs = RelationExpr.from_products([(1, [(a, b), (A, B)])])
    prods = anti_straighten_products(a, b, A, B)
    keys = sorted(prods)
    target = expand(lhs).terms
    cols = [expand(prods[k]).terms for k in keys]
    monos = sorted(set(target).union(*cols))
    if row_order is not None:
        monos = [monos[i] for i in row_order]
    n = len(keys)
    rows = []
    for mono in monos:
        r = {j: c[mono] for j, c in enumerate(cols) if mono in c}
        if mono in target:
            r[n] = target[mono]
        rows.append(r)
    red, pivots = rref(rows, n + 1)
    if n in pivots:
        raise RuntimeError(f"no anti-straightening found for [{a}|{b}][{A}|{B}]")
    lam = {k: 0 for k in keys}
    for row, c in zip(red, pivots):
        lam[keys[c]] = _normalize(Fraction(row.get(n, 0)))
    rel = lhs
    for k in keys:
        if lam[k]:
            rel = rel - prods[k].scale(lam[k])
    if not expand(rel).is_zero():
        raise RuntimeError("anti-straightening residual is nonzero")
    sd, delta = MinorSymbol.signed(a, b) if u else (1, None)
    se, eta = MinorSymbol.signed(A, B)
    return AntiStraightening(delta, eta, sd * se, {k: c for k, c in lam.items() if c}, rel)


# ---------------------------------------------------------------------------
# Bounded-degree subalgebra membership


@dataclass(frozen=True)
class Membership:
    """``target == sum coeff * prod(generators[i] for i in idx)`` when ``found``."""

    found: bool
    terms: tuple = ()
    candidates: int = 0

    def __bool__(self) -> bool:
        return self.found


def _generator_degree(poly: SparsePoly) -> tuple[Counter, Counter]:
    mds = poly.multidegrees()
    if len(mds) != 1:
        raise ValueError("generators must be multihomogeneous and nonzero")
    rows, cols = next(iter(mds))
    if not rows:
        raise ValueError("constant generators are not allowed")
    return Counter(rows), Counter(cols)


def generator_monomials(degrees: Sequence[tuple[Counter, Counter]], target_rows: Counter, target_cols: Counter, max_factors: int):
    """All nondecreasing index tuples of generators whose multidegrees sum to the target."""
    out = []

    def rec(start, rows, cols, acc):
        if not rows and not cols:
            out.append(tuple(acc))
            return
        if len(acc) == max_factors:
            return
        for g in range(start, len(degrees)):
            gr, gc = degrees[g]
            if all(rows[k] >= v for k, v in gr.items()) and all(cols[k] >= v for k, v in gc.items()):
                acc.append(g)
                rec(g, rows - gr, cols - gc, acc)
                acc.pop()

    rec(0, target_rows, target_cols, [])
    return out


def subalgebra_membership(target: SparsePoly, generators: Sequence[SparsePoly], degree_bound: int) -> Membership:
    """Express ``target`` as a polynomial of degree ``<= degree_bound`` in ``generators``.

    Only products of generators whose multidegree equals the target's are
    considered, which is complete for multihomogeneous targets.  A negative
    answer means "not found up to the bound".
    """
    if target.is_zero():
        return Membership(True, ())
    mds = target.multidegrees()
    if len(mds) != 1:
        raise ValueError("target must be multihomogeneous")
    tr, tc = next(iter(mds))
    if not tr:
        return Membership(True, ((target.terms[()], ()),))
    degrees = [_generator_degree(g) for g in generators]
    cands = generator_monomials(degrees, Counter(tr), Counter(tc), degree_bound)
    reducer = SpanReducer()
    for idx in cands:
        prod: dict = {(): 1}
        for g in idx:
            prod = poly_mul(prod, generators[g].terms)
        reducer.add(prod, idx)
    comb = reducer.express(target.terms)
    if comb is None:
        return Membership(False, (), len(cands))
    return Membership(True, tuple((comb[idx], idx) for idx in sorted(comb)), len(cands))


def membership_polynomial(result: Membership, generators: Sequence[SparsePoly]) -> SparsePoly:
    total = SparsePoly()
    for c, idx in result.terms:
        prod = SparsePoly.constant(c)
        for g in idx:
            prod = prod * generators[g]
        total = total + prod
    return total
