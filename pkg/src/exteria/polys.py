"""Sparse polynomials in the entries of a generic matrix, and formal products of minors.

A variable ``X_ij`` is encoded as the integer ``(i << 8) | j`` (1-based), and a
monomial as the sorted tuple of its variable codes with repetition.  A
polynomial is a dict from monomials to nonzero rational coefficients.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from .core import DEFAULT_PRIME, _normalize, format_rational, parse_rational

Monomial = tuple[int, ...]


def var(i: int, j: int) -> int:
    return (i << 8) | j


def var_index(code: int) -> tuple[int, int]:
    return code >> 8, code & 0xFF


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def multidegree(mono: Monomial) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Row and column multisets of a monomial, as sorted tuples."""
    return tuple(sorted(c >> 8 for c in mono)), tuple(sorted(c & 0xFF for c in mono))


def poly_add(p: dict, q: dict, c=1) -> dict:
    out = dict(p)
    for mono, v in q.items():
        nv = out.get(mono, 0) + c * v
        if nv:
            out[mono] = nv
        else:
            out.pop(mono, None)
    return out


def poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for ma, va in p.items():
        for mb, vb in q.items():
            mono = tuple(sorted(ma + mb))
            nv = out.get(mono, 0) + va * vb
            if nv:
                out[mono] = nv
            else:
                del out[mono]
    return out


class SparsePoly:
    """Immutable-by-convention polynomial in the ``X_ij``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: _normalize(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def variable(cls, i: int, j: int) -> "SparsePoly":
        return cls({(var(i, j),): 1})

    @classmethod
    def constant(cls, c) -> "SparsePoly":
        return cls({(): c})

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        return SparsePoly(poly_add(self.terms, other.terms))

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return SparsePoly(poly_add(self.terms, other.terms, -1))

    def __neg__(self) -> "SparsePoly":
        return SparsePoly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return SparsePoly(poly_mul(self.terms, other.terms))
        return SparsePoly({k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        out = SparsePoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def multidegrees(self) -> set:
        return {multidegree(mono) for mono in self.terms}

    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def evaluate(self, values):
        """Evaluate at a matrix (anything indexable as ``values[i-1][j-1]``)."""
        total = 0
        for mono, c in self.terms.items():
            term = c
            for code in mono:
                i, j = var_index(code)
                term = term * values[i - 1][j - 1]
            total = total + term
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            name = "*".join(f"X{i}{j}" for i, j in map(var_index, mono)) or "1"
            parts.append(f"{format_rational(c)}*{name}")
        return " + ".join(parts)


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, cyc = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                cyc += 1
            if cyc % 2 == 0:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _minor_terms(rows: tuple[int, ...], cols: tuple[int, ...]) -> tuple:
    out = []
    for p in permutations(range(len(rows))):
        mono = tuple(sorted(var(rows[i], cols[p[i]]) for i in range(len(rows))))
        out.append((mono, _perm_sign(p)))
    return tuple(out)


def minor_poly(a: Sequence[int], b: Sequence[int], m: int | None = None, n: int | None = None) -> SparsePoly:
    """The minor ``[a|b]`` of the generic ``m x n`` matrix (rows and columns may be unsorted)."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError(f"minor [{a}|{b}] is not square")
    if (m is not None and any(not 1 <= i <= m for i in a)) or (n is not None and any(not 1 <= j <= n for j in b)):
        raise ValueError(f"minor [{a}|{b}] out of range for a {m}x{n} matrix")
    if len(set(a)) < len(a) or len(set(b)) < len(b):
        return SparsePoly()
    return SparsePoly(dict(_minor_terms(a, b)))


def _minor_dict(a: tuple, b: tuple) -> dict:
    if len(set(a)) < len(a) or len(set(b)) < len(b):
        return {}
    return dict(_minor_terms(a, b))


# ---------------------------------------------------------------------------
# Formal expressions in minors


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation of ``idx`` (0 if there is a repeat) and the sorted tuple."""
    idx = tuple(idx)
    if len(set(idx)) < len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


@dataclass(frozen=True, order=True)
class MinorSymbol:
    """The minor ``[rows|cols]`` with strictly increasing index tuples."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        rows, cols = tuple(self.rows), tuple(self.cols)
        if len(rows) != len(cols):
            raise ValueError(f"minor [{rows}|{cols}] is not square")
        for idx in (rows, cols):
            if any(a >= b for a, b in zip(idx, idx[1:])) or any(i < 1 for i in idx):
                raise ValueError(f"minor indices must be strictly increasing and positive: {idx}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @staticmethod
    def signed(rows: Sequence[int], cols: Sequence[int]) -> tuple[int, "MinorSymbol | None"]:
        """Normalize possibly unsorted indices: ``[rows|cols] = sign * [sorted|sorted]``."""
        sr, r = _sort_sign(rows)
        sc, c = _sort_sign(cols)
        if sr * sc == 0:
            return 0, None
        return sr * sc, MinorSymbol(r, c)

    @property
    def size(self) -> int:
        return len(self.rows)

    def transpose(self) -> "MinorSymbol":
        return MinorSymbol(self.cols, self.rows)

    def poly(self) -> SparsePoly:
        return minor_poly(self.rows, self.cols)

    def __str__(self):
        return f"[{''.join(map(str, self.rows))}|{''.join(map(str, self.cols))}]"


Term = tuple  # (coeff, tuple[MinorSymbol, ...])


class RelationExpr:
    """A rational linear combination of products of minors, kept in canonical form.

    Factors of each product are sorted, size-0 minors (equal to 1) are dropped
    and like terms are combined.  Two expressions are equal iff their canonical
    term lists agree.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple] = ()):
        acc: dict = {}
        for coeff, factors in terms:
            if not coeff:
                continue
            key = tuple(sorted(f for f in factors if f.size > 0))
            acc[key] = acc.get(key, 0) + coeff
        self.terms = tuple(sorted(((_normalize(c), k) for k, c in acc.items() if c), key=lambda ck: ck[1]))

    @classmethod
    def from_products(cls, products: Iterable[tuple]) -> "RelationExpr":
        """Build from ``(coeff, [(rows, cols), ...])`` with possibly unsorted or repeated indices."""
        out = []
        for coeff, factors in products:
            sign, syms = 1, []
            for rows, cols in factors:
                s, sym = MinorSymbol.signed(rows, cols)
                sign *= s
                if not sign:
                    break
                syms.append(sym)
            if sign:
                out.append((coeff * sign, tuple(syms)))
        return cls(out)

    def __add__(self, other: "RelationExpr") -> "RelationExpr":
        return RelationExpr(self.terms + other.terms)

    def __sub__(self, other: "RelationExpr") -> "RelationExpr":
        return self + other.scale(-1)

    def __neg__(self) -> "RelationExpr":
        return self.scale(-1)

    def scale(self, c) -> "RelationExpr":
        return RelationExpr((c * k, f) for k, f in self.terms)

    def times(self, factors: Sequence[MinorSymbol]) -> "RelationExpr":
        return RelationExpr((k, f + tuple(factors)) for k, f in self.terms)

    def __mul__(self, other: "RelationExpr") -> "RelationExpr":
        return RelationExpr((a * b, fa + fb) for a, fa in self.terms for b, fb in other.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, RelationExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def symbols(self) -> set:
        return {f for _, fs in self.terms for f in fs}

    def max_factors(self) -> int:
        return max((len(fs) for _, fs in self.terms), default=0)

    def max_size(self) -> int:
        return max((f.size for f in self.symbols()), default=0)

    def bounds(self) -> tuple[int, int]:
        syms = self.symbols()
        return (max((max(f.rows) for f in syms), default=0), max((max(f.cols) for f in syms), default=0))

    def column_multisets(self) -> set:
        return {tuple(sorted(j for f in fs for j in f.cols)) for _, fs in self.terms}

    def is_homogeneous(self) -> bool:
        """Whether the multiset of column indices is the same in every term."""
        return len(self.column_multisets()) <= 1

    def transpose(self) -> "RelationExpr":
        return RelationExpr((c, tuple(f.transpose() for f in fs)) for c, fs in self.terms)

    def to_json(self) -> list:
        return [
            {"coeff": format_rational(c), "factors": [[list(f.rows), list(f.cols)] for f in fs]}
            for c, fs in self.terms
        ]

    @classmethod
    def from_json(cls, data: list) -> "RelationExpr":
        return cls.from_products(
            (parse_rational(str(t["coeff"])), [(tuple(r), tuple(c)) for r, c in t["factors"]]) for t in data
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, fs in self.terms:
            body = "".join(map(str, fs)) or "1"
            parts.append(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else format_rational(abs(c))}{body}")
        return " ".join(parts)

    __repr__ = __str__


def expand(rel: RelationExpr, m: int | None = None, n: int | None = None) -> SparsePoly:
    """Exact expansion of ``rel`` in the entries of the generic ``m x n`` matrix."""
    if m is not None or n is not None:
        rm, rn = rel.bounds()
        if (m is not None and rm > m) or (n is not None and rn > n):
            raise ValueError(f"relation uses indices up to ({rm}, {rn}), outside a {m}x{n} matrix")
    total: dict = {}
    for coeff, factors in rel.terms:
        prod: dict = {(): coeff}
        for f in factors:
            prod = poly_mul(prod, _minor_dict(f.rows, f.cols))
            if not prod:
                break
        total = poly_add(total, prod)
    return SparsePoly(total)


# ---------------------------------------------------------------------------
# Zero testing


@dataclass(frozen=True)
class ExactEnvelope:
    """Limits within which full expansion is used by ``is_zero(mode="auto")``."""

    max_entries: int = 36
    max_factors: int = 4
    max_minor_size: int = 4

    def admits(self, rel: RelationExpr) -> bool:
        m, n = rel.bounds()
        return m * n <= self.max_entries and rel.max_factors() <= self.max_factors and rel.max_size() <= self.max_minor_size


@dataclass(frozen=True)
class ZeroVerdict:
    zero: bool
    mode: str
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"status": "zero" if self.zero else "nonzero", "mode": self.mode}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _det_mod(rows: list[list[int]], p: int) -> int:
    a = [r[:] for r in rows]
    n, d = len(a), 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for r in range(c + 1, n):
            f = a[r][c] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return d % p


def evaluate_mod(rel: RelationExpr, values: list[list[int]], p: int = DEFAULT_PRIME) -> int:
    """Value of ``rel`` at an integer matrix, modulo ``p``."""
    cache: dict = {}
    total = 0
    for coeff, factors in rel.terms:
        c = Fraction(coeff)
        term = c.numerator * pow(c.denominator, -1, p) % p
        for f in factors:
            if f not in cache:
                cache[f] = _det_mod([[values[i - 1][j - 1] for j in f.cols] for i in f.rows], p)
            term = term * cache[f] % p
        total = (total + term) % p
    return total


def is_zero(
    rel: RelationExpr,
    mode: str = "auto",
    seed: int = 0,
    trials: int = 20,
    p: int = DEFAULT_PRIME,
    envelope: ExactEnvelope = ExactEnvelope(),
) -> ZeroVerdict:
    """Decide whether ``rel`` vanishes on every matrix.

    ``exact`` expands fully.  ``probabilistic`` evaluates at ``trials`` random
    matrices over ``F_p``; a nonzero value is a certificate of non-vanishing
    and is returned as a witness, while ``trials`` zero values bound the error
    probability by ``(deg / p) ** trials``.  ``auto`` uses ``exact`` inside
    ``envelope`` and ``probabilistic`` outside it.
    """
    if mode == "auto":
        mode = "exact" if envelope.admits(rel) else "probabilistic"
    if mode == "exact":
        return ZeroVerdict(expand(rel).is_zero(), "exact")
    if mode != "probabilistic":
        raise ValueError(f"unknown mode {mode!r}")
    m, n = rel.bounds()
    rng = random.Random(seed)
    for trial in range(trials):
        values = [[rng.randrange(p) for _ in range(n)] for _ in range(m)]
        val = evaluate_mod(rel, values, p)
        if val:
            return ZeroVerdict(False, "probabilistic", {"trial": trial, "matrix": values, "value": val, "prime": p})
    return ZeroVerdict(True, "probabilistic")


# ---------------------------------------------------------------------------
# Incremental sparse echelon form


class SpanReducer:
    """Exact incremental echelon basis of sparse vectors, tracking combinations.

    Vectors are dicts from sortable keys to rationals.  Each basis vector has
    its largest key as pivot with coefficient 1, and remembers which tagged
    input vectors it is a combination of.
    """

    def __init__(self):
        self.basis: dict = {}

    def __len__(self) -> int:
        return len(self.basis)

    def reduce(self, vec: dict, comb: dict | None = None) -> tuple[dict, dict]:
        """Reduce ``vec`` against the basis; returns ``(residual, comb)`` with
        ``vec + sum(comb[tag] * input[tag]) == residual`` when ``comb`` starts empty."""
        vec = {k: Fraction(v) for k, v in vec.items() if v}
        comb = dict(comb or {})
        residual: dict = {}
        while vec:
            k = max(vec)
            c = vec.pop(k)
            entry = self.basis.get(k)
            if entry is None:
                residual[k] = c
                continue
            bvec, bcomb = entry
            for kk, v in bvec.items():
                if kk == k:
                    continue
                nv = vec.get(kk, 0) - c * v
                if nv:
                    vec[kk] = nv
                else:
                    vec.pop(kk, None)
            for tag, v in bcomb.items():
                nv = comb.get(tag, 0) - c * v
                if nv:
                    comb[tag] = nv
                else:
                    comb.pop(tag, None)
        return residual, comb

    def add(self, vec: dict, tag) -> dict | None:
        """Insert a tagged vector.  If it is dependent, return the relation
        ``{tag: coeff}`` with ``sum coeff * input[tag] == 0``; else ``None``."""
        residual, comb = self.reduce(vec, {tag: Fraction(1)})
        if not residual:
            return comb
        k = max(residual)
        inv = 1 / residual[k]
        self.basis[k] = ({kk: v * inv for kk, v in residual.items()}, {t: v * inv for t, v in comb.items()})
        return None

    def express(self, vec: dict) -> dict | None:
        """Coefficients ``{tag: c}`` with ``sum c * input[tag] == vec``, or ``None``."""
        residual, comb = self.reduce(vec)
        if residual:
            return None
        return {t: _normalize(-v) for t, v in comb.items() if v}


def group_by_multidegree(items: Iterable[tuple]) -> dict:
    """Bucket ``(key, multidegree)`` pairs by multidegree."""
    out: dict = {}
    for key, md in items:
        out.setdefault(md, []).append(key)
    return out


def symbol_multidegree(factors: Sequence[MinorSymbol]) -> tuple:
    return (tuple(sorted(i for f in factors for i in f.rows)), tuple(sorted(j for f in factors for j in f.cols)))


def counter_sub(big: Counter, small: Counter) -> Counter | None:
    out = Counter(big)
    for k, v in small.items():
        if out[k] < v:
            return None
        out[k] -= v
        if not out[k]:
            del out[k]
    return out
