"""Exact scalars, dense matrices, index combinations and exact linear algebra.

Rational arithmetic uses :class:`fractions.Fraction` (plain ``int`` entries are
kept as ints, which is both exact and fast).  Prime-field arithmetic uses
:class:`Mod`.  Rank and determinant over the rationals are computed by
fraction-free elimination on integer rows.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_PRIME = 2**61 - 1


class Mod:
    """Residue modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int = DEFAULT_PRIME):
        if isinstance(v, Fraction):
            v = v.numerator * pow(v.denominator, -1, p)
        self.v = int(v) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pow__(self, k: int):
        return Mod(pow(self.v, k, self.p), self.p)

    def inverse(self) -> "Mod":
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return Mod(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"


def parse_rational(text: str) -> Fraction | int:
    """Parse ``"p/q"`` or an integer literal."""
    value = Fraction(text.strip())
    return value.numerator if value.denominator == 1 else value


def format_rational(x) -> str:
    if isinstance(x, Mod):
        return f"{x.v} mod {x.p}"
    return str(Fraction(x))


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, bool):
        return int(x)
    return x


class Matrix:
    """Immutable dense matrix with exact entries, stored row-major."""

    __slots__ = ("rows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(_normalize(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged rows")
        self.ncols = ncols
        self._hash = None

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, diag: Sequence) -> "Matrix":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        return [x for r in self.rows for x in r]

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows), self.nrows) if self.rows else Matrix([], 0)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [() for _ in range(other.ncols)]
        return Matrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows),
            other.ncols,
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(([a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(([-a for a in r] for r in self.rows), self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix(([c * a for a in r] for r in self.rows), self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        """Select 1-based ``rows`` and ``cols``."""
        return Matrix(([self.rows[i - 1][j - 1] for j in cols] for i in rows), len(cols))

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({[list(map(format_rational, r)) for r in self.rows]})"

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join(format_rational(x) for x in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        """Parse the matrix text format: a header ``m n`` then ``m`` rows."""
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("empty matrix file")
        try:
            m, n = (int(x) for x in lines[0].split())
        except ValueError:
            raise ValueError(f"bad matrix header {lines[0]!r}; expected 'm n'") from None
        body = lines[1:]
        if len(body) != m:
            raise ValueError(f"expected {m} rows, found {len(body)}")
        rows = []
        for k, ln in enumerate(body, 1):
            fields = ln.split()
            if len(fields) != n:
                raise ValueError(f"row {k}: expected {n} entries, found {len(fields)}")
            try:
                rows.append([parse_rational(f) for f in fields])
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"row {k}: malformed rational in {ln!r}") from None
        return cls(rows, n)


def _is_modular(M: Matrix) -> bool:
    return any(isinstance(x, Mod) for r in M.rows for x in r)


def _integer_rows(M: Matrix) -> tuple[list[list[int]], int]:
    """Clear denominators row by row; return int rows and the product of scale factors."""
    out = []
    scale = 1
    for r in M.rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        if den == 1:
            out.append(list(r))
        else:
            out.append([int(x * den) for x in r])
        scale *= den
    return out, scale


def _int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by gcd-normalized fraction-free elimination."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        p = pr[c]
        for i in range(rank + 1, len(rows)):
            ri = rows[i]
            a = ri[c]
            if a:
                new = [p * x - a * y for x, y in zip(ri, pr)]
                g = 0
                for x in new:
                    if x:
                        g = math.gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    new = [x // g for x in new]
                rows[i] = new
        rank += 1
        if rank == len(rows):
            break
    return rank


def _bareiss_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    a = [r[:] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _modular_echelon(M: Matrix) -> tuple[int, Mod]:
    """Return (rank, determinant-if-square) by plain elimination over F_p."""
    p = next(x.p for r in M.rows for x in r if isinstance(x, Mod))
    a = [[x.v if isinstance(x, Mod) else Mod(x, p).v for x in r] for r in M.rows]
    nr, nc = M.shape
    rank = 0
    det = 1
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][c]), None)
        if piv is None:
            det = 0
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            det = -det
        pv = a[rank][c]
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        for i in range(rank + 1, nr):
            f = a[i][c] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank, Mod(det, p)


def rank(M: Matrix) -> int:
    """Exact rank over the field of the entries (rationals or F_p)."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if _is_modular(M):
        return _modular_echelon(M)[0]
    return _int_rank(_integer_rows(M)[0])


def det(M: Matrix):
    if M.nrows != M.ncols:
        raise ValueError(f"determinant of non-square {M.shape} matrix")
    if M.nrows == 0:
        return 1
    if _is_modular(M):
        return _modular_echelon(M)[1]
    rows, scale = _integer_rows(M)
    d = _bareiss_det(rows)
    return d if scale == 1 else _normalize(Fraction(d, scale))


def check_combination(c: Sequence[int], n: int) -> tuple[int, ...]:
    c = tuple(c)
    if any(not 1 <= i <= n for i in c):
        raise ValueError(f"index out of range 1..{n} in {c}")
    if any(a >= b for a, b in zip(c, c[1:])):
        raise ValueError(f"combination {c} is not strictly increasing")
    return c


def minor(M: Matrix, a: Sequence[int], b: Sequence[int]):
    """Determinant of the submatrix on 1-based rows ``a`` and columns ``b``."""
    if len(a) != len(b):
        raise ValueError(f"minor needs |a| = |b|, got {len(a)} and {len(b)}")
    check_combination(a, M.nrows)
    check_combination(b, M.ncols)
    return det(M.submatrix(a, b))


def combinations(n: int, t: int) -> list[tuple[int, ...]]:
    """All ``t``-subsets of ``1..n`` in lexicographic order."""
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    return list(itertools.combinations(range(1, n + 1), t))


def combination_index(c: Sequence[int], n: int) -> int:
    """Lexicographic position of ``c`` among the ``len(c)``-subsets of ``1..n``."""
    t = len(c)
    idx = 0
    prev = 0
    for i, ci in enumerate(c):
        for j in range(prev + 1, ci):
            idx += math.comb(n - j, t - i - 1)
        prev = ci
    return idx


def combination_at(index: int, n: int, t: int) -> tuple[int, ...]:
    out = []
    j = 1
    for i in range(t):
        while True:
            block = math.comb(n - j, t - i - 1)
            if index < block:
                break
            index -= block
            j += 1
        out.append(j)
        j += 1
    return tuple(out)


@dataclass(frozen=True)
class LinearSolution:
    """Exact solution set of ``A x = b``: ``particular + span(kernel)``.

    ``particular`` is ``None`` when the system is inconsistent.
    """

    particular: tuple | None
    kernel: tuple[tuple, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def rref(rows: Sequence[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of sparse rows (``{col: value}``), canonical in column order."""
    work = [dict(r) for r in rows if r]
    pivots: list[int] = []
    done: list[dict] = []
    for c in range(ncols):
        piv = next((k for k, r in enumerate(work) if r.get(c)), None)
        if piv is None:
            continue
        row = work.pop(piv)
        inv = 1 / Fraction(row[c])
        row = {k: _normalize(v * inv) for k, v in row.items()}
        for lst in (work, done):
            for k, r in enumerate(lst):
                f = r.get(c)
                if f:
                    for j, v in row.items():
                        nv = r.get(j, 0) - f * v
                        if nv:
                            r[j] = nv
                        else:
                            r.pop(j, None)
        work = [r for r in work if r]
        done.append(row)
        pivots.append(c)
    return done, pivots


def solve_linear(A: Matrix, b: Sequence) -> LinearSolution:
    """Solve ``A x = b`` exactly over the rationals."""
    m, n = A.shape
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    rows = []
    for r, bi in zip(A.rows, b):
        d = {j: v for j, v in enumerate(r) if v}
        if bi:
            d[n] = bi
        rows.append(d)
    red, pivots = rref(rows, n + 1)
    if n in pivots:
        return LinearSolution(None, ())
    x = [0] * n
    for row, c in zip(red, pivots):
        x[c] = _normalize(Fraction(row.get(n, 0)))
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, c in zip(red, pivots):
            if f in row:
                v[c] = _normalize(-Fraction(row[f]))
        kernel.append(tuple(v))
    return LinearSolution(tuple(x), tuple(kernel))


def random_int_matrix(rng: random.Random, m: int, n: int, bound: int = 9) -> Matrix:
    return Matrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)], n)


def random_matrix(m: int, n: int, target_rank: int, seed: int | random.Random) -> Matrix:
    """Random integer ``m x n`` matrix of exactly ``target_rank``, deterministic in ``seed``."""
    if not 0 <= target_rank <= min(m, n):
        raise ValueError(f"rank {target_rank} infeasible for a {m}x{n} matrix")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if target_rank == 0:
        return Matrix.zeros(m, n)
    while True:
        M = random_int_matrix(rng, m, target_rank) @ random_int_matrix(rng, target_rank, n)
        if rank(M) == target_rank:
            return M


def random_invertible(n: int, rng: random.Random, bound: int = 9) -> Matrix:
    while True:
        M = random_int_matrix(rng, n, n, bound)
        if det(M) != 0:
            return M


def inverse(M: Matrix) -> Matrix:
    n, nc = M.shape
    if n != nc:
        raise ValueError("inverse of non-square matrix")
    rows = []
    for i, r in enumerate(M.rows):
        d = {j: v for j, v in enumerate(r) if v}
        d[n + i] = 1
        rows.append(d)
    red, pivots = rref(rows, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([[row.get(n + j, 0) for j in range(n)] for row in red[:n]], n)
