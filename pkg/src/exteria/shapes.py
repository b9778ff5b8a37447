"""Shape statistics of products of minors and the G-stable prime ideals of A_t.

Everything here is arithmetic on partitions: membership of an isotypic
component ``M_lambda`` in ``A_t`` or in one of its G-stable primes is decided
from ``gamma_j``, ``pi_j`` and ``epsilon`` of the shape alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


@dataclass(frozen=True, order=True)
class Shape:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(self.parts)
        if any(x < 1 for x in p):
            raise ValueError(f"shape parts must be positive: {p}")
        if any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"shape parts must be non-increasing: {p}")
        object.__setattr__(self, "parts", p)

    @classmethod
    def of(cls, *parts: int) -> "Shape":
        return cls(tuple(parts))

    @property
    def boxes(self) -> int:
        return sum(self.parts)

    def fits(self, bound: int) -> bool:
        return all(x <= bound for x in self.parts)


def gamma(shape: Shape, j: int) -> int:
    """Number of boxes of the shape lying in columns ``>= j`` of its diagram, summed per row."""
    if j < 1:
        raise ValueError(f"gamma_j needs j >= 1, got {j}")
    return sum(max(x - j + 1, 0) for x in shape.parts)


def pi(shape: Shape, j: int, t: int) -> Fraction:
    if not 1 <= j <= t:
        raise ValueError(f"pi_j needs 1 <= j <= t={t}, got {j}")
    return gamma(shape, j) - Fraction(gamma(shape, 1) * (t - j + 1), t)


def epsilon(shape: Shape, m: int) -> tuple[int, ...]:
    """Multiplicities of part sizes 1..m."""
    return tuple(sum(1 for x in shape.parts if x == i) for i in range(1, m + 1))


def in_At_support(shape: Shape, t: int) -> bool:
    """Whether ``M_lambda`` is a summand of the algebra of ``t``-minors."""
    if gamma(shape, 1) % t:
        return False
    if t == 1:
        return True
    return pi(shape, 2, t) >= 0


def pi_formula_rhs(shape: Shape, u: int, t: int) -> Fraction:
    """``(u-1) pi_2 + sum_{k=1}^{u-2} (u-1-k) eps_k``, which equals ``pi_u``."""
    if not 3 <= u <= t:
        raise ValueError(f"need 3 <= u <= t={t}, got {u}")
    eps = epsilon(shape, max(u, 1))
    return (u - 1) * pi(shape, 2, t) + sum((u - 1 - k) * eps[k - 1] for k in range(1, u - 1))


def pi_formula_literal_rhs(shape: Shape, u: int, t: int) -> Fraction:
    """``(u-1) pi_2 + sum_{k=1}^{u-2} eps_k`` with unit weights.

    Agrees with ``pi_u`` for ``u = 3`` only; kept so the discrepancy can be checked.
    """
    if not 3 <= u <= t:
        raise ValueError(f"need 3 <= u <= t={t}, got {u}")
    eps = epsilon(shape, max(u, 1))
    return (u - 1) * pi(shape, 2, t) + sum(eps[k - 1] for k in range(1, u - 1))


def pi_formula_check(shape: Shape, t: int) -> bool:
    return all(pi(shape, u, t) == pi_formula_rhs(shape, u, t) for u in range(3, t + 1))


def partitions(n: int, max_part: int | None = None) -> Iterator[Shape]:
    """All shapes with exactly ``n`` boxes and parts ``<= max_part``, reverse-lex order."""
    if max_part is None:
        max_part = n

    def rec(rem, cap):
        if rem == 0:
            yield ()
            return
        for k in range(min(rem, cap), 0, -1):
            for tail in rec(rem - k, k):
                yield (k,) + tail

    for p in rec(n, max_part):
        yield Shape(p)


def shapes_up_to(max_boxes: int, max_part: int | None = None) -> Iterator[Shape]:
    for n in range(1, max_boxes + 1):
        yield from partitions(n, max_part)


@dataclass(frozen=True)
class PrimeIdeal:
    """A G-stable prime of ``A_t(m, n)``.

    ``kind`` is ``"pq"`` for ``p_i + q_j`` (with ``p_-1 = q_{m+1} = 0``), or
    ``"q"`` for ``q_j`` with ``j in {t, t+1}``.  ``face`` lists the facets
    ``F_0..F_m`` whose intersection is the face of the support cone left
    outside the ideal; ``None`` in the degenerate cases ``t = 1`` and ``t = m``.
    """

    kind: str
    i: int | None
    j: int
    m: int
    face: frozenset | None

    @property
    def label(self) -> str:
        if self.kind == "q":
            return f"q{self.j}"
        parts = []
        if self.i >= 0:
            parts.append(f"p{self.i}")
        if self.j <= self.m:
            parts.append(f"q{self.j}")
        return "+".join(parts) if parts else "0"


def _pq(i: int, j: int, m: int, t: int) -> PrimeIdeal:
    face = frozenset(range(0, i + 1)) | frozenset(range(j, m + 1)) if 1 < t < m else None
    return PrimeIdeal("pq", i, j, m, face)


def _q(j: int, m: int, t: int) -> PrimeIdeal:
    face = None
    if 1 < t < m:
        if j == t:
            face = frozenset(range(0, m + 1))
        else:
            face = frozenset(range(0, t)) | frozenset(range(t + 1, m + 1))
    return PrimeIdeal("q", None, j, m, face)


def prime_catalog(m: int, t: int) -> list[PrimeIdeal]:
    """All ``t(m-t)+2`` G-stable primes of ``A_t(m, n)`` (``m <= n``), zero ideal first."""
    if not 1 <= t <= m:
        raise ValueError(f"need 1 <= t <= m, got t={t}, m={m}")
    out = []
    for i in range(-1, t - 1):
        for j in range(m + 1, t + 1, -1):
            out.append(_pq(i, j, m, t))
    out.append(_q(t + 1, m, t))
    out.append(_q(t, m, t))
    return out


def shape_in_prime(shape: Shape, prime: PrimeIdeal, t: int) -> bool:
    """Whether ``M_lambda`` lies in ``prime``; the shape must be in the support of ``A_t``."""
    if not in_At_support(shape, t):
        raise ValueError(f"shape {shape.parts} is not in the support of A_{t}")
    in_q = prime.j <= prime.m and gamma(shape, prime.j) > 0
    if prime.kind == "q":
        return in_q
    in_p = prime.i >= 0 and pi(shape, prime.i + 2, t) > 0
    return in_p or in_q


def orbit_to_prime(u: int, k: int | None, m: int, t: int) -> PrimeIdeal:
    """The prime of the closure of the orbit with small rank ``u`` and parameter ``k``."""
    if u == 0:
        return _q(t, m, t)
    if u == 1:
        return _q(t + 1, m, t)
    if not (2 <= u <= t + 1 and k is not None and 1 <= k <= m - t):
        raise ValueError(f"inadmissible orbit parameters u={u}, k={k} for m={m}, t={t}")
    return _pq(t - u, t + 1 + k, m, t)
