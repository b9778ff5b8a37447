"""The generating sets Phi_0, Phi_1, Phi_2 of t-minors and certificates that
inverting ``F = delta_{t-1} delta_t delta_{t+1}`` makes ``K[Phi_0]`` equal to
the whole algebra of ``t``-minors.

A certificate for a minor ``M`` is an exact identity
``cofactor^k * M = sum c * prod(N)`` with every ``N`` in the target set of the
step (or an already certified minor), found by bounded-degree linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .polys import MinorSymbol, RelationExpr, SparsePoly, expand, minor_poly
from .relations import Membership, subalgebra_membership


def _check_range(m: int, n: int, t: int):
    if not 1 <= t < m <= n:
        raise ValueError(f"need 1 <= t < m <= n, got (m, n, t) = ({m}, {n}, {t})")


def _a(idx, i):
    """``idx_i`` with the convention ``idx_0 = 0``."""
    return idx[i - 1] if i >= 1 else 0


def in_phi(level: int, M: MinorSymbol, t: int) -> bool:
    a, b = M.rows, M.cols
    if level == 0:
        return (
            (a[-1] <= t + 1 and b[-1] <= t + 1)
            or (_a(a, t - 1) == t - 1 and _a(b, t - 1) == t - 1)
            or (a[-1] == t and _a(b, t - 1) <= t)
            or (_a(a, t - 1) <= t and b[-1] == t)
        )
    if level == 1:
        return (
            (a[-1] <= t + 1 and b[-1] <= t + 1)
            or (_a(a, t - 1) == t - 1 and _a(b, t - 1) == t - 1)
            or a[-1] == t
            or b[-1] == t
        )
    if level == 2:
        return (_a(a, t - 1) <= t and _a(b, t - 1) <= t) or a[-1] == t or b[-1] == t
    raise ValueError(f"level must be 0, 1 or 2, got {level}")


def all_minors(m: int, n: int, t: int) -> list[MinorSymbol]:
    return [MinorSymbol(a, b) for a in combinations(range(1, m + 1), t) for b in combinations(range(1, n + 1), t)]


@dataclass(frozen=True)
class PhiSet:
    level: int
    m: int
    n: int
    t: int
    members: tuple[MinorSymbol, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, M) -> bool:
        return M in set(self.members)


def phi_set(level: int, m: int, n: int, t: int) -> PhiSet:
    _check_range(m, n, t)
    return PhiSet(level, m, n, t, tuple(M for M in all_minors(m, n, t) if in_phi(level, M, t)))


def delta(i: int) -> MinorSymbol:
    return MinorSymbol(tuple(range(1, i + 1)), tuple(range(1, i + 1)))


def f_identity(t: int) -> RelationExpr:
    """``delta_{t-1} delta_{t+1} - det([d|d], [d|e]; [e|d], [e|e])`` with ``d = 1..t``, ``e = 1..t-1,t+1``."""
    d = tuple(range(1, t + 1))
    e = tuple(range(1, t)) + (t + 1,)
    lhs = RelationExpr([(1, (delta(t - 1), delta(t + 1)))])
    det2 = RelationExpr.from_products([(1, [(d, d), (e, e)]), (-1, [(d, e), (e, d)])])
    return lhs - det2


@dataclass(frozen=True)
class DenominatorF:
    poly: SparsePoly
    identity: RelationExpr
    identity_holds: bool
    phi0_representation: Membership


def denominator_F(m: int, n: int, t: int) -> DenominatorF:
    """``F`` as a polynomial, the determinantal identity for ``delta_{t-1} delta_{t+1}``,
    and its representation in ``K[Phi_0]`` found by the membership search."""
    _check_range(m, n, t)
    F = minor_poly(delta(t - 1).rows, delta(t - 1).cols) * minor_poly(delta(t).rows, delta(t).cols)
    F = F * minor_poly(delta(t + 1).rows, delta(t + 1).cols)
    ident = f_identity(t)
    phi0 = phi_set(0, m, n, t).members
    target = expand(RelationExpr([(1, (delta(t - 1), delta(t + 1)))]))
    rep = subalgebra_membership(target, [f.poly() for f in phi0], 2)
    return DenominatorF(F, ident, expand(ident).is_zero(), rep)


STEP_TARGET = {1: 2, 2: 1, 3: 0}


def cofactor(step: int, t: int) -> tuple[MinorSymbol, ...]:
    if step in (1, 3):
        return (delta(t),)
    if step == 2:
        return tuple(d for d in (delta(t - 1), delta(t + 1)) if d.size > 0)
    raise ValueError(f"step must be 1, 2 or 3, got {step}")


@dataclass(frozen=True)
class Certificate:
    """``cofactor^k * M == sum(c * prod(factors))`` over the listed terms."""

    minor: MinorSymbol
    step: int
    k: int
    terms: tuple  # (coeff, tuple[MinorSymbol, ...])
    cofactor: tuple[MinorSymbol, ...]
    candidates: int = 0

    def identity(self) -> RelationExpr:
        lhs = RelationExpr([(1, self.cofactor * self.k + (self.minor,))])
        return lhs - RelationExpr(self.terms)

    def verify(self) -> bool:
        return expand(self.identity()).is_zero()

    def to_json(self) -> dict:
        return {
            "minor": str(self.minor),
            "step": self.step,
            "k": self.k,
            "terms": RelationExpr(self.terms).to_json(),
        }


def critical_claim_search(
    M: MinorSymbol,
    step: int,
    m: int,
    n: int,
    t: int,
    k_max: int = 3,
    degree_bound: int | None = None,
    extra=(),
) -> Certificate | None:
    """Least ``k <= k_max`` with ``cofactor^k * M`` a polynomial of degree
    ``<= degree_bound`` in the step's target set plus ``extra``.

    Step 1 targets ``Phi_2`` with cofactor ``delta_t``, step 2 targets
    ``Phi_1`` with ``delta_{t-1} delta_{t+1}``, step 3 targets ``Phi_0`` with
    ``delta_t``.  Returns ``None`` when nothing is found within the bounds,
    which is not a proof of non-membership.
    """
    _check_range(m, n, t)
    if degree_bound is None:
        degree_bound = t + 2
    level = STEP_TARGET.get(step)
    if level is None:
        raise ValueError(f"step must be 1, 2 or 3, got {step}")
    gens = list(phi_set(level, m, n, t).members)
    gens += [e for e in sorted(set(extra)) if e not in set(gens) and e != M]
    cof = cofactor(step, t)
    if M in set(gens):
        return Certificate(M, step, 0, ((1, (M,)),), cof)
    polys = [g.poly() for g in gens]
    for k in range(1, k_max + 1):
        lhs = RelationExpr([(1, cof * k + (M,))])
        factors = sum(f.size for f in cof) * k // t + 1
        if factors > degree_bound:
            break
        res = subalgebra_membership(expand(lhs), polys, degree_bound)
        if res.found:
            terms = tuple((c, tuple(gens[i] for i in idx)) for c, idx in res.terms)
            return Certificate(M, step, k, terms, cof, res.candidates)
    return None


@dataclass
class LocalizeReport:
    m: int
    n: int
    t: int
    phi_sizes: tuple[int, int, int]
    certificates: dict = field(default_factory=dict)  # (step, minor) -> Certificate
    need: dict = field(default_factory=dict)  # minor -> (a, b) exponents of delta_t, delta_{t-1}delta_{t+1}
    failures: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.failures and len(self.need) == len(all_minors(self.m, self.n, self.t))

    def f_power(self, M: MinorSymbol) -> int:
        return max(self.need[M])

    def to_json(self) -> dict:
        rows = []
        for M in sorted(self.need):
            certs = [self.certificates[(s, M)].to_json() for s in (1, 2, 3) if (s, M) in self.certificates]
            a, b = self.need[M]
            rows.append({"minor": str(M), "delta_t_power": a, "delta_pair_power": b, "F_power": max(a, b), "steps": certs})
        return {
            "m": self.m,
            "n": self.n,
            "t": self.t,
            "phi0": self.phi_sizes[0],
            "phi1": self.phi_sizes[1],
            "phi2": self.phi_sizes[2],
            "mn": self.m * self.n,
            "complete": self.complete,
            "failures": [str(M) for M in self.failures],
            "certificates": rows,
        }


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _certify_level(source, level_set, step, m, n, t, k_max, degree_bound, base_need, report):
    """Certify every minor in ``source`` into ``K[level_set]``, growing the
    generator set with minors certified earlier in this step.  Returns the
    per-minor need within this step."""
    need = {M: base_need(M) for M in level_set}
    pending = sorted(M for M in source if M not in need)
    shift = (1, 0) if step in (1, 3) else (0, 1)
    progress = True
    while pending and progress:
        progress = False
        still = []
        for M in pending:
            extra = [N for N in need if N not in level_set]
            cert = critical_claim_search(M, step, m, n, t, k_max, degree_bound, extra)
            if cert is None:
                still.append(M)
                continue
            worst = (0, 0)
            for _, fs in cert.terms:
                tot = (0, 0)
                for N in fs:
                    tot = _add(tot, need[N])
                worst = (max(worst[0], tot[0]), max(worst[1], tot[1]))
            need[M] = _add(worst, (shift[0] * cert.k, shift[1] * cert.k))
            report.certificates[(step, M)] = cert
            progress = True
        pending = still
    return need, pending


def verify_localize(m: int, n: int, t: int, k_max: int = 3, degree_bound: int | None = None) -> LocalizeReport:
    """Certificates clearing every ``t``-minor into ``K[Phi_0]`` by a power of ``F``.

    Runs the three steps from the smallest set outward: ``Phi_1`` into
    ``Phi_0``, then ``Phi_2`` into ``Phi_1``, then every minor into ``Phi_2``.
    Each certificate is checked by exact expansion.  ``need[M] = (a, b)``
    means ``delta_t^a (delta_{t-1} delta_{t+1})^b M`` lies in ``K[Phi_0]``, so
    ``F^max(a, b) M`` does too.
    """
    _check_range(m, n, t)
    phi = {lv: phi_set(lv, m, n, t).members for lv in (0, 1, 2)}
    report = LocalizeReport(m, n, t, tuple(len(phi[lv]) for lv in (0, 1, 2)))
    everything = all_minors(m, n, t)

    need3, _ = _certify_level(phi[1], set(phi[0]), 3, m, n, t, k_max, degree_bound, lambda M: (0, 0), report)
    lv1 = {M for M in phi[1] if M in need3}
    need2, _ = _certify_level(phi[2], lv1, 2, m, n, t, k_max, degree_bound, need3.__getitem__, report)
    lv2 = {M for M in phi[2] if M in need2}
    need1, _ = _certify_level(everything, lv2, 1, m, n, t, k_max, degree_bound, need2.__getitem__, report)
    report.need = {M: need1[M] for M in everything if M in need1}
    report.failures = [M for M in everything if M not in need1]
    for cert in report.certificates.values():
        if not cert.verify():
            raise AssertionError(f"certificate for {cert.minor} at step {cert.step} does not expand to zero")
    return report


# Minors of Phi_2 \ Phi_1 for t = 2, each with the minors it may use besides Phi_1.
WALKTHROUGH = (
    (MinorSymbol((1, 3), (2, 4)), ()),
    (MinorSymbol((1, 4), (2, 3)), ()),
    (MinorSymbol((1, 4), (2, 4)), (MinorSymbol((1, 3), (2, 4)), MinorSymbol((1, 4), (2, 3)))),
    (MinorSymbol((2, 3), (2, 4)), (MinorSymbol((1, 3), (2, 4)), MinorSymbol((2, 3), (1, 4)))),
    (
        MinorSymbol((2, 4), (2, 4)),
        (
            MinorSymbol((1, 3), (2, 4)),
            MinorSymbol((2, 4), (1, 3)),
            MinorSymbol((1, 4), (2, 3)),
            MinorSymbol((2, 3), (1, 4)),
        ),
    ),
)


def walkthrough(m: int = 4, n: int = 4) -> list[tuple[MinorSymbol, Certificate | None]]:
    """Step-2 certificates with ``k = 1`` for the five ``Phi_2 \\ Phi_1`` cases, each
    allowed only ``Phi_1`` and the minors listed before it in :data:`WALKTHROUGH`."""
    return [(M, critical_claim_search(M, 2, m, n, 2, k_max=1, degree_bound=3, extra=extra)) for M, extra in WALKTHROUGH]
