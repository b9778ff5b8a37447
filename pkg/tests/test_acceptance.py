"""Acceptance criteria.  Each test prints one PASS/FAIL line (also collected in
the terminal summary) with its wall time against the allowed budget."""

import math
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import pytest

from exteria.core import Matrix, det, random_int_matrix, random_invertible, random_matrix, rank
from exteria.exterior import ExteriorPoint, compound, retract_project, standard_decomposables, theta
from exteria.localization import phi_set, verify_localize, walkthrough
from exteria.orbits import (
    admissible_orbits,
    f_v_eval,
    infinitesimal_orbit_dim,
    normal_form,
    orbit_dimension,
    orbit_rank,
    same_fiber_high_rank,
    same_fiber_rank_t,
    small_rank,
)
from exteria.polys import expand
from exteria.relations import (
    anti_straighten,
    append_index,
    degree3_catalog,
    genplu2_relation,
    genplu2_via_pushforward,
    plucker_relation,
    pushforward_relation,
    twelve_term_relation,
)
from exteria.shapes import (
    gamma,
    in_At_support,
    orbit_to_prime,
    pi,
    pi_formula_literal_rhs,
    pi_formula_rhs,
    prime_catalog,
    shapes_up_to,
)
from exteria.tangent import d_lambda_rank, relation_ideal_slice, sing_counting_check, tangent_dim_at

from cli_cases import invocations


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def report(log, idx, name, ok, clock, budget, detail):
    within = clock.elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] {idx:2d} {name}: {detail} ({clock.elapsed:.2f}s of {budget}s)"
    log.append(line)
    print(line)
    assert ok, detail
    assert within, f"took {clock.elapsed:.2f}s, budget {budget}s"


def test_01_rank_law(acceptance_log):
    checked, bad = 0, []
    with Clock() as c:
        for m in range(1, 7):
            for n in range(1, 7):
                for r in range(min(m, n) + 1):
                    for s in range(10):
                        B = random_matrix(m, n, r, 10_000 * m + 1000 * n + 100 * r + s)
                        for t in range(min(m, n) + 1):
                            checked += 1
                            if compound(B, t).rank() != math.comb(r, t):
                                bad.append((m, n, r, t, s))
    report(acceptance_log, 1, "rank law", not bad, c, 10, f"{checked} compounds, {len(bad)} mismatches")


def test_02_binet(acceptance_log):
    rng = random.Random(2)
    bad, checked = 0, 0
    with Clock() as c:
        for _ in range(20):
            m, k, n = (rng.randint(1, 5) for _ in range(3))
            A, B = random_int_matrix(rng, m, k), random_int_matrix(rng, k, n)
            for t in range(min(m, k, n) + 1):
                checked += 1
                if compound(A @ B, t).coords != compound(A, t).coords @ compound(B, t).coords:
                    bad += 1
    report(acceptance_log, 2, "Binet", bad == 0, c, 5, f"20 pairs, {checked} compound products, {bad} mismatches")


def test_03_normal_form_suite(acceptance_log):
    failures, checked = [], 0
    with Clock() as c:
        for m, n, t in [(4, 4, 2), (5, 5, 2), (5, 6, 3)]:
            for u, k in admissible_orbits(m, n, t):
                d = normal_form(u, k, m, n, t)
                checked += 1
                expected_rank = math.comb(u + k - 1, u - 1) if u >= 2 else u
                if d.rank() != expected_rank or orbit_rank(u, k) != expected_rank:
                    failures.append(("rank", m, n, t, u, k))
                if small_rank(d, "randomized", seed=17, trials=20) != u:
                    failures.append(("sr", m, n, t, u, k))
                for v in range(t + 1):
                    if (f_v_eval(d, v) == 0) != (u < t + 1 - v):
                        failures.append(("f_v", m, n, t, u, k, v))
    report(acceptance_log, 3, "normal-form suite", not failures, c, 60, f"{checked} orbits, failures {failures[:3]}")


def test_04_orbit_prime_catalog(acceptance_log):
    failures, cases = [], 0
    with Clock() as c:
        for m in range(3, 7):
            for n in range(m, 7):
                for t in range(2, m):
                    cases += 1
                    orbits = admissible_orbits(m, n, t)
                    primes = prime_catalog(m, t)
                    if not len(orbits) == len(primes) == t * (m - t) + 2:
                        failures.append(("count", m, n, t))
                    image = [orbit_to_prime(u, k, m, t).label for u, k in orbits]
                    if sorted(image) != sorted(p.label for p in primes):
                        failures.append(("bijection", m, n, t))
                    for u, k in orbits:
                        if orbit_dimension(u, k, m, n, t) != infinitesimal_orbit_dim(normal_form(u, k, m, n, t)):
                            failures.append(("dim", m, n, t, u, k))
                    if orbit_dimension(t + 1, m - t, m, n, t) != m * n:
                        failures.append(("dense", m, n, t))
                    if orbit_dimension(1, None, m, n, t) != (m - t) * t + (n - t) * t + 1:
                        failures.append(("rank1", m, n, t))
    report(acceptance_log, 4, "orbit/prime catalog", not failures, c, 5, f"{cases} (m,n,t) cases, failures {failures[:3]}")


def _pi_identity_failures(rhs):
    bad, checked = [], 0
    for shape in shapes_up_to(12):
        for t in range(3, 13):
            for u in range(3, t + 1):
                checked += 1
                if pi(shape, u, t) != rhs(shape, u, t):
                    bad.append((shape.parts, t, u))
    return bad, checked


def _support_consistent():
    for shape in shapes_up_to(12):
        for t in range(1, 13):
            g1 = sum(shape.parts)
            g2 = sum(max(x - 1, 0) for x in shape.parts)
            expected = g1 % t == 0 and (t == 1 or g2 * t >= g1 * (t - 1))
            if in_At_support(shape, t) != expected or gamma(shape, 1) != g1:
                return False
    return True


@pytest.mark.xfail(strict=True, reason="the unit-weight form of the pi identity is false for u >= 4")
def test_05_shape_calculus(acceptance_log):
    with Clock() as c:
        bad, checked = _pi_identity_failures(pi_formula_literal_rhs)
        support_ok = _support_consistent()
    first = bad[0] if bad else None
    detail = f"{checked} (shape, t, u) triples, {len(bad)} violate the unit-weight identity (first {first}); support consistent: {support_ok}"
    report(acceptance_log, 5, "shape calculus", not bad and support_ok, c, 10, detail)


def test_05b_shape_calculus_weighted_identity(acceptance_log):
    with Clock() as c:
        bad, checked = _pi_identity_failures(pi_formula_rhs)
        support_ok = _support_consistent()
    detail = f"{checked} triples with weights (u-1-k), {len(bad)} violations; support consistent: {support_ok}"
    report(acceptance_log, 5, "shape calculus (weighted identity)", not bad and support_ok, c, 10, detail)


def test_06_relation_families(acceptance_log):
    nonzero, count = [], 0
    with Clock() as c:
        for t in range(1, 4):
            for n in range(t + 1, 7):
                for a in combinations(range(1, n + 1), t - 1):
                    for b in combinations(range(1, n + 1), t + 1):
                        count += 1
                        if not expand(plucker_relation(a, b)).is_zero():
                            nonzero.append(("plucker", a, b))
        named = [("twelve-term", twelve_term_relation()), ("appended", append_index(twelve_term_relation()))]
        named += [(f"genplu2 s={s} t={t}", genplu2_relation(s, t)) for t in (2, 3) for s in range(t + 1)]
        named += degree3_catalog()
        rng = random.Random(6)
        for i in range(10):
            t = 2 + i % 2
            m = rng.randint(t, 2 * t)
            A = Matrix([[rng.randint(-5, 5) for _ in range(m)] for _ in range(t)], m)
            u = tuple(sorted(rng.randint(1, m) for _ in range(2 * t)))
            base = plucker_relation(tuple(range(1, t)), tuple(range(t, 2 * t + 1)))
            named.append((f"pushforward {i}", pushforward_relation(base, A, u)))
        for name, rel in named:
            count += 1
            if not expand(rel).is_zero():
                nonzero.append(name)
    report(acceptance_log, 6, "relation families vanish", not nonzero, c, 120, f"{count} relations, nonzero: {nonzero[:3]}")


def test_07_genplu2_cross_validation(acceptance_log):
    diffs = []
    with Clock() as c:
        for t in range(1, 4):
            for s in range(t + 1):
                if genplu2_relation(s, t) != genplu2_via_pushforward(s, t):
                    diffs.append((s, t))
    report(acceptance_log, 7, "genplu2 = pushforward", not diffs, c, 30, f"all s <= t <= 3, differing: {diffs}")


def _nested_pairs(size=5, vmax=4):
    for v in range(2, vmax + 1):
        for u in range(0, v - 1):
            for A in combinations(range(1, size + 1), v):
                for a in combinations(A, u):
                    rows = a + tuple(i for i in A if i not in a)
                    for B in combinations(range(1, size + 1), v):
                        for b in combinations(B, u):
                            yield a, b, rows, b + tuple(j for j in B if j not in b)


def test_08_anti_straightening(acceptance_log):
    failures, count = [], 0
    with Clock() as c:
        for a, b, A, B in _nested_pairs():
            count += 1
            try:
                res = anti_straighten(a, b, A, B)
                if not expand(res.relation).is_zero():
                    failures.append((a, b, A, B))
            except RuntimeError:
                failures.append((a, b, A, B))
    report(acceptance_log, 8, "anti-straightening", not failures, c, 60, f"{count} nested pairs in 5x5, failures {failures[:2]}")


def test_09_localization(acceptance_log):
    failures = []
    with Clock() as c:
        for m, n, t in [(3, 4, 2), (4, 4, 2), (4, 5, 2), (4, 5, 3), (5, 5, 2)]:
            if len(phi_set(0, m, n, t)) != m * n:
                failures.append(("phi0", m, n, t))
        kmax = 0
        for m, n, t in [(3, 4, 2), (4, 4, 2)]:
            rep = verify_localize(m, n, t, k_max=3)
            if not rep.complete:
                failures.append(("incomplete", m, n, t, [str(M) for M in rep.failures]))
            kmax = max([kmax] + [cert.k for cert in rep.certificates.values()])
        for M, cert in walkthrough():
            if cert is None or not cert.verify():
                failures.append(("walkthrough", str(M)))
    report(acceptance_log, 9, "localization", not failures and kmax <= 3, c, 300, f"max k {kmax}, failures {failures}")


def test_10_tangent_and_singularities(acceptance_log):
    failures = []
    with Clock() as c:
        for m, n, t in [(3, 4, 2), (4, 4, 2), (4, 5, 3)]:
            for seed in range(5):
                if d_lambda_rank(random_int_matrix(random.Random(seed), m, n), t) != m * n:
                    failures.append(("dlambda", m, n, t, seed))
        for seed in range(5):
            if d_lambda_rank(random_int_matrix(random.Random(seed), 2, 4), 2) != 2 * (4 - 2) + 1:
                failures.append(("dlambda-max", seed))
        sl = relation_ideal_slice(4, 4, 2, 3)
        catalog = [twelve_term_relation()] + [rel for _, rel in degree3_catalog()]
        if not all(sl.contains(rel) for rel in catalog):
            failures.append("slice")
        for m, n in [(3, 4), (4, 4)]:
            sl = relation_ideal_slice(m, n, 2, 3)
            smooth = compound(random_matrix(m, n, m, 11), 2)
            if tangent_dim_at(smooth, sl) != m * n:
                failures.append(("smooth", m, n))
            if not tangent_dim_at(normal_form(1, None, m, n, 2), sl) > m * n:
                failures.append(("rank1", m, n))
        cases = 0
        for m in range(3, 7):
            for n in range(m, 7):
                for t in range(2, m):
                    if m == n and t == m - 1:
                        continue
                    cases += 1
                    res = sing_counting_check(m, n, t)
                    if not res.ok:
                        failures.append(("count", m, n, t))
    report(acceptance_log, 10, "tangent/singularity", not failures, c, 600, f"{cases} counting cases, failures {failures[:3]}")


def _unimodular(t, rng):
    L = Matrix([[1 if i == j else (rng.randint(-3, 3) if i > j else 0) for j in range(t)] for i in range(t)], t)
    U = Matrix([[1 if i == j else (rng.randint(-3, 3) if i < j else 0) for j in range(t)] for i in range(t)], t)
    return L @ U


def _proportionality(cf, cg):
    """Scalar ``c`` with ``cg == c * cf`` (``cf`` nonzero), or ``None``."""
    I, J, v = next(cf.nonzero_entries())
    c = Fraction(cg.entry(I, J)) / v
    return c if cg == cf.scale(c) else None


def test_11_fibers(acceptance_log):
    rng = random.Random(11)
    mismatches, counts = [], {"high": 0, "low": 0}
    with Clock() as c:
        for t in (1, 2, 3):
            for trial in range(20):
                f = random_matrix(4, 5, 4, 100 * t + trial)
                kind = trial % 4
                g = [f, f.scale(-1), f.scale(2), f + random_matrix(4, 5, 1, trial)][kind]
                if rank(g) <= t:
                    continue
                counts["high"] += 1
                direct = compound(f, t) == compound(g, t)
                rule = f == g or (f == g.scale(-1) and t % 2 == 0)
                if not same_fiber_high_rank(f, g, t) == direct == rule:
                    mismatches.append(("high", t, kind))
        for t in (1, 2, 3):
            for trial in range(20):
                A, B = random_int_matrix(rng, 4, t), random_int_matrix(rng, t, 5)
                if rank(A) < t or rank(B) < t:
                    continue
                kind = trial % 4
                S = _unimodular(t, rng) if kind == 0 else random_invertible(t, rng)
                if kind == 2:
                    g = random_int_matrix(rng, 4, t) @ B  # new kernel
                elif kind == 3:
                    g = A @ random_int_matrix(rng, t, 5)  # new image
                else:
                    g = A @ S @ B
                if rank(g) != t:
                    continue
                counts["low"] += 1
                f = A @ B
                verdict = same_fiber_rank_t(f, g, t)
                scalar = _proportionality(compound(f, t), compound(g, t))
                if verdict.proportional != (scalar is not None) or (scalar is not None and verdict.scalar != scalar):
                    mismatches.append(("proportional", t, kind))
                if kind in (0, 1) and (verdict.scalar != det(S) or verdict.equal != (det(S) == 1)):
                    mismatches.append(("twist", t, kind))
    detail = f"{counts['high']} rank>t pairs, {counts['low']} rank=t pairs, mismatches {mismatches[:3]}"
    report(acceptance_log, 11, "fibers", not mismatches, c, 30, detail)


def test_12_theta_retraction(acceptance_log):
    failures, count = [], 0
    with Clock() as c:
        m, n, t = 5, 5, 3
        for v in (1, 2):
            alpha, y = standard_decomposables(m, n, v)
            for u, k in admissible_orbits(m, n, t):
                if u > t - v + 1:
                    continue
                count += 1
                small = normal_form(u, k, m - v, n - v, t - v)
                if theta(alpha, y, small) != normal_form(u, k, m, n, t):
                    failures.append(("theta", v, u, k))
            rng = random.Random(v)
            for _ in range(10):
                rows = math.comb(m - v, t - v)
                cols = math.comb(n - v, t - v)
                f = ExteriorPoint(m - v, n - v, t - v, Matrix([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)], cols))
                count += 1
                if retract_project(theta(alpha, y, f), v) != f:
                    failures.append(("retract", v))
    report(acceptance_log, 12, "theta/retraction", not failures, c, 30, f"{count} checks, failures {failures}")


def test_13_cli_determinism(acceptance_log, tmp_path):
    diffs = []
    with Clock() as c:
        for name, argv in invocations(tmp_path).items():
            outs = []
            for hashseed in ("1", "2"):
                env = dict(os.environ, PYTHONHASHSEED=hashseed)
                proc = subprocess.run([sys.executable, "-m", "exteria", *argv], capture_output=True, env=env)
                outs.append((proc.returncode, proc.stdout))
            if outs[0] != outs[1] or outs[0][0] != 0:
                diffs.append(name)
    report(acceptance_log, 13, "CLI determinism", not diffs, c, 30, f"{len(invocations(tmp_path))} subcommands twice each, differing: {diffs}")
