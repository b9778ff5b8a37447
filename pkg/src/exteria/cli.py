"""Command-line front end.  Every subcommand prints one JSON document (or a TSV table).

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import DEFAULT_PRIME, Matrix, format_rational, random_matrix, rank
from .exterior import ExteriorPoint, compound
from .localization import verify_localize
from .orbits import (
    admissible_orbits,
    classify,
    describe_orbit,
    f_v_eval,
    normal_form,
    same_fiber_high_rank,
    same_fiber_rank_t,
    small_rank,
)
from .polys import RelationExpr, is_zero
from .relations import (
    append_index,
    degree3_catalog,
    genplu2_relation,
    plucker_relation,
    pushforward_relation,
    twelve_term_relation,
)
from .shapes import epsilon, gamma, in_At_support, orbit_to_prime, pi, prime_catalog, shapes_up_to
from .tangent import relation_ideal_slice, tangent_dim_at, tangent_verdict

SCHEMA = "exteria/1"


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


@dataclass
class RunConfig:
    subcommand: str
    m: int | None = None
    n: int | None = None
    t: int | None = None
    seed: int = 0
    trials: int = 20
    modulus: int = DEFAULT_PRIME
    degree: int | None = None
    k_max: int = 3
    output: str | None = None
    fmt: str = "json"
    threads: int = 1
    transposed: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        threads = args.threads
        if threads is None:
            threads = int(os.environ.get("EXTERIA_THREADS", "1") or 1)
        cfg = cls(
            subcommand=args.command,
            m=getattr(args, "m", None),
            n=getattr(args, "n", None),
            t=getattr(args, "t", None),
            seed=args.seed,
            trials=args.trials,
            modulus=args.modulus,
            degree=getattr(args, "deg", None) or getattr(args, "deg_bound", None),
            k_max=getattr(args, "k_max", 3),
            output=args.output,
            fmt=args.format,
            threads=max(1, threads),
        )
        if cfg.m is not None and cfg.n is not None and cfg.m > cfg.n:
            cfg.m, cfg.n, cfg.transposed = cfg.n, cfg.m, True
        return cfg

    def meta(self) -> dict:
        return {"m": self.m, "n": self.n, "t": self.t, "seed": self.seed, "transposed": self.transposed}


# ---------------------------------------------------------------------------
# Inputs


def _load_point_file(path: str, t: int | None) -> ExteriorPoint:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return ExteriorPoint.from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"malformed point file {path}: {exc}") from exc
    try:
        M = Matrix.from_text(text)
    except ValueError as exc:
        raise UsageError(f"malformed matrix file {path}: {exc}") from exc
    if t is None:
        raise UsageError("--t is required with a matrix file")
    for m in range(1, 64):
        if math.comb(m, t) == M.shape[0]:
            for n in range(1, 64):
                if math.comb(n, t) == M.shape[1]:
                    return ExteriorPoint(m, n, t, M)
    raise UsageError(f"a {M.shape[0]}x{M.shape[1]} matrix is not the shape of any L_{t}(m, n)")


def _parse_kv(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise UsageError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = int(v)
    return out


def make_point(spec: str, cfg: RunConfig) -> ExteriorPoint:
    """Point specs: ``zero``, ``rank1``, ``normal:u=U,k=K``, ``smooth``, ``random``, ``file:PATH``."""
    if spec.startswith("file:"):
        x = _load_point_file(spec[5:], cfg.t)
        if x.m > x.n:
            x, cfg.transposed = x.transpose(), True
        cfg.m, cfg.n, cfg.t = x.m, x.n, x.t
        return x
    m, n, t = cfg.m, cfg.n, cfg.t
    if None in (m, n, t):
        raise UsageError("--m, --n and --t are required for this point spec")
    if spec == "zero":
        return ExteriorPoint.zero(m, n, t)
    if spec == "rank1":
        return normal_form(1, None, m, n, t)
    if spec.startswith("normal:"):
        kv = _parse_kv(spec[7:])
        return normal_form(kv.get("u", 0), kv.get("k"), m, n, t)
    if spec == "smooth":
        return compound(random_matrix(m, n, min(m, n), cfg.seed), t)
    if spec == "random":
        rng = random.Random(cfg.seed)
        rows = [[rng.randint(-9, 9) for _ in range(math.comb(n, t))] for _ in range(math.comb(m, t))]
        return ExteriorPoint(m, n, t, Matrix(rows))
    raise UsageError(f"unknown point spec {spec!r}")


def _load_matrix(path: str) -> Matrix:
    try:
        with open(path) as fh:
            return Matrix.from_text(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"malformed matrix file {path}: {exc}") from exc


def _need_mnt(cfg: RunConfig):
    if None in (cfg.m, cfg.n, cfg.t):
        raise UsageError("--m, --n and --t are required")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_compound(args, cfg):
    B = _load_matrix(args.matrix)
    if B.shape[0] > B.shape[1]:
        B, cfg.transposed = B.T, True
    cfg.m, cfg.n = B.shape
    return {"point": compound(B, cfg.t).to_json()}


def cmd_small_rank(args, cfg):
    x = make_point(args.point, cfg)
    return {"sr": small_rank(x, args.strategy, cfg.seed, cfg.trials), "strategy": args.strategy}


def cmd_classify(args, cfg):
    x = make_point(args.point, cfg)
    return classify(x, cfg.seed, cfg.trials).to_json()


def cmd_normal_form(args, cfg):
    _need_mnt(cfg)
    x = normal_form(args.u, args.k, cfg.m, cfg.n, cfg.t)
    return {"point": x.to_json(), "orbit": describe_orbit(args.u, args.k, cfg.m, cfg.n, cfg.t).to_json()}


def cmd_testfn(args, cfg):
    x = make_point(args.point, cfg)
    vs = [args.v] if args.v is not None else list(range(x.t + 2))
    return {"values": [{"v": v, "f_v": format_rational(f_v_eval(x, v))} for v in vs]}


def cmd_shapes(args, cfg):
    rows = []
    for sh in shapes_up_to(args.max_boxes, args.max_part):
        row = {"shape": list(sh.parts), "gamma": [gamma(sh, j) for j in range(1, sh.parts[0] + 1)]}
        if cfg.t:
            row["pi"] = [format_rational(pi(sh, j, cfg.t)) for j in range(1, cfg.t + 1)]
            row["in_At"] = in_At_support(sh, cfg.t)
        row["epsilon"] = list(epsilon(sh, sh.parts[0]))
        rows.append(row)
    return {"shapes": rows}


def cmd_primes(args, cfg):
    if cfg.m is None or cfg.t is None:
        raise UsageError("--m and --t are required")
    m, t = cfg.m, cfg.t
    cat = prime_catalog(m, t)
    primes = [
        {"label": p.label, "face": sorted(p.face) if p.face is not None else None} for p in cat
    ]
    table = []
    if 1 < t < m:
        for u, k in admissible_orbits(m, cfg.n or m, t):
            table.append({"u": u, "k": k, "prime": orbit_to_prime(u, k, m, t).label})
    return {"count": len(cat), "primes": primes, "orbits": table}


def _family(args) -> list[tuple[str, RelationExpr]]:
    fam = args.family
    t = args.t
    if fam == "plucker":
        t = t or 2
        a = tuple(args.a) if args.a else tuple(range(1, t))
        b = tuple(args.b) if args.b else tuple(range(t, 2 * t + 1))
        return [("plucker", plucker_relation(a, b))]
    if fam == "genplu2":
        t = t or 2
        ss = [args.s] if args.s is not None else list(range(t + 1))
        return [(f"genplu2:s={s},t={t}", genplu2_relation(s, t)) for s in ss]
    if fam == "twelve-term":
        return [("twelve-term", twelve_term_relation())]
    if fam == "twelve-term-appended":
        return [("twelve-term-appended", append_index(twelve_term_relation()))]
    if fam == "degree3":
        return list(degree3_catalog())
    if fam == "pushforward":
        t = t or 2
        rng = random.Random(args.seed)
        m = 2 * t
        A = Matrix([[rng.randint(-9, 9) for _ in range(m)] for _ in range(t)])
        u = tuple(sorted(rng.randint(1, m) for _ in range(2 * t)))
        base = plucker_relation(tuple(range(1, t)), tuple(range(t, 2 * t + 1)))
        return [(f"pushforward:u={list(u)}", pushforward_relation(base, A, u))]
    if fam == "file":
        if not args.input:
            raise UsageError("--input is required for --family file")
        try:
            with open(args.input) as fh:
                return [("file", RelationExpr.from_json(json.load(fh)))]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot load relation from {args.input}: {exc}") from exc
    raise UsageError(f"unknown family {fam!r}")


def cmd_relations(args, cfg):
    rels = _family(args)
    if args.action == "gen":
        return {"family": args.family, "relations": [{"name": nm, "terms": r.to_json()} for nm, r in rels]}

    def check(item):
        nm, r = item
        return nm, is_zero(r, args.mode, cfg.seed, cfg.trials, cfg.modulus)

    with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
        verdicts = list(ex.map(check, rels))
    status = "zero" if all(v.zero for _, v in verdicts) else "nonzero"
    report = {"family": args.family, "status": status}
    if len(verdicts) > 1 or status != "zero":
        report["relations"] = [{"name": nm, **v.to_json()} for nm, v in verdicts]
    if status != "zero":
        raise VerificationFailure(report)
    return report


def cmd_localize(args, cfg):
    _need_mnt(cfg)
    rep = verify_localize(cfg.m, cfg.n, cfg.t, cfg.k_max, args.deg_bound)
    out = rep.to_json()
    if not rep.complete:
        raise VerificationFailure(out)
    return out


def cmd_tangent(args, cfg):
    x = make_point(args.point, cfg)
    try:
        sl = relation_ideal_slice(x.m, x.n, x.t, args.deg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    dim = tangent_dim_at(x, sl)
    return {
        "ambient": len(sl.symbols),
        "relations": len(sl),
        "mn": x.m * x.n,
        "tangent_dim": dim,
        "verdict": tangent_verdict(x, dim),
    }


def cmd_fibers(args, cfg):
    f, g = _load_matrix(args.f), _load_matrix(args.g)
    t = cfg.t
    if t is None:
        raise UsageError("--t is required")
    if rank(f) > t:
        return {"case": "rank>t", "same_compound": same_fiber_high_rank(f, g, t)}
    verdict = same_fiber_rank_t(f, g, t)
    return {
        "case": "rank=t",
        "proportional": verdict.proportional,
        "scalar": None if verdict.scalar is None else format_rational(verdict.scalar),
        "same_compound": verdict.equal,
    }


COMMANDS = {
    "compound": cmd_compound,
    "small-rank": cmd_small_rank,
    "classify": cmd_classify,
    "normal-form": cmd_normal_form,
    "testfn": cmd_testfn,
    "shapes": cmd_shapes,
    "primes": cmd_primes,
    "relations": cmd_relations,
    "localize": cmd_localize,
    "tangent": cmd_tangent,
    "fibers": cmd_fibers,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--modulus", type=int, default=DEFAULT_PRIME)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $EXTERIA_THREADS or 1)")

    def dims(p, need_n=True):
        p.add_argument("--m", type=int)
        if need_n:
            p.add_argument("--n", type=int)
        p.add_argument("--t", type=int)

    parser = argparse.ArgumentParser(prog="exteria", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compound", parents=[common], help="compound matrix of a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--t", type=int, required=True)

    for name in ("small-rank", "classify", "testfn", "tangent"):
        p = sub.add_parser(name, parents=[common])
        dims(p)
        p.add_argument("--point", required=True, help="zero | rank1 | normal:u=U,k=K | smooth | random | file:PATH")
        if name == "small-rank":
            p.add_argument("--strategy", choices=("randomized", "certificate"), default="randomized")
        if name == "testfn":
            p.add_argument("--v", type=int)
        if name == "tangent":
            p.add_argument("--deg", type=int, default=3)

    p = sub.add_parser("normal-form", parents=[common])
    dims(p)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--k", type=int)

    p = sub.add_parser("shapes", parents=[common])
    p.add_argument("--t", type=int)
    p.add_argument("--max-boxes", type=int, default=6)
    p.add_argument("--max-part", type=int)

    p = sub.add_parser("primes", parents=[common])
    dims(p)

    p = sub.add_parser("relations", parents=[common])
    p.add_argument("action", choices=("gen", "verify"))
    p.add_argument(
        "--family",
        required=True,
        choices=("plucker", "genplu2", "twelve-term", "twelve-term-appended", "degree3", "pushforward", "file"),
    )
    p.add_argument("--t", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--a", type=int, nargs="*")
    p.add_argument("--b", type=int, nargs="*")
    p.add_argument("--input")
    p.add_argument("--mode", choices=("auto", "exact", "probabilistic"), default="auto")

    p = sub.add_parser("localize", parents=[common])
    dims(p)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--deg-bound", type=int)

    p = sub.add_parser("fibers", parents=[common])
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--t", type=int, required=True)
    return parser


def _tsv(report: dict) -> str:
    table = None
    for key in ("shapes", "orbits", "certificates", "values"):
        if isinstance(report.get(key), list) and report[key]:
            table = report[key]
            break
    if table is None:
        raise UsageError("--format tsv is only available for tabular reports")
    cols = [
        k for k, v in table[0].items()
        if not isinstance(v, dict) and not (isinstance(v, list) and any(isinstance(e, dict) for e in v))
    ]
    lines = ["\t".join(cols)]
    for row in table:
        lines.append("\t".join(json.dumps(row[c]) if isinstance(row[c], list) else str(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig.from_args(args)
    status = 0
    try:
        body = COMMANDS[args.command](args, cfg)
    except VerificationFailure as exc:
        body, status = exc.report, 1
    except (UsageError, ValueError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": str(exc)}), file=sys.stderr)
        return 2
    if cfg.fmt == "tsv":
        try:
            _emit(_tsv(body), cfg.output)
        except UsageError as exc:
            print(json.dumps({"schema": SCHEMA, "error": str(exc)}), file=sys.stderr)
            return 2
        return status
    report = {"schema": SCHEMA, **body, "meta": cfg.meta()}
    _emit(json.dumps(report) + "\n", cfg.output)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
