"""Certify every t-minor into K[Phi_0] after inverting F, and summarize the
powers of F needed."""

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import dataclass, field

from exteria.localization import verify_localize


@dataclass
class Config:
    cases: list = field(default_factory=lambda: [(3, 4, 2), (4, 4, 2), (4, 5, 3), (4, 5, 2)])
    k_max: int = 3
    json_out: str | None = None


def run(cfg: Config) -> list[dict]:
    out = []
    for m, n, t in cfg.cases:
        start = time.perf_counter()
        rep = verify_localize(m, n, t, cfg.k_max)
        powers = Counter(rep.f_power(M) for M in rep.need)
        out.append(
            {
                "m": m,
                "n": n,
                "t": t,
                "phi_sizes": list(rep.phi_sizes),
                "minors": len(rep.need) + len(rep.failures),
                "complete": rep.complete,
                "max_step_k": max((c.k for c in rep.certificates.values()), default=0),
                "F_power_histogram": dict(sorted(powers.items())),
                "seconds": round(time.perf_counter() - start, 2),
            }
        )
    return out


def parse_case(text: str) -> tuple[int, int, int]:
    m, n, t = (int(x) for x in text.split(","))
    return m, n, t


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--case", action="append", type=parse_case, help="m,n,t (repeatable)")
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--json-out")
    args = ap.parse_args()
    cfg = Config(k_max=args.k_max, json_out=args.json_out)
    if args.case:
        cfg.cases = args.case
    rows = run(cfg)
    for r in rows:
        print(json.dumps(r))
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 0 if all(r["complete"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
