"""Print the orbit catalogue of X_t(m, n): invariants, dimension, prime, and a
cross-check of each dimension against the rank of the infinitesimal action."""

import argparse
import sys
from dataclasses import dataclass

from exteria.orbits import admissible_orbits, describe_orbit, infinitesimal_orbit_dim, normal_form, small_rank


@dataclass
class Config:
    m: int = 4
    n: int = 4
    t: int = 2
    seed: int = 0


def run(cfg: Config) -> list[dict]:
    rows = []
    for u, k in admissible_orbits(cfg.m, cfg.n, cfg.t):
        desc = describe_orbit(u, k, cfg.m, cfg.n, cfg.t)
        x = normal_form(u, k, cfg.m, cfg.n, cfg.t)
        rows.append(
            {
                "u": u,
                "k": k,
                "rank": desc.rank,
                "sr_measured": small_rank(x, seed=cfg.seed),
                "dim": desc.dimension,
                "dim_lie": infinitesimal_orbit_dim(x),
                "prime": desc.prime_label,
            }
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=Config.m)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--t", type=int, default=Config.t)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args()))
    rows = run(cfg)
    cols = list(rows[0])
    print("\t".join(cols))
    for r in rows:
        print("\t".join(str(r[c]) for c in cols))
    bad = [r for r in rows if r["dim"] != r["dim_lie"] or r["sr_measured"] != r["u"]]
    print(f"# {len(rows)} orbits, {len(bad)} disagreements")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
