"""Upper bounds for the tangent dimension of X_t at each orbit normal form,
from the exact degree <= d part of the ideal of relations among t-minors."""

import argparse
import sys
from dataclasses import dataclass

from exteria.orbits import admissible_orbits, orbit_dimension, normal_form
from exteria.tangent import relation_ideal_slice, tangent_dim_at, tangent_verdict


@dataclass
class Config:
    m: int = 3
    n: int = 4
    t: int = 2
    degree: int = 3


def run(cfg: Config) -> list[dict]:
    sl = relation_ideal_slice(cfg.m, cfg.n, cfg.t, cfg.degree)
    rows = []
    for u, k in admissible_orbits(cfg.m, cfg.n, cfg.t):
        x = normal_form(u, k, cfg.m, cfg.n, cfg.t)
        dim = tangent_dim_at(x, sl)
        rows.append(
            {
                "u": u,
                "k": k,
                "orbit_dim": orbit_dimension(u, k, cfg.m, cfg.n, cfg.t),
                "tangent_bound": dim,
                "verdict": tangent_verdict(x, dim),
            }
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=Config.m)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--t", type=int, default=Config.t)
    ap.add_argument("--degree", type=int, default=Config.degree)
    cfg = Config(**vars(ap.parse_args()))
    sl = relation_ideal_slice(cfg.m, cfg.n, cfg.t, cfg.degree)
    print(f"# {len(sl)} relations of degree <= {cfg.degree} among {len(sl.symbols)} minors; mn = {cfg.m * cfg.n}")
    rows = run(cfg)
    cols = list(rows[0])
    print("\t".join(cols))
    for r in rows:
        print("\t".join(str(r[c]) for c in cols))
    return 0


if __name__ == "__main__":
    sys.exit(main())
