"""Compare pi_u with the unit-weight and the (u-1-k)-weight expressions in
pi_2 and the part multiplicities, over all shapes up to a box bound."""

import argparse
import sys
from collections import Counter
from dataclasses import dataclass

from exteria.shapes import pi, pi_formula_literal_rhs, pi_formula_rhs, shapes_up_to


@dataclass
class Config:
    max_boxes: int = 12
    max_t: int = 12


def run(cfg: Config) -> dict:
    total = Counter()
    unit = Counter()
    weighted = Counter()
    example = {}
    for shape in shapes_up_to(cfg.max_boxes):
        for t in range(3, cfg.max_t + 1):
            for u in range(3, t + 1):
                total[u] += 1
                p = pi(shape, u, t)
                if p != pi_formula_literal_rhs(shape, u, t):
                    unit[u] += 1
                    example.setdefault(u, (shape.parts, t, str(p), str(pi_formula_literal_rhs(shape, u, t))))
                if p != pi_formula_rhs(shape, u, t):
                    weighted[u] += 1
    return {"total": total, "unit": unit, "weighted": weighted, "example": example}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-boxes", type=int, default=Config.max_boxes)
    ap.add_argument("--max-t", type=int, default=Config.max_t)
    cfg = Config(**vars(ap.parse_args()))
    res = run(cfg)
    print("u\ttriples\tunit_weight_failures\tweighted_failures\tfirst_unit_failure (shape, t, pi_u, rhs)")
    for u in sorted(res["total"]):
        print(f"{u}\t{res['total'][u]}\t{res['unit'][u]}\t{res['weighted'][u]}\t{res['example'].get(u, '')}")
    return 1 if sum(res["weighted"].values()) else 0


if __name__ == "__main__":
    sys.exit(main())
