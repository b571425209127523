"""Loop transport versus curvature: error of log(T) + h²R and its observed order as h halves."""
import argparse
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from holonomy_lab import contactgeo as cg
from holonomy_lab import holonomy as hol
from holonomy_lab.cli import corpus_files, load_model_file


@dataclass
class Config:
    model: str = "heisenberg2_zmetric"
    plane: tuple[int, int] = (0, 1)
    connection: str = "ADAPTED"
    sides: tuple[Fraction, ...] = (Fraction(1, 5), Fraction(1, 10), Fraction(1, 20), Fraction(1, 40))
    steps: int = 200


def run(cfg: Config) -> list[tuple[float, float]]:
    path = next(p for p in corpus_files() if p.stem == cfg.model)
    model, _ = load_model_file(path)
    conn = cg.connection_by_tag(model, cfg.connection)
    i, j = cfg.plane
    R = hol.curvature_on_coordinates(model, conn, i, j).to_float()
    out = []
    for h in cfg.sides:
        loop = hol.LoopPath.coordinate_square(model.base_point, i, j, h)
        T = hol.parallel_transport(model, conn, loop, steps=cfg.steps).matrix
        out.append((float(h), float(np.max(np.abs(scipy.linalg.logm(T).real + float(h) ** 2 * R)))))
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default=Config.model)
    ap.add_argument("--plane", default="0,1")
    ap.add_argument("--connection", default=Config.connection)
    ap.add_argument("--steps", type=int, default=Config.steps)
    args = ap.parse_args()
    cfg = Config(args.model, tuple(int(x) for x in args.plane.split(",")), args.connection.upper(),
                 steps=args.steps)
    rows = run(cfg)
    print(f"{'h':>8} {'error':>12} {'order':>6}")
    prev = None
    for h, e in rows:
        order = f"{np.log2(prev / e):6.2f}" if prev else "     -"
        print(f"{h:8.4f} {e:12.4e} {order}")
        prev = e
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
