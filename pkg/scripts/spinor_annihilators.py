"""Spinors annihilated by the standard holonomy algebras, with their exterior-degree profiles."""
import argparse
from dataclasses import dataclass

from holonomy_lab import spinrep as sp


@dataclass
class Config:
    ms: tuple[int, ...] = (3, 4, 5)
    algebras: tuple[str, ...] = sp.EMBED_LABELS


def run(cfg: Config) -> list[dict]:
    rows = []
    for m in cfg.ms:
        rep = sp.build_spin_rep(m)
        for label in cfg.algebras:
            if label.startswith("SP") and m % 2:
                continue
            ann = sp.annihilator(rep, sp.embed_algebra(label, m))
            rows.append({"m": m, "algebra": label, "dim": ann.dim, "profile": ann.profile})
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=list(Config.ms))
    args = ap.parse_args()
    print(f"{'m':>2} {'algebra':15} {'dim':>4}  profile over Λ^0..Λ^m")
    for r in run(Config(tuple(args.m))):
        print(f"{r['m']:>2} {r['algebra']:15} {r['dim']:>4}  {list(r['profile'])}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
