"""Rebuild the sub-symmetric zoo rows and compare them with the stored table fixture."""
import argparse
import json
from dataclasses import dataclass, field

from holonomy_lab import subsym as ss


@dataclass
class Config:
    m: int = 3
    family: list[tuple[int, int]] = field(default_factory=lambda: [(1, 2), (1, -2), (2, 1), (1, 1), (1, -1), (1, 0)])
    json: bool = False


def run(cfg: Config) -> list[dict]:
    results = [ss.zoo("HEISENBERG", m=cfg.m), ss.zoo("CPN_SPHERE", m=cfg.m)]
    results += [ss.zoo("TORSION_FAMILY", m=cfg.m, lam=lam, mu=mu) for lam, mu in cfg.family]
    rows = ss.table1_report(results)
    out = []
    for r, row in zip(results, rows):
        d = row.as_dict()
        d["scal_tau"] = str(r.scal_tau)
        d["killing_signature"] = list(r.fingerprint.signature)
        out.append(d)
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = run(Config(m=args.m, json=args.json))
    if args.json:
        print(json.dumps(rows, indent=2, ensure_ascii=False))
    else:
        head = f"{'row':26} {'source':34} {'tau':8} {'space':18} {'hol':18} {'hol_tau':18} {'dims':7} {'scal':6} ok"
        print(head)
        for d in rows:
            print(f"{d['row']:26} {d['source']:34} {d['tau']:8} {d['space']:18} {d['hol_horizontal']:18} "
                  f"{d['hol_adapted']:18} {str(tuple(d['dims'])):7} {d['scal_tau']:6} {d['matches']}")
    return 0 if all(d["matches"] for d in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
