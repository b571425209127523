"""Regenerate the golden model corpus under src/holonomy_lab/corpus.

Each file stores the model plus an ``expect`` fragment frozen from the analysis
(flags and holonomy labels/dimensions); the test-suite cross-checks the frozen values
against independent oracles.
"""

import json
from pathlib import Path

from holonomy_lab import cli
from holonomy_lab import contactgeo as cg
from holonomy_lab.polycalc import RatMat

OUT = Path(__file__).resolve().parents[1] / "src" / "holonomy_lab" / "corpus"


def diag_metric(m, first):
    k = 2 * m
    return [[(first if i == j == 0 else 1) if i == j else 0 for j in range(k)] for i in range(k)]


def twisted_frame(m=2):
    H = cg.heisenberg_model(m)
    frame = list(H.frame)
    x1 = H.ring.var(0)
    frame[1] = frame[1] + frame[m].scale(x1)
    return cg.ContactModel(H.ring, H.theta, tuple(frame), H.g, None, (), "twisted_frame2")


def pseudo_hermitian_heisenberg(m):
    H = cg.heisenberg_model(m, J=cg.standard_J(m))
    return H.with_metric(H.geo.W @ H.J, H.J, f"heisenberg{m}_cr")


def z_twisted_J(m=2):
    H = cg.heisenberg_model(m)
    ring = H.ring
    rows = [["0"] * (2 * m) for _ in range(2 * m)]
    rows[0][0], rows[0][m], rows[m][0], rows[m][m] = "z", "-(1+z^2)", "1", "-z"
    for i in range(1, m):
        rows[m + i][i], rows[i][m + i] = "1", "-1"
    J = RatMat(ring, [[ring.parse(e) for e in r] for r in rows])
    return H.with_metric(H.geo.W @ J, J, f"z_twisted_J{m}")


MODELS = [
    lambda: cg.heisenberg_model(2),
    lambda: cg.heisenberg_model(3),
    lambda: pseudo_hermitian_heisenberg(3),
    lambda: cg.heisenberg_model(2, g=diag_metric(2, "1+z"), name="heisenberg2_zmetric"),
    lambda: cg.heisenberg_model(3, g=diag_metric(3, "1+z"), name="heisenberg3_zmetric"),
    lambda: cg.conformal_model(2, "1+x1^2", name="conformal2"),
    twisted_frame,
    z_twisted_J,
]


def frozen_expectation(report):
    return {
        "flags": report["flags"],
        "holonomy": {tag: {"label": e["label"], "dim": e["dim"]} for tag, e in report["holonomy"].items()},
        "table1_row": report["table1_row"],
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for build in MODELS:
        model = build()
        report = cli.analyze_model(model)
        doc = cli.model_to_dict(model, frozen_expectation(report))
        path = OUT / f"{model.name}.json"
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        print(path.name, doc["expect"]["holonomy"], doc["expect"]["flags"])


if __name__ == "__main__":
    main()
