"""Command-line front end: model files, analysis reports, zoo, spinors, transport and self-test.

Exit codes: 0 ok, 1 parse error, 2 validation error, 3 theorem violation, 4 no fixpoint.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from . import __version__
from . import contactgeo as cg
from . import holonomy as hol
from . import numkit as nk
from . import spinrep as sp
from . import subsym as ss
from .polycalc import OneForm, ParseError, PolycalcError, RatMat, Ring, VectorField

SCHEMA = "holonomy-lab/1"
SEED = 0

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_THEOREM, EXIT_FIXPOINT = 0, 1, 2, 3, 4


class InputError(ValueError):
    """Unparseable input; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(message + (f" (at {path})" if path else ""))
        self.path = path


# ---------------------------------------------------------------- model files

def _parse(ring: Ring, src, path: str):
    if isinstance(src, bool) or not isinstance(src, (str, int)):
        raise InputError(f"expected an expression string or integer, got {type(src).__name__}", path)
    try:
        return ring.parse(str(src))
    except (ParseError, PolycalcError) as exc:
        raise InputError(f"cannot parse {src!r}: {exc}", path) from None


def _expect_list(doc: dict, key: str, length: int | None = None) -> list:
    val = doc.get(key)
    if not isinstance(val, list):
        raise InputError(f"'{key}' must be a list", key)
    if length is not None and len(val) != length:
        raise cg.ModelValidationError("BAD_SHAPE", f"'{key}' must have {length} entries", key)
    return val


def model_from_dict(doc: dict) -> cg.ContactModel:
    if not isinstance(doc, dict):
        raise InputError("model file must hold a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InputError(f"unsupported schema {schema!r}", "schema")
    if not isinstance(doc.get("m"), int) or not isinstance(doc.get("dimension"), int):
        raise InputError("'dimension' and 'm' must be integers", "dimension")
    n, m = doc["dimension"], doc["m"]
    if n != 2 * m + 1:
        raise cg.ModelValidationError("BAD_DIMENSION", f"dimension {n} != 2m+1 = {2 * m + 1}", "dimension")
    names = _expect_list(doc, "variables", n)
    if not all(isinstance(v, str) for v in names) or len(set(names)) != n:
        raise InputError("variables must be distinct strings", "variables")
    ring = Ring.get(tuple(names))
    theta = OneForm(ring, tuple(_parse(ring, c, f"theta[{i}]") for i, c in enumerate(_expect_list(doc, "theta", n))))
    frame = []
    for a, row in enumerate(_expect_list(doc, "frame", 2 * m)):
        if not isinstance(row, list) or len(row) != n:
            raise cg.ModelValidationError("BAD_FRAME", f"frame field {a} needs {n} components", f"frame[{a}]")
        frame.append(VectorField(ring, tuple(_parse(ring, c, f"frame[{a}][{i}]") for i, c in enumerate(row))))
    k = 2 * m
    rows = _expect_list(doc, "metric", k)
    g = [[None] * k for _ in range(k)]
    triangular = all(isinstance(r, list) and len(r) == k - i for i, r in enumerate(rows))
    for i, r in enumerate(rows):
        if not isinstance(r, list):
            raise InputError("metric rows must be lists", f"metric[{i}]")
        if triangular:
            for off, e in enumerate(r):
                j = i + off
                g[i][j] = g[j][i] = _parse(ring, e, f"metric[{i}][{j}]")
        else:
            if len(r) != k:
                raise cg.ModelValidationError("BAD_METRIC", "metric must be an upper triangle or a full square",
                                              f"metric[{i}]")
            for j, e in enumerate(r):
                g[i][j] = _parse(ring, e, f"metric[{i}][{j}]")
    J = None
    if doc.get("J") is not None:
        Jrows = _expect_list(doc, "J", k)
        J = RatMat(ring, [[_parse(ring, e, f"J[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(Jrows)])
    bp = doc.get("base_point") or [0] * n
    try:
        point = tuple(Fraction(str(x)) for x in bp)
    except (ValueError, ZeroDivisionError):
        raise InputError("base point entries must be rationals", "base_point") from None
    return cg.ContactModel(ring, theta, tuple(frame), RatMat(ring, g), J, point, str(doc.get("name", "model")))


def load_model_file(path: str | Path) -> tuple[cg.ContactModel, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None
    return model_from_dict(doc), doc


def model_to_dict(model: cg.ContactModel, expect: dict | None = None) -> dict:
    k = model.g.rows
    doc = {
        "schema": SCHEMA,
        "name": model.name,
        "dimension": model.n,
        "m": model.m,
        "variables": list(model.ring.names),
        "theta": [str(c) for c in model.theta.comps],
        "frame": [[str(c) for c in e.comps] for e in model.frame],
        "metric": [[str(model.g[i, j]) for j in range(i, k)] for i in range(k)],
        "base_point": [str(x) for x in model.base_point],
    }
    if model.J is not None:
        doc["J"] = [[str(model.J[i, j]) for j in range(k)] for i in range(k)]
    if expect is not None:
        doc["expect"] = expect
    return doc


# ---------------------------------------------------------------- rendering

def _s(x) -> str:
    return str(x)


def _mat(M: nk.Mat) -> list[list[str]]:
    return [[_s(x) for x in row] for row in M.entries]


def holonomy_entry(r: hol.HolonomyReport) -> dict:
    return {
        "mode": r.mode.value,
        "dim": r.dim,
        "label": r.label.value,
        "dims_by_depth": list(r.dims_by_depth),
        "depth_used": r.depth_used,
        "stabilized": r.stabilized,
        "fingerprint": _jsonable(r.classification.fingerprint.as_dict()),
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, float):
        return round(x, 12)
    return str(x)


def conventions() -> dict:
    return dict(cg.CONVENTIONS)


def _table1_row(flags: dict, hor: hol.HolonomyReport, ad: hol.HolonomyReport) -> str | None:
    if not flags.get("locally_subsym_candidate"):
        return None
    pair = (hor.label, ad.label)
    if flags["tau_zero"]:
        if pair == (hol.Label.TRIVIAL, hol.Label.TRIVIAL):
            return "heisenberg"
        return "circle_bundle_hrss" if ad.dim - hor.dim == 1 else "twisted_product"
    if pair == (hol.Label.SO_M_LAGRANGIAN, hol.Label.SO_M_PLUS_U1):
        return "so_quotients_tau_nonzero"
    if pair == (hol.Label.SO_M_LAGRANGIAN, hol.Label.SO_M_LAGRANGIAN):
        return "so_quotient_scal_zero"
    return None


def analyze_model(model: cg.ContactModel, depth: int = 2) -> dict:
    """Full pipeline report; raises hol.TheoremViolation or nk.NoFixpointError."""
    geo = model.geo
    p = model.base_point
    identities = cg.identity_suite(model)
    failed = [c.name for c in identities if c.status == cg.FAILED]
    if failed:
        raise hol.TheoremViolation(f"identities failed: {', '.join(failed)}")
    tau_zero = geo.tau.is_zero()
    codazzi = cg.is_codazzi(model)
    flags: dict[str, Any] = {"contact_ok": True, "tau_zero": tau_zero, "codazzi": codazzi}
    cr = None
    if model.J is not None:
        try:
            cr = cg.cr_toolkit(model)
            flags["pseudo_hermitian"] = cr.pseudo_hermitian
        except cg.NotAlmostComplexError:
            flags["pseudo_hermitian"] = False
    else:
        flags["pseudo_hermitian"] = None
    flags["pseudo_einstein"] = cg.ricci_suite(model).pseudo_einstein if flags["pseudo_hermitian"] else None
    loc = cg.local_symmetry_checks(model)
    flags["locally_subsym_candidate"] = loc.candidate
    hor = hol.infinitesimal_holonomy(model, cg.schouten_connection(model), hol.Mode.HORIZONTAL, depth)
    ad = hol.infinitesimal_holonomy(model, cg.adapted_connection(model), hol.Mode.FULL, depth)
    wg = hol.infinitesimal_holonomy(model, cg.wagner_connection(model), hol.Mode.FULL, depth)
    wagner_equal = wg.algebra.contains_subspace(hor.algebra) and hor.algebra.contains_subspace(wg.algebra)
    if not wagner_equal:
        raise hol.TheoremViolation("Wagner holonomy differs from the horizontal holonomy")
    dic = hol.dichotomy_report(model, depth, horizontal=hor, adapted=ad, codazzi=codazzi)
    norm = {"dtheta_dtheta_inverse": _s(cg.pairing(cg.dtheta_matrix(model), cg.dtheta_inverse_bivector(model))),
            "expected_dtheta_dtheta_inverse": _s(-4 * model.m)}
    if flags["pseudo_hermitian"]:
        norm["dtheta_J"] = _s(cg.pairing(cg.dtheta_matrix(model), cg.j_bivector(model)))
        norm["expected_dtheta_J"] = _s(2 * model.m)
    report: dict[str, Any] = {
        "schema": SCHEMA,
        "version": __version__,
        "conventions": conventions(),
        "model": model.name,
        "m": model.m,
        "point": [_s(x) for x in p],
        "flags": flags,
        "local_symmetry": {"tau_parallel": loc.tau_parallel, "dtheta_parallel": loc.dtheta_parallel,
                           "curvature_parallel": loc.curvature_parallel},
        "normalization": norm,
        "identities": [{"name": c.name, "status": c.status} for c in identities],
        "holonomy": {"SCHOUTEN": holonomy_entry(hor), "ADAPTED": holonomy_entry(ad), "WAGNER": holonomy_entry(wg)},
        "wagner_equals_horizontal": wagner_equal,
        "dichotomy": {"codazzi": dic.codazzi, "difference": dic.difference, "note": dic.note},
        "table1_row": _table1_row(flags, hor, ad),
        "status": "ok",
    }
    if flags["pseudo_hermitian"]:
        report["spinors"] = spinor_section(model, hor, ad, tau_zero)
    return report


def spinor_section(model: cg.ContactModel, hor: hol.HolonomyReport, ad: hol.HolonomyReport, tau_zero: bool) -> dict:
    g0 = model.g.evaluate(model.base_point)
    c = g0[0, 0]
    scalar_metric = all(g0[i, j] == (c if i == j else 0) for i in range(g0.rows) for j in range(g0.cols))
    algebra = hor.algebra.matrices() if scalar_metric else None
    try:
        v = sp.parallel_spinor_report(hor.label, model.m, not tau_zero, hol_equal=(hor.dim == ad.dim),
                                      algebra=algebra)
        out = v.as_dict()
    except sp.SpinError as exc:
        out = {"case": "unsupported", "error": exc.code}
    if algebra is None:
        out["note"] = (out.get("note", "") + "; " if out.get("note") else "") + \
            "direct cross-check needs a scalar metric at the base point"
    if model.m < 3:
        out["note"] = (out.get("note", "") + "; " if out.get("note") else "") + "classification stated for m >= 3"
    return out


def render_zoo(r: ss.ZooResult) -> dict:
    row = ss.table1_report([r])[0]
    return {
        "schema": SCHEMA,
        "conventions": conventions(),
        "kind": r.kind,
        "params": _jsonable(r.params),
        "valid": r.report.ok,
        "transvection": r.report.transvection,
        "sub_torsion_free": r.report.sub_torsion_free,
        "tau_star": _mat(r.tau_star),
        "A_xi": _mat(r.A_xi),
        "ad_xi": _mat(r.pair.ad_xi),
        "holonomy_pair": {"horizontal": r.pair.horizontal_class.label.value,
                          "adapted": r.pair.adapted_class.label.value, "dims": list(r.pair.dims)},
        "killing_fingerprint": _jsonable(r.fingerprint.as_dict()),
        "zoo_match": r.match.label,
        "expected_label": r.expected_label,
        "scal_tau": _s(r.scal_tau),
        "table1": row.as_dict(),
    }


def render_spin(m: int, algebra: str) -> dict:
    rep = sp.build_spin_rep(m)
    ann = sp.annihilator(rep, sp.embed_algebra(algebra.upper(), m))
    wd = sp.weight_decomposition(rep)
    return {
        "schema": SCHEMA,
        "conventions": conventions(),
        "m": m,
        "algebra": algebra.upper(),
        "annihilator_dim": ann.dim,
        "weight_profile": list(ann.profile),
        "extremal_only": ann.extremal_only,
        "levels": [{"k": lv.k, "multiplicity": lv.multiplicity, "rho_J": _s(lv.rho_eigenvalue),
                    "kahler": _s(lv.kahler_eigenvalue)} for lv in wd.levels],
        "sigma": wd.sigma,
    }


def render_transport(model: cg.ContactModel, plane: tuple[int, int], side: Fraction, steps: int, tag: str) -> dict:
    import numpy as np
    from scipy.linalg import logm

    conn = cg.connection_by_tag(model, tag)
    path = hol.LoopPath.coordinate_square(model.base_point, plane[0], plane[1], side)
    tr = hol.parallel_transport(model, conn, path, steps)
    log = np.real(logm(tr.matrix))
    R = np.array(hol.curvature_on_coordinates(model, conn, plane[0], plane[1]).to_float())
    pred = -float(side) ** 2 * R
    th = hol.theta_transport(model, path)
    return {
        "schema": SCHEMA,
        "conventions": conventions(),
        "model": model.name,
        "connection": tag,
        "plane": list(plane),
        "side": _s(side),
        "steps": steps,
        "transport": _jsonable(tr.matrix.round(12).tolist()),
        "log_transport": _jsonable(log.round(12).tolist()),
        "curvature_prediction": _jsonable(pred.round(12).tolist()),
        "max_error": round(float(np.max(np.abs(log - pred))), 12),
        "orthogonality_defect": round(tr.orthogonality_defect, 12),
        "theta": {"exact_integral": None if th.exact_integral is None else _s(th.exact_integral),
                  "factor": round(th.factor, 12), "quadrature_factor": round(th.quadrature_factor, 12)},
    }


# ---------------------------------------------------------------- self-test

def corpus_files(corpus: str | Path | None = None) -> list[Path]:
    if corpus is not None:
        return sorted(Path(corpus).glob("*.json"))
    root = resources.files("holonomy_lab").joinpath("corpus")
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json") and p.name != "table1.json")


def _subset_mismatch(expect, actual, path="") -> str | None:
    if isinstance(expect, dict):
        if not isinstance(actual, dict):
            return f"{path or '.'}: expected an object"
        for k, v in expect.items():
            if k not in actual:
                return f"{path}.{k}: missing"
            bad = _subset_mismatch(v, actual[k], f"{path}.{k}")
            if bad:
                return bad
        return None
    if _jsonable(expect) != _jsonable(actual):
        return f"{path}: expected {expect!r}, got {actual!r}"
    return None


def selftest_checks(corpus: str | Path | None = None) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = []
    for f in corpus_files(corpus):
        model, doc = load_model_file(f)
        tag = f.stem
        for name, fn in cg.identity_checks(model):
            def run(fn=fn):
                c = fn()
                return c.status == cg.PROVED, c.status
            checks.append((f"corpus.{tag}.{name}", run))
        cache: dict = {}

        def analysis(model=model, cache=cache):
            if "r" not in cache:
                cache["r"] = analyze_model(model)
            return cache["r"]

        def wagner_eq(analysis=analysis):
            return analysis()["wagner_equals_horizontal"], ""

        def normalization(analysis=analysis):
            n = analysis()["normalization"]
            ok = n["dtheta_dtheta_inverse"] == n["expected_dtheta_dtheta_inverse"]
            if "dtheta_J" in n:
                ok = ok and n["dtheta_J"] == n["expected_dtheta_J"]
            return ok, json.dumps(n, sort_keys=True)

        def dichotomy(analysis=analysis):
            d = analysis()["dichotomy"]
            return (not d["codazzi"]) or d["difference"] in (0, 1), f"difference {d['difference']}"

        def expect(analysis=analysis, doc=doc):
            bad = _subset_mismatch(doc.get("expect", {}), analysis())
            return bad is None, bad or ""
        checks += [(f"corpus.{tag}.wagner.equals_horizontal", wagner_eq),
                   (f"corpus.{tag}.normalization", normalization),
                   (f"corpus.{tag}.dichotomy", dichotomy),
                   (f"corpus.{tag}.expect", expect)]
    checks += _invariant_checks()
    return checks


def _invariant_checks() -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    out = []
    for lam, mu in [(1, 2), (1, -2), (2, 1), (1, 1), (1, -1), (1, 0)]:
        def tf(lam=lam, mu=mu):
            r = ss.zoo("TORSION_FAMILY", m=3, lam=lam, mu=mu)
            ok = r.match.label == r.expected_label and r.scal_tau == 2 * Fraction(mu) * 9
            return ok, f"{r.match.label} scal {r.scal_tau}"
        out.append((f"subsym.torsion_family.{lam}_{mu}", tf))

    def table():
        rs = [ss.zoo("HEISENBERG", m=3), ss.zoo("CPN_SPHERE", m=3)] + \
            [ss.zoo("TORSION_FAMILY", m=3, lam=a, mu=b) for a, b in [(1, 2), (1, -2), (2, 1), (1, 0)]]
        rows = ss.table1_report(rs)
        bad = [f"{r.row_id}: {r.diff}" for r in rows if not r.matches]
        return not bad, "; ".join(bad)
    out.append(("subsym.table1", table))

    def transvection():
        q = ss.heisenberg_with_rotation(3)
        t = ss.transvection_restrict(q)
        return t.dim_k == 0 and ss.transvection_restrict(t) is t, f"dim k̂ = {t.dim_k}"
    out.append(("subsym.transvection", transvection))
    for m in (3, 4):
        for alg, want in [("SU", 2), ("SO_LAGRANGIAN", 2), ("U", 0), ("SO_PLUS_U1", 0)]:
            def spin(m=m, alg=alg, want=want):
                a = sp.annihilator(sp.build_spin_rep(m), sp.embed_algebra(alg, m))
                return a.dim == want and (want == 0 or a.extremal_only), f"dim {a.dim} profile {list(a.profile)}"
            out.append((f"spin.annihilator.{alg.lower()}.m{m}", spin))

    def kahler():
        for m in (3, 4):
            wd = sp.weight_decomposition(sp.build_spin_rep(m))
            if any(lv.kahler_eigenvalue != nk.GaussRational(0, wd.sigma * (m - 2 * lv.k)) for lv in wd.levels):
                return False, f"m={m}"
        return True, ""
    out.append(("spin.kahler_spectrum", kahler))
    return out


def run_selftest(filter_: str | None = None, corpus: str | Path | None = None) -> dict:
    results = []
    for name, fn in selftest_checks(corpus):
        if filter_ and filter_ not in name:
            continue
        try:
            ok, detail = fn()
        except (hol.TheoremViolation, nk.NoFixpointError, cg.ModelValidationError, ss.SubsymError,
                sp.SpinError, AssertionError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"name": name, "status": "PASS" if ok else "FAIL", "detail": _s(detail)})
    failed = sum(r["status"] == "FAIL" for r in results)
    return {"schema": SCHEMA, "version": __version__, "conventions": conventions(), "seed": SEED,
            "filter": filter_, "checks": results, "passed": len(results) - failed, "failed": failed}


# ---------------------------------------------------------------- entry point

def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


def _print_text(report: dict) -> None:
    if "checks" in report:
        for c in report["checks"]:
            print(f"{c['status']} {c['name']}" + (f"  [{c['detail']}]" if c["status"] == "FAIL" else ""))
        print(f"passed {report['passed']}, failed {report['failed']}")
        return
    for key in sorted(report):
        if key == "conventions":
            continue
        val = report[key]
        if isinstance(val, (dict, list)):
            print(f"{key}: {json.dumps(_jsonable(val), sort_keys=True, ensure_ascii=False)}")
        else:
            print(f"{key}: {val}")


def _parse_point(src: str, n: int) -> tuple[Fraction, ...]:
    try:
        pt = tuple(Fraction(x.strip()) for x in src.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse point {src!r}", "--point") from None
    if len(pt) != n:
        raise cg.ModelValidationError("BAD_POINT", f"point needs {n} coordinates", "--point")
    return pt


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holonomy-lab", description="Holonomy of contact sub-Riemannian models.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="identities, holonomy and classification for a model file")
    a.add_argument("path")
    a.add_argument("--depth", type=int, default=2)
    a.add_argument("--point")
    a.add_argument("--json", action="store_true")

    s = sub.add_parser("subsym", help="sub-symmetric zoo member")
    s.add_argument("kind", choices=["heisenberg", "torsion-family", "cpn-sphere"])
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--lambda", dest="lam", default="1")
    s.add_argument("--mu", default="0")
    s.add_argument("--json", action="store_true")

    p = sub.add_parser("spin", help="spinors annihilated by a holonomy algebra")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--algebra", required=True, choices=[x.lower() for x in sp.EMBED_LABELS] + list(sp.EMBED_LABELS))
    p.add_argument("--json", action="store_true")

    t = sub.add_parser("transport", help="parallel transport around a coordinate square")
    t.add_argument("path")
    t.add_argument("--plane", default="0,1")
    t.add_argument("--side", default="1/10")
    t.add_argument("--steps", type=int, default=200)
    t.add_argument("--connection", default="ADAPTED")
    t.add_argument("--json", action="store_true")

    st = sub.add_parser("selftest", help="golden corpus and invariant suites")
    st.add_argument("--filter")
    st.add_argument("--corpus")
    st.add_argument("--json", action="store_true")
    return ap


def _dispatch(args) -> tuple[dict, int]:
    if args.command == "analyze":
        model, _ = load_model_file(args.path)
        if args.point:
            model = replace(model, base_point=_parse_point(args.point, model.n))
        return analyze_model(model, args.depth), EXIT_OK
    if args.command == "subsym":
        kind = args.kind.replace("-", "_").upper()
        try:
            params = {"m": args.m}
            if kind == "TORSION_FAMILY":
                params.update(lam=Fraction(args.lam), mu=Fraction(args.mu))
        except (ValueError, ZeroDivisionError):
            raise InputError("λ and μ must be rationals", "--lambda/--mu") from None
        return render_zoo(ss.zoo(kind, **params)), EXIT_OK
    if args.command == "spin":
        return render_spin(args.m, args.algebra), EXIT_OK
    if args.command == "transport":
        model, _ = load_model_file(args.path)
        try:
            i, j = (int(x) for x in args.plane.split(","))
            side = Fraction(args.side)
        except ValueError:
            raise InputError("bad --plane or --side", "--plane") from None
        return render_transport(model, (i, j), side, args.steps, args.connection.upper()), EXIT_OK
    if args.command == "selftest":
        rep = run_selftest(args.filter, args.corpus)
        return rep, (EXIT_OK if rep["failed"] == 0 else EXIT_THEOREM)
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = _dispatch(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (cg.ModelValidationError, sp.SpinError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ss.SubsymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_THEOREM if exc.code == "THEOREM_VIOLATION" else EXIT_VALIDATION
    except hol.TheoremViolation as exc:
        print(f"error: THEOREM_VIOLATION: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except nk.NoFixpointError as exc:
        print(f"error: NO_FIXPOINT: {exc}", file=sys.stderr)
        return EXIT_FIXPOINT
    if args.json:
        print(_dump(report))
    else:
        _print_text(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
