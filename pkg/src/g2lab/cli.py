"""Command-line surface: JSON reports over the library.

Exit codes: 0 success, 1 input parse error, 2 validation failure (bad
Jacobi, non-positive forms, unknown catalog name, failed preconditions).
Reports go to stdout as JSON with floats printed to 17 significant digits
so every double round-trips losslessly.
"""
from __future__ import annotations

import argparse
import json
import json.encoder as _json_encoder
import os
import sys

import numpy as np

from .catalog import catalog, catalog_names
from .curvature import (einstein_calibrated_residual, einstein_residual, ricci,
                        ricci_operator, scal_from_torsion, scalar_curvature,
                        soliton_solve, star_ricci, star_scal)
from .exterior import KForm, Metric
from .flow import (FlowOptions, closed_form_n2, closed_form_n2_velocity,
                   closed_form_n12, closed_form_n12_velocity, flow_integrate,
                   hodge_laplacian, oracle_residual)
from .g2core import (G2Structure, PositivityError, TorsionSolveError, classify,
                     lee_form, torsion_forms)
from .inputfmt import ParseError, format_document, parse_document
from .liealg import jacobi_residual
from .su3 import SU3Structure, g2_product, su3_classify

DEFAULT_TOL = 1e-8

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVALID = 2

_ORACLES = {
    "n2": (closed_form_n2, closed_form_n2_velocity),
    "n12_modified_basis": (closed_form_n12, closed_form_n12_velocity),
}


class ValidationFailure(Exception):
    """Carries a report that should be emitted with exit code 2."""

    def __init__(self, message):
        super().__init__(message)


class _ReportEncoder(json.JSONEncoder):
    # 17 significant digits: enough for any double to round-trip exactly.
    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None

        def floatstr(x, _inf=_json_encoder.INFINITY):
            if x != x:
                return "NaN"
            if x == _inf:
                return "Infinity"
            if x == -_inf:
                return "-Infinity"
            return format(x, ".17g")

        iterencode = _json_encoder._make_iterencode(
            markers, self.default, _json_encoder.py_encode_basestring_ascii,
            self.indent, floatstr, self.key_separator, self.item_separator,
            self.sort_keys, self.skipkeys, _one_shot)
        return iterencode(o, 0)


def _jsonify(value):
    if isinstance(value, KForm):
        return {"e" + "".join(map(str, key)): float(c) for key, c in value.items()}
    if isinstance(value, np.ndarray):
        return [[float(x) for x in row] for row in value] if value.ndim == 2 \
            else [float(x) for x in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    return value


def emit(report, stream=None):
    print(json.dumps(_jsonify(report), indent=2, cls=_ReportEncoder),
          file=stream or sys.stdout)


def _load(args):
    if args.catalog:
        try:
            entry = catalog(args.catalog)
        except KeyError as exc:
            raise ValidationFailure(str(exc)) from exc
        return entry.document, f"catalog:{args.catalog}"
    if not args.input:
        raise ValidationFailure("no input: give a document path or --catalog NAME")
    with open(args.input, encoding="utf-8") as fh:
        return parse_document(fh.read()), args.input


def _input_block(doc, source):
    return {"source": source, "dim": doc.algebra.dim, "forms": sorted(doc.forms)}


def _get_form(doc, name, degree=None):
    if name not in doc.forms:
        raise ValidationFailure(f"document has no form named {name!r}")
    form = doc.forms[name]
    if degree is not None and form.degree != degree:
        raise ValidationFailure(f"form {name!r} has degree {form.degree}, expected {degree}")
    return form


def _structure(doc, form_name):
    phi = _get_form(doc, form_name, degree=3)
    if doc.algebra.dim != 7:
        raise ValidationFailure("G2 commands need a 7-dimensional algebra")
    try:
        return G2Structure(doc.algebra, phi)
    except PositivityError as exc:
        raise ValidationFailure(str(exc)) from exc


def _chosen_metric(doc, args):
    """The metric a curvature command runs with: induced by the named 3-form
    when present (and --metric is not 'identity'), the identity otherwise."""
    if args.metric != "identity" and doc.algebra.dim == 7 and args.form in doc.forms:
        G = _structure(doc, args.form)
        return G.metric, f"phi:{args.form}"
    return Metric.identity(doc.algebra.dim), "identity"


# --- commands ----------------------------------------------------------


def cmd_check(args, tol):
    doc, source = _load(args)
    jac = jacobi_residual(doc.algebra)
    forms_report = {}
    ok = jac <= tol
    for name, form in doc.forms.items():
        info = {"degree": form.degree, "norm": form.norm()}
        if form.degree == 3 and doc.algebra.dim == 7:
            try:
                G2Structure(doc.algebra, form)
                info["positive_g2"] = True
            except PositivityError as exc:
                info["positive_g2"] = False
                info["reason"] = str(exc)
                ok = False
        forms_report[name] = info
    report = {
        "command": "check",
        "input": _input_block(doc, source),
        "results": {"valid": ok, "jacobi_residual": jac, "forms": forms_report,
                    "unimodular": doc.algebra.is_unimodular(),
                    "lower_central_series": doc.algebra.lower_central_series_dims()},
        "residuals": {"jacobi": jac},
        "tolerances": {"jacobi": tol},
    }
    return report, EXIT_OK if ok else EXIT_INVALID


def cmd_metric(args, tol):
    doc, source = _load(args)
    G = _structure(doc, args.form)
    report = {
        "command": "metric",
        "input": _input_block(doc, source),
        "results": {
            "metric": G.metric.g,
            "volume_coefficient": G.metric.sqrt_det,
            "gram_det": G.gram_det,
            "orientation": G.orientation,
            "positive_definite": G.metric.positive_definite,
        },
        "residuals": {"metric_symmetry": float(np.abs(G.metric.g - G.metric.g.T).max())},
        "tolerances": {"vanishing": tol},
    }
    return report, EXIT_OK


def _torsion_payload(G, tol):
    t = torsion_forms(G)
    cls = classify(t, tol=tol)
    theta = lee_form(G)
    return t, cls, {
        "tau0": t.tau0,
        "tau1": t.tau1,
        "tau2": t.tau2,
        "tau3": t.tau3,
        "norms": {"tau0": abs(t.tau0), "tau1": G.norm(t.tau1),
                  "tau2": G.norm(t.tau2), "tau3": G.norm(t.tau3)},
        "lee_form": theta,
        "class": cls.label,
        "classes": list(cls.labels),
        "vanishing": {"tau0": cls.tau0_zero, "tau1": cls.tau1_zero,
                      "tau2": cls.tau2_zero, "tau3": cls.tau3_zero},
    }


def cmd_torsion(args, tol):
    doc, source = _load(args)
    G = _structure(doc, args.form)
    try:
        t, cls, results = _torsion_payload(G, tol)
    except TorsionSolveError as exc:
        raise ValidationFailure(str(exc)) from exc
    report = {
        "command": "torsion",
        "input": _input_block(doc, source),
        "results": results,
        "residuals": {
            "reconstruction": t.residual,
            "tau1_consistency": t.tau1_consistency,
            "tau2_membership": t.tau2.wedge(G.star_phi).norm(),
            "tau3_membership": max(t.tau3.wedge(G.phi).norm(),
                                   t.tau3.wedge(G.star_phi).norm()),
            "lee_vs_3tau1": (lee_form(G) - 3.0 * t.tau1).norm(),
        },
        "tolerances": {"vanishing": tol},
    }
    return report, EXIT_OK


def cmd_classify(args, tol):
    report, code = cmd_torsion(args, tol)
    results = report["results"]
    report["command"] = "classify"
    report["results"] = {k: results[k] for k in ("class", "classes", "vanishing", "norms")}
    return report, code


def cmd_ricci(args, tol):
    doc, source = _load(args)
    metric, metric_source = _chosen_metric(doc, args)
    ric = ricci(doc.algebra, metric)
    report = {
        "command": "ricci",
        "input": _input_block(doc, source),
        "results": {
            "metric_source": metric_source,
            "ricci": ric,
            "ricci_operator": ricci_operator(doc.algebra, metric),
            "scalar_curvature": scalar_curvature(doc.algebra, metric),
        },
        "residuals": {"ricci_symmetry": float(np.abs(ric - ric.T).max())},
        "tolerances": {"vanishing": tol},
    }
    return report, EXIT_OK


def cmd_soliton(args, tol):
    doc, source = _load(args)
    metric, metric_source = _chosen_metric(doc, args)
    cert = soliton_solve(doc.algebra, metric)
    report = {
        "command": "soliton",
        "input": _input_block(doc, source),
        "results": {
            "metric_source": metric_source,
            "lambda": cert.lam,
            "derivation": cert.derivation,
            "derivation_diagonal": cert.derivation_diagonal,
            "classification": cert.classification,
        },
        "residuals": {"soliton": cert.residual},
        "tolerances": {"vanishing": tol},
    }
    return report, EXIT_OK


def cmd_einstein(args, tol):
    doc, source = _load(args)
    metric, metric_source = _chosen_metric(doc, args)
    scal = scalar_curvature(doc.algebra, metric)
    residuals = {"einstein": einstein_residual(doc.algebra, metric)}
    results = {
        "metric_source": metric_source,
        "scalar_curvature": scal,
        "einstein": residuals["einstein"] <= tol,
        "einstein_constant": scal / doc.algebra.dim,
    }
    if doc.algebra.dim == 7 and args.form in doc.forms:
        G = _structure(doc, args.form)
        t = torsion_forms(G)
        cls = classify(t, tol=tol)
        if cls.tau0_zero and cls.tau1_zero and cls.tau3_zero:
            residuals["einstein_calibrated"] = einstein_calibrated_residual(G, tol=tol)
        results["star_scal"] = star_scal(G)
        results["star_ricci"] = star_ricci(G)
    report = {
        "command": "einstein",
        "input": _input_block(doc, source),
        "results": results,
        "residuals": residuals,
        "tolerances": {"vanishing": tol},
    }
    return report, EXIT_OK


def cmd_su3(args, tol):
    doc, source = _load(args)
    if doc.algebra.dim != 6:
        raise ValidationFailure("su3 needs a 6-dimensional algebra")
    omega = _get_form(doc, args.omega, degree=2)
    psi = _get_form(doc, args.psi, degree=3)
    try:
        S = SU3Structure(doc.algebra, omega, psi)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    cls = su3_classify(S, tol=tol)
    Gp = g2_product(S)
    t = torsion_forms(Gp)
    product_class = classify(t, tol=tol)
    report = {
        "command": "su3",
        "input": _input_block(doc, source),
        "results": {
            "lambda_psi": S.lam,
            "J": S.J,
            "metric": S.metric.g,
            "psi_hat": S.psi_hat,
            "half_flat": cls.half_flat,
            "coupled": cls.coupled,
            "symplectic_half_flat": cls.symplectic_half_flat,
            "nearly_kahler": cls.nearly_kahler,
            "coupled_constant": cls.c,
            "product_class": product_class.label,
        },
        "residuals": {
            "j_squared": float(np.linalg.norm(S.J @ S.J + np.eye(6))),
            "normalization": S.normalization_residual(),
            **{f"classify_{k}": v for k, v in cls.residuals.items()},
        },
        "tolerances": {"vanishing": tol},
    }
    return report, EXIT_OK


def cmd_flow(args, tol):
    doc, source = _load(args)
    phi0 = _get_form(doc, args.form, degree=3)
    options = FlowOptions(sample_every=args.sample_every, closedness_tol=max(tol, 1e-10))
    try:
        trajectory = flow_integrate(doc.algebra, phi0, args.t_end, args.dt, options)
    except (ValueError, PositivityError) as exc:
        raise ValidationFailure(str(exc)) from exc
    if args.out:
        trajectory.to_csv(args.out)
    final = trajectory.final
    results = {
        "t_end": args.t_end,
        "dt": args.dt,
        "termination": trajectory.termination,
        "samples": len(trajectory.states),
        "final_t": final.t,
        "final_phi": final.phi,
        "final_diagnostics": final.diagnostics,
    }
    residuals = {"final_closedness": final.diagnostics["closedness"]}
    if args.oracle:
        if args.catalog not in _ORACLES:
            raise ValidationFailure(
                f"no closed-form solution for {args.catalog!r}; oracle mode supports "
                + ", ".join(_ORACLES))
        solution, _ = _ORACLES[args.catalog]
        deviation = max((state.phi - solution(state.t)).sup_norm()
                        for state in trajectory.states)
        results["oracle_max_deviation"] = deviation
        residuals["oracle"] = deviation
    report = {
        "command": "flow",
        "input": _input_block(doc, source),
        "results": results,
        "residuals": residuals,
        "tolerances": {"vanishing": tol, "closedness": options.closedness_tol},
    }
    code = EXIT_OK if trajectory.termination == "reached_t_end" else EXIT_INVALID
    return report, code


def cmd_oracle(args, tol):
    doc, source = _load(args)
    if args.catalog not in _ORACLES:
        raise ValidationFailure(
            f"no closed-form solution for {args.catalog!r}; choose one of "
            + ", ".join(_ORACLES))
    solution, velocity = _ORACLES[args.catalog]
    times = [float(x) for x in args.times.split(",")]
    residuals = oracle_residual(doc.algebra, solution, velocity, times)
    lap0 = hodge_laplacian(G2Structure(doc.algebra, solution(times[0])))
    report = {
        "command": "oracle",
        "input": _input_block(doc, source),
        "results": {
            "times": times,
            "ode_residuals": {repr(t): r for t, r in residuals.items()},
            "laplacian_at_first_time": lap0,
        },
        "residuals": {"ode_max": max(residuals.values())},
        "tolerances": {"ode": 1e-9},
    }
    return report, EXIT_OK


def cmd_catalog(args, tol):
    if args.name is None and not args.catalog:
        report = {
            "command": "catalog",
            "input": {"source": "builtin"},
            "results": {"names": list(catalog_names())},
            "residuals": {},
            "tolerances": {},
        }
        return report, EXIT_OK
    name = args.name or args.catalog
    try:
        entry = catalog(name)
    except KeyError as exc:
        raise ValidationFailure(str(exc)) from exc
    report = {
        "command": "catalog",
        "input": {"source": f"catalog:{name}", "dim": entry.algebra.dim,
                  "forms": sorted(entry.forms)},
        "results": {
            "name": entry.name,
            "description": entry.description,
            "document": format_document(entry.document),
            "jacobi_residual": jacobi_residual(entry.algebra),
        },
        "residuals": {"jacobi": jacobi_residual(entry.algebra)},
        "tolerances": {"jacobi": tol},
    }
    return report, EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "metric": cmd_metric,
    "torsion": cmd_torsion,
    "classify": cmd_classify,
    "ricci": cmd_ricci,
    "soliton": cmd_soliton,
    "einstein": cmd_einstein,
    "su3": cmd_su3,
    "flow": cmd_flow,
    "oracle": cmd_oracle,
    "catalog": cmd_catalog,
}


def _add_io_arguments(sub, form_default="phi"):
    sub.add_argument("input", nargs="?", help="input document path")
    sub.add_argument("--catalog", help="use a built-in entry instead of a file")
    sub.add_argument("--form", default=form_default,
                     help=f"name of the 3-form to use (default {form_default!r})")
    sub.add_argument("--tol", type=float, default=None,
                     help="vanishing tolerance (overrides G2_TOL; default 1e-8)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="g2",
        description="Compute, classify and flow G2-structures on Lie algebras "
                    "given by structure constants.")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("check", "metric", "torsion", "classify"):
        _add_io_arguments(subs.add_parser(name))
    for name in ("ricci", "soliton", "einstein"):
        sub = subs.add_parser(name)
        _add_io_arguments(sub)
        sub.add_argument("--metric", choices=("phi", "identity"), default="phi",
                         help="metric choice: induced by the 3-form when present "
                              "(default) or the identity inner product")
    sub = subs.add_parser("su3")
    _add_io_arguments(sub)
    sub.add_argument("--omega", default="omega", help="name of the 2-form")
    sub.add_argument("--psi", default="psi", help="name of the 3-form")

    sub = subs.add_parser("flow")
    _add_io_arguments(sub)
    sub.add_argument("--t-end", type=float, default=1.0)
    sub.add_argument("--dt", type=float, default=1e-3)
    sub.add_argument("--sample-every", type=int, default=100)
    sub.add_argument("--out", help="write the sampled trajectory as CSV")
    sub.add_argument("--oracle", action="store_true",
                     help="compare against the closed-form solution (catalog inputs only)")

    sub = subs.add_parser("oracle")
    _add_io_arguments(sub)
    sub.add_argument("--times", default="0,1,10,100",
                     help="comma-separated times at which to check the flow equation")

    sub = subs.add_parser("catalog")
    sub.add_argument("name", nargs="?", help="entry to print (omit to list)")
    sub.add_argument("--catalog", help=argparse.SUPPRESS)
    sub.add_argument("--tol", type=float, default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = args.tol
    if tol is None:
        env = os.environ.get("G2_TOL")
        tol = float(env) if env else DEFAULT_TOL
    try:
        report, code = _COMMANDS[args.command](args, tol)
    except ParseError as exc:
        emit({"command": args.command, "input": {"source": getattr(args, "input", "") or ""},
              "results": {}, "residuals": {}, "tolerances": {}, "error": str(exc)})
        return EXIT_PARSE
    except ValidationFailure as exc:
        emit({"command": args.command, "input": {"source": getattr(args, "input", "") or ""},
              "results": {}, "residuals": {}, "tolerances": {}, "error": str(exc)})
        return EXIT_INVALID
    emit(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
