"""Command-line interface: list models, solve spectra, verify, sample ψ.

Exit codes: 0 success, 1 bad invocation/parameters, 2 no admissible residue
assignment for the requested potential, 3 verification failure.

JSON output is canonical: keys in fixed insertion order, floats rendered
with %.17g, complex numbers as {"re": ..., "im": ...} — identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .errors import (InvalidStateError, NoAdmissibleAssignmentError,
                     ParameterError, QhjError, UnknownModelError)
from .exactmath import to_complex
from .potential_catalog import MODEL_IDS, PARAM_SCHEMAS, get_model
from .polynomial_system import solve_spectrum
from .schrodinger_oracle import solve_oracle
from .wavefunction_assembly import assemble, verify_against_oracle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_ASSIGNMENT = 2
EXIT_VERIFY_FAILED = 3

_SUMMARIES = {
    "hydrogen": "radial Coulomb problem with centrifugal term",
    "scarf1": "trigonometric Scarf well on a finite interval",
    "scarf_periodic": "inverse-square periodic cell (band edges or bound)",
    "lame": "elliptic sn^2 band-edge potential",
    "assoc_lame_es": "associated elliptic potential, exactly solvable slice",
    "assoc_lame_qes": "associated elliptic potential, quasi-exact slice",
    "khare_mandal": "complex PT-symmetric cosh pair",
    "complex_scarf": "complex PT-symmetric Scarf well",
}

_VERIFY_TOL = {
    "hydrogen": 2e-4,
    "scarf1": 2e-4,
    "scarf_periodic": 5e-4,
    "lame": 5e-4,
    "assoc_lame_es": 5e-4,
    "assoc_lame_qes": 5e-4,
    "khare_mandal": 1e-3,
    "complex_scarf": 1e-3,
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped onto exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


# ---------------------------------------------------------------------------
# canonical serialization
# ---------------------------------------------------------------------------

def _canon(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return "%.17g" % obj
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, complex):
        return '{"re": %s, "im": %s}' % ("%.17g" % obj.real, "%.17g" % obj.imag)
    if isinstance(obj, dict):
        inner = ", ".join("%s: %s" % (json.dumps(str(k)), _canon(v))
                          for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_canon(v) for v in obj) + "]"
    return json.dumps(str(obj))


def canonical_json(obj):
    """Deterministic JSON text (stable key order and float formatting)."""
    return _canon(obj) + "\n"


def _residue_value(value):
    z = to_complex(value)
    if z.imag == 0.0:
        return float(z.real)
    return z


def _rows(result):
    rows = []
    for sol in result.solutions:
        e = to_complex(sol.energy)
        a = sol.assignment
        rows.append({
            "set": a.set_label,
            "n": int(a.n),
            "energy_re": float(e.real),
            "energy_im": float(e.imag),
            "energy_exact": str(sol.energy) if isinstance(sol.energy, Fraction) else None,
            "degeneracy": int(sol.degeneracy),
            "bc_class": sol.bc_class,
            "residues": {label: _residue_value(v)
                         for label, v in a.pole_residues.items()},
            "leading_exponent": _residue_value(a.lambda1) if a.lambda1 is not None else None,
            "qes_relation": a.qes_relation,
            "wavefunction_form": sol.recipe.form,
        })
    return rows


def _print_table(result, stream):
    rows = _rows(result)
    header = "%-5s %-3s %-22s %-22s %-4s %-14s" % (
        "set", "n", "energy_re", "energy_im", "deg", "bc_class")
    print(header, file=stream)
    print("-" * len(header), file=stream)
    for r in rows:
        print("%-5s %-3d %-22.12g %-22.12g %-4d %-14s" % (
            r["set"], r["n"], r["energy_re"], r["energy_im"],
            r["degeneracy"], r["bc_class"] or "-"), file=stream)
    formula = result.outcome.energy_formula
    if formula:
        print("energy formula: %s" % formula, file=stream)
    for note in result.outcome.notes:
        print("note: %s" % note, file=stream)


def _print_csv(result, stream):
    print("set,n,energy_re,energy_im,degeneracy,bc_class,wavefunction_form",
          file=stream)
    for r in _rows(result):
        print("%s,%d,%.17g,%.17g,%d,%s,%s" % (
            r["set"], r["n"], r["energy_re"], r["energy_im"], r["degeneracy"],
            r["bc_class"] or "", '"%s"' % r["wavefunction_form"]), file=stream)


# ---------------------------------------------------------------------------
# parameter handling
# ---------------------------------------------------------------------------

def _parse_param(text):
    if "=" not in text:
        raise ParameterError("parameters take the form name=value, got %r" % text)
    name, _, value = text.partition("=")
    name = name.strip()
    value = value.strip()
    try:
        frac = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ParameterError("cannot parse value %r for parameter %r"
                             % (value, name))
    if frac.denominator == 1:
        return name, int(frac)
    return name, frac


def _collect_params(args):
    params = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
        for name, value in cfg.get("params", {}).items():
            if isinstance(value, str):
                _, parsed = _parse_param("%s=%s" % (name, value))
            elif isinstance(value, bool):
                raise ParameterError("boolean is not a valid parameter value")
            elif isinstance(value, int):
                parsed = value
            elif isinstance(value, float):
                parsed = Fraction(value).limit_denominator(10 ** 12)
            else:
                raise ParameterError("unsupported config value for %r" % name)
            params[name] = parsed
        if not getattr(args, "model", None):
            args.model = cfg.get("model")
        if getattr(args, "levels", None) is None and "levels" in cfg:
            args.levels = int(cfg["levels"])
    for text in args.param or []:
        name, value = _parse_param(text)
        params[name] = value
    return params


def _build_model(args):
    params = _collect_params(args)
    if not getattr(args, "model", None):
        raise ParameterError("no model given (positional argument or config)")
    return get_model(args.model, **params)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_list(args, stream):
    if args.model:
        if args.model not in MODEL_IDS:
            raise UnknownModelError("unknown model %r; known: %s"
                                    % (args.model, ", ".join(MODEL_IDS)))
        schema = PARAM_SCHEMAS[args.model]
        if args.json:
            stream.write(canonical_json({"model": args.model,
                                         "summary": _SUMMARIES[args.model],
                                         "parameters": schema}))
        else:
            print("%s — %s" % (args.model, _SUMMARIES[args.model]), file=stream)
            for name, doc in schema.items():
                print("  %-8s %s" % (name, doc), file=stream)
        return EXIT_OK
    if args.json:
        stream.write(canonical_json(
            {"models": [{"id": mid, "summary": _SUMMARIES[mid]}
                        for mid in MODEL_IDS]}))
    else:
        for mid in MODEL_IDS:
            print("%-16s %s" % (mid, _SUMMARIES[mid]), file=stream)
    return EXIT_OK


def _cmd_solve(args, stream):
    model = _build_model(args)
    levels = args.levels if args.levels is not None else 4
    result = solve_spectrum(model, levels=levels)
    if args.format == "json":
        payload = {
            "model": model.id,
            "params": model.describe_params(),
            "spectrum_kind": result.outcome.kind,
            "energy_formula": result.outcome.energy_formula,
            "qes_relations": list(result.outcome.qes_relations or []) or None,
            "levels": _rows(result),
            "notes": list(result.outcome.notes),
        }
        stream.write(canonical_json(payload))
    elif args.format == "csv":
        _print_csv(result, stream)
    else:
        _print_table(result, stream)
    return EXIT_OK


def _oracle_indices_for(solution, oracle):
    """Candidate oracle levels compatible with the solution's channel tag."""
    if solution.bc_class and any(t != "dirichlet" for t in oracle.bc_tags):
        idx = [i for i, t in enumerate(oracle.bc_tags) if t == solution.bc_class]
        if idx:
            return idx
    return list(range(len(oracle.eigenvalues)))


def _cmd_verify(args, stream):
    model = _build_model(args)
    levels = args.levels if args.levels is not None else 4
    result = solve_spectrum(model, levels=levels)
    tol = args.tol if args.tol is not None else _VERIFY_TOL[model.id]
    oracle_kwargs = {}
    if model.id in ("lame", "assoc_lame_es", "assoc_lame_qes"):
        tops = [to_complex(s.energy).real for s in result.solutions]
        oracle_kwargs["emax"] = (max(tops) if tops else 0.0) + 0.5
    oracle = solve_oracle(model, k=len(result.solutions) + 2, **oracle_kwargs)
    ok = True
    skip_overlap = model.id == "khare_mandal"
    for sol in result.solutions:
        e = to_complex(sol.energy)
        cands = _oracle_indices_for(sol, oracle)
        gaps = [abs(complex(oracle.eigenvalues[i]) - e) for i in cands]
        pick = cands[int(np.argmin(gaps))]
        gap = min(gaps)
        line_ok = gap <= tol
        detail = ""
        if not skip_overlap:
            cluster = [i for i in cands
                       if abs(complex(oracle.eigenvalues[i])
                              - complex(oracle.eigenvalues[pick]))
                       <= 1e-6 * (1.0 + abs(e))]
            report = verify_against_oracle(
                sol.recipe, oracle, pick, cluster_levels=cluster,
                overlap_tol=1e-3, modulus_tol=5e-2,
                check_nodes=oracle.node_counts is not None)
            line_ok = line_ok and report.overlap_ok and report.nodes_ok
            detail = " overlap=%.8f" % report.overlap
            if report.predicted_nodes is not None:
                detail += " nodes=%d/%d" % (report.predicted_nodes,
                                            report.oracle_nodes)
        ok = ok and line_ok
        print("set=%s n=%d E=%.10g%+.10gj oracle=%.10g%+.10gj |dE|=%.3e tol=%.1e%s %s"
              % (sol.assignment.set_label, int(sol.assignment.n),
                 e.real, e.imag,
                 complex(oracle.eigenvalues[pick]).real,
                 complex(oracle.eigenvalues[pick]).imag,
                 gap, tol, detail, "PASS" if line_ok else "FAIL"),
              file=stream)
    print("verification %s for %s" % ("PASSED" if ok else "FAILED", model.id),
          file=stream)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _cmd_wavefunction(args, stream):
    model = _build_model(args)
    levels = args.levels if args.levels is not None else 4
    result = solve_spectrum(model, levels=levels)
    if not (0 <= args.state < len(result.solutions)):
        raise InvalidStateError(
            "state %d out of range; model has %d solved levels"
            % (args.state, len(result.solutions)))
    sol = result.solutions[args.state]
    lo, hi = model.x_window()
    margin = 0.02 * (hi - lo)
    xs = np.linspace(lo + margin, hi - margin, args.samples)
    sampled = assemble(sol.recipe, xs)
    print("x,psi_re,psi_im", file=stream)
    for x, v in zip(sampled.xs, sampled.values):
        print("%.17g,%.17g,%.17g" % (x, v.real, v.imag), file=stream)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="qhj",
                     description="residue-based spectra for a catalog of "
                                 "exactly and quasi-exactly solvable potentials")
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list models or one model's parameters")
    p_list.add_argument("model", nargs="?", default=None)
    p_list.add_argument("--json", action="store_true")

    def add_model_args(p):
        p.add_argument("model", nargs="?", default=None,
                       help="model id (see `qhj list`)")
        p.add_argument("--param", action="append", default=[],
                       metavar="NAME=VALUE",
                       help="model parameter; fractions like 1/2 are exact")
        p.add_argument("--config", default=None,
                       help="JSON file with model/params/levels; flags win")
        p.add_argument("--levels", type=int, default=None,
                       help="number of levels per admissible set (default 4)")

    p_solve = sub.add_parser("solve", help="quantize and solve the spectrum")
    add_model_args(p_solve)
    p_solve.add_argument("--format", choices=("table", "json", "csv"),
                         default="table")

    p_verify = sub.add_parser("verify", help="cross-check against a grid solver")
    add_model_args(p_verify)
    p_verify.add_argument("--tol", type=float, default=None,
                          help="energy tolerance (default per model family)")

    p_wf = sub.add_parser("wavefunction", help="sample one eigenfunction as CSV")
    add_model_args(p_wf)
    p_wf.add_argument("--state", type=int, default=0,
                      help="index into the solved level list")
    p_wf.add_argument("--samples", type=int, default=512)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    stream = sys.stdout
    try:
        if args.command == "list":
            return _cmd_list(args, stream)
        if args.command == "solve":
            return _cmd_solve(args, stream)
        if args.command == "verify":
            return _cmd_verify(args, stream)
        if args.command == "wavefunction":
            return _cmd_wavefunction(args, stream)
        raise ParameterError("unknown command %r" % (args.command,))
    except NoAdmissibleAssignmentError as exc:
        print("no admissible residue assignment: %s" % exc, file=sys.stderr)
        return EXIT_NO_ASSIGNMENT
    except (ParameterError, UnknownModelError, InvalidStateError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except QhjError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
