"""Command-line verification reports.

Subcommands:

* check-chart  -- closedness, primitive, nondegeneracy of a chart
* observable   -- OF/AOF verdict pair (and classification on full
                  momentum charts) for an (n-1)-form
* bracket      -- poisson | theta | external | complementary | pseudo
* simulate     -- the conservation experiment from a JSON config
* recheck      -- replay the witnesses stored in an earlier report

Reports are JSON with stable key ordering: identical inputs and seed
produce byte-identical output.  Exit codes: 0 all checks pass, 1 at
least one check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algebra import RationalSampler
from .charts import (
    Chart,
    builtin_chart,
    chart_from_spec,
    maxwell_pi,
    maxwell_potential_form,
    nondegeneracy_check,
)
from .exterior import PolyForm, dump_form, ext_d, form_basis, hook, parse_form
from .dynamics import (
    NoSolutionInFamily,
    OFCounterexample,
    hamiltonian_nvector_solve,
    recheck_of_counterexample,
)
from .observables import (
    NotAOF,
    NotInClassifiedForm,
    aof_solve,
    classify_aof,
    is_of,
)
from .brackets import (
    NotDefined,
    NotWellDefined,
    complementary_bracket,
    external_bracket,
    poisson_bracket,
    pseudobracket,
    theta_bracket,
)
from .fieldlab import conservation_experiment, load_experiment_config, write_series_csv

PASS, FAIL, NOT_DEFINED = "pass", "fail", "not-defined"


def _frac_str(value: Fraction) -> str:
    return str(value)


def _point_to_json(point: Sequence[Fraction]) -> list[str]:
    return [str(v) for v in point]


def _point_from_json(data: Sequence[str]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in data)


def load_chart_argument(label: str) -> Chart:
    if label.endswith(".json"):
        with open(label, encoding="utf-8") as fh:
            return chart_from_spec(json.load(fh))
    return builtin_chart(label)


def load_form_argument(chart: Chart, spec: str) -> PolyForm:
    """Resolve a form argument: named shortcut, file path, or inline JSON."""
    frame = chart.frame
    if spec.startswith("@"):
        name = spec[1:]
        if name == "pi" and chart.name == "maxwell":
            return maxwell_pi(frame)
        if name == "a" and chart.name == "maxwell":
            return maxwell_potential_form(frame)
        if name == "charge" and chart.name.startswith("scalar"):
            from .observables import charge_current_form

            return charge_current_form(chart)
        if name.startswith("volume-primitive"):
            # x^1 dx^2 ^ ... ^ dx^n (differential is the volume form)
            h = chart.horizontal
            return form_basis(frame, *h[1:]).scale(frame.poly_var(h[0]))
        if name in frame.names:
            return PolyForm(frame, 0, {(): frame.poly_var(name)})
        raise ValueError(f"unknown form shortcut {spec!r} for chart {chart.name!r}")
    if spec.lstrip().startswith("{"):
        data = json.loads(spec)
    else:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    form = parse_form(frame, data, kind="form")
    assert isinstance(form, PolyForm)
    return form


class Report:
    def __init__(self, seed: int, chart: Chart | None):
        self.data = {
            "tool_version": __version__,
            "seed": seed,
            "chart": None if chart is None else {"name": chart.name, "hash": chart.spec_hash()},
            "checks": [],
        }

    def add(self, check_id: str, law: str, status: str, witness: dict | None = None) -> None:
        record = {"check_id": check_id, "law": law, "status": status}
        record["witness"] = witness if witness is not None else {}
        self.data["checks"].append(record)

    @property
    def failed(self) -> bool:
        return any(c["status"] == FAIL for c in self.data["checks"])

    def emit(self, output: str | None) -> None:
        text = json.dumps(self.data, sort_keys=True, indent=2) + "\n"
        if output:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def exit_code(self) -> int:
        return 1 if self.failed else 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_check_chart(args) -> int:
    try:
        chart = load_chart_argument(args.chart)
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    report = Report(args.seed, chart)
    closed = not ext_d(chart.omega)
    report.add("domega", "d(omega) = 0", PASS if closed else FAIL,
               None if closed else {"residual": dump_form(ext_d(chart.omega))})
    if chart.theta is not None:
        exact = ext_d(chart.theta) == chart.omega
        report.add("dtheta", "d(theta) = omega", PASS if exact else FAIL,
                   None if exact else {"residual": dump_form(ext_d(chart.theta) - chart.omega)})
    verdict = nondegeneracy_check(chart, seed=args.seed)
    witness = None
    if not verdict.passed:
        witness = {"kernel_vector": _point_to_json(verdict.kernel_witness)}
    report.add("nondegenerate", "xi . omega = 0 implies xi = 0",
               PASS if verdict.passed else FAIL, witness)
    report.emit(args.output)
    return report.exit_code()


def cmd_observable(args) -> int:
    try:
        chart = load_chart_argument(args.chart)
        form = load_form_argument(chart, args.form)
        if form.degree != chart.n - 1:
            raise ValueError(
                f"observable verdicts need an (n-1)-form; got degree {form.degree} on n = {chart.n}"
            )
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    report = Report(args.seed, chart)
    sampler = RationalSampler(args.seed)
    if args.point:
        points = [tuple(Fraction(v) for v in args.point.split(","))]
    else:
        points = [sampler.point(chart.dim) for _ in range(args.points)]

    xi = aof_solve(chart, form)
    if isinstance(xi, NotAOF):
        report.add("aof", "dF + xi . omega = 0 solvable", FAIL,
                   {"residual": dump_form(xi.residual), "dF": dump_form(ext_d(form))})
    else:
        report.add("aof", "dF + xi . omega = 0 solvable", PASS,
                   {"hamilton_field": dump_form(xi), "dF": dump_form(ext_d(form))})
    verdict = is_of(chart, form, points, sample_count=args.samples, seed=args.seed)
    if verdict.passed:
        report.add("of", "value on the solution cone depends on the contraction only",
                   PASS, {"samples": verdict.samples_used,
                          "points": [_point_to_json(p) for p in points]})
    else:
        ce = verdict.counterexample
        report.add("of", "value on the solution cone depends on the contraction only",
                   FAIL, {
                       "form": dump_form(ext_d(form)),
                       "point": _point_to_json(verdict.failed_point),
                       "family": list(ce.family_horizontal),
                       "base_params": _point_to_json(ce.base_params),
                       "kernel_direction": _point_to_json(ce.kernel_direction),
                       "scale": str(ce.scale),
                       "value": str(ce.value),
                       "value_perturbed": str(ce.value_perturbed),
                   })
    if not isinstance(xi, NotAOF) and chart.name.startswith("lepage-dedecker:"):
        try:
            cls = classify_aof(chart, form)
            report.add("classify", "F = Q + xi . theta + closed", PASS, {
                "momentum_part": dump_form(cls.momentum_part),
                "lift_part": dump_form(cls.lift_part),
                "remainder": dump_form(cls.remainder),
            })
        except NotInClassifiedForm as exc:
            report.add("classify", "F = Q + xi . theta + closed", NOT_DEFINED, {"reason": str(exc)})
    report.emit(args.output)
    return report.exit_code()


def cmd_bracket(args) -> int:
    try:
        chart = load_chart_argument(args.chart)
        f = load_form_argument(chart, args.f)
        g = load_form_argument(chart, args.g)
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    report = Report(args.seed, chart)
    kind = args.kind
    try:
        if kind == "poisson":
            value = poisson_bracket(chart, f, g)
            report.add("bracket", "{F,G} = xi_F ^ xi_G . omega", PASS, {"value": dump_form(value)})
        elif kind == "theta":
            value = theta_bracket(chart, f, g)
            report.add("bracket", "{F,G} corrected by the primitive", PASS, {"value": dump_form(value)})
        elif kind == "external":
            value = external_bracket(chart, f, g)
            report.add("bracket", "one-sided contraction bracket", PASS, {"value": dump_form(value)})
        elif kind == "complementary":
            scalar = complementary_bracket(chart, f, g)
            report.add("bracket", "scalar bracket of complementary degrees", PASS,
                       {"value": scalar.to_text()})
        elif kind == "pseudo":
            if chart.hamiltonian is None:
                raise NotDefined("chart carries no Hamiltonian")
            sampler = RationalSampler(args.seed)
            point = sampler.point(chart.dim) if not args.point else tuple(
                Fraction(v) for v in args.point.split(","))
            sol = hamiltonian_nvector_solve(chart, chart.hamiltonian, point)
            from .observables import algebraic_copolarization

            value = pseudobracket(chart, f, sol, algebraic_copolarization(chart))
            witness = {"point": _point_to_json(point)}
            if value.scalar is not None:
                witness["scalar"] = str(value.scalar)
            else:
                witness["pairings"] = [str(v) for v in value.pairings]
            report.add("bracket", "{H,F} from the solution cone", PASS, witness)
        else:
            raise NotDefined(f"unknown bracket kind {kind}")
    except NotDefined as exc:
        report.add("bracket", "bracket outside the constructed cases", NOT_DEFINED,
                   {"reason": f"{exc}; general mixed-degree brackets are an open problem here"})
    except (NotWellDefined, ValueError) as exc:
        report.add("bracket", "bracket well-defined", FAIL, {"reason": str(exc)})
    except NoSolutionInFamily as exc:
        report.add("bracket", "Hamilton equation solvable at the point", FAIL, {"reason": str(exc)})
    report.emit(args.output)
    return report.exit_code()


def cmd_simulate(args) -> int:
    try:
        config = load_experiment_config(args.config)
        if args.tolerance is not None:
            from dataclasses import replace

            config = replace(config, conserved_tolerance=float(args.tolerance))
    except (ValueError, TypeError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    try:
        result = conservation_experiment(config)
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    report = Report(args.seed, None)
    for rep in result.functionals:
        expected = None if not config.expectations else config.expectations.get(rep.name)
        status = PASS
        if expected is not None and expected != rep.conserved:
            status = FAIL
        report.add(
            f"functional:{rep.name}",
            "slice integrals of conserved densities are slice-independent",
            status,
            {
                "initial": repr(rep.initial),
                "max_drift": repr(rep.max_drift),
                "conserved": rep.conserved,
                "tolerance": repr(rep.tolerance),
            },
        )
    if args.output_csv:
        write_series_csv(result, args.output_csv)
    report.emit(args.output)
    return report.exit_code()


def cmd_recheck(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    chart = None
    if data.get("chart"):
        try:
            chart = builtin_chart(data["chart"]["name"])
        except ValueError:
            sys.stderr.write("recheck supports built-in charts only\n")
            return 2
        if chart.spec_hash() != data["chart"]["hash"]:
            sys.stderr.write("chart hash mismatch\n")
            return 1
    verified = 0
    failures = 0
    for check in data.get("checks", []):
        witness = check.get("witness") or {}
        if check["check_id"] == "nondegenerate" and check["status"] == FAIL:
            from .charts import contraction_matrix

            vector = _point_from_json(witness["kernel_vector"])
            matrix = contraction_matrix(chart)
            image = [sum(row[j] * vector[j] for j in range(len(vector))) for row in matrix]
            ok = not any(image) and any(vector)
            verified += ok
            failures += not ok
        elif check["check_id"] == "of" and check["status"] == FAIL:
            form = parse_form(chart.frame, witness["form"], kind="form")
            ce = OFCounterexample(
                family_horizontal=tuple(witness["family"]),
                base_params=_point_from_json(witness["base_params"]),
                kernel_direction=_point_from_json(witness["kernel_direction"]),
                scale=Fraction(witness["scale"]),
                value=Fraction(witness["value"]),
                value_perturbed=Fraction(witness["value_perturbed"]),
            )
            point = _point_from_json(witness["point"])
            ok = recheck_of_counterexample(chart, form, point, ce)  # type: ignore[arg-type]
            verified += ok
            failures += not ok
        elif check["check_id"] == "aof" and check["status"] == PASS and chart is not None:
            xi_terms = witness.get("hamilton_field")
            df_terms = witness.get("dF")
            if xi_terms is None or df_terms is None:
                continue
            xi = parse_form(chart.frame, xi_terms, kind="multivector")
            df = parse_form(chart.frame, df_terms, kind="form")
            ok = not (hook(xi, chart.omega) + df)  # type: ignore[arg-type]
            verified += ok
            failures += not ok
        elif check["check_id"] == "aof" and check["status"] == FAIL and chart is not None:
            df_terms = witness.get("dF")
            residual_terms = witness.get("residual")
            if df_terms is None or residual_terms is None:
                continue
            from .observables import NotAOF as _NotAOF
            from .observables import solve_contraction

            df = parse_form(chart.frame, df_terms, kind="form")
            stored = parse_form(chart.frame, residual_terms, kind="form")
            result = solve_contraction(chart, -df)  # type: ignore[arg-type]
            ok = isinstance(result, _NotAOF) and result.residual == stored
            verified += ok
            failures += not ok
    sys.stdout.write(json.dumps({"verified": verified, "failed": failures}, sort_keys=True) + "\n")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multisymp", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-chart", help="verify chart invariants")
    p.add_argument("chart")
    p.add_argument("--output")
    p.set_defaults(func=cmd_check_chart)

    p = sub.add_parser("observable", help="OF/AOF verdict for an (n-1)-form")
    p.add_argument("chart")
    p.add_argument("--form", required=True)
    p.add_argument("--points", type=int, default=3)
    p.add_argument("--point", default=None, help="comma-separated rational chart point")
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--output")
    p.set_defaults(func=cmd_observable)

    p = sub.add_parser("bracket", help="bracket of two forms")
    p.add_argument("chart")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--kind", choices=["poisson", "theta", "external", "complementary", "pseudo"],
                   default="poisson")
    p.add_argument("--point", default=None)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("simulate", help="run a conservation experiment config")
    p.add_argument("config")
    p.add_argument("--tolerance", default=None, help="override the conserved-drift tolerance")
    p.add_argument("--output")
    p.add_argument("--output-csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recheck", help="replay the witnesses of a report")
    p.add_argument("report")
    p.set_defaults(func=cmd_recheck)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
