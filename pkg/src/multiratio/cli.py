"""Command-line interface.

Subcommands: ``moments``, ``analyze``, ``weights``, ``estimate``,
``simulate``. Each builds a :class:`ReportTable` that is rendered as aligned
text, CSV or JSON. Exit status is 0 on success, 1 on invalid input and 2 on
numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import approximation as approx
from .errors import NumericError, ValidationError
from .estimators import EstimatorKind, WeightVector, default_roster, evaluate
from .population import (
    PopulationMoments,
    design,
    population_moments,
    stats_from_values,
)
from .readers import parse_population_csv, parse_summary_file, parse_units_csv
from .simulation import SimulationConfig, compare_to_analytic, run_exhaustive, run_monte_carlo
from .weights import equal_weights, optimal_weights

_LABELS = {
    "mean": "sample mean",
    "arithmetic": "arithmetic (Olkin)",
    "geometric": "geometric",
    "harmonic": "harmonic",
    "product": "product t_s",
}


@dataclass
class ReportTable:
    title: str
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)
    footnotes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "metadata": _jsonable(self.metadata),
            "columns": list(self.columns),
            "rows": [_jsonable(dict(zip(self.columns, r))) for r in self.rows],
            "footnotes": list(self.footnotes),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if not math.isfinite(obj) else float(obj)
    return obj


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (float, np.floating)):
        return "-" if math.isnan(v) else f"{v:.7g}"
    if v is None:
        return "-"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def render(table: ReportTable, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(table.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow(["" if v is None else repr(float(v)) if isinstance(v, float) else v
                             for v in row])
        return buf.getvalue()
    cells = [[str(c) for c in table.columns]] + [[_fmt(v) for v in r] for r in table.rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(table.columns))]
    lines = [table.title, "=" * len(table.title)]
    lines += [f"{k}: {_fmt(v)}" for k, v in table.metadata.items()]
    lines.append("")
    for i, r in enumerate(cells):
        lines.append("  ".join(c.rjust(w) if i and j else c.ljust(w)
                               for j, (c, w) in enumerate(zip(r, widths))).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    if table.footnotes:
        lines.append("")
        lines += [f"[{i}] {note}" for i, note in enumerate(table.footnotes, start=1)]
    return "\n".join(lines) + "\n"


# -- inputs ------------------------------------------------------------------


def _read(path) -> tuple[str, str]:
    data = Path(path).read_bytes()
    return data.decode("utf-8"), hashlib.sha256(data).hexdigest()


def _label(kind: EstimatorKind) -> str:
    if kind.tag == "ratio":
        return f"ratio (phi{kind.index + 1})"
    return _LABELS[kind.tag]


def _attributes(kind: EstimatorKind, k: int) -> str:
    if kind.tag == "ratio":
        return f"phi{kind.index + 1}"
    if kind.tag == "mean":
        return "none"
    return ",".join(f"phi{i + 1}" for i in range(k))


def parse_weights(choice: str, k: int, moments: PopulationMoments | None = None):
    """Resolve ``optimal``, ``equal`` or ``w1,w2,...`` to a WeightVector."""
    choice = choice.strip()
    if choice == "equal":
        return equal_weights(k)
    if choice == "optimal":
        if moments is None:
            raise ValidationError("optimal weights need population moments")
        return optimal_weights(moments).w
    try:
        values = [float(x) for x in choice.split(",")]
    except ValueError:
        raise ValidationError(f"cannot parse weights {choice!r}") from None
    if len(values) != k:
        raise ValidationError(f"expected {k} weights, got {len(values)}")
    return WeightVector(values)


def _load_moments(args):
    """Moments, default n, reference values and input digest from --input/--summary."""
    if getattr(args, "summary", None):
        text, digest = _read(args.summary)
        parsed = parse_summary_file(text)
        return parsed.moments, parsed.n, parsed.reference, digest
    text, digest = _read(args.input)
    return population_moments(parse_population_csv(text)), None, {}, digest


# -- commands ----------------------------------------------------------------


def cmd_moments(moments: PopulationMoments, digest: str | None = None) -> ReportTable:
    rows = [
        [f"phi{i + 1}", moments.P[i], moments.S2phi[i], moments.Csq[i], moments.C0i[i],
         moments.rho_pb[i]]
        for i in range(moments.k)
    ]
    meta = {
        "N": moments.N, "k": moments.k, "Ybar": moments.Ybar, "S2y": moments.S2y,
        "C0sq": moments.C0sq, "rho_phi": moments.rho_phi.tolist(), "Cij": moments.Cij.tolist(),
    }
    if digest:
        meta["input_sha256"] = digest
    return ReportTable("Population moments", ["attribute", "P", "S2phi", "Csq", "C0i", "rho_pb"],
                       rows, meta)


def moments_document(moments: PopulationMoments) -> dict:
    """Summary JSON (re-readable by parse_summary_file) plus derived coefficients."""
    doc = moments.summary()
    doc["derived"] = {
        "C0sq": moments.C0sq, "Csq": moments.Csq.tolist(), "C0i": moments.C0i.tolist(),
        "Cij": moments.Cij.tolist(),
    }
    return doc


def cmd_analyze(moments: PopulationMoments, n: int, weights: WeightVector, weight_mode: str = "",
                reference: dict | None = None, ref_rtol: float = 3e-3,
                digest: str | None = None) -> ReportTable:
    """Analytic bias/MSE for every estimator in the comparison roster."""
    d = design(moments.N, n)
    reference = reference or {}
    columns = ["estimator", "attributes", "bias", "mse"]
    if reference:
        columns += ["ref_bias", "ref_mse"]
    rows, notes = [], []
    for kind in default_roster(moments.k):
        res = approx.analytic(kind, moments, d, weights)
        row = [_label(kind), _attributes(kind, moments.k), res.bias, res.mse]
        if reference:
            ref = reference.get(kind.token, {})
            rb, rm = ref.get("bias"), ref.get("mse")
            row += [None if rb is None else float(rb), None if rm is None else float(rm)]
            for what, ours, theirs in (("bias", res.bias, rb), ("MSE", res.mse, rm)):
                if theirs is None:
                    continue
                theirs = float(theirs)
                gap = abs(ours - theirs) / abs(theirs) if theirs else abs(ours)
                if gap > ref_rtol:
                    notes.append(
                        f"{_label(kind)}: computed {what} {ours:.7g} differs from reference "
                        f"{theirs:.7g} by {100 * gap:.2f}% (tolerance {100 * ref_rtol:.2g}%)"
                    )
        rows.append(row)
    if moments.k > 1:
        trio = [approx.analytic(kd, moments, d, weights) for kd in
                (EstimatorKind("arithmetic"), EstimatorKind("geometric"), EstimatorKind("harmonic"))]
        best = min(zip(("arithmetic", "geometric", "harmonic"), trio), key=lambda t: abs(t[1].bias))
        notes.append(f"smallest |bias| among the equal-MSE estimators: {best[0]}")
    order = approx.bias_ordering_report(moments, weights, d)
    meta = {
        "N": moments.N, "n": n, "f": d.f, "weight_mode": weight_mode or "explicit",
        "weights": weights.w.tolist(),
        "ordering_factor1": order.factor1, "ordering_factor2": order.factor2,
    }
    if digest:
        meta["input_sha256"] = digest
    return ReportTable("Bias and MSE (first-order approximation)", columns, rows, meta, notes)


def cmd_weights(moments: PopulationMoments, n: int | None = None,
                digest: str | None = None) -> ReportTable:
    d = None if n is None else design(moments.N, n)
    sol = optimal_weights(moments, d)
    rows = [[f"phi{i + 1}", sol.w.w[i]] for i in range(moments.k)]
    meta = {
        "lagrange_multiplier": sol.lagrange_multiplier,
        "condition_estimate": sol.condition_estimate,
        "negative_weights": sol.negative_weights,
    }
    if n is not None:
        meta["n"] = n
        meta["mse_at_w"] = sol.mse_at_w
    if digest:
        meta["input_sha256"] = digest
    return ReportTable("MSE-optimal weights", ["attribute", "weight"], rows, meta)


def cmd_estimate(y, phi, proportions, kind: EstimatorKind, weights: WeightVector | None,
                 digest: str | None = None) -> ReportTable:
    P = np.asarray(proportions, dtype=float)
    if P.size != phi.shape[1]:
        raise ValidationError(f"expected {phi.shape[1]} proportions, got {P.size}")
    if np.any((P <= 0) | (P >= 1)):
        raise ValidationError("population proportions must lie strictly between 0 and 1")
    stats = stats_from_values(float(np.mean(y)), phi.mean(axis=0))
    value = evaluate(kind, stats, P, weights)
    meta = {"n": y.size, "ybar": stats.ybar, "p": stats.p.tolist(), "P": P.tolist()}
    if weights is not None and kind.tag in ("arithmetic", "geometric", "harmonic"):
        meta["weights"] = weights.w.tolist()
    if digest:
        meta["input_sha256"] = digest
    return ReportTable("Point estimate", ["estimator", "estimate"], [[_label(kind), value]], meta)


def cmd_simulate(pop, n: int, weights: WeightVector, weight_mode: str = "", reps: int | None = None,
                 seed: int | None = None, exhaustive: bool = False, zero_policy: str = "exclude",
                 digest: str | None = None) -> ReportTable:
    cfg = SimulationConfig(n=n, weights=weights, reps=reps or 1, seed=seed or 0,
                           zero_policy=zero_policy)
    emp = run_exhaustive(pop, cfg) if exhaustive else run_monte_carlo(pop, cfg)
    moments = population_moments(pop)
    d = design(pop.N, n)
    dev = compare_to_analytic(emp, moments, d, weights)
    columns = ["estimator", "mean", "bias", "mse", "bias_se", "mse_se", "excluded",
               "analytic_bias", "analytic_mse", "mse_rel_dev", "within_3se"]
    rows = []
    for r, dv in zip(emp.results, dev.rows):
        rows.append([_label(r.kind), r.mean, r.bias, r.mse, r.bias_se, r.mse_se,
                     r.exclusion_fraction, dv.analytic.bias, dv.analytic.mse, dv.mse_rel_dev,
                     dv.within_mc])
    meta = {
        "mode": emp.mode, "N": pop.N, "n": n, "f": d.f, "samples": emp.samples,
        "seed": emp.seed, "zero_policy": zero_policy, "weight_mode": weight_mode or "explicit",
        "weights": weights.w.tolist(), "Ybar": emp.Ybar, "mean_p": emp.mean_p.tolist(),
    }
    if digest:
        meta["input_sha256"] = digest
    return ReportTable("Empirical bias and MSE", columns, rows, meta)


# -- entry point -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multiratio", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--timestamp", action="store_true",
                       help="record the run time in the report metadata")

    p = sub.add_parser("moments", help="population moments of a unit-level CSV")
    p.add_argument("--input", required=True)
    common(p)

    p = sub.add_parser("analyze", help="analytic bias/MSE table")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--summary")
    p.add_argument("--n", type=int)
    p.add_argument("--weights", default="optimal")
    p.add_argument("--ref-rtol", type=float, default=3e-3,
                   help="relative gap to reference values that triggers a footnote")
    common(p)

    p = sub.add_parser("weights", help="MSE-optimal weights")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--summary")
    p.add_argument("--n", type=int)
    common(p)

    p = sub.add_parser("estimate", help="point estimate from a sample CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--proportions", required=True)
    p.add_argument("--estimator", required=True)
    p.add_argument("--weights", default="equal")
    common(p)

    p = sub.add_parser("simulate", help="Monte Carlo or exhaustive SRSWOR study")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--zero-policy", choices=("exclude", "error"), default="exclude")
    p.add_argument("--weights", default="optimal")
    common(p)
    return parser


def _dispatch(args):
    if args.command == "moments":
        text, digest = _read(args.input)
        moments = population_moments(parse_population_csv(text))
        if args.format == "json":
            return moments_document(moments)
        return cmd_moments(moments, digest)
    if args.command == "analyze":
        moments, n, reference, digest = _load_moments(args)
        n = args.n if args.n is not None else n
        if n is None:
            raise ValidationError("--n is required (the input does not specify n)")
        w = parse_weights(args.weights, moments.k, moments)
        return cmd_analyze(moments, n, w, args.weights, reference, args.ref_rtol, digest)
    if args.command == "weights":
        moments, n, _, digest = _load_moments(args)
        return cmd_weights(moments, args.n if args.n is not None else n, digest)
    if args.command == "estimate":
        text, digest = _read(args.input)
        y, phi = parse_units_csv(text)
        try:
            P = [float(x) for x in args.proportions.split(",")]
        except ValueError:
            raise ValidationError(f"cannot parse proportions {args.proportions!r}") from None
        kind = EstimatorKind.parse(args.estimator)
        w = parse_weights(args.weights, phi.shape[1]) if kind.tag in (
            "arithmetic", "geometric", "harmonic") else None
        return cmd_estimate(y, phi, P, kind, w, digest)
    if args.command == "simulate":
        if args.reps is not None and args.seed is None:
            raise ValidationError("--reps requires --seed")
        text, digest = _read(args.input)
        pop = parse_population_csv(text)
        w = parse_weights(args.weights, pop.k, population_moments(pop))
        return cmd_simulate(pop, args.n, w, args.weights, args.reps, args.seed, args.exhaustive,
                            args.zero_policy, digest)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = _dispatch(args)
    except (ValidationError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, dict):
        if args.timestamp:
            out["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
        return 0
    if args.timestamp:
        out.metadata["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    sys.stdout.write(render(out, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
