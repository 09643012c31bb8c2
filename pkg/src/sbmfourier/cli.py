"""Command-line entry point.

Verbs: catalog, phi, psi, table, sample, count, power, verify, examples,
falsify.  Output goes to stdout (or --out) as JSON or CSV; identical argv
and seed give bit-identical output.  Exit codes: 0 success, 1 verification
failure (violations found), 2 usage error.  Report commands accept
--plot-dir to render figures next to the delimited output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import counts as ct
from . import fourier as fr
from . import graphs as gr
from . import sampling as mc
from . import scaling as sc
from . import verify as vf
from .sbm import ModelError, SbmModel, example, make_sbm
from .streams import SeededStream

USAGE_ERROR = 2
VERIFY_FAIL = 1


class UsageError(Exception):
    pass


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 0) -> str:
    """JSON with every float printed to 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps_json(v, indent + 2).lstrip()}'
            for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return f"{pad}[]"
        items = ", ".join(dumps_json(v, 0) for v in obj)
        return f"{pad}[{items}]"
    if isinstance(obj, bool) or obj is None:
        return pad + json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + _fmt_float(float(obj))
    return pad + json.dumps(obj)


def dumps_csv(header, rows) -> str:
    """RFC-quoted CSV with a mandatory header; floats at 12 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([
            format(v, ".12g") if isinstance(v, (float, np.floating)) else v
            for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _load_model(spec: str) -> SbmModel:
    if spec.startswith("@"):
        try:
            with open(spec[1:]) as fh:
                obj = json.load(fh)
        except FileNotFoundError:
            raise UsageError(f"model file not found: {spec[1:]}")
        except json.JSONDecodeError as e:
            raise UsageError(f"bad model JSON in {spec[1:]}: {e}")
    else:
        try:
            obj = json.loads(spec)
        except json.JSONDecodeError as e:
            raise UsageError(f"bad inline model JSON: {e}")
    return make_sbm(obj["p"], obj["Q"])


def _family_from_args(args) -> "example":
    params = {}
    for key in ("beta", "alpha"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    for key in ("D", "q", "k"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = int(v)
    if getattr(args, "n_param", None) is not None:
        params["n"] = args.n_param
    return example(args.family, **params)


def _witness_json(report: vf.VerifyReport):
    if report.worst_witness is None:
        return None
    m, h = report.worst_witness
    return {"model": m.to_json(), "H": h.edge_string()}


def _verify_json(report: vf.VerifyReport, seed: int):
    return {
        "seed": seed,
        "theorem": report.theorem,
        "trials": report.trials,
        "violations": report.violations,
        "worst_ratio": report.worst_ratio,
        "constant_bound_used": report.constant_bound_used,
        "worst_witness": _witness_json(report),
    }


# --- verb handlers ---

def cmd_catalog(args) -> int:
    cat = gr.enumerate_graphs(args.dmax, args.connected)
    rows = [
        (i, g.n, g.edge_count, g.edge_string(),
         "-".join(map(str, gr.profile(g).degree_sequence)),
         gr.automorphism_count(g))
        for i, g in enumerate(cat)
    ]
    if args.format == "csv":
        _emit(dumps_csv(
            ("id", "vertices", "edges", "edge_list", "degree_sequence",
             "automorphisms"), rows), args.out)
    else:
        _emit(dumps_json({
            "dmax": args.dmax,
            "connected_only": args.connected,
            "count": len(cat),
            "graphs": [
                {"id": r[0], "vertices": r[1], "edges": r[2],
                 "edge_list": r[3], "degree_sequence": r[4],
                 "automorphisms": r[5]} for r in rows],
        }), args.out)
    return 0


def cmd_phi(args) -> int:
    m = _load_model(args.model)
    h = gr.parse_graph(args.H)
    if args.method == "label_sum":
        res = fr.phi_label_sum(m, h, args.budget)
    elif args.method == "independence_poly":
        res = fr.phi_independence_poly(m, h)
    else:
        res = fr.phi_auto(m, h, args.budget)
    payload = {"phi": res.phi, "psi": res.psi, "method": res.method,
               "terms": res.terms_evaluated}
    if args.tol is not None:
        payload["is_zero"] = abs(res.phi) <= args.tol
    if args.format == "csv":
        _emit(dumps_csv(("phi", "psi", "method", "terms"),
                        [(res.phi, res.psi, res.method,
                          res.terms_evaluated)]), args.out)
    else:
        _emit(dumps_json(payload), args.out)
    return 0


def cmd_table(args) -> int:
    fam = _family_from_args(args)
    rows = sc.dominance_table(fam, args.n, args.dmax, args.threshold)
    data = [(r.graph.edge_string(), r.psi, r.psi_sqrt_n,
             int(r.above_threshold)) for r in rows]
    if args.format == "csv":
        _emit(dumps_csv(("H", "psi", "psi_sqrt_n", "above_threshold"), data),
              args.out)
    else:
        _emit(dumps_json({
            "family": fam.name, "n": args.n, "threshold": args.threshold,
            "rows": [{"H": d[0], "psi": d[1], "psi_sqrt_n": d[2],
                      "above_threshold": bool(d[3])} for d in data],
        }), args.out)
    if args.plot_dir:
        from . import plotting
        plotting.dominance_figure(rows, fam.name, args.n, args.threshold,
                                  args.plot_dir)
    return 0


def cmd_sample(args) -> int:
    stream = SeededStream(args.seed)
    if args.model:
        g = mc.sample_sbm(_load_model(args.model), args.n, stream)
    else:
        g = mc.sample_er(args.n, stream)
    obj = g.to_json()
    if args.format == "csv":
        _emit(dumps_csv(("u", "v"), [tuple(e) for e in obj["edges"]]), args.out)
        print(f"# seed={args.seed}", file=sys.stderr)
    else:
        obj["seed"] = args.seed
        _emit(dumps_json(obj), args.out)
    return 0


def cmd_count(args) -> int:
    h = gr.parse_graph(args.H)
    if args.graph:
        try:
            with open(args.graph) as fh:
                g = ct.SampledGraph.from_json(json.load(fh))
        except FileNotFoundError:
            raise UsageError(f"graph file not found: {args.graph}")
    elif args.model and args.n:
        g = mc.sample_sbm(_load_model(args.model), args.n, SeededStream(args.seed))
    elif args.n:
        g = mc.sample_er(args.n, SeededStream(args.seed))
    else:
        raise UsageError("count needs --graph or --n (with optional --model)")
    sc_val = ct.signed_count(g, h, args.budget)
    copies = gr.copies_in_complete(h, g.n)
    payload = {"H": args.H, "sc": sc_val, "copies": copies,
               "null_sigma": math.sqrt(copies), "n": g.n, "seed": args.seed}
    if args.format == "csv":
        _emit(dumps_csv(("H", "sc", "copies", "null_sigma", "n"),
                        [(args.H, sc_val, copies, math.sqrt(copies), g.n)]),
              args.out)
        print(f"# seed={args.seed}", file=sys.stderr)
    else:
        _emit(dumps_json(payload), args.out)
    return 0


def cmd_power(args) -> int:
    m = _load_model(args.model)
    h = gr.parse_graph(args.H)
    stream = SeededStream(args.seed)
    spec = mc.build_test(m, h, args.n, variance_mode=args.variance_mode,
                         trials=args.trials, stream=stream.substream(1))
    res = fr.phi_auto(m, h, args.budget)
    report = mc.estimate_power(spec, args.trials, stream.substream(0),
                               collect=bool(args.plot_dir))
    row = (args.n, args.H, res.phi, res.psi, report.separation_ratio,
           report.type1_rate, report.type2_rate)
    if args.format == "csv":
        _emit(dumps_csv(("n", "H", "phi", "psi", "sep_ratio", "type1", "type2"),
                        [row]), args.out)
        print(f"# seed={args.seed}", file=sys.stderr)
    else:
        _emit(dumps_json({
            "seed": args.seed, "n": args.n, "H": args.H,
            "phi": res.phi, "psi": res.psi,
            "planted_mean": spec.planted_mean,
            "null_sigma": spec.null_sigma,
            "planted_sigma": spec.planted_sigma,
            "variance_exact": spec.variance_exact,
            "threshold": report.threshold,
            "sep_ratio": report.separation_ratio,
            "type1": report.type1_rate, "type2": report.type2_rate,
            "trials": report.trials,
        }), args.out)
    if args.plot_dir:
        from . import plotting
        plotting.power_figure(report, f"{args.H}_n{args.n}", args.plot_dir)
    return 0


def cmd_verify(args) -> int:
    stream = SeededStream(args.seed)
    keep = bool(args.plot_dir)
    if args.family == "norm_monotone":
        rng = stream.generator()
        grid = [1 + 0.5 * i for i in range(19)]
        bad = 0
        for _ in range(args.trials):
            k = int(rng.integers(2, 7))
            p = rng.dirichlet(np.ones(k))
            q = rng.random(k)
            if not vf.check_norm_monotone(p, q, grid):
                bad += 1
        payload = {"seed": args.seed,
                   "theorem": "norm_monotone: v -> (sum p^v q^(v-1))^(1/v) "
                              "non-increasing",
                   "trials": args.trials, "violations": bad,
                   "worst_ratio": float("nan"),
                   "constant_bound_used": 1.0, "worst_witness": None}
        _emit(dumps_json(payload), args.out)
        return VERIFY_FAIL if bad else 0
    if args.family == "one_to_one":
        models = vf.generate_models("arbitrary", args.trials, stream)
        report = vf.check_one_to_one(models, args.dmax, keep_ratios=keep)
    else:
        report = vf.falsify_search(args.family, args.dmax, args.trials,
                                   stream, c=args.c, keep_ratios=keep)
    if args.format == "csv":
        _emit(dumps_csv(
            ("theorem", "trials", "violations", "worst_ratio", "bound"),
            [(report.theorem, report.trials, report.violations,
              report.worst_ratio, report.constant_bound_used)]), args.out)
        print(f"# seed={args.seed}", file=sys.stderr)
    else:
        _emit(dumps_json(_verify_json(report, args.seed)), args.out)
    if args.plot_dir:
        from . import plotting
        plotting.ratio_figure(report, args.family, args.plot_dir)
    return VERIFY_FAIL if report.violations else 0


def cmd_examples(args) -> int:
    fam = _family_from_args(args)
    if args.targets:
        targets = [gr.parse_graph(s) for s in args.targets.split(",")]
    else:
        designated = sc.designated_dominant(fam)
        if designated is None:
            raise UsageError(f"no default target for family {fam.name}")
        targets = [designated]
    if args.grid:
        grid = [float(x) for x in args.grid.split(",")]
    else:
        grid = list(sc.default_grid(fam.name))
    reports = sc.run_example(fam, targets, grid, budget=args.budget)
    rows = []
    for rep in reports:
        for n, phi, psival in zip(rep.n_grid, rep.phi_values, rep.psi_values):
            rows.append((
                rep.family.name, rep.graph.edge_string(), n, phi, psival,
                psival * math.sqrt(n), rep.fitted_slope,
                rep.predicted_slope if rep.predicted_slope is not None else "",
                "" if rep.passes is None else int(rep.passes)))
    if args.format == "csv":
        _emit(dumps_csv(("family", "H", "n", "phi", "psi", "psi_sqrt_n",
                         "fitted_slope", "predicted_slope", "pass"), rows),
              args.out)
    else:
        _emit(dumps_json({
            "family": fam.name,
            "reports": [{
                "H": rep.graph.edge_string(),
                "grid": list(rep.n_grid),
                "phi": list(rep.phi_values),
                "psi": list(rep.psi_values),
                "fitted_slope": rep.fitted_slope,
                "predicted_slope": rep.predicted_slope,
                "provenance": rep.provenance,
                "pass": rep.passes,
            } for rep in reports],
        }), args.out)
    if args.plot_dir:
        from . import plotting
        for rep in reports:
            plotting.exponent_fit_figure(rep, args.plot_dir)
    failed = any(rep.passes is False for rep in reports)
    return VERIFY_FAIL if failed else 0


def cmd_falsify(args) -> int:
    stream = SeededStream(args.seed)
    report = vf.falsify_search(args.family, args.dmax, args.models, stream,
                               c=args.c, keep_ratios=bool(args.plot_dir))
    if args.format == "csv":
        _emit(dumps_csv(
            ("theorem", "trials", "violations", "worst_ratio", "bound"),
            [(report.theorem, report.trials, report.violations,
              report.worst_ratio, report.constant_bound_used)]), args.out)
        print(f"# seed={args.seed}", file=sys.stderr)
    else:
        _emit(dumps_json(_verify_json(report, args.seed)), args.out)
    if args.plot_dir:
        from . import plotting
        plotting.ratio_figure(report, f"falsify_{args.family}", args.plot_dir)
    return VERIFY_FAIL if report.violations else 0


def _add_common(p, seed=True):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--budget", type=int, default=fr.DEFAULT_BUDGET)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; never changes output")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def _add_family_params(p):
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n-param", type=float, default=None,
                   help="family scale parameter n (when distinct from --n)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sbmfourier",
        description="Block-model Fourier coefficients, signed subgraph-count "
                    "tests, and inequality verification.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("catalog", help="enumerate shapes up to an edge budget")
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--connected", action="store_true")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_catalog)

    for verb in ("phi", "psi"):
        p = sub.add_parser(verb, help="exact coefficient of one shape")
        p.add_argument("--model", required=True,
                       help='inline JSON {"p":...,"Q":...} or @file')
        p.add_argument("--H", required=True)
        p.add_argument("--method",
                       choices=("auto", "label_sum", "independence_poly"),
                       default="auto")
        _add_common(p, seed=False)
        p.set_defaults(func=cmd_phi)

    p = sub.add_parser("table", help="dominance table for an example family")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--threshold", type=float, default=1.0)
    p.add_argument("--plot-dir", default=None)
    _add_family_params(p)
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sample", help="draw one graph sample")
    p.add_argument("--model", default=None)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("count", help="signed count on a graph")
    p.add_argument("--H", required=True)
    p.add_argument("--graph", default=None, help="JSON graph file")
    p.add_argument("--model", default=None)
    p.add_argument("--n", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("power", help="empirical test power")
    p.add_argument("--model", required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--variance-mode", choices=("auto", "exact", "mc"),
                   default="auto")
    p.add_argument("--plot-dir", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("verify", help="check an inequality family")
    p.add_argument("family", choices=("diagonal", "nonnegative", "nonvanishing",
                                      "two_community", "one_to_one",
                                      "norm_monotone"))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--c", type=float, default=0.2)
    p.add_argument("--plot-dir", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", help="exponent fits for example families")
    p.add_argument("--family", required=True)
    p.add_argument("--targets", default=None, help="comma-separated shapes")
    p.add_argument("--grid", default=None, help="comma-separated grid values")
    p.add_argument("--plot-dir", default=None)
    _add_family_params(p)
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("falsify", help="random search for counterexamples")
    p.add_argument("--family", required=True,
                   choices=("diagonal", "nonnegative", "nonvanishing",
                            "two_community", "arbitrary"))
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--models", type=int, default=1000)
    p.add_argument("--c", type=float, default=0.2)
    p.add_argument("--plot-dir", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_falsify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, gr.GraphSpecError, gr.GraphTooLarge, ModelError,
            fr.BudgetExceeded, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
