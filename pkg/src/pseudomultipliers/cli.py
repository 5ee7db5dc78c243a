"""Command line entry point: run JSON configs and the bundled demo catalog.

Subcommands::

    pseudomult analyze --config run.json [--out report.json] [--format json|text] [--tol rank_tol=1e-10]
    pseudomult demo <name>|--all
    pseudomult list-demos

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .linalg_core import DEFAULT_TOL, Frame, Tolerances, canonical_basis, gap, orthonormalize
from .local import analyze_locality, disc_grid, kernel_distance_formula, taut_check
from .pseudomult import (PseudomultiplierSpec, RationalSymbol, SobolevOracle, TableSymbol,
                         analyze, constant_symbol)
from .singularity import classify_point, decompose_singular_space, polar_witness, pseudopole_check, sees_vector
from .spaces import (CoefficientModel, ComposedModel, KernelSampleModel, ModelSpace,
                     build_coefficient_model, build_kernel_sample_model, compose_models, graded_grid,
                     metric_d, metric_p, projective_completeness_probe, pseudo_hyperbolic_factorization,
                     read_kernel_table, sobolev_membership)
from .visibility import sees_subspace

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
SIG_DIGITS = 12


class ConfigError(ValueError):
    """The configuration is malformed or does not fit the model."""


# ---------------------------------------------------------------------------
# schema and parsing


def load_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("schema/config.schema.json").read_text())


def validate_config(cfg) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"config is invalid at {where}: {e.message}")


def parse_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def parse_point(x):
    """Numbers stay real, ``[re, im]`` becomes complex, ``{side, point}`` a tagged pair."""
    if isinstance(x, dict):
        return (int(x["side"]), parse_point(x["point"]))
    if isinstance(x, (list, tuple)):
        return parse_complex(x)
    return float(x)


def parse_points(x) -> list:
    if isinstance(x, dict):
        a, b, n = x["linspace"]
        return [float(t) for t in np.linspace(a, b, int(n))]
    return [parse_point(p) for p in x]


def build_space(sec: dict, base: Path) -> ModelSpace:
    kind = sec["kind"]
    if kind == "coefficient":
        return build_coefficient_model(sec["degree"], weights=sec.get("weights"), low=sec.get("low", 0))
    if kind == "kernel_sample":
        if sec["kernel"] == "table":
            if "table_file" not in sec:
                raise ConfigError("a table kernel needs table_file")
            kernel = read_kernel_table(base / sec["table_file"])
            pts = parse_points(sec["points"]) if "points" in sec else list(kernel.table_points)
        else:
            if "points" not in sec:
                raise ConfigError(f"the {sec['kernel']} kernel needs sample points")
            kernel = sec["kernel"]
            pts = parse_points(sec["points"])
        return build_kernel_sample_model(pts, kernel, derivative_points=sec.get("derivative_points", ()))
    first = build_space(sec["first"], base)
    second = build_space(sec["second"], base)
    identify = [(parse_point(a), parse_point(b)) for a, b in sec.get("identify", [])]
    ambient = compose_models(first, second, "direct_sum")
    cons = [build_vector(v, ambient) for v in sec.get("constraints", [])]
    return compose_models(first, second, sec["mode"], constraints=cons, identify=identify)


def build_symbol(sec: dict):
    t = sec["type"]
    if t == "rational":
        return RationalSymbol([parse_complex(c) for c in sec["numerator"]],
                              [parse_complex(c) for c in sec.get("denominator", [1])])
    if t == "constant":
        return constant_symbol(parse_complex(sec["value"]))
    if t == "power":
        p = float(sec["exponent"])
        return TableSymbol(lambda x: np.real(np.asarray(x, dtype=complex)) ** p, name=f"power({p})")
    first, second = build_symbol(sec["first"]), build_symbol(sec["second"])
    return TableSymbol(lambda pt: first(pt[1]) if pt[0] == 0 else second(pt[1]), name="piecewise")


def build_vector(sec: dict, model: ModelSpace) -> np.ndarray:
    if "kernel" in sec:
        return model.kernel_vector(parse_point(sec["kernel"]), sec.get("deriv", 0))
    if "monomial" in sec or "poly" in sec:
        if not isinstance(model, CoefficientModel):
            raise ConfigError("monomial and poly vectors need a coefficient model")
        if "monomial" in sec:
            return model.monomial(sec["monomial"])
        return model.from_poly([parse_complex(c) for c in sec["poly"]])
    if "coefficients" in sec:
        v = np.array([parse_complex(c) for c in sec["coefficients"]], dtype=complex)
        if v.shape != (model.dim,):
            raise ConfigError(f"coefficient vector has length {v.size}, model dim is {model.dim}")
        return v
    if "inject" in sec:
        if not isinstance(model, ComposedModel):
            raise ConfigError("inject needs a composed model")
        return model.inject(sec["inject"], build_vector(sec["vector"], model.parts[sec["inject"]]))
    if "sum" in sec:
        return sum(build_vector(v, model) for v in sec["sum"])
    if "project_out" in sec:
        F = orthonormalize(np.column_stack([build_vector(v, model) for v in sec["project_out"]]), model.space)
        v = build_vector(sec["vector"], model)
        return v - F.project(v)
    return parse_complex(sec["scale"]) * build_vector(sec["vector"], model)


def build_frame(secs, model: ModelSpace, tol: Tolerances) -> Frame:
    if not secs:
        return Frame(model.space, np.zeros((model.dim, 0)), tol)
    return orthonormalize(np.column_stack([build_vector(v, model) for v in secs]), model.space, tol)


def build_spec(sec: dict, model: ModelSpace) -> PseudomultiplierSpec:
    symbol = build_symbol(sec["symbol"])
    declared = [build_vector(v, model) for v in sec["declared"]] if "declared" in sec else None
    oracle = None
    if sec.get("oracle") == "sobolev":
        if declared is None:
            raise ConfigError("the sobolev oracle certifies declared constraints; none given")
        oracle = SobolevOracle(symbol)
    return PseudomultiplierSpec(symbol=symbol,
                                overrides=[(parse_point(p), parse_complex(v)) for p, v in sec.get("overrides", [])],
                                exclusions=[parse_point(p) for p in sec.get("exclusions", [])],
                                declared=declared, oracle=oracle, label=sec.get("label", ""))


# ---------------------------------------------------------------------------
# report formatting


def _round_sig(x: float) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{SIG_DIGITS}g}")


def _clean(x):
    """Convert to JSON-native values with floats rounded to fixed significant digits."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(np.real(x))), _clean(float(np.imag(x)))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return _round_sig(x) + 0.0
    if x is None or isinstance(x, str):
        return x
    return str(x)


def _point_out(p):
    if isinstance(p, tuple):
        return {"side": p[0], "point": p[1]}
    return p


def describe_frame(F: Frame) -> dict:
    return {"rank": F.rank, "basis": canonical_basis(F, SIG_DIGITS)}


def _frame_gap(F: Frame, secs, model, tol) -> float:
    return gap(F, build_frame(secs, model, tol))


# ---------------------------------------------------------------------------
# queries


def _need(an, qtype):
    if an is None:
        raise ConfigError(f"query {qtype} needs a pseudomultiplier section")
    return an


def q_decompose(q, model, an, tol, base):
    an = _need(an, "decompose")
    S, A, P = decompose_singular_space(an)
    cross = 0.0
    if A.rank and P.rank:
        cross = float(np.max(np.abs(A.columns.conj().T @ model.space.gram @ P.columns)))
    out = {"order": an.order, "path": an.path, "dim_E": an.E.rank, "dim_S": S.rank, "dim_A": A.rank,
           "dim_P": P.rank, "sigma_max": an.sigma_max, "A": describe_frame(A), "P": describe_frame(P),
           "orthogonality": cross}
    frames = {"S": S, "A": A, "P": P, "E": an.E}
    for key, secs in q.get("compare", {}).items():
        out[f"gap_{key}"] = _frame_gap(frames[key], secs, model, tol)
    return out


def q_see_vector(q, model, an, tol, base):
    v = sees_vector(_need(an, "see_vector"), build_vector(q["vector"], model))
    return {"status": v.status, "value": v.value, "residual": v.residual}


def q_see_subspace(q, model, an, tol, base):
    V = build_frame(q["subspace"], model, tol)
    r = sees_subspace(_need(an, "see_subspace"), V)
    return {"sees": r.sees, "regular": r.regular, "residual": r.residual, "rank": V.rank,
            "value_operator": r.value_operator}


def q_classify_point(q, model, an, tol, base):
    an = _need(an, "classify_point")
    c = classify_point(model, an.spec, an, parse_point(q["point"]))
    return {"kind": c.kind, "gamma": c.gamma, "evidence": c.evidence}


def q_polar_witness(q, model, an, tol, base):
    an = _need(an, "polar_witness")
    schedule = [parse_complex(c) for c in q.get("schedule", [10, 100, 1000, 10000])]
    targets = [build_vector(q["vector"], model)] if "vector" in q else [an.P.columns[:, j] for j in range(an.P.rank)]
    runs = []
    for p in targets:
        ws = polar_witness(an, p, schedule)
        dists = [w.distance / model.space.norm(p) for w in ws]
        runs.append({"values": [w.value for w in ws], "requested": [w.requested for w in ws],
                     "relative_distance": dists,
                     "max_value_error": max(abs(w.value - w.requested) / abs(w.requested) for w in ws),
                     "monotone": all(b < a for a, b in zip(dists, dists[1:]))})
    return {"witnesses": runs, "count": len(runs)}


def q_pseudopole(q, model, an, tol, base):
    an = _need(an, "pseudopole_check")
    ok, res = pseudopole_check(an, parse_point(q["point"]), build_vector(q["witness"], model))
    return {"passed": ok, "residual": res}


def q_local_search(q, model, an, tol, base):
    M = build_frame(q["target"], model, tol)
    if "points" in q:
        D = parse_points(q["points"])
    elif isinstance(model, CoefficientModel):
        g = q.get("grid", {})
        D = disc_grid(g.get("n_r", 20), g.get("n_theta", 24), g.get("r_max", 0.95))
    else:
        D = model.domain_samples()
    r = analyze_locality(M, D, model, budget=q.get("budget", 6000))
    diag = {k: v for k, v in r.diagnostics.items() if k not in ("backend",)}
    final = r.witness_subsets[-1]
    out = {"status": r.status, "best_gap": r.best_gap, "gap_curve": r.gap_curve,
           "witness_count": len(r.witness_subsets), "final_witness": [_point_out(p) for p in final],
           "max_final_modulus": max(abs(complex(p)) for p in final) if isinstance(model, CoefficientModel) else None,
           "support": [{"point": _point_out(c), "radius": rad} for c, rad in r.support_clusters],
           "decomposition_residual": r.decomposition_residual, "diagnostics": diag,
           "components": [describe_frame(C) for C in r.punctual_components]}
    if "taut_points" in q:
        taut, F0 = taut_check(M, [parse_point(p) for p in q["taut_points"]], model, tol)
        out["taut"] = {"taut": taut, "witness": None if F0 is None else [_point_out(p) for p in F0]}
    return out


def q_metrics(q, model, an, tol, base):
    pairs = [(parse_point(a), parse_point(b)) for a, b in q.get("pairs", [])]
    rows = []
    for a, b in pairs:
        row = {"alpha": _point_out(a), "beta": _point_out(b), "d": metric_d(model, a, b),
               "p": metric_p(model, a, b, tol=tol), "p_opnorm": metric_p(model, a, b, "opnorm", tol=tol)}
        rows.append(row)
    out = {"pairs": rows}
    n = q.get("random_pairs", 0)
    if n:
        # each random pair gets its own exact two-point Szego model
        if not (isinstance(model, KernelSampleModel) and model.kernel.name == "szego"):
            raise ConfigError("random disc pairs need a Szego kernel-sample model")
        rng = np.random.default_rng(q.get("seed", 0))
        rad = q.get("radius", 0.9)
        z = np.sqrt(rng.uniform(0, rad ** 2, (n, 2))) * np.exp(2j * np.pi * rng.uniform(0, 1, (n, 2)))
        ident, hs, ratios = [], [], []
        for a, b in z:
            a, b = complex(a), complex(b)
            pair = build_kernel_sample_model([a, b], "szego")
            p = metric_p(pair, a, b, tol=tol)
            ph, h = pseudo_hyperbolic_factorization(a, b)
            ident.append(abs(p - math.sqrt(2) * ph * h))
            hs.append(h)
            if p > 0:
                ratios.append(metric_p(pair, a, b, "opnorm", tol=tol) / p)
        out.update({"random_pairs": n, "max_identity_error": max(ident), "h_min": min(hs), "h_max": max(hs),
                    "opnorm_ratio_min": min(ratios), "opnorm_ratio_max": max(ratios)})
    return out


def q_distance_formula(q, model, an, tol, base):
    numeric, closed = kernel_distance_formula(model, parse_complex(q["alpha"]),
                                              [parse_complex(f) for f in q["F"]])
    return {"numeric": numeric, "closed_form": closed, "difference": abs(numeric - closed)}


def q_membership(q, model, an, tol, base):
    if not isinstance(model, KernelSampleModel) or model.kernel.domain != "interval":
        raise ConfigError("membership needs a kernel-sample model on [0, 1]")
    if "multiplier" in q:
        mult = build_symbol(q["multiplier"])
    elif an is not None:
        mult = an.spec.symbol
    else:
        raise ConfigError("membership needs a multiplier or a pseudomultiplier section")
    f = build_vector(q["vector"], model)
    grid = graded_grid()
    verdict = sobolev_membership(model.evaluate_grid(f, grid), mult)
    return {"status": verdict.status, "divergence_rate": verdict.divergence_rate,
            "value_at_0": complex(model.evaluate(f, 0.0)),
            "norm_estimates": verdict.norm_estimates}


def q_probe(q, model, an, tol, base):
    r = projective_completeness_probe(model, [parse_complex(c) for c in q["coefficients"]],
                                      [parse_complex(p) for p in q["points"]], tol=tol)
    return {"grid_distance": r.grid_distance, "distance": r.distance, "nearest_point": r.nearest_point,
            "limit_is_kernel": r.limit_is_kernel, "minimizer_on_boundary": r.minimizer_on_boundary,
            "line_steps": r.line_steps}


QUERIES = {
    "decompose": q_decompose,
    "see_vector": q_see_vector,
    "see_subspace": q_see_subspace,
    "classify_point": q_classify_point,
    "polar_witness": q_polar_witness,
    "pseudopole_check": q_pseudopole,
    "local_search": q_local_search,
    "metrics": q_metrics,
    "distance_formula": q_distance_formula,
    "membership": q_membership,
    "completeness_probe": q_probe,
}


# ---------------------------------------------------------------------------
# orchestration


def config_hash(cfg) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _error(exc) -> dict:
    return {"kind": type(exc).__name__, "message": str(exc)}


def run_config(cfg: dict, tol_overrides: dict | None = None, base: Path = Path(".")):
    """Execute a validated config; returns ``(report, exit_code)``."""
    validate_config(cfg)
    try:
        tol = DEFAULT_TOL.replace(**cfg.get("tolerances", {}))
        if tol_overrides:
            tol = tol.replace(**tol_overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = {"provenance": {"config_sha256": config_hash(cfg), "tolerances": tol.as_dict()},
              "queries": []}
    code = EXIT_OK
    try:
        model = build_space(cfg["space"], base)
        report["model"] = {"kind": model.kind, "label": model.label, "dim": model.dim}
        an = None
        if "pseudomultiplier" in cfg:
            spec = build_spec(cfg["pseudomultiplier"], model)
            an = analyze(model, spec, tol)
            report["analysis"] = {"path": an.path, "order": an.order, "dim_E": an.E.rank,
                                  "dim_A": an.A.rank, "dim_P": an.P.rank, "sigma_max": an.sigma_max}
    except ConfigError as exc:
        report["model_error"] = _error(exc)
        return _finish(report, EXIT_CONFIG)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        report["model_error"] = _error(exc)
        return _finish(report, EXIT_NUMERIC)
    except OSError as exc:
        report["model_error"] = _error(exc)
        return _finish(report, EXIT_IO)
    for i, q in enumerate(cfg.get("queries", [])):
        entry = {"index": i, "type": q["type"], "name": q.get("name", "")}
        try:
            entry["result"] = QUERIES[q["type"]](q, model, an, tol, base)
            entry["ok"] = True
        except ConfigError as exc:
            entry.update(ok=False, error=_error(exc))
            code = EXIT_CONFIG
        except (ValueError, ArithmeticError, np.linalg.LinAlgError, RuntimeError, AssertionError) as exc:
            entry.update(ok=False, error=_error(exc))
            code = code or EXIT_NUMERIC
        report["queries"].append(entry)
    return _finish(report, code)


def _finish(report, code):
    report["exit_code"] = code
    report["status"] = "ok" if code == EXIT_OK else "error"
    return _clean(report), code


def emit(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    lines = []

    def walk(x, prefix):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(x[k], f"{prefix}.{k}" if prefix else k)
        elif isinstance(x, list) and x and all(isinstance(v, (dict, list)) for v in x):
            for i, v in enumerate(x):
                walk(v, f"{prefix}[{i}]")
        else:
            lines.append(f"{prefix} = {json.dumps(x)}")

    walk(report, "")
    return "\n".join(lines) + "\n"


def _parse_tol(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        if k not in Tolerances.__dataclass_fields__:
            raise ConfigError(f"unknown tolerance {k!r}")
        try:
            out[k] = float(v)
        except ValueError as exc:
            raise ConfigError(f"tolerance {k} needs a number, got {v!r}") from exc
    return out


def read_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# demos


def _demo_dir():
    return resources.files(__package__).joinpath("demos")


def demo_catalog() -> dict:
    """Demo name to file name, including the aliases."""
    names = {}
    for entry in sorted(_demo_dir().iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json") and entry.name != "aliases.json":
            names[entry.name[:-5]] = entry.name
    aliases = json.loads(_demo_dir().joinpath("aliases.json").read_text())
    for alias, target in aliases.items():
        names[alias] = target + ".json"
    return names


def load_demo(name: str) -> dict:
    catalog = demo_catalog()
    if name not in catalog:
        raise KeyError(name)
    return json.loads(_demo_dir().joinpath(catalog[name]).read_text())


def _lookup(report, path: str):
    cur = report
    for part in path.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        else:
            cur = cur[part]
    return cur


def check_expectation(report: dict, exp: dict):
    """Return ``(ok, detail)`` for one stored expectation."""
    try:
        val = _lookup(report, exp["path"])
    except (KeyError, IndexError, ValueError, TypeError):
        return False, f"{exp['path']}: missing"
    if "equals" in exp:
        return val == exp["equals"], f"{exp['path']} = {val!r}, expected {exp['equals']!r}"
    if "approx" in exp:
        target = exp["approx"]
        if isinstance(target, list):
            target = complex(*target)
            val = complex(*val) if isinstance(val, list) else val
        ok = isinstance(val, (int, float, complex)) and abs(val - target) <= exp.get("tol", 1e-10)
        return ok, f"{exp['path']} = {val!r}, expected {exp['approx']!r} +- {exp.get('tol', 1e-10)}"
    if "le" in exp:
        return isinstance(val, (int, float)) and val <= exp["le"], f"{exp['path']} = {val!r} <= {exp['le']!r}"
    if "ge" in exp:
        return isinstance(val, (int, float)) and val >= exp["ge"], f"{exp['path']} = {val!r} >= {exp['ge']!r}"
    if "contains" in exp:
        return exp["contains"] in str(val), f"{exp['path']} contains {exp['contains']!r}"
    raise ConfigError(f"expectation without a comparison: {exp}")


def run_demo(name: str, out=sys.stdout) -> int:
    demo = load_demo(name)
    report, code = run_config(demo["config"])
    ok = code == demo.get("exit_code", EXIT_OK)
    out.write(f"demo {name}: {demo.get('description', '')}\n")
    if not ok:
        out.write(f"  FAIL exit code {code}, expected {demo.get('exit_code', EXIT_OK)}\n")
    for exp in demo.get("expect", []):
        good, detail = check_expectation(report, exp)
        ok = ok and good
        out.write(f"  {'PASS' if good else 'FAIL'} {detail}\n")
    out.write(f"  {'OK' if ok else 'MISMATCH'}\n")
    return EXIT_OK if ok else EXIT_NUMERIC


def _primary_demos() -> list:
    return sorted(e.name[:-5] for e in _demo_dir().iterdir()
                  if e.name.endswith(".json") and e.name != "aliases.json")


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudomult", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="run a JSON config")
    a.add_argument("--config", required=True)
    a.add_argument("--out")
    a.add_argument("--format", choices=["json", "text"])
    a.add_argument("--tol", action="append", metavar="KEY=VALUE")
    d = sub.add_parser("demo", help="run a bundled demo and check its expected values")
    d.add_argument("name", nargs="?")
    d.add_argument("--all", action="store_true")
    sub.add_parser("list-demos", help="list bundled demos")
    return parser


def _cmd_analyze(args) -> int:
    try:
        cfg = read_config(args.config)
        tol = _parse_tol(args.tol)
        report, code = run_config(cfg, tol, base=Path(args.config).resolve().parent)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    output = cfg.get("output", {})
    fmt = args.format or output.get("format", "json")
    path = args.out or output.get("path")
    text = emit(report, fmt)
    if path:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return _cmd_analyze(args)
    if args.command == "list-demos":
        for name in _primary_demos():
            print(f"{name}: {load_demo(name).get('description', '')}")
        aliases = json.loads(_demo_dir().joinpath("aliases.json").read_text())
        for alias in sorted(aliases):
            print(f"{alias} -> {aliases[alias]}")
        return EXIT_OK
    if args.all == bool(args.name):
        print("demo needs exactly one of a name or --all", file=sys.stderr)
        return EXIT_CONFIG
    names = _primary_demos() if args.all else [args.name]
    code = EXIT_OK
    for name in names:
        try:
            code = max(code, run_demo(name))
        except KeyError:
            print(f"unknown demo {name!r}; available: {', '.join(sorted(demo_catalog()))}", file=sys.stderr)
            return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
