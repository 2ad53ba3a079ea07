"""Command-line front end.

    frameforge <decompose|build|diagnose|verify|probe> [--config file.json] [--seed n]
               [--epsilon x] [--budgets a,b,c] [--out path] [--format json|csv]
               [--filter name]

Exit codes: 0 success, 2 input error, 3 check failure. Reports are
byte-identical for identical configuration and seed; wall time goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import constructions as cons
from .decompose import DEFAULT_EPSILON, bessel_to_riesz_pair, casazza_decompose
from .ell1 import DEFAULT_BUDGETS, ell1_partial_sums, sphere_ell1_worst_case
from .errors import FrameforgeError, InvalidInput, ShapeError
from .frames import Frame, is_riesz_basis
from .linalg import TolerancePolicy, as_matrix, invertibility_margin, operator_norm, unitary_defect
from .probe import DEFAULT_DIMS, run_probe
from .verify import CheckResult, _eq, _ge, _le, run_suite

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CHECK = 3

COMMANDS = ("decompose", "build", "diagnose", "verify", "probe")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frameforge", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="JSON configuration file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--epsilon", type=float, default=None)
    parser.add_argument("--budgets", type=str, default=None, help="comma-separated increasing integers")
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--filter", dest="name_filter", default=None)
    return parser


def parse_budgets(text: str | None):
    if text is None:
        return None
    try:
        return [int(b) for b in text.split(",") if b.strip()]
    except ValueError:
        raise InvalidInput(f"cannot parse budgets {text!r}") from None


def load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInput("configuration must be a JSON object")
    return doc


def parse_complex_array(raw, ndim: int) -> np.ndarray:
    """Nested lists of rank ``ndim`` whose leaves are numbers or ``[re, im]`` pairs."""
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise InvalidInput("array entries must be numbers or [re, im] pairs") from None
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != ndim:
        raise InvalidInput(f"expected a rank-{ndim} array, got shape {arr.shape}")
    return arr


def complex_to_json(a) -> list:
    a = np.asarray(a)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_to_json(row) for row in a]


def versions() -> dict:
    return {
        "frameforge": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def make_report(command: str, config: dict, results: list[CheckResult], payload: dict | None = None) -> dict:
    doc = {
        "command": command,
        "config": config,
        "status": "pass" if all(r.passed for r in results) else "fail",
        "results": [r.to_dict() for r in sorted(results, key=lambda r: r.name)],
        "versions": versions(),
    }
    if payload:
        doc["payload"] = payload
    return doc


def results_csv(results: list[CheckResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "measured", "relation", "bound", "passed"])
    for r in results:
        w.writerow([r.name, repr(r.measured), r.relation, repr(r.bound), r.passed])
    return buf.getvalue()


def emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _settings(args, config: dict) -> dict:
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    epsilon = args.epsilon if args.epsilon is not None else float(config.get("epsilon", DEFAULT_EPSILON))
    budgets = parse_budgets(args.budgets)
    if budgets is None and "budgets" in config:
        budgets = [int(b) for b in config["budgets"]]
    return {"seed": seed, "epsilon": epsilon, "budgets": budgets}


def _write_report(doc: dict, results, args):
    if args.format == "csv":
        emit(results_csv(results), args.out)
    else:
        emit(dump_json(doc), args.out)


def _decompose_matrix(T, epsilon: float, tol: TolerancePolicy):
    dec = casazza_decompose(T, epsilon, tol)
    norm = operator_norm(T)
    scale = max(1.0, norm)
    results = [
        _le("decompose.reconstruction", np.linalg.norm(dec.operator() - T, 2), tol.identity_tol * scale),
        _le("decompose.U_unitary_defect", unitary_defect(dec.U), tol.identity_tol),
        _eq("decompose.a_formula", dec.a, 2.0 * norm / (1.0 - epsilon)),
    ]
    if dec.a > 0:
        results.append(_ge("decompose.S_margin", invertibility_margin(dec.S), 0.5 - tol.identity_tol))
    payload = {
        "kind": "casazza",
        "a": dec.a,
        "epsilon": dec.epsilon,
        "degenerate": dec.a == 0.0,
        "U": complex_to_json(dec.U),
        "S": complex_to_json(dec.S),
    }
    return results, payload


def _decompose_frame(F: Frame, epsilon: float, tol: TolerancePolicy):
    pair = bessel_to_riesz_pair(F, epsilon, tol)
    a = pair.decomposition.a
    gram = pair.Y.vectors.conj() @ pair.Y.vectors.T
    results = [
        _eq("decompose.Y_is_riesz", is_riesz_basis(pair.Y, tol)[0], True),
        _eq("decompose.Z_is_riesz", is_riesz_basis(pair.Z, tol)[0], True),
        _le("decompose.sum_defect", float(np.max(np.abs(pair.Y.vectors + pair.Z.vectors - F.vectors))),
            tol.identity_tol),
        _le("decompose.gram_defect", np.linalg.norm(gram - a * a * np.eye(F.dim), 2), tol.identity_tol),
    ]
    payload = {"kind": "riesz_pair", "a": a, "Y": pair.Y.to_manifest(), "Z": pair.Z.to_manifest()}
    return results, payload


def cmd_decompose(args, config, tol) -> tuple[dict, list]:
    s = _settings(args, config)
    echo = {"seed": s["seed"], "epsilon": s["epsilon"]}
    if "matrix" in config:
        T = as_matrix(parse_complex_array(config["matrix"], 2), "matrix")
        echo["input"] = "matrix"
        results, payload = _decompose_matrix(T, s["epsilon"], tol)
    elif "vectors" in config or "manifest" in config:
        doc = config if "vectors" in config else load_config(Path(config["manifest"]))
        F = Frame.from_manifest(doc)
        echo["input"] = "manifest"
        results, payload = _decompose_frame(F, s["epsilon"], tol)
    else:
        dim = int(config.get("random_dim", 8))
        rng = np.random.default_rng(s["seed"])
        T = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        echo["input"] = f"random_{dim}x{dim}"
        results, payload = _decompose_matrix(T, s["epsilon"], tol)
    return make_report("decompose", echo, results, payload), results


def _identity_results(prefix: str, identities: dict) -> list[CheckResult]:
    out = []
    for name, chk in identities.items():
        out.append(CheckResult(f"{prefix}.{name}", chk.measured, chk.bound, chk.relation, chk.passed))
    return out


def cmd_build(args, config, tol) -> tuple[dict, list]:
    s = _settings(args, config)
    spec = cons.FrameFamilySpec.from_dict({**config, "seed": s["seed"]})
    built = cons.build_family(spec, tol)
    payload = {}
    if spec.family == "harmonic_vector":
        vec = np.asarray(built)
        manifest = Frame(vec[None, :]).to_manifest()
        results = [_le("build.harmonic_vector.norm_squared",
                       float(np.vdot(vec, vec).real), 1.0)]
        payload["norm_squared"] = float(np.vdot(vec, vec).real)
    elif spec.family == "intersection_pair":
        diag = built.diagnostics
        manifest = {"E": built.E.to_manifest(), "R": built.R.to_manifest()}
        results = [
            _le("build.intersection_pair.sum_defect", diag["sum_defect"], tol.identity_tol),
            _eq("build.intersection_pair.triangle_holds", diag["triangle_holds"], True),
            _eq("build.intersection_pair.partial_sums_dominated", diag["partial_sums_dominated"], True),
            _eq("build.intersection_pair.E_is_riesz", diag["riesz"]["E"][0], True),
            _eq("build.intersection_pair.R_is_riesz", diag["riesz"]["R"][0], True),
        ]
        payload["growth"] = {k: r.to_dict() for k, r in diag["reports"].items()}
    else:
        manifest = built.frame.to_manifest()
        results = _identity_results(f"build.{spec.family}", built.exact_identities)
        for key in ("tight_constant", "k", "bound", "min_norm"):
            if key in built.extras:
                payload[key] = built.extras[key]
    if args.out is not None:
        out = Path(args.out)
        if spec.family == "intersection_pair":
            sibling = out.with_name(f"{out.stem}_R{out.suffix or '.json'}")
            out.write_text(json.dumps(manifest["E"]) + "\n")
            sibling.write_text(json.dumps(manifest["R"]) + "\n")
            payload["manifest_paths"] = {"E": str(out), "R": str(sibling)}
        else:
            out.write_text(json.dumps(manifest) + "\n")
            payload["manifest_path"] = str(out)
    else:
        payload["manifest"] = manifest
    doc = make_report("build", spec.to_dict(), results, payload)
    return doc, results


def _stream_from_config(config: dict, budgets):
    name = config.get("stream", "harmonic")
    top = budgets[-1]
    if "manifest" in config or "vectors" in config:
        doc = config if "vectors" in config else load_config(Path(config["manifest"]))
        F = Frame.from_manifest(doc)
        probe = parse_complex_array(config.get("probe", np.eye(F.dim)[0].tolist()), 1)
        if probe.shape != (F.dim,):
            raise ShapeError(f"probe has shape {probe.shape}, expected ({F.dim},)")
        return "manifest", np.abs(F.vectors.conj() @ probe)
    n = np.arange(1, top + 1, dtype=float)
    if name == "harmonic":
        return name, cons.harmonic_coefficients(top)
    if name == "zeta2":
        return name, cons.HARMONIC_SCALE / n**2
    if name == "zero":
        return name, np.zeros(top)
    raise InvalidInput(f"unknown stream {name!r}; expected harmonic, zeta2 or zero")


def cmd_diagnose(args, config, tol) -> tuple[dict, list]:
    s = _settings(args, config)
    if "sphere" in config:
        dims = [int(d) for d in (s["budgets"] or config["sphere"])]
        rows = [{"dim": d, "worst_case": sphere_ell1_worst_case(d)[0]} for d in dims]
        results = [_le(f"diagnose.sphere.d{r['dim']}.square_error", abs(r["worst_case"] ** 2 - r["dim"]),
                       1e-12 * r["dim"]) for r in rows]
        doc = make_report("diagnose", {"sphere": dims}, results, {"sphere": rows})
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["dim", "worst_case"])
            for r in rows:
                w.writerow([r["dim"], repr(r["worst_case"])])
            emit(buf.getvalue(), args.out)
            if args.out is not None:
                Path(args.out).with_suffix(".json").write_text(dump_json(doc))
            return None, results
        return doc, results

    budgets = s["budgets"] or list(DEFAULT_BUDGETS)
    label, stream = _stream_from_config(config, budgets)
    report = ell1_partial_sums(stream, budgets)
    doc = make_report("diagnose", {"stream": label, "budgets": report.budgets}, [], report.to_dict())
    if args.format == "csv":
        emit(report.to_csv(), args.out)
        if args.out is not None:
            Path(args.out).with_suffix(".json").write_text(dump_json(doc))
        return None, []
    return doc, []


def cmd_verify(args, config, tol) -> tuple[dict, list]:
    s = _settings(args, config)
    name_filter = args.name_filter if args.name_filter is not None else config.get("filter")
    results = run_suite(s["seed"], name_filter, tol)
    if not results:
        raise InvalidInput(f"filter {name_filter!r} matches no checks")
    echo = {"seed": s["seed"], "filter": name_filter, "identity_tol": tol.identity_tol}
    return make_report("verify", echo, results), results


def cmd_probe(args, config, tol) -> tuple[dict, list]:
    s = _settings(args, config)
    dims = s["budgets"] or list(DEFAULT_DIMS)
    payload = run_probe(dims, s["seed"])
    doc = make_report("probe", {"seed": s["seed"], "dims": dims}, [], payload)
    doc["status"] = "inconclusive"
    return doc, []


HANDLERS = {
    "decompose": cmd_decompose,
    "build": cmd_build,
    "diagnose": cmd_diagnose,
    "verify": cmd_verify,
    "probe": cmd_probe,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    start = time.perf_counter()
    try:
        tol = TolerancePolicy.from_env()
        config = load_config(args.config)
        doc, results = HANDLERS[args.command](args, config, tol)
        if doc is not None:
            if args.command in ("diagnose", "probe") and args.format == "csv":
                emit(results_csv(results), args.out)
            elif args.command == "build":
                # --out receives the manifest; the verdicts go to stdout
                sys.stdout.write(results_csv(results) if args.format == "csv" else dump_json(doc))
            else:
                _write_report(doc, results, args)
    except (FrameforgeError, KeyError, TypeError, ValueError, OSError) as exc:
        print(f"frameforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"frameforge: {args.command} finished in {time.perf_counter() - start:.3f}s", file=sys.stderr)
    if any(not r.passed for r in results):
        failed = [r.name for r in results if not r.passed]
        print(f"frameforge: {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
