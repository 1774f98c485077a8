"""Command-line front end.

Subcommands ``forward``, ``inverse``, ``roundtrip`` and ``probe``.  Each
reads an optional JSON descriptor (``--input``); flags override descriptor
fields.  The JSON report goes to ``--output`` or stdout, and a short
summary goes to stderr.

Exit codes: 0 success, 2 invalid input, 3 numerical failure,
4 rank-deficient frequency system.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import NumericalError, RankDeficientError, ValidationError
from .forward import SearchConfig, find_eigenvalues, local_scale
from .inverse import DEFAULT_RANK_TOL, identify_boundary_conditions, roundtrip, stability_probe
from .spectral import Annulus, BoundaryConditions, characteristic_determinant

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_RANK = 0, 2, 3, 4
DEFAULT_DELTAS = (1e-2, 1e-3, 1e-4)


class DescriptorError(ValidationError):
    pass


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits; NaN/inf become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "tolist"):
        return dumps(obj.tolist(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise DescriptorError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="JSON run descriptor")
    common.add_argument("--a", type=float, help="inner radius")
    common.add_argument("--b", type=float, help="outer radius")
    common.add_argument("--output", type=Path, help="write the JSON report here instead of stdout")
    common.add_argument("--tolerance", type=float, help="root refinement tolerance")
    common.add_argument("--rank-tol", type=float, help="sigma3/sigma1 threshold for the rank-3 check")
    common.add_argument("--seed", type=int)
    common.add_argument("--count", type=int, help="number of eigenvalues (forward)")
    common.add_argument("--lambda", dest="lambdas", type=float, action="append",
                        help="eigenvalue; repeat three times (inverse)")
    common.add_argument("--matrix", help='"k1,k2,k3,k4" separated shorthand, or 8 numbers row-major')
    common.add_argument("--lambda-max", type=float)
    common.add_argument("--scan-step", type=float)
    common.add_argument("--equiv-tol", type=float, help="Plucker distance accepted as equivalent (roundtrip)")
    common.add_argument("--delta", dest="deltas", type=float, action="append", help="noise half-width (probe)")
    common.add_argument("--trials", type=int, help="repetitions per delta (probe)")

    parser = argparse.ArgumentParser(
        prog="ringmembrane",
        description="Natural frequencies and boundary-condition identification for a ring membrane.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("forward", parents=[common], help="eigenvalues from a boundary matrix")
    sub.add_parser("inverse", parents=[common], help="boundary matrix from three eigenvalues")
    sub.add_parser("roundtrip", parents=[common], help="forward then inverse; report equivalence")
    sub.add_parser("probe", parents=[common], help="identification error under eigenvalue noise")
    return parser


def load_descriptor(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DescriptorError(f"cannot read descriptor {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DescriptorError("descriptor must be a JSON object")
    return data


def _matrix_from(values) -> BoundaryConditions:
    if isinstance(values, str):
        values = _float_list(values)
    flat = []
    for v in values:
        flat.extend(v if isinstance(v, (list, tuple)) else [v])
    try:
        flat = [float(v) for v in flat]
    except (TypeError, ValueError):
        raise DescriptorError("matrix entries must be numbers") from None
    if len(flat) == 4:
        return BoundaryConditions.separated(*flat)
    if len(flat) == 8:
        return BoundaryConditions([flat[:4], flat[4:]])
    raise DescriptorError(f"matrix needs 4 (k1..k4) or 8 entries, got {len(flat)}")


def resolve(args: argparse.Namespace) -> dict:
    """Merge descriptor and flags into a validated run description."""
    desc = load_descriptor(args.input)
    if "mode" in desc and desc["mode"] != args.mode:
        raise DescriptorError(f"descriptor mode {desc['mode']!r} does not match subcommand {args.mode!r}")
    solver = desc.get("solver", {}) or {}
    if not isinstance(solver, dict):
        raise DescriptorError("'solver' must be an object")
    annulus_desc = desc.get("annulus", {}) or {}

    def pick(flag, *sources, default=None):
        if flag is not None:
            return flag
        for src, key in sources:
            if key in src and src[key] is not None:
                return src[key]
        return default

    a = pick(args.a, (annulus_desc, "a"))
    b = pick(args.b, (annulus_desc, "b"))
    if a is None or b is None:
        raise DescriptorError("annulus radii a and b are required")
    try:
        run = {"mode": args.mode, "annulus": Annulus(float(a), float(b))}
    except (TypeError, ValueError) as exc:
        raise DescriptorError(str(exc) if "annulus" in str(exc) else f"invalid annulus: {exc}") from None

    config_kwargs = {}
    tol = pick(args.tolerance, (solver, "root_tolerance"))
    if tol is not None:
        config_kwargs["root_tolerance"] = float(tol)
    for key, flag in (("lambda_min", None), ("lambda_max", args.lambda_max), ("scan_step", args.scan_step)):
        value = pick(flag, (solver, key))
        if value is not None:
            config_kwargs[key] = float(value)
    run["config"] = SearchConfig(**config_kwargs)
    run["config_overrides"] = config_kwargs
    run["rank_tol"] = float(pick(args.rank_tol, (solver, "rank_tol"), default=DEFAULT_RANK_TOL))

    if args.mode in ("forward", "roundtrip", "probe"):
        m = pick(args.matrix, (desc, "matrix"), (desc, "k"))
        if m is None:
            raise DescriptorError(f"{args.mode} needs a boundary matrix (--matrix or 'matrix')")
        run["bc"] = _matrix_from(m)
    if args.mode == "forward":
        count = pick(args.count, (desc, "count"), default=3)
        if isinstance(count, bool) or int(count) != count or count < 0:
            raise DescriptorError("count must be a non-negative integer")
        run["count"] = int(count)
    if args.mode == "inverse":
        lams = pick(args.lambdas, (desc, "lambdas"))
        if lams is None:
            raise DescriptorError("inverse needs three eigenvalues (--lambda x3 or 'lambdas')")
        if len(lams) != 3:
            raise DescriptorError(f"inverse needs exactly 3 eigenvalues, got {len(lams)}")
        run["lambdas"] = [float(v) for v in lams]
    if args.mode == "roundtrip":
        run["equiv_tol"] = float(pick(args.equiv_tol, (desc, "equiv_tol"), default=1e-6))
    if args.mode == "probe":
        seed = pick(args.seed, (desc, "seed"))
        if seed is None:
            raise DescriptorError("probe needs an explicit seed (--seed or 'seed')")
        run["seed"] = int(seed)
        run["deltas"] = [float(d) for d in pick(args.deltas, (desc, "deltas"), default=list(DEFAULT_DELTAS))]
        trials = pick(args.trials, (desc, "trials"), default=20)
        if isinstance(trials, bool) or int(trials) != trials or trials < 1:
            raise DescriptorError("trials must be a positive integer")
        run["trials"] = int(trials)
    run["output"] = pick(args.output, (desc, "output"))
    return run


def _header(run: dict) -> dict:
    an = run["annulus"]
    out = {"schema_version": SCHEMA_VERSION, "mode": run["mode"], "annulus": {"a": an.a, "b": an.b}}
    if "bc" in run:
        out["matrix"] = run["bc"].matrix.tolist()
    out["solver"] = {**run["config_overrides"], "rank_tol": run["rank_tol"]}
    return out


def run_forward(run: dict) -> tuple[dict, str]:
    bc, an, config = run["bc"], run["annulus"], run["config"]
    spectrum = find_eigenvalues(bc, an, run["count"], config)

    def det(x):
        return characteristic_determinant(bc, an, x)

    step = config.step_for(an)
    roots = []
    for lam in spectrum:
        value = abs(det(lam))
        scale = local_scale(det, lam, step)
        roots.append({"lambda": lam, "abs_determinant": value, "relative_determinant": value / scale if scale else None})
    report = {**_header(run), "eigenvalues": list(spectrum.eigenvalues), "roots": roots}
    summary = f"forward: {len(spectrum)} eigenvalues " + ", ".join(f"{v:.6f}" for v in spectrum)
    return report, summary


def run_inverse(run: dict) -> tuple[dict, str]:
    result = identify_boundary_conditions(run["annulus"], run["lambdas"], run["rank_tol"],
                                          scan_step=run["config"].step_for(run["annulus"]))
    report = {**_header(run), **result.to_dict()}
    rows = "; ".join(" ".join(f"{v:+.4f}" for v in row) for row in result.matrix.matrix)
    return report, f"inverse: recovered matrix [{rows}], projection shift {result.projection_shift:.3g}"


def run_roundtrip(run: dict) -> tuple[dict, str]:
    # exact eigenvalues go to identification, so refinement defaults to ulp level
    config = run["config"] if "root_tolerance" in run["config_overrides"] else SearchConfig(
        **{**run["config_overrides"], "root_tolerance": 1e-14})
    out = roundtrip(run["bc"], run["annulus"], run["equiv_tol"], run["rank_tol"], config)
    report = {**_header(run), "eigenvalues": list(out["eigenvalues"]), "identification": out["result"].to_dict(),
              "plucker_distance": out["distance"], "equiv_tol": run["equiv_tol"], "equivalent": out["equivalent"]}
    verdict = "pass" if out["equivalent"] else "FAIL"
    return report, f"roundtrip: {verdict} (Plucker distance {out['distance']:.3g})"


def run_probe(run: dict) -> tuple[dict, str]:
    kwargs = {}
    if run["config_overrides"]:
        kwargs["config"] = run["config"]
    rows = stability_probe(run["annulus"], run["bc"], run["deltas"], run["trials"], run["seed"], run["rank_tol"],
                           **kwargs)
    table = [{"delta": r.delta, "mean_error": r.mean_error, "max_error": r.max_error, "failures": r.failures,
              "trials": r.trials} for r in rows]
    report = {**_header(run), "seed": run["seed"], "trials": run["trials"], "rows": table}
    lines = [f"  delta={r.delta:.1e} mean={r.mean_error:.3e} max={r.max_error:.3e} failures={r.failures}" for r in rows]
    return report, "probe:\n" + "\n".join(lines)


RUNNERS = {"forward": run_forward, "inverse": run_inverse, "roundtrip": run_roundtrip, "probe": run_probe}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        run = resolve(args)
        report, summary = RUNNERS[args.mode](run)
    except RankDeficientError as exc:
        print(f"error: rank deficiency: {exc}", file=sys.stderr)
        return EXIT_RANK
    except ValidationError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    text = dumps(report) + "\n"
    if run["output"] is not None:
        try:
            Path(run["output"]).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {run['output']}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
