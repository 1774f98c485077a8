"""Exit criteria for the package, one test per criterion, at the stated tolerances.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import itertools
import json
import time

import numpy as np

import oracles
from ringmembrane import (
    Annulus,
    BoundaryConditions,
    PluckerVector,
    SingularProjectionError,
    ValidationError,
    binet_cauchy_sum,
    characteristic_determinant,
    cylinder_functions,
    fit_outer_radius,
    frequency_matrix,
    minors_of,
    null_space_solution,
    plucker_residual,
    project_to_quadric,
    reconstruct_matrix,
    refine_root,
    roundtrip,
    stability_probe,
)
from ringmembrane.cli import main
from ringmembrane.errors import RankDeficientError

AN = Annulus(1.0, 2.0)
EXAMPLE_TRUE = BoundaryConditions([[1, -2, 0, 0], [0, 0, 1, 2]])
EXAMPLE_LAMBDAS = (2.93, 6.16, 9.34)
EXAMPLE_RAW = np.array([1.00, 2.00, -1.0, -2.00])
EXAMPLE_PROJECTED = (0.72, 1.17, -1.17, -1.89)
EXAMPLE_MATRIX = np.array([[1, -1.62, 0, 0], [0, 0, 1, 1.62]])
CLAMPED = BoundaryConditions([[0, 1, 0, 0], [0, 0, 0, 1]])


def test_criterion_1_special_functions(criterion):
    start = time.perf_counter()
    x = np.linspace(0.1, 100.0, 10_000)
    j0, j1, y0, y1 = cylinder_functions(x)
    wronskian = np.max(np.abs((j1 * y0 - j0 * y1) * (np.pi * x / 2) - 1))
    zeros = [refine_root(lambda t: cylinder_functions(t)[0], lo, lo + 1.5, 1e-13) for lo in (2.0, 5.0, 8.0)]
    elapsed = time.perf_counter() - start
    zero_err = max(abs(z - r) for z, r in zip(zeros, oracles.j0_zeros(3)))
    ok = wronskian <= 1e-9 and zero_err <= 1e-9 and elapsed < 1.0
    criterion(1, ok, f"Wronskian rel err {wronskian:.2e} (<=1e-9), J0 zeros err {zero_err:.2e} (<=1e-9), "
                     f"{elapsed:.2f}s (<1s)")
    assert ok


def test_criterion_2_binet_cauchy(criterion):
    rng = np.random.default_rng(2024)
    A = rng.uniform(-3, 3, (1000, 2, 4))
    lam = rng.uniform(0.1, 20.0, 1000)
    start = time.perf_counter()
    det = characteristic_determinant(A, AN, lam)
    expansion = binet_cauchy_sum(A, AN, lam)
    elapsed = time.perf_counter() - start
    worst = np.max(np.abs(det - expansion) / np.maximum(1.0, np.abs(det)))
    ok = worst <= 1e-12 and elapsed < 1.0
    criterion(2, ok, f"max |det - sum A_ij B_ij| / max(1,|det|) = {worst:.2e} (<=1e-12), {elapsed:.3f}s (<1s)")
    assert ok


def test_criterion_3_roundtrip(criterion):
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    passed, unexplained, rank_flagged, n = 0, 0, 0, 0
    worst = 0.0
    while n < 100:
        try:
            bc = BoundaryConditions.separated(*rng.uniform(-3, 3, 4))
        except ValidationError:
            continue
        n += 1
        try:
            out = roundtrip(bc, AN, tol=1e-6)
        except RankDeficientError:
            rank_flagged += 1
            continue
        worst = max(worst, out["distance"])
        if out["equivalent"]:
            passed += 1
        else:
            unexplained += 1
    elapsed = time.perf_counter() - start
    ok = passed >= 99 and unexplained == 0 and elapsed < 30.0
    criterion(3, ok, f"{passed}/100 recovered at Plucker distance <= 1e-6 (worst {worst:.1e}), "
                     f"{rank_flagged} rank-flagged, {unexplained} unexplained failures, {elapsed:.1f}s (<30s)")
    assert ok


def test_criterion_4_worked_example(criterion):
    # (i) geometry fit on a=1, b in [1.5, 3]
    fit = fit_outer_radius(EXAMPLE_TRUE, EXAMPLE_LAMBDAS, a=1.0)
    if fit["max_abs_error"] <= 0.01:
        ok_i, note = True, "within +-0.01"
    elif fit["max_abs_error"] <= 0.05:
        ok_i, note = True, "relaxed to +-0.05 (no grid geometry reaches +-0.01)"
    else:
        ok_i, note = False, "exceeds even the relaxed +-0.05"
    eig = ", ".join(f"{v:.3f}" for v in fit["eigenvalues"])
    criterion("4(i)", ok_i, f"best fit a=1, b={fit['b']:.2f}: eigenvalues ({eig}) vs (2.93, 6.16, 9.34), "
                            f"max err {fit['max_abs_error']:.3f}; {note}")

    # (ii) null-space stage under the fitted geometry
    z, _ = null_space_solution(frequency_matrix(Annulus(1.0, fit["b"]), EXAMPLE_LAMBDAS))
    ratio = z / z[0]
    err_ii = float(np.max(np.abs(ratio - EXAMPLE_RAW)))
    ok_ii = err_ii <= 0.005
    criterion("4(ii)", ok_ii, f"null vector / A13 = ({', '.join(f'{v:.4g}' for v in ratio)}) "
                              f"vs (1.00, 2.00, -1, -2.00); max err {err_ii:.3g} (<=0.005)")

    # (iii) reconstruction from the printed projected coordinates; rounding puts them
    # slightly off the quadric, so they are projected first
    bc = reconstruct_matrix(project_to_quadric(PluckerVector.separated(*EXAMPLE_PROJECTED)))
    err_iii = float(np.max(np.abs(bc.matrix - EXAMPLE_MATRIX)))
    ok_iii = err_iii <= 0.01
    criterion("4(iii)", ok_iii, f"reconstructed {np.round(bc.matrix, 4).tolist()} vs printed matrix, "
                                f"max err {err_iii:.4f} (<=0.01)")
    assert ok_i and ok_ii and ok_iii


def _matrix_with_minors(x):
    """Some 2x4 matrix whose Plucker coordinates are the on-quadric vector x."""
    minors = PluckerVector.from_x(x).as_array()
    pairs = list(itertools.combinations(range(4), 2))
    p = {pair: v for pair, v in zip(pairs, minors)}
    p.update({(j, i): -v for (i, j), v in list(p.items())})
    i, j = pairs[int(np.argmax(np.abs(minors)))]
    M = np.zeros((2, 4))
    M[:, i], M[:, j] = (1, 0), (0, 1)
    for k in set(range(4)) - {i, j}:
        M[0, k] = p[(k, j)] / p[(i, j)]
        M[1, k] = p[(i, k)] / p[(i, j)]
    return M, p[(i, j)]


def test_criterion_5_projection(criterion):
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    idem, fixed, landing, zero_pair_ok, optimal_violation, tested = 0.0, 0.0, 0.0, True, -np.inf, 0
    while tested < 200:
        y = rng.normal(size=6)
        try:
            X = project_to_quadric(PluckerVector.from_x(y))
        except SingularProjectionError:
            continue
        tested += 1
        landing = max(landing, abs(plucker_residual(X).relative))
        x = X.x
        idem = max(idem, np.max(np.abs(project_to_quadric(X).x - x)))
        dist = np.linalg.norm(x - y)
        # 10^4 on-quadric competitors: random planes and small perturbations of the answer,
        # each rescaled optimally along its ray (the quadric is a cone)
        M, scale = _matrix_with_minors(x)
        mats = np.concatenate([rng.normal(size=(5000, 2, 4)),
                               M + rng.normal(size=(5000, 2, 4)) * 10.0 ** rng.uniform(-6, -1, (5000, 1, 1))])
        m = np.stack([mats[:, 0, i] * mats[:, 1, j] - mats[:, 0, j] * mats[:, 1, i]
                      for i, j in itertools.combinations(range(4), 2)], axis=-1)
        Z = np.stack([m[:, 0], m[:, 5], m[:, 1], -m[:, 4], m[:, 2], m[:, 3]], axis=-1)
        Z *= ((Z @ y) / np.einsum("ij,ij->i", Z, Z))[:, None]
        optimal_violation = max(optimal_violation, dist - np.min(np.linalg.norm(Z - y, axis=1)))
    for _ in range(200):
        x = PluckerVector(oracles.minors(rng.normal(size=(2, 4))))
        out = project_to_quadric(x)
        fixed = max(fixed, np.max(np.abs(out.as_array() - x.as_array())))
        sep = PluckerVector.separated(*rng.normal(size=4))
        try:
            proj = project_to_quadric(sep)
        except SingularProjectionError:
            continue
        zero_pair_ok &= proj.minors[0] == 0.0 and proj.minors[5] == 0.0
    elapsed = time.perf_counter() - start
    ok = (idem <= 1e-10 and fixed <= 1e-12 and landing <= 1e-12 and optimal_violation <= 1e-8 and zero_pair_ok
          and elapsed < 10.0)
    criterion(5, ok, f"idempotency {idem:.1e} (<=1e-10), fixed points {fixed:.1e} (<=1e-12), "
                     f"output relation residual {landing:.1e} (<=1e-12), "
                     f"optimality slack {optimal_violation:.1e} (<=1e-8 over 200x10^4 samples), "
                     f"zero pair {'exact' if zero_pair_ok else 'BROKEN'}, {elapsed:.1f}s (<10s)")
    assert ok


def test_criterion_6_stability(criterion):
    deltas = [1e-2, 1e-3, 1e-4]
    start = time.perf_counter()
    rows = stability_probe(AN, CLAMPED, deltas, trials=100, seed=0)
    again = stability_probe(AN, CLAMPED, deltas, trials=100, seed=0)
    elapsed = time.perf_counter() - start
    means = [r.mean_error for r in rows]
    monotone = means[0] >= means[1] >= means[2]
    ratio = means[2] / means[0]
    ok = monotone and ratio <= 0.1 and rows == again and elapsed < 60.0
    criterion(6, ok, f"mean errors {', '.join(f'{m:.3g}' for m in means)} at delta 1e-2/1e-3/1e-4; "
                     f"monotone={monotone}, ratio {ratio:.3f} (<=0.1), deterministic={rows == again}, "
                     f"{elapsed:.1f}s (<60s)")
    assert ok


def test_criterion_7_cli_contract(tmp_path, capsys, criterion):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(path)

    base = {"annulus": {"a": 1, "b": 2}}
    clamped = {**base, "matrix": [[0, 1, 0, 0], [0, 0, 0, 1]]}
    scenarios = [
        ("forward ok", ["forward", "--input", write("f.json", {**clamped, "count": 3})], 0),
        ("forward count 0", ["forward", "--input", write("f0.json", {**clamped, "count": 0})], 0),
        ("inverse ok", ["inverse", "--input", write("i.json", {**base, "lambdas": list(EXAMPLE_LAMBDAS)})], 0),
        ("roundtrip ok", ["roundtrip", "--input", write("r.json", clamped)], 0),
        ("probe ok", ["probe", "--input", write("p.json", {**clamped, "seed": 1, "trials": 3})], 0),
        ("bad annulus", ["forward", "--input", write("ba.json", {**clamped, "annulus": {"a": 2, "b": 1}})], 2),
        ("two eigenvalues", ["inverse", "--input", write("i2.json", {**base, "lambdas": [3.0, 6.0]})], 2),
        ("rank-1 matrix", ["roundtrip", "--input", write("r1.json", {**base, "matrix": [[1, 2, 3, 4], [2, 4, 6, 8]]})], 2),
        ("probe without seed", ["probe", "--input", write("ps.json", clamped)], 2),
        ("malformed descriptor", ["forward", "--input", write("bad.json", "{oops")], 2),
        ("too few roots", ["forward", "--input", write("nr.json", {**clamped, "count": 5,
                                                                     "solver": {"lambda_max": 8.0}})], 3),
        ("rank deficiency", ["inverse", "--input", write("rd.json", {**base, "lambdas": list(EXAMPLE_LAMBDAS),
                                                                      "solver": {"rank_tol": 1.0}})], 4),
    ]
    mismatches = []
    for name, argv, expected in scenarios:
        code = main(argv)
        capsys.readouterr()
        if code != expected:
            mismatches.append(f"{name}: exit {code} != {expected}")

    outputs = []
    for mode, desc in (("forward", {**clamped, "count": 4}), ("probe", {**clamped, "seed": 9, "trials": 4}),
                       ("inverse", {**base, "lambdas": list(EXAMPLE_LAMBDAS)})):
        path = write(f"det_{mode}.json", desc)
        for k in range(2):
            out = tmp_path / f"out_{mode}_{k}.json"
            main([mode, "--input", path, "--output", str(out)])
            outputs.append(out.read_bytes())
    capsys.readouterr()
    deterministic = all(outputs[i] == outputs[i + 1] for i in range(0, len(outputs), 2))
    valid = all(json.loads(o)["schema_version"] == 1 for o in outputs)
    ok = not mismatches and deterministic and valid
    criterion(7, ok, f"{len(scenarios) - len(mismatches)}/{len(scenarios)} exit-code scenarios honoured"
                     f"{' (' + '; '.join(mismatches) + ')' if mismatches else ''}; byte-deterministic={deterministic}")
    assert ok
