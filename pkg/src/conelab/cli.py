"""Batch driver: load a JSON config, run named verification suites, emit reports.

Subcommands
-----------
``conelab run <config>``        run suites, one JSON report per suite plus a summary
``conelab decompose <config>``  recover Olkin-Baker parameters from an oracle spec
``conelab sample <config>``     draw from a configured distribution, write CSV

Exit codes: 0 all checks passed, 1 a suite or decomposition failed its
thresholds, 2 unusable configuration.  Reports depend only on (config, seed):
suites run sequentially and every random draw flows from the config seed, so
identical configs produce byte-identical report files.  The environment
variable CONELAB_THREADS caps the BLAS thread pool.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .algebra import (
    AlgebraDescriptor,
    Element,
    axiom_residuals,
    determinant,
    eigenvalues,
    herm_complex,
    identity,
    inner,
    inverse,
    jordan_product,
    lorentz,
    norm,
    parse_algebra,
    random_cone_element,
    random_element,
    spectral_decompose,
    standard_frame,
    sym_real,
)
from .algorithms import check_algorithm, multiply, parse_algorithm
from .algorithms import w1 as algorithms_w1, w2 as algorithms_w2
from .distributions import (
    RieszParams,
    WishartParams,
    in_domain_D,
    riesz_logpdf,
    riesz_model,
    riesz_normalization_quadrature,
    sample_riesz,
    save_samples_csv,
    wishart_logpdf,
    wishart_model,
)
from .errors import (
    ConelabError,
    ConfigError,
    FitError,
    InconsistencyError,
    ValidationError,
)
from .funceq import (
    GridSpec,
    delta_s_log,
    draw_cone_pairs,
    k_invariance_check,
    log_det_power,
    make_olkin_baker_instance,
    olkin_baker_decompose,
    pexider_fit,
    wlog_residual,
    zero_fn,
)
from .lukacs import (
    factorization_residual,
    independence_test,
    inverse_map,
    jacobian_check,
    quotient_map,
)
from .peirce import (
    PowerExponent,
    build_peirce_basis,
    generalized_power,
    generalized_power_log,
    peirce_projectors,
)
from .triangular import (
    apply_triangular,
    box_operator,
    frobenius_transform,
    triangular_decompose,
)

SUITE_NAMES = (
    "algebra-axioms",
    "peirce",
    "triangular",
    "mult-alg",
    "distributions",
    "functional-eq",
    "lukacs",
)

DEFAULT_SAMPLES = {
    "algebra-axioms": 2000,
    "peirce": 200,
    "triangular": 200,
    "mult-alg": 100,
    "distributions": 20000,
    "functional-eq": 300,
    "lukacs": 2000,
}

DEFAULT_TOLERANCES = {
    "axioms": 1e-10,
    "peirce_identity": 1e-10,
    "triangular_roundtrip": 1e-9,
    "power_cocycle": 1e-9,
    "neutrality": 1e-9,
    "ddet": 1e-8,
    "logpdf_match": 1e-12,
    "quadrature_mass": 1e-3,
    "wlog": 1e-9,
    "wlog_counterexample": 0.01,
    "pexider": 1e-8,
    "bijection": 1e-10,
    "jacobian": 1e-6,
    "factorization": 1e-8,
    "factorization_mismatch": 0.01,
    "independence_p": 0.01,
    "mean_sigmas": 5.0,
}


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------


def _sub_rng(seed: int, label: str) -> np.random.Generator:
    """Independent generator derived from the run seed and a stable label."""
    digest = hashlib.sha256(label.encode()).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in (0, 4, 8, 12)]
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF] + words))


def _algebra_from_config(value) -> AlgebraDescriptor:
    if isinstance(value, str):
        return parse_algebra(value)
    if isinstance(value, dict):
        kind = value.get("kind")
        if kind == "sym_real":
            return sym_real(int(value["rank"]))
        if kind == "herm_complex":
            return herm_complex(int(value["rank"]))
        if kind == "lorentz":
            return lorentz(int(value["n"]))
        raise ConfigError(f"unknown algebra kind {kind!r}")
    raise ConfigError("algebra must be a string like 'sym_real(2)' or an object")


def load_config(path) -> dict:
    try:
        with open(path) as handle:
            cfg = json.load(handle)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if "seed" not in cfg:
        raise ConfigError("config requires an explicit integer 'seed'")
    if not isinstance(cfg["seed"], int):
        raise ConfigError("'seed' must be an integer (no wall-clock seeding)")
    return cfg


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_report(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(obj))


def _element_from_config(value, algebra: AlgebraDescriptor) -> Element:
    if value == "e":
        return identity(algebra)
    if value == "minus_e":
        return -1.0 * identity(algebra)
    coords = np.asarray(value, dtype=float)
    return Element(algebra, coords)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _check(value: float, threshold: float, comparison: str = "le") -> dict:
    passed = value <= threshold if comparison == "le" else value >= threshold
    return {
        "value": float(value),
        "threshold": float(threshold),
        "comparison": comparison,
        "passed": bool(passed),
    }


def suite_algebra_axioms(algebra, algorithm, rng, n, tol):
    checks = {}
    residuals = axiom_residuals(algebra, n, rng)
    for name, value in residuals.items():
        checks[name] = _check(value, tol["axioms"])
    # spectral reconstruction and inverse involution on a smaller sample
    worst_recon = 0.0
    worst_inv = 0.0
    for _ in range(min(n, 200)):
        x = random_element(algebra, rng)
        sd = spectral_decompose(x)
        worst_recon = max(
            worst_recon, norm(sd.reconstruct() - x) / max(norm(x), 1e-30)
        )
        v = random_cone_element(algebra, rng, 0.05, 20.0)
        worst_inv = max(worst_inv, norm(inverse(inverse(v)) - v) / norm(v))
    checks["spectral_reconstruction"] = _check(worst_recon, 1e-9)
    checks["inverse_involution"] = _check(worst_inv, 1e-9)
    dim_expected = algebra.rank + algebra.peirce_d * algebra.rank * (algebra.rank - 1) // 2
    checks["dimension_identity"] = _check(abs(algebra.dim - dim_expected), 0.0)
    return checks


def suite_peirce(algebra, algorithm, rng, n, tol):
    checks = {}
    frame = standard_frame(algebra)
    basis = build_peirce_basis(frame)
    e = identity(algebra)
    projs = peirce_projectors(frame[0])
    x = random_element(algebra, rng)
    total = projs[0.0].apply(x) + projs[0.5].apply(x) + projs[1.0].apply(x)
    checks["projection_completeness"] = _check(norm(total - x) / norm(x), 1e-12)
    sq_resid = 0.0
    cross_resid = 0.0
    table_resid = 0.0
    r = algebra.rank
    for _ in range(n):
        if r < 2:
            break
        i, j = sorted(rng.choice(r, size=2, replace=False))
        rows = basis.subspaces[(i, j)]
        zx = Element(algebra, rng.standard_normal(rows.shape[0]) @ rows)
        sq = jordan_product(zx, zx)
        target = 0.5 * inner(zx, zx) * (frame[i] + frame[j])
        sq_resid = max(sq_resid, norm(sq - target))
        ks = [k for k in range(r) if k != i and k != j]
        if ks:
            k = int(rng.choice(ks))
            jj, kk = sorted((j, k))
            rows2 = basis.subspaces[(jj, kk)]
            zy = Element(algebra, rng.standard_normal(rows2.shape[0]) @ rows2)
            prod = jordan_product(zx, zy)
            ii, kk2 = sorted((i, k))
            outside = prod - basis.project(prod, ii, kk2)
            table_resid = max(table_resid, norm(outside))
            cross = inner(prod, prod) - inner(zx, zx) * inner(zy, zy) / 8.0
            cross_resid = max(cross_resid, abs(cross))
    checks["square_identity"] = _check(sq_resid, tol["peirce_identity"])
    checks["cross_norm_identity"] = _check(cross_resid, tol["peirce_identity"])
    checks["multiplication_table"] = _check(table_resid, tol["peirce_identity"])
    # generalized power: constant exponent equals a determinant power
    power_resid = 0.0
    for _ in range(min(n, 50)):
        v = random_cone_element(algebra, rng, 0.2, 5.0)
        p = rng.uniform(-2.0, 2.0)
        lhs = generalized_power(v, PowerExponent.constant(p, r), frame)
        rhs = determinant(v) ** p
        power_resid = max(power_resid, abs(lhs - rhs) / abs(rhs))
    checks["constant_power_det"] = _check(power_resid, 1e-10)
    return checks


def suite_triangular(algebra, algorithm, rng, n, tol):
    checks = {}
    frame = standard_frame(algebra)
    e = identity(algebra)
    roundtrip = 0.0
    cocycle = 0.0
    tau_unit = 0.0
    nilpotency = 0.0
    basis = build_peirce_basis(frame)
    for _ in range(n):
        x = random_cone_element(algebra, rng, 0.1, 10.0)
        t = triangular_decompose(x, frame)
        roundtrip = max(
            roundtrip, norm(apply_triangular(t, e) - x) / norm(x)
        )
        s = rng.uniform(-1.5, 1.5, algebra.rank)
        y = random_cone_element(algebra, rng, 0.2, 5.0)
        lhs = generalized_power_log(apply_triangular(t, y), s, frame)
        rhs = generalized_power_log(apply_triangular(t, e), s, frame) + generalized_power_log(y, s, frame)
        cocycle = max(cocycle, abs(lhs - rhs))
        if algebra.rank >= 2:
            i = int(rng.integers(0, algebra.rank - 1))
            rows = np.vstack(
                [basis.subspaces[(i, k)] for k in range(i + 1, algebra.rank)]
            )
            z = Element(algebra, rng.standard_normal(rows.shape[0]) @ rows)
            tau = frobenius_transform(frame[i], z)
            tau_unit = max(
                tau_unit, abs(generalized_power_log(tau.apply(e), s, frame))
            )
            nbox = 2.0 * box_operator(z, frame[i]).matrix
            nilpotency = max(nilpotency, float(np.max(np.abs(nbox @ nbox @ nbox))))
    checks["roundtrip"] = _check(roundtrip, tol["triangular_roundtrip"])
    checks["power_cocycle"] = _check(cocycle, tol["power_cocycle"])
    checks["frobenius_unit_power"] = _check(tau_unit, tol["power_cocycle"])
    checks["box_nilpotency"] = _check(nilpotency, 1e-10)
    return checks


def suite_mult_alg(algebra, algorithm, rng, n, tol):
    checks = {}
    report = check_algorithm(algorithm, n, rng)
    checks["neutrality"] = _check(report.neutrality, tol["neutrality"])
    checks["cone_preservation"] = _check(report.cone_violation, 0.0)
    checks["ddet_law"] = _check(report.ddet_rel, tol["ddet"])
    if algorithm.homogeneous:
        checks["homogeneity"] = _check(report.homogeneity, tol["neutrality"])
    det_resid = 0.0
    for _ in range(min(n, 50)):
        x = random_cone_element(algebra, rng, 0.2, 5.0)
        y = random_cone_element(algebra, rng, 0.2, 5.0)
        lhs = determinant(multiply(algorithm, y, x))
        rhs = determinant(y) * determinant(x)
        det_resid = max(det_resid, abs(lhs - rhs) / abs(rhs))
    checks["det_multiplicativity"] = _check(det_resid, tol["ddet"])
    return checks


def suite_distributions(algebra, algorithm, rng, n, tol):
    checks = {}
    frame = standard_frame(algebra)
    nd_ratio = algebra.dim / algebra.rank
    a = random_cone_element(algebra, rng, 0.8, 1.8)
    p = nd_ratio + 1.0 + float(rng.uniform(0.0, 1.0))
    wp = WishartParams(p, a)
    rp = wp.as_riesz(frame)
    match = 0.0
    for _ in range(50):
        x = random_cone_element(algebra, rng, 0.2, 5.0)
        match = max(match, abs(wishart_logpdf(wp, x) - riesz_logpdf(rp, x)))
    checks["wishart_equals_riesz"] = _check(match, tol["logpdf_match"])

    draws = sample_riesz(rp, n, rng)
    coords = np.array([d.coords for d in draws])
    mean = coords.mean(axis=0)
    se = coords.std(axis=0, ddof=1) / math.sqrt(len(coords))
    target = p * inverse(a).coords
    sigmas = float(np.max(np.abs(mean - target) / np.maximum(se, 1e-30)))
    checks["wishart_mean"] = _check(sigmas, tol["mean_sigmas"])

    lam_min = 0.0
    for d in draws[:200]:
        lam_min = min(lam_min, float(eigenvalues(d).min()))
    checks["draws_in_cone"] = _check(max(0.0, -lam_min), 0.0)

    if algebra.kind == "sym_real" and algebra.rank == 2:
        svec = PowerExponent.of((nd_ratio + 1.3, nd_ratio + 0.1))
        riesz = RieszParams(svec, a, frame)
        mass, spot = riesz_normalization_quadrature(riesz, 48, 48, 32)
        checks["quadrature_mass"] = _check(abs(mass - 1.0), tol["quadrature_mass"])
        checks["quadrature_spot"] = _check(spot, 1e-10)

    u = random_element(algebra, rng, (0.05, 0.95))
    checks["domain_membership"] = _check(0.0 if in_domain_D(u) else 1.0, 0.0)
    checks["identity_not_in_domain"] = _check(
        1.0 if in_domain_D(identity(algebra)) else 0.0, 0.0
    )
    return checks


def suite_functional_eq(algebra, algorithm, rng, n, tol):
    checks = {}
    frame = algorithm.frame if algorithm.frame is not None else standard_frame(algebra)
    pairs = draw_cone_pairs(algebra, n, rng)
    f_det = log_det_power(0.8, algebra)
    checks["logdet_residual"] = _check(
        wlog_residual(f_det, algorithm, pairs), tol["wlog"]
    )
    if algebra.rank >= 2:
        svec = np.linspace(2.0, 1.0, algebra.rank)
        f_s = delta_s_log(svec, frame)
        checks["delta_s_vs_triangular"] = _check(
            wlog_residual(f_s, algorithms_w2(frame), pairs), tol["wlog"]
        )
        checks["delta_s_vs_quadratic"] = _check(
            wlog_residual(f_s, algorithms_w1(algebra), pairs),
            tol["wlog_counterexample"],
            comparison="ge",
        )
        rep = k_invariance_check(f_s, algebra, rng, min(n, 100))
        checks["delta_s_not_k_invariant"] = _check(
            rep.k_residual, tol["wlog_counterexample"], comparison="ge"
        )
    rep_det = k_invariance_check(f_det, algebra, rng, min(n, 100))
    checks["logdet_k_invariant"] = _check(rep_det.k_residual, tol["wlog"])
    checks["logdet_det_functional"] = _check(rep_det.equal_det_residual, tol["wlog"])

    lam = random_element(algebra, rng)
    alpha, beta = float(rng.normal()), float(rng.normal())
    xs = [random_cone_element(algebra, rng) for _ in range(max(algebra.dim + 2, 40))]
    ys = [random_cone_element(algebra, rng) for _ in range(len(xs))]
    fit = pexider_fit(
        [(x, inner(lam, x) + alpha) for x in xs],
        [(y, inner(lam, y) + beta) for y in ys],
        [(x + y, inner(lam, x + y) + alpha + beta) for x, y in zip(xs, ys)],
    )
    recovery = max(norm(fit.lam - lam), abs(fit.alpha - alpha), abs(fit.beta - beta))
    checks["pexider_recovery"] = _check(recovery, tol["pexider"])
    return checks


def suite_lukacs(algebra, algorithm, rng, n, tol):
    checks = {}
    frame = algorithm.frame if algorithm.frame is not None else standard_frame(algebra)
    e = identity(algebra)
    bijection = 0.0
    for _ in range(min(n, 100)):
        x = random_cone_element(algebra, rng, 0.2, 5.0)
        y = random_cone_element(algebra, rng, 0.2, 5.0)
        pair = quotient_map(x, y, algorithm)
        x2, y2 = inverse_map(pair.u, pair.v, algorithm)
        bijection = max(bijection, norm(x2 - x) + norm(y2 - y))
    checks["bijection"] = _check(bijection, tol["bijection"])

    jac = 0.0
    for _ in range(5):
        v = random_cone_element(algebra, rng, 0.3, 3.0)
        analytic, numeric = jacobian_check(v, algorithm, 1e-5, rng=rng)
        jac = max(jac, abs(analytic - numeric) / abs(analytic))
    checks["jacobian"] = _check(jac, tol["jacobian"])

    a = random_cone_element(algebra, rng, 0.8, 1.6)
    nd_ratio = algebra.dim / algebra.rank
    if algorithm.kind == "w2":
        shifts = 0.5 * algebra.peirce_d * np.arange(algebra.rank)
        s1 = PowerExponent.of(shifts + nd_ratio + 0.8)
        s2 = PowerExponent.of(shifts + nd_ratio + 0.3)
        model_x = riesz_model(RieszParams(s1, a, frame), algorithm)
        model_y = riesz_model(RieszParams(s2, a, frame), algorithm)
    else:
        model_x = wishart_model(WishartParams(nd_ratio + 1.2, a), algorithm, frame)
        model_y = wishart_model(WishartParams(nd_ratio + 0.7, a), algorithm, frame)
    pairs = draw_cone_pairs(algebra, 50, rng)
    checks["factorization"] = _check(
        factorization_residual(model_x, model_y, algorithm, pairs), tol["factorization"]
    )
    a_shift = a + 0.1 * e
    if algorithm.kind == "w2":
        model_bad = riesz_model(
            RieszParams(model_y.riesz_params.s, a_shift, frame), algorithm
        )
    else:
        model_bad = wishart_model(
            WishartParams(model_y.riesz_params.s.values[0], a_shift), algorithm, frame
        )
    checks["factorization_mismatch"] = _check(
        factorization_residual(model_x, model_bad, algorithm, pairs, strict=False),
        tol["factorization_mismatch"],
        comparison="ge",
    )

    sx = model_x.sample(n, rng)
    sy = model_y.sample(n, rng)
    report = independence_test(sx, sy, algorithm, n_perm=199, rng=rng, max_points=1024)
    checks["independence_p"] = _check(
        report.p_value, tol["independence_p"], comparison="ge"
    )
    details = {
        "experiment": "quotient-sum-independence",
        "statistic": report.statistic,
        "p_value": report.p_value,
        "n": report.n,
        "n_used": report.n_used,
        "n_perm": report.n_perm,
        "residuals": {
            "bijection": checks["bijection"]["value"],
            "jacobian": checks["jacobian"]["value"],
            "factorization": checks["factorization"]["value"],
            "factorization_mismatch": checks["factorization_mismatch"]["value"],
        },
    }
    return checks, details


SUITES = {
    "algebra-axioms": suite_algebra_axioms,
    "peirce": suite_peirce,
    "triangular": suite_triangular,
    "mult-alg": suite_mult_alg,
    "distributions": suite_distributions,
    "functional-eq": suite_functional_eq,
    "lukacs": suite_lukacs,
}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _thread_limit():
    value = os.environ.get("CONELAB_THREADS")
    if not value:
        return None
    try:
        limit = max(1, int(value))
    except ValueError:
        raise ConfigError(f"CONELAB_THREADS must be an integer, got {value!r}")
    try:
        from threadpoolctl import threadpool_limits

        return threadpool_limits(limits=limit)
    except ImportError:  # pragma: no cover - threadpoolctl ships with scipy
        return None


def cmd_run(cfg: dict, out_dir: Path) -> int:
    algebra = _algebra_from_config(cfg.get("algebra", "sym_real(2)"))
    algorithm = parse_algorithm(cfg.get("algorithm", "w1"), algebra)
    suites = cfg.get("suites", list(SUITE_NAMES))
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ConfigError(
            f"unknown suites {unknown}; valid suites: {', '.join(SUITE_NAMES)}"
        )
    seed = cfg["seed"]
    samples_cfg = dict(DEFAULT_SAMPLES)
    samples_cfg.update(cfg.get("samples", {}))
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(cfg.get("tolerances", {}))

    summary = {
        "algebra": algebra.name,
        "algorithm": algorithm.spec,
        "seed": seed,
        "suites": {},
    }
    all_passed = True
    limiter = _thread_limit()
    try:
        for name in suites:
            rng = _sub_rng(seed, f"suite:{name}")
            result = SUITES[name](algebra, algorithm, rng, samples_cfg[name], tol)
            checks, details = result if isinstance(result, tuple) else (result, None)
            passed = all(c["passed"] for c in checks.values())
            all_passed &= passed
            report = {
                "suite": name,
                "algebra": algebra.name,
                "algorithm": algorithm.spec,
                "seed": seed,
                "samples": samples_cfg[name],
                "passed": passed,
                "checks": checks,
            }
            if details is not None:
                report["details"] = details
            write_report(out_dir / f"{name}.json", report)
            summary["suites"][name] = passed
            status = "pass" if passed else "FAIL"
            print(f"[{status}] {name}")
            if not passed:
                for cname, c in checks.items():
                    if not c["passed"]:
                        print(
                            f"    {cname}: value {c['value']:.6e} "
                            f"{'<=' if c['comparison'] == 'le' else '>='} "
                            f"{c['threshold']:.6e} violated"
                        )
    finally:
        if limiter is not None:
            limiter.unregister()
    summary["all_passed"] = all_passed
    write_report(out_dir / "summary.json", summary)
    return 0 if all_passed else 1


def _recording(fn, records, role):
    def wrapped(x: Element) -> float:
        value = float(fn(x))
        records.append((role, x.coords.copy(), value))
        return value

    return wrapped


def _tabulated(rows, role, algebra):
    table = {}
    for r, coords, value in rows:
        if r == role:
            table[tuple(np.round(coords, 12))] = value

    def lookup(x: Element) -> float:
        key = tuple(np.round(x.coords, 12))
        try:
            return table[key]
        except KeyError:
            raise InconsistencyError(
                f"tabulated oracle {role!r} has no value at a requested grid point; "
                "the CSV must come from the same grid plan (algebra, seed, sizes)"
            )

    return lookup


def _oracle_csv_rows(path, algebra):
    import csv as _csv

    rows = []
    with open(path, newline="") as handle:
        reader = _csv.reader(handle)
        header = next(reader)
        expected = 2 + algebra.dim
        if len(header) != expected:
            raise ConfigError(
                f"oracle CSV must have columns role,c0..c{algebra.dim - 1},value"
            )
        for row in reader:
            coords = np.array([float(v) for v in row[1:-1]])
            rows.append((row[0], coords, float(row[-1])))
    return rows


def _write_oracle_csv(path, records, algebra):
    import csv as _csv

    with open(path, "w", newline="") as handle:
        writer = _csv.writer(handle)
        writer.writerow(["role"] + [f"c{i}" for i in range(algebra.dim)] + ["value"])
        for role, coords, value in records:
            writer.writerow([role] + [repr(float(v)) for v in coords] + [repr(value)])


def cmd_decompose(cfg: dict, out_dir: Path) -> int:
    algebra = _algebra_from_config(cfg.get("algebra", "sym_real(2)"))
    algorithm = parse_algorithm(cfg.get("algorithm", "w1"), algebra)
    oracle_cfg = cfg.get("oracle")
    if not isinstance(oracle_cfg, dict) or "family" not in oracle_cfg:
        raise ConfigError("decompose requires an 'oracle' object with a 'family'")
    grid_cfg = oracle_cfg.get("grid", {})
    grid = GridSpec(
        n_points=int(grid_cfg.get("n_points", 2000)),
        low=float(grid_cfg.get("low", 0.1)),
        high=float(grid_cfg.get("high", 10.0)),
        seed=int(grid_cfg.get("seed", cfg["seed"])),
        tol=float(grid_cfg.get("tol", 1e-6)),
    )
    family = oracle_cfg["family"]
    frame = algorithm.frame if algorithm.frame is not None else standard_frame(algebra)
    if family == "wishart-form":
        lam = _element_from_config(oracle_cfg.get("lambda", "minus_e"), algebra)
        kappa = oracle_cfg.get("kappa", [0.7, 1.3])
        e_fn = log_det_power(float(kappa[0]), algebra)
        f_fn = log_det_power(float(kappa[1]), algebra)
    elif family == "riesz-form":
        lam = _element_from_config(oracle_cfg.get("lambda", "minus_e"), algebra)
        e_fn = delta_s_log(oracle_cfg["s1"], frame)
        f_fn = delta_s_log(oracle_cfg["s2"], frame)
    elif family == "zero":
        lam = Element(algebra, np.zeros(algebra.dim))
        e_fn = zero_fn(algebra)
        f_fn = zero_fn(algebra)
    elif family == "csv":
        rows = _oracle_csv_rows(oracle_cfg["path"], algebra)
        oracles = tuple(_tabulated(rows, role, algebra) for role in "abcd")
        dec = olkin_baker_decompose(*oracles, algorithm, grid)
        payload = dec.as_dict()
        payload["algorithm"] = algorithm.spec
        write_report(out_dir / "decomposition.json", payload)
        print("[pass] decompose (csv oracle)")
        return 0
    else:
        raise ConfigError(f"unknown oracle family {family!r}")
    c1 = float(oracle_cfg.get("c1", 0.0))
    c2 = float(oracle_cfg.get("c2", 0.0))
    a, b, c, d = make_olkin_baker_instance(lam, e_fn, f_fn, algorithm, c1=c1, c2=c2)
    records = []
    dump_path = cfg.get("dump_oracle")
    if dump_path:
        a = _recording(a, records, "a")
        b = _recording(b, records, "b")
        c = _recording(c, records, "c")
        d = _recording(d, records, "d")
    dec = olkin_baker_decompose(a, b, c, d, algorithm, grid)
    if dump_path:
        _write_oracle_csv(dump_path, records, algebra)
    payload = dec.as_dict()
    payload["algorithm"] = algorithm.spec
    payload["planted"] = {
        "lambda": [float(v) for v in lam.coords],
        "e_fn": e_fn.form_dict(),
        "f_fn": f_fn.form_dict(),
        "c1": c1,
        "c2": c2,
    }
    write_report(out_dir / "decomposition.json", payload)
    print("[pass] decompose")
    return 0


def cmd_sample(cfg: dict, out_dir: Path) -> int:
    algebra = _algebra_from_config(cfg.get("algebra", "sym_real(2)"))
    dist = cfg.get("distribution")
    if not isinstance(dist, dict) or "type" not in dist:
        raise ConfigError("sample requires a 'distribution' object with a 'type'")
    n = int(cfg.get("n", 1000))
    frame = standard_frame(algebra)
    a = _element_from_config(dist.get("a", "e"), algebra)
    if dist["type"] == "wishart":
        params = WishartParams(float(dist["p"]), a).as_riesz(frame)
    elif dist["type"] == "riesz":
        params = RieszParams(PowerExponent.of(dist["s"]), a, frame)
    else:
        raise ConfigError(f"unknown distribution type {dist['type']!r}")
    rng = _sub_rng(cfg["seed"], "sample")
    draws = sample_riesz(params, n, rng)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / cfg.get("output", "draws.csv")
    save_samples_csv(path, draws)
    print(f"[pass] sample ({n} draws -> {path})")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conelab",
        description="verification suites for symmetric-cone computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("run", "run verification suites from a config"),
        ("decompose", "recover Olkin-Baker parameters from an oracle spec"),
        ("sample", "draw from a configured cone distribution"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("config", help="path to a JSON config")
        cmd.add_argument("--seed", type=int, default=None, help="override config seed")
        cmd.add_argument("--out", default=None, help="override output directory")
        if name == "run":
            cmd.add_argument(
                "--suite",
                action="append",
                default=None,
                help="run only this suite (repeatable)",
            )
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if getattr(args, "suite", None):
            cfg["suites"] = args.suite
        out_dir = Path(args.out or cfg.get("out_dir", "reports"))
        if args.command == "run":
            return cmd_run(cfg, out_dir)
        if args.command == "decompose":
            return cmd_decompose(cfg, out_dir)
        return cmd_sample(cfg, out_dir)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InconsistencyError, FitError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except ConelabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
