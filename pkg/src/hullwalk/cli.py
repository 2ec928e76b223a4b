"""Command-line front end: flat key=value config files, experiment dispatch,
one summary line per n, and canonical CSV output.

Exit codes: 0 success, 1 runtime error, 2 config error, 3 a tolerance check
failed.
"""

import argparse
import math
import sys

import numpy as np

from .exact import exact_decomposition
from .geometry import cauchy_perimeter, hull_perimeter
from .montecarlo import (
    McConfig,
    clt_samples,
    event_probability,
    ks_critical_value,
    swb_comparison,
    variance_sweep,
)
from .report import ExperimentReport, ReportRow, write_csv
from .theory import theory_quantities
from .walk import (
    CircleDrift,
    FiniteSupport,
    GaussianDrift,
    SeedSpec,
    TwoPointDegenerate,
    generate_walk,
)

COMMANDS = (
    "variance-sweep",
    "clt",
    "swb-check",
    "cauchy-check",
    "decompose-exact",
    "event-prob",
    "theory",
)

# Tolerances applied by commands that carry a pass/fail verdict.
SLOPE_REL_TOL = 0.10
CAUCHY_REL_TOL = 1e-3
ENUMERATION_REL_TOL = 1e-10
SWB_SE_FACTOR = 3.0


class ConfigError(Exception):
    pass


_MODEL_KEYS = {
    "circle": {"model.mu"},
    "two_point": set(),
    "finite": set(),
    "gaussian": {"model.mean", "model.sdev_along", "model.sdev_perp"},
}
_GENERAL_KEYS = {"model.kind", "n_values", "reps", "seed", "grid_size", "delta", "gamma"}
_ALL_KEYS = _GENERAL_KEYS | {k for keys in _MODEL_KEYS.values() for k in keys}


def _parse_pairs(path):
    scalars = {}
    atoms = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"line {lineno}: expected key = value, got {text!r}")
        key, _, value = text.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "atom":
            atoms.append((value, lineno))
            continue
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in scalars:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        scalars[key] = (value, lineno)
    return scalars, atoms


def _take_float(scalars, key):
    if key not in scalars:
        return None
    value, lineno = scalars[key]
    try:
        return float(value), lineno
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be a number, got {value!r}") from None


def _take_int(scalars, key):
    if key not in scalars:
        return None
    value, lineno = scalars[key]
    try:
        return int(value), lineno
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be an integer, got {value!r}") from None


def _parse_vec(value, lineno, key):
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"line {lineno}: {key} must be two comma-separated numbers")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be numeric, got {value!r}") from None


def build_model(scalars, atoms):
    if "model.kind" not in scalars:
        raise ConfigError("missing required key model.kind")
    kind, kind_line = scalars["model.kind"]
    if kind not in _MODEL_KEYS:
        valid = ", ".join(sorted(_MODEL_KEYS))
        raise ConfigError(f"line {kind_line}: model.kind must be one of {valid}, got {kind!r}")
    for key in _ALL_KEYS - _GENERAL_KEYS - _MODEL_KEYS[kind]:
        if key in scalars:
            raise ConfigError(
                f"line {scalars[key][1]}: {key} does not apply to model.kind={kind}"
            )
    if atoms and kind != "finite":
        raise ConfigError(f"line {atoms[0][1]}: atom lines apply only to model.kind=finite")

    if kind == "circle":
        mu = _take_float(scalars, "model.mu")
        try:
            return CircleDrift(mu[0] if mu else 0.0)
        except ValueError as exc:
            raise ConfigError(f"line {mu[1]}: {exc}") from exc
    if kind == "two_point":
        return TwoPointDegenerate()
    if kind == "gaussian":
        for key in ("model.mean", "model.sdev_along", "model.sdev_perp"):
            if key not in scalars:
                raise ConfigError(f"missing required key {key} for model.kind=gaussian")
        mean = _parse_vec(*scalars["model.mean"], "model.mean")
        along = _take_float(scalars, "model.sdev_along")
        perp = _take_float(scalars, "model.sdev_perp")
        try:
            return GaussianDrift(mean, along[0], perp[0])
        except ValueError as exc:
            raise ConfigError(f"gaussian model: {exc}") from exc
    if not atoms:
        raise ConfigError("model.kind=finite needs at least one atom = x,y,p line")
    table = []
    for value, lineno in atoms:
        parts = [p.strip() for p in value.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"line {lineno}: atom must be x,y,p")
        try:
            x, y, p = (float(v) for v in parts)
        except ValueError:
            raise ConfigError(f"line {lineno}: atom must be numeric, got {value!r}") from None
        table.append(((x, y), p))
    try:
        return FiniteSupport(tuple(table))
    except ValueError as exc:
        raise ConfigError(f"line {atoms[0][1]}: {exc}") from exc


def build_mc_config(scalars, model, seed_override, reps_override):
    if "n_values" not in scalars:
        raise ConfigError("missing required key n_values")
    value, lineno = scalars["n_values"]
    try:
        n_values = tuple(int(part.strip()) for part in value.split(","))
    except ValueError:
        raise ConfigError(f"line {lineno}: n_values must be comma-separated integers") from None
    if not n_values or any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError(f"line {lineno}: n_values must be strictly increasing")
    if any(v < 1 for v in n_values):
        raise ConfigError(f"line {lineno}: every n must be >= 1")

    if reps_override is not None:
        reps = int(reps_override)
    else:
        got = _take_int(scalars, "reps")
        if got is None:
            raise ConfigError("missing required key reps")
        reps = got[0]
        if reps < 2:
            raise ConfigError(f"line {got[1]}: reps = {reps} must be >= 2")
    if reps < 2:
        raise ConfigError(f"reps = {reps} must be >= 2")

    seed = seed_override if seed_override is not None else _config_seed(scalars)

    grid = _take_int(scalars, "grid_size")
    grid_size = grid[0] if grid else 1024
    if grid and grid_size < 2:
        raise ConfigError(f"line {grid[1]}: grid_size = {grid_size} must be at least 2")

    delta_got = _take_float(scalars, "delta")
    delta = delta_got[0] if delta_got else 0.3
    if delta_got and not 0.0 < delta < math.pi / 2.0:
        raise ConfigError(f"line {delta_got[1]}: delta = {delta:g} must lie in (0, pi/2)")

    gamma_got = _take_float(scalars, "gamma")
    gamma = gamma_got[0] if gamma_got else 0.1
    if gamma_got and not 0.0 < gamma < 0.5:
        raise ConfigError(f"line {gamma_got[1]}: gamma = {gamma:g} must lie in (0, 0.5)")

    try:
        return McConfig(
            model=model,
            n_values=n_values,
            reps=reps,
            master_seed=seed,
            grid_size=grid_size,
            delta=delta,
            gamma=gamma,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _config_seed(scalars):
    got = _take_int(scalars, "seed")
    if got is None:
        return 0
    if not 0 <= got[0] < 2**64:
        raise ConfigError(f"line {got[1]}: seed must fit in an unsigned 64-bit integer")
    return got[0]


def _cmd_theory(model, seed):
    tq = theory_quantities(model)
    desc = model.describe()
    sig_text = "undefined" if tq.sigma_sq is None else f"{tq.sigma_sq:.6g}"
    print(f"theory model={desc} sigma_sq={sig_text} ss_coeff={tq.ss_bound_coeff:.6g} mu={tq.mu:.6g}")
    rows = []
    if tq.sigma_sq is not None:
        rows.append(ReportRow("theory", desc, None, "sigma_sq", tq.sigma_sq, None, None, seed))
    rows.append(ReportRow("theory", desc, None, "ss_bound_coeff", tq.ss_bound_coeff, None, None, seed))
    rows.append(ReportRow("theory", desc, None, "mu", tq.mu, None, None, seed))
    return rows, True


def _cmd_variance_sweep(mc, workers):
    rep = variance_sweep(mc, workers=workers)
    for n in mc.n_values:
        mean = rep.value("mean_perimeter", n)
        var = rep.value("perimeter_variance", n)
        print(f"variance-sweep n={n} mean={mean:.6g} var={var:.6g} var/n={var / n:.6g}")
    slope = rep.value("variance_slope")
    theory = rep.rows_for("variance_slope")[0].theory_value
    ok = True
    if theory is not None:
        ok = abs(slope - theory) <= SLOPE_REL_TOL * theory
        verdict = "pass" if ok else "fail"
        print(f"variance-sweep slope={slope:.6g} theory={theory:.6g} {verdict}")
    else:
        print(f"variance-sweep slope={slope:.6g}")
    return list(rep.rows), ok


def _cmd_clt(mc, workers):
    desc = mc.model.describe()
    threshold = ks_critical_value(mc.reps, alpha=0.01)
    rows = []
    ok = True
    for n in mc.n_values:
        _, ks_sample = clt_samples(mc, n, standardization="sample", workers=workers)
        _, ks_theory = clt_samples(mc, n, standardization="theory", workers=workers)
        good = ks_sample < threshold and ks_theory < threshold
        ok = ok and good
        verdict = "pass" if good else "fail"
        print(
            f"clt n={n} ks_sample={ks_sample:.4g} ks_theory={ks_theory:.4g} "
            f"threshold={threshold:.4g} {verdict}"
        )
        rows.append(ReportRow("clt", desc, n, "ks_distance_sample_scale", ks_sample,
                              None, threshold, mc.master_seed))
        rows.append(ReportRow("clt", desc, n, "ks_distance_theory_scale", ks_theory,
                              None, threshold, mc.master_seed))
    return rows, ok


def _cmd_swb_check(mc, workers):
    desc = mc.model.describe()
    rows = []
    ok = True
    for n in mc.n_values:
        cmp = swb_comparison(mc, n, workers=workers)
        good = cmp.gap <= SWB_SE_FACTOR * cmp.combined_se
        ok = ok and good
        verdict = "pass" if good else "fail"
        print(
            f"swb-check n={n} direct={cmp.direct.mean:.6g} identity={cmp.identity.mean:.6g} "
            f"gap={cmp.gap:.3g} combined_se={cmp.combined_se:.3g} {verdict}"
        )
        rows.append(ReportRow("swb-check", desc, n, "direct_mean", cmp.direct.mean,
                              cmp.direct.standard_error_of_mean, None, mc.master_seed))
        rows.append(ReportRow("swb-check", desc, n, "identity_mean", cmp.identity.mean,
                              cmp.identity.standard_error_of_mean, None, mc.master_seed))
    return rows, ok


def _cmd_cauchy_check(mc, workers):
    desc = mc.model.describe()
    rows = []
    ok = True
    for n in mc.n_values:
        worst = 0.0
        for r in range(mc.reps):
            path, _ = generate_walk(mc.model, n, SeedSpec(mc.master_seed, r))
            quad = cauchy_perimeter(path, mc.grid_size)
            exact = hull_perimeter(path.points)
            gap = abs(quad - exact) / exact if exact > 0 else abs(quad - exact)
            worst = max(worst, gap)
        good = worst <= CAUCHY_REL_TOL
        ok = ok and good
        verdict = "pass" if good else "fail"
        print(f"cauchy-check n={n} max_rel_gap={worst:.3g} tolerance={CAUCHY_REL_TOL:g} {verdict}")
        rows.append(ReportRow("cauchy-check", desc, n, "max_rel_gap", worst,
                              None, None, mc.master_seed))
    return rows, ok


def _cmd_decompose_exact(mc, workers):
    desc = mc.model.describe()
    rows = []
    ok = True
    for n in mc.n_values:
        rec = exact_decomposition(mc.model, n)
        scale = max(1.0, abs(rec.var_exact))
        good = (
            abs(rec.total - rec.var_exact) <= ENUMERATION_REL_TOL * scale
            and rec.max_centering_gap <= ENUMERATION_REL_TOL * max(1.0, abs(rec.mean_exact))
            and rec.max_pathwise_gap <= ENUMERATION_REL_TOL * max(1.0, abs(rec.mean_exact))
        )
        ok = ok and good
        verdict = "pass" if good else "fail"
        print(f"decompose-exact n={n} var_exact={rec.var_exact:.6f} sum_ED2={rec.total:.6f} {verdict}")
        rows.append(ReportRow("decompose-exact", desc, n, "sum_d_squared", rec.total,
                              None, rec.var_exact, mc.master_seed))
        for i, value in enumerate(rec.per_index, start=1):
            rows.append(ReportRow("decompose-exact", desc, n, f"d_squared_i{i}", value,
                                  None, None, mc.master_seed))
    return rows, ok


def _cmd_event_prob(mc, workers):
    desc = mc.model.describe()
    rows = []
    for n in mc.n_values:
        diag = event_probability(mc, n, workers=workers)
        detail = " ".join(f"i={i}:{p:.3f}" for i, p in diag.per_index)
        print(f"event-prob n={n} min_p={diag.min_probability:.4f} {detail}")
        rows.append(ReportRow("event-prob", desc, n, "event_min_probability",
                              diag.min_probability, None, None, mc.master_seed))
        for i, p in diag.per_index:
            rows.append(ReportRow("event-prob", desc, n, f"event_probability_i{i}", p,
                                  None, None, mc.master_seed))
    return rows, True


def run(command, config_path, out_path, seed=None, reps=None, threads=1) -> int:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    scalars, atoms = _parse_pairs(config_path)
    model = build_model(scalars, atoms)
    if seed is not None and not 0 <= int(seed) < 2**64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")

    if command == "theory":
        effective_seed = int(seed) if seed is not None else _config_seed(scalars)
        rows, ok = _cmd_theory(model, effective_seed)
    else:
        mc = build_mc_config(scalars, model, seed, reps)
        handler = {
            "variance-sweep": _cmd_variance_sweep,
            "clt": _cmd_clt,
            "swb-check": _cmd_swb_check,
            "cauchy-check": _cmd_cauchy_check,
            "decompose-exact": _cmd_decompose_exact,
            "event-prob": _cmd_event_prob,
        }[command]
        rows, ok = handler(mc, max(1, int(threads)))

    write_csv(ExperimentReport(rows=tuple(rows)), out_path)
    return 0 if ok else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hullwalk",
        description="Planar random walk hulls: perimeter experiments and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="flat key=value config file")
        p.add_argument("--out", required=True, help="CSV output path")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--reps", type=int, default=None, help="override config reps")
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes (speed only, never changes output)")
    args = parser.parse_args(argv)
    try:
        return run(args.command, args.config, args.out, args.seed, args.reps, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
