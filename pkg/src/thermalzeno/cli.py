"""Command-line front end.

Exit codes: 0 success (or CP), 1 usage/config error, 2 CP violation, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path
from typing import Optional

import numpy as np

from . import io, plotting, presets
from .bath import BathModel, ZeroFrequencyRateError, high_temperature_alpha, occupation
from .config import ConfigError, ModelConfig, ScenarioConfig, load_config, parse_config
from .cp import canonical_decompose, choi_of_map
from .dynamics import SweepError, basis_state, pure_state, propagate, trajectory_defect, zeno_sweep
from .generators import (
    Liouvillian,
    Variant,
    build_high_temperature,
    build_high_temperature_from_bath,
    build_nonsecular,
    build_secular,
    high_temperature_defect,
)
from .system import band_partition, spectrum, validate_band_hypotheses

log = logging.getLogger("thermalzeno")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CP_VIOLATION = 2
EXIT_NUMERICAL = 3

VARIANT_CHOICES = ("nonsecular", "secular", "hight")


class CommandError(RuntimeError):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------- scenario helpers


def available_variants(model: ModelConfig) -> list[Variant]:
    if model.generator is not None:
        return [Variant.EXPLICIT]
    out = []
    if model.bath is not None:
        out += [Variant.NONSECULAR, Variant.SECULAR]
    if model.alpha is not None or (model.bath is not None and model.bands is not None):
        out.append(Variant.HIGH_TEMPERATURE)
    return out


def selected_variants(cfg: ScenarioConfig, flag: Optional[str]) -> list[Variant]:
    avail = available_variants(cfg.model)
    wanted = [Variant(flag)] if flag else (cfg.run.variants or avail)
    missing = [v.value for v in wanted if v not in avail]
    if missing:
        raise CommandError(f"variant(s) {missing} not available for this model (available: {[v.value for v in avail]})")
    return wanted


def band_check(cfg: ScenarioConfig):
    """Band partition and hypothesis report, or ``(None, None)`` when no bands are declared."""
    model = cfg.model
    if model.bands is None or model.system is None:
        return None, None
    spec = spectrum(model.system.H, cfg.tolerances["degeneracy"])
    try:
        part = band_partition(spec, *model.bands, tol=max(cfg.tolerances["band"], 1e-9))
    except ValueError as exc:
        raise CommandError(f"band partition: {exc}") from None
    report = validate_band_hypotheses(spec, model.system.A, part, cfg.tolerances["band"], model.bath)
    return part, report


def build_variant(cfg: ScenarioConfig, variant: Variant) -> Liouvillian:
    model = cfg.model
    if variant is Variant.EXPLICIT:
        return model.generator
    sys_ = model.system
    spec = spectrum(sys_.H, cfg.tolerances["degeneracy"])
    try:
        if variant is Variant.NONSECULAR:
            return build_nonsecular(sys_, spec, model.bath)
        if variant is Variant.SECULAR:
            return build_secular(sys_, spec, model.bath)
    except ZeroFrequencyRateError as exc:
        raise CommandError(str(exc)) from None
    part, report = band_check(cfg)
    if report is not None and not report.holds:
        raise CommandError(
            "band hypotheses fail: "
            f"||P1 A P1|| = {report.intra_band_1:.3e}, ||P2 A P2|| = {report.intra_band_2:.3e}, "
            f"||P1 A P2|| = {report.inter_band:.3e} (tol {report.tol:.1e})"
        )
    if model.alpha is not None:
        L = build_high_temperature(sys_, model.alpha)
        if model.source == "preset":
            presets.check_hierarchy(model.nu, model.Omega, model.alpha)
        return L
    return build_high_temperature_from_bath(sys_, model.bath, part.omega0)


def initial_state(cfg: ScenarioConfig) -> np.ndarray:
    d = cfg.model.dim
    s = cfg.run.initial_state
    if s is None:
        return basis_state(0, d)
    if isinstance(s, int):
        return basis_state(s, d)
    return pure_state(s)


def model_inputs(cfg: ScenarioConfig) -> dict:
    m = cfg.model
    out = {"source": m.source, "config": cfg.raw}
    if m.system is not None:
        out.update(H=m.system.H, A=m.system.A, lamb_shift=m.system.lamb_shift)
    if m.bath is not None:
        out.update(gamma=m.bath.gamma, temperature=m.bath.temperature)
    if m.alpha is not None:
        out["alpha"] = m.alpha
    if m.seed is not None:
        out["seed"] = m.seed
    return out


def _figure(args, fn, *a, **kw):
    if not args.figures:
        return None
    if not plotting.available():
        log.warning("matplotlib not installed; skipping figure %s", a[-1] if a else "")
        return None
    return fn(*a, **kw)


# --------------------------------------------------------------------------- commands


def cmd_build(cfg: ScenarioConfig, out: Path, args) -> int:
    variants = selected_variants(cfg, args.variant)
    part, report = band_check(cfg)
    if report is not None:
        io.write_csv(out / "band_report.csv", ["quantity", "value"], [[k, v] for k, v in report.as_dict().items()],
                     comments=["two-band coupling hypotheses; residuals must be <= tol for the diagonal conditions",
                               f"tol = {report.tol:.3e}",
                               f"coincident Bohr frequencies: {report.coincident_frequencies}"])
    built = {}
    for v in variants:
        L = build_variant(cfg, v)
        built[v.value] = L
        io.write_complex_matrix(out, f"liouvillian_{v.value}", L.matrix, [f"variant: {v.value}"])
        labels = [io.state_label(k, L.dim) for k in range(L.dim**2)]
        _figure(args, plotting.plot_matrix, L.matrix, labels, out / f"liouvillian_{v.value}.png", f"|L| ({v.value})")
    io.write_provenance(out, "build", model_inputs(cfg), cfg.tolerances,
                        {"variants": list(built), "provenance": {k: L.provenance for k, L in built.items()},
                         "band_report": report.as_dict() if report is not None else None})
    return EXIT_OK


def cmd_check_cp(cfg: ScenarioConfig, out: Path, args) -> int:
    variants = selected_variants(cfg, args.variant)
    times = cfg.run.choi_times
    summary = []
    violated = False
    for v in variants:
        L = build_variant(cfg, v)
        try:
            rep = canonical_decompose(L, cp_tol=cfg.tolerances["kossakowski"])
        except ValueError as exc:
            raise CommandError(f"{v.value}: {exc}") from None
        io.write_csv(out / f"kossakowski_{v.value}.csv", ["index", "eigenvalue"], enumerate(rep.eigenvalues),
                     comments=[f"variant: {v.value}", "eigenvalues of the Kossakowski matrix (generalized Gell-Mann basis)",
                               f"min_eigenvalue = {rep.min_eigenvalue:.16e}", f"is_cp_generator = {rep.is_cp_generator}"])
        io.write_operator(out, f"hamiltonian_part_{v.value}", rep.hamiltonian_part)
        mins = np.array([choi_of_map(L, t)[1] for t in times])
        choi_tol = cfg.tolerances["choi"] * L.dim
        io.write_csv(out / f"choi_scan_{v.value}.csv", ["t", "min_eigenvalue", "cp"],
                     ([t, m, bool(m >= -choi_tol)] for t, m in zip(times, mins)),
                     comments=[f"variant: {v.value}", f"Choi matrix of exp(tL); CP iff min_eigenvalue >= -{choi_tol:.1e}"])
        _figure(args, plotting.plot_choi_scan, times, mins, out / f"choi_scan_{v.value}.png", v.value)
        choi_ok = bool(np.all(mins >= -choi_tol))
        ok = rep.is_cp_generator and choi_ok
        if not ok:
            violated = True
            k = int(np.argmin(mins))
            comments = [f"variant: {v.value}", f"Choi min eigenvalue {mins[k]:.16e} at t = {times[k]:.16e}"]
            if rep.witness is not None:
                comments.append(f"Kossakowski eigenvalue {rep.min_eigenvalue:.16e}; operator is its eigenvector")
                io.write_operator(out, f"witness_{v.value}", rep.witness, comments)
            else:
                io.write_csv(out / f"witness_{v.value}.csv", ["t", "min_eigenvalue"], [[times[k], mins[k]]], comments)
        summary.append([v.value, rep.min_eigenvalue, rep.is_cp_generator, float(mins.min()),
                        float(times[int(np.argmin(mins))]), ok])
    io.write_csv(out / "cp_summary.csv",
                 ["variant", "kossakowski_min", "is_cp_generator", "choi_min", "choi_min_t", "cp"], summary)
    io.write_provenance(out, "check-cp", model_inputs(cfg), cfg.tolerances,
                        {"variants": [v.value for v in variants], "choi_times": times})
    return EXIT_CP_VIOLATION if violated else EXIT_OK


def cmd_evolve(cfg: ScenarioConfig, out: Path, args) -> int:
    variants = selected_variants(cfg, args.variant)
    rho0 = initial_state(cfg)
    d = cfg.model.dim
    times = cfg.run.times if cfg.run.times is not None else np.linspace(0.0, cfg.run.horizon, cfg.run.n_times)
    elements = cfg.run.elements or [(i, i) for i in range(d)] + [(0, 1)]
    for v in variants:
        L = build_variant(cfg, v)
        traj = propagate(L, rho0, times)
        surv = traj.survival if traj.survival is not None else np.full(times.size, np.nan)
        header = ["t", "survival", "trace_deviation", "min_eigenvalue"]
        for i, j in elements:
            header += [f"re_rho_{i + 1}{j + 1}", f"im_rho_{i + 1}{j + 1}"]
        tr = traj.trace_deviation()
        me = traj.min_eigenvalues()
        rows = []
        for k, t in enumerate(times):
            row = [t, surv[k], tr[k], me[k]]
            for i, j in elements:
                row += [traj.states[k, i, j].real, traj.states[k, i, j].imag]
            rows.append(row)
        io.write_csv(out / f"trajectory_{v.value}.csv", header, rows,
                     comments=[f"variant: {v.value}", "indices in column names are 1-based",
                               "survival = Tr[rho0 rho(t)] (nan if rho0 is not a pure state)"])
        pops = [traj.states[:, i, i].real for i in range(d)]
        _figure(args, plotting.plot_trajectory, times, traj.survival, pops, out / f"trajectory_{v.value}.png", v.value)
    io.write_provenance(out, "evolve", model_inputs(cfg), cfg.tolerances,
                        {"variants": [v.value for v in variants], "initial_state": rho0, "times": times})
    return EXIT_OK


def sweep_alphas(cfg: ScenarioConfig):
    """Alpha grid, or alphas derived from a temperature grid (returned alongside)."""
    run, model = cfg.run, cfg.model
    if run.temperatures is None:
        return np.asarray(run.alphas, dtype=float), None
    if model.bath is None:
        raise CommandError("a temperature sweep needs gamma (and a temperature) in the model section")
    part, _ = band_check(cfg)
    if part is None:
        raise CommandError("a temperature sweep needs a band partition to define omega0")
    temps = np.asarray(run.temperatures, dtype=float)
    alphas = np.array([model.bath.gamma * occupation(part.omega0, T) for T in temps])
    order = np.argsort(alphas)
    return alphas[order], temps[order]


def cmd_zeno_sweep(cfg: ScenarioConfig, out: Path, args) -> int:
    if cfg.model.system is None:
        raise CommandError("zeno-sweep needs a system model, not an explicit generator")
    alphas, temps = sweep_alphas(cfg)
    if cfg.model.source == "preset":
        presets.check_hierarchy(cfg.model.nu, cfg.model.Omega, float(alphas[-1]))
    res = zeno_sweep(cfg.model.system, alphas, cfg.run.horizon, cfg.run.n_times, initial_state(cfg))
    header = ["alpha"] + (["temperature"] if temps is not None else []) + ["min_survival", "one_minus_min_survival"]
    rows = []
    for k, a in enumerate(res.alphas):
        rows.append([a] + ([temps[k]] if temps is not None else []) + [res.min_survival[k], res.leakage[k]])
    footer = [f"tail_exponent,{io.fmt(res.tail_exponent) if res.tail_exponent is not None else 'nan'}"]
    io.write_csv(out / "zeno_sweep.csv", header, rows,
                 comments=[f"time_horizon = {res.time_horizon:.16e}", f"n_times = {res.times.size}",
                           "tail_exponent: log-log slope of 1 - min_survival versus alpha over the last 3 points"],
                 footer=footer)
    with (out / "zeno_sweep_plot.dat").open("w") as fh:
        fh.write("# alpha  one_minus_min_survival\n")
        for a, y in zip(res.alphas, res.leakage):
            fh.write(f"{io.fmt(a)} {io.fmt(y)}\n")
    io.write_csv(out / "zeno_survival_curves.csv", ["t"] + [f"alpha={io.fmt(a)}" for a in res.alphas],
                 ([t] + list(res.curves[:, k]) for k, t in enumerate(res.times)))
    _figure(args, plotting.plot_zeno_sweep, res.alphas, res.leakage, out / "zeno_sweep.png", res.tail_exponent)
    _figure(args, plotting.plot_survival_curves, res.times, res.curves, res.alphas, out / "zeno_survival_curves.png")
    io.write_provenance(out, "zeno-sweep", model_inputs(cfg), cfg.tolerances,
                        {"alphas": res.alphas, "temperatures": temps, "time_horizon": res.time_horizon,
                         "n_times": res.times.size, "tail_exponent": res.tail_exponent})
    return EXIT_OK


def defect_scan_rows(cfg: ScenarioConfig) -> list[dict]:
    ds = cfg.run.defect_scan
    model = cfg.model
    if model.system is None:
        raise CommandError("defect-scan needs a system model")
    rows = []
    temps = [float(T) for T in ds["temperatures"]]
    if model.source == "preset":
        omega0 = float(ds["omega0"])
        grid = [(float(dw), presets.three_level_model(presets.band_centred_nu(omega0, float(dw)), ds["Omega"]))
                for dw in ds["delta_omegas"]]
    else:
        part, report = band_check(cfg)
        if part is None:
            raise CommandError("defect-scan on an explicit model needs declared bands")
        omega0 = part.omega0
        grid = [(part.delta_omega, model.system)]
    d = grid[0][1].dim
    init = ds["initial_state"]
    rho0 = basis_state(int(init), d) if isinstance(init, int) else pure_state(np.asarray(init))
    for T in temps:
        gamma = float(ds["gamma_T"]) / T
        bath = BathModel(gamma, T)
        for dw, sys_ in grid:
            spec = spectrum(sys_.H, cfg.tolerances["degeneracy"])
            ns = build_nonsecular(sys_, spec, bath)
            ht = build_high_temperature_from_bath(sys_, bath, omega0)
            alpha = high_temperature_alpha(bath, omega0)
            defect = high_temperature_defect(ns, ht)
            indicator = gamma * T * dw / omega0**2
            probe = float(ds["probe_alpha_t"]) / alpha
            rows.append(dict(temperature=T, delta_omega=dw, gamma=gamma, alpha=alpha, defect=defect,
                             indicator=indicator, defect_over_indicator=defect / indicator if indicator else np.nan,
                             probe_time=probe, trace_distance=trajectory_defect(ns, ht, rho0, probe)))
    return rows


DEFECT_COLUMNS = ["temperature", "delta_omega", "gamma", "alpha", "defect", "indicator", "defect_over_indicator",
                  "probe_time", "trace_distance"]


def cmd_defect_scan(cfg: ScenarioConfig, out: Path, args) -> int:
    rows = defect_scan_rows(cfg)
    io.write_csv(out / "defect_scan.csv", DEFECT_COLUMNS, ([r[c] for c in DEFECT_COLUMNS] for r in rows),
                 comments=["defect: operator norm of L_nonsecular - L_hight",
                           "indicator: gamma * T * delta_omega / omega0^2",
                           "trace_distance: between the two evolutions of the probe state at probe_time"])
    _figure(args, plotting.plot_defect_scan, rows, out / "defect_scan.png")
    io.write_provenance(out, "defect-scan", model_inputs(cfg), cfg.tolerances,
                        {"defect_scan": cfg.run.defect_scan})
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "check-cp": cmd_check_cp,
    "evolve": cmd_evolve,
    "zeno-sweep": cmd_zeno_sweep,
    "defect-scan": cmd_defect_scan,
}


# --------------------------------------------------------------------------- entry point


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermalzeno", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="scenario JSON file")
        p.add_argument("--preset", choices=[presets.PRESET_NAME], help="use the built-in three-level scenario")
        p.add_argument("--out", type=Path, default=None, help="output directory (default: run.output_dir or .)")
        p.add_argument("--variant", choices=VARIANT_CHOICES, help="restrict to one generator variant")
        p.add_argument("--no-figures", dest="figures", action="store_false", help="skip PNG rendering")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "check-cp":
            p.add_argument("--seed", type=int, help="check a random model drawn with this seed")
            p.add_argument("--dim", type=int, default=3, help="dimension of the random model (with --seed)")
    return parser


def load_scenario(args) -> ScenarioConfig:
    sources = [s for s in (args.config, args.preset, getattr(args, "seed", None)) if s is not None]
    if len(sources) != 1:
        raise CommandError("give exactly one of --config, --preset" + (", --seed" if hasattr(args, "seed") else ""))
    if args.config is not None:
        return load_config(args.config)
    if args.preset is not None:
        return parse_config({"model": {"preset": args.preset}})
    if args.seed < 0 or args.seed >= 2**64:
        raise CommandError("--seed must be an unsigned 64-bit integer")
    return parse_config({"model": {"random": {"dim": args.dim, "seed": args.seed}}})


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_scenario(args)
        out = args.out or Path(cfg.run.output_dir or ".")
        out.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings():
            warnings.simplefilter("always", presets.HierarchyWarning)
            code = COMMANDS[args.command](cfg, out, args)
    except (ConfigError, CommandError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "code", EXIT_USAGE)
    except (OverflowError, np.linalg.LinAlgError, SweepError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.info("wrote outputs to %s", out)
    return code


if __name__ == "__main__":
    sys.exit(main())
