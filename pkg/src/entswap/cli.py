"""Command-line surface: sweeps, device numbers, rate comparison, verification.

Subcommands
-----------
fidelity-sweep   fidelity (and rate) columns over a parameter grid, CSV/JSON
device           single-photon conversion probability of a cavity or waveguide
rate-compare     swapping rates of the two schemes plus the crossover verdict
verify           oracle-vs-closed-form comparison, machine-readable JSON
fock-check       exact small-Hilbert-space invariant suite

Values come from an optional preset, then an optional config file, then
flags, with later sources overriding earlier ones.  Exit codes: 0 success,
1 usage error, 2 verification failure, 3 model-validity error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import lo_bsm, nlo_bsm, oracle, rates, sfg_device
from .config import (
    ConfigValue,
    build_cavity,
    build_scenario,
    build_waveguide,
    get_dimensionless,
    get_frequency_hz,
    get_string,
    merge,
    parse_config_file,
)
from .errors import (
    DomainError,
    EntswapError,
    InputError,
    ModelValidityError,
    ConfigError,
)
from .fock_sim import (
    BELL_LABELS,
    bell_fidelity,
    bell_state,
    dfg_spurious_amplitude,
    herald_amplitude,
    product_state,
    sfg_evolve,
    sfg_projection_vectors,
    swap_condition_on_sfg,
    tri_mode_state,
)
from .photon_stats import SwapScenario, epsilon_from_p
from .presets import DEMONSTRATED_RING_P_SFG, get_preset, preset_names

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAIL = 2
EXIT_MODEL_VALIDITY = 3

SWEEP_VARIABLES = ("p", "epsilon", "eta_a", "eta_b", "p_sfg")
SWEEP_OUTPUTS = (
    "f_lo_general",
    "f_lo_balanced_smalleta",
    "f_lo_unbalanced",
    "f_nlo",
    "r_lo",
    "r_nlo",
    "lo_bound",
)
NUMBER_FORMAT = "%.12e"


class UsageError(EntswapError):
    """Bad flags or bad sweep/config entries; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep exit-code contract instead of argparse's 2
        raise UsageError(message)


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep request: one variable, a grid, fixed context, outputs."""

    variable: str
    start: float
    stop: float
    points: int
    scale: str
    fixed: dict[str, ConfigValue]
    outputs: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise UsageError(f"variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if not self.start < self.stop:
            raise UsageError(f"need start < stop, got {self.start} >= {self.stop}")
        if self.points < 2:
            raise UsageError(f"need points >= 2, got {self.points}")
        if self.scale not in ("linear", "log"):
            raise UsageError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0.0:
            raise UsageError("log scale needs a positive range")
        unknown = [name for name in self.outputs if name not in SWEEP_OUTPUTS]
        if unknown:
            raise UsageError(f"unknown outputs {unknown}; available: {SWEEP_OUTPUTS}")
        if not self.outputs:
            raise UsageError("at least one output column is required")

    def grid(self) -> np.ndarray:
        if self.scale == "linear":
            values = np.linspace(self.start, self.stop, self.points)
        else:
            values = np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        # Pin the endpoints so boundary values (e.g. p = 1/4) stay exact.
        values[0], values[-1] = self.start, self.stop
        return values


@dataclass(frozen=True)
class SweepContext:
    """Fully resolved inputs for one grid point."""

    scenario: SwapScenario
    p_sfg: float
    clock: float


def _fixed_value(fixed: dict[str, ConfigValue], key: str, default: float) -> float:
    return get_dimensionless(fixed, key) if key in fixed else default


def _fixed_epsilon(fixed: dict[str, ConfigValue], side: str) -> float:
    if f"eps_{side}" in fixed:
        return get_dimensionless(fixed, f"eps_{side}")
    if f"p_{side}" in fixed:
        return epsilon_from_p(get_dimensionless(fixed, f"p_{side}"))
    return epsilon_from_p(0.01)


def _resolve_context(spec: SweepSpec, x: float) -> SweepContext:
    fixed = spec.fixed
    eps_a = _fixed_epsilon(fixed, "a")
    eps_b = _fixed_epsilon(fixed, "b")
    eta_a = _fixed_value(fixed, "eta_a", 1.0)
    eta_b = _fixed_value(fixed, "eta_b", 1.0)
    p_sfg = _fixed_value(fixed, "p_sfg", 1e-3)
    clock = get_frequency_hz(fixed, "clock") if "clock" in fixed else 1e9

    if spec.variable == "p":
        eps_a = eps_b = epsilon_from_p(x)
    elif spec.variable == "epsilon":
        eps_a = eps_b = x
    elif spec.variable == "eta_a":
        eta_a = x
    elif spec.variable == "eta_b":
        eta_b = x
    elif spec.variable == "p_sfg":
        p_sfg = x
    return SweepContext(
        scenario=SwapScenario.from_values(eps_a, eps_b, eta_a, eta_b),
        p_sfg=p_sfg,
        clock=clock,
    )


def _evaluate_output(name: str, ctx: SweepContext) -> float:
    scenario = ctx.scenario
    if name == "f_lo_general":
        return lo_bsm.fidelity_general(scenario).fidelity
    if name == "f_lo_balanced_smalleta":
        return lo_bsm.fidelity_balanced_smalleta(scenario.source_b.p)
    if name == "f_lo_unbalanced":
        return lo_bsm.fidelity_unbalanced_limit(scenario.source_b.p)
    if name == "f_nlo":
        return nlo_bsm.fidelity_nlo(scenario.source_a, scenario.source_b)
    if name == "r_lo":
        return rates.rate_lo(scenario, ctx.clock)
    if name == "r_nlo":
        return rates.rate_nlo(scenario, ctx.p_sfg, ctx.clock)
    if name == "lo_bound":
        return lo_bsm.ONE_THIRD
    raise UsageError(f"unknown output {name!r}")


def run_sweep(spec: SweepSpec) -> tuple[list[str], list[list[float]]]:
    """Evaluate all requested columns over the grid, rows in grid order."""
    columns = [spec.variable, *spec.outputs]
    rows = []
    for x in spec.grid():
        ctx = _resolve_context(spec, float(x))
        rows.append([float(x)] + [_evaluate_output(name, ctx) for name in spec.outputs])
    return columns, rows


def _sweep_spec_from_entries(entries: dict[str, ConfigValue]) -> SweepSpec:
    for key in ("variable", "start", "stop", "points"):
        if key not in entries:
            raise UsageError(f"sweep needs key {key!r} (flag or config)")
    outputs = get_string(entries, "outputs") if "outputs" in entries else ",".join(
        ("f_nlo", "f_lo_balanced_smalleta", "f_lo_unbalanced", "lo_bound")
    )
    scale = get_string(entries, "scale") if "scale" in entries else "linear"
    fixed = {
        key: value
        for key, value in entries.items()
        if key not in ("variable", "start", "stop", "points", "scale", "outputs")
    }
    variable = get_string(entries, "variable")
    return SweepSpec(
        variable=variable,
        start=get_dimensionless(entries, "start"),
        stop=get_dimensionless(entries, "stop"),
        points=int(get_dimensionless(entries, "points")),
        scale=scale,
        fixed=fixed,
        outputs=tuple(part.strip() for part in outputs.split(",") if part.strip()),
    )


def _format_csv(columns: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(NUMBER_FORMAT % value for value in row))
    return "\n".join(lines) + "\n"


def _format_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _collect_entries(args: argparse.Namespace, flag_entries: dict[str, ConfigValue]) -> dict:
    entries: dict[str, ConfigValue] = {}
    if getattr(args, "preset", None):
        entries = merge(entries, get_preset(args.preset).params)
    if getattr(args, "config", None):
        entries = merge(entries, parse_config_file(args.config))
    return merge(entries, flag_entries)


# --- subcommand: fidelity-sweep ------------------------------------------------


def cmd_fidelity_sweep(args: argparse.Namespace) -> int:
    flag_entries: dict[str, ConfigValue] = {}
    for key in ("variable", "start", "stop", "points", "scale", "outputs"):
        value = getattr(args, key)
        if value is not None:
            flag_entries[key] = _flag_entry(value)
    entries = _collect_entries(args, flag_entries)
    spec = _sweep_spec_from_entries(entries)
    columns, rows = run_sweep(spec)
    if args.format == "csv":
        _write_output(_format_csv(columns, rows), args.out)
    else:
        _write_output(_format_json({"columns": columns, "rows": rows}), args.out)
    return EXIT_OK


def _flag_entry(value: str) -> ConfigValue:
    from .config import parse_config_text

    return parse_config_text(f"x = {value}")["x"]


# --- subcommand: device ---------------------------------------------------------


def cmd_device(args: argparse.Namespace) -> int:
    entries = _collect_entries(args, {})
    if not entries:
        raise UsageError("device needs --preset or --config")
    report: dict = {"reference_demonstrated_p_sfg": DEMONSTRATED_RING_P_SFG}
    caught: list[str] = []
    with warnings.catch_warnings(record=True) as records:
        warnings.simplefilter("always")
        if "g" in entries or "g_shg" in entries:
            cavity = build_cavity(entries)
            eta = sfg_device.eta_sfg_cavity(cavity)
            report["cavity"] = {
                "p_sfg": sfg_device.p_sfg_cavity(cavity),
                "eta_sfg_per_w": eta,
                "p_sfg_from_eta": sfg_device.p_sfg_from_eta(cavity, eta),
            }
        if "eta_sfg" in entries or "eta_shg" in entries:
            waveguide = build_waveguide(entries)
            report["waveguide"] = {"p_sfg": sfg_device.p_sfg_waveguide(waveguide)}
        if "p_sfg" in entries and "cavity" not in report and "waveguide" not in report:
            report["quoted"] = {"p_sfg": get_dimensionless(entries, "p_sfg")}
        caught = [str(record.message) for record in records]
    if not any(key in report for key in ("cavity", "waveguide", "quoted")):
        raise UsageError("no device parameters found (expected cavity, waveguide, or p_sfg keys)")
    report["warnings"] = caught

    if args.format == "json":
        _write_output(_format_json(report), args.out)
    else:
        lines = []
        for section in ("cavity", "waveguide", "quoted"):
            if section in report:
                for key, value in report[section].items():
                    lines.append(f"{section}.{key} = {value:.6e}")
        lines.append(f"reference demonstrated p_sfg = {DEMONSTRATED_RING_P_SFG:.1e}")
        for message in caught:
            lines.append(f"warning: {message}")
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --- subcommand: rate-compare ----------------------------------------------------


def cmd_rate_compare(args: argparse.Namespace) -> int:
    flag_entries: dict[str, ConfigValue] = {}
    if args.p_sfg is not None:
        flag_entries["p_sfg"] = _flag_entry(args.p_sfg)
    if args.clock is not None:
        flag_entries["clock"] = _flag_entry(args.clock)
    entries = _collect_entries(args, flag_entries)
    if not entries:
        raise UsageError("rate-compare needs --preset or --config")
    scenario = build_scenario(entries)
    p_sfg = get_dimensionless(entries, "p_sfg") if "p_sfg" in entries else 1e-3
    clock = get_frequency_hz(entries, "clock") if "clock" in entries else 1e9

    rep = rates.rate_report(scenario, p_sfg, clock)
    verdict = rates.crossover(p_sfg, scenario.channel_a.eta, scenario.channel_b.eta)

    # Pair probabilities needed to reach the same target fidelity under each
    # scheme; the linear-optical curves only touch 1/3 at zero pumping, so the
    # comparison backs off the target by delta.
    f_target = 1.0 / 3.0
    delta = args.delta
    narrative = {
        "f_target_nlo": f_target,
        "p_nlo": nlo_bsm.p_for_target_fidelity(f_target),
        "f_target_lo": f_target - delta,
        "p_lo_balanced": lo_bsm.p_for_balanced_smalleta(f_target - delta),
        "p_lo_unbalanced": lo_bsm.p_for_unbalanced_limit(f_target - delta),
    }
    narrative["pair_prob_ratio_balanced"] = (narrative["p_nlo"] / narrative["p_lo_balanced"]) ** 2
    narrative["pair_prob_ratio_unbalanced"] = (
        narrative["p_nlo"] / narrative["p_lo_unbalanced"]
    ) ** 2

    report = {
        "scenario": {
            "eps_a": scenario.source_a.epsilon,
            "eps_b": scenario.source_b.epsilon,
            "eta_a": scenario.channel_a.eta,
            "eta_b": scenario.channel_b.eta,
        },
        "p_sfg": p_sfg,
        "clock": clock,
        "rate_lo": rep.rate_lo,
        "rate_nlo": rep.rate_nlo,
        "crossover_ratio": verdict.ratio,
        "nlo_wins": verdict.nlo_wins,
        "matched_fidelity": narrative,
    }
    if args.format == "json":
        _write_output(_format_json(report), args.out)
    else:
        lines = [
            f"rate_lo  = {rep.rate_lo:.6e} /s (attenuated, p_a = eta_b p_b / eta_a)",
            f"rate_nlo = {rep.rate_nlo:.6e} /s (p_sfg = {p_sfg:g})",
            f"rate_nlo / rate_lo = {verdict.ratio:.6e}"
            + ("  -> nonlinear scheme wins" if verdict.nlo_wins else "  -> linear scheme wins"),
            f"pair probability for fidelity {f_target:.4f}: nlo {narrative['p_nlo']:.4f}",
            f"pair probability for fidelity {f_target - delta:.4f}: "
            f"lo balanced {narrative['p_lo_balanced']:.6f}, "
            f"lo unbalanced {narrative['p_lo_unbalanced']:.6f}",
            f"two-photon probability ratio vs balanced lo: "
            f"{narrative['pair_prob_ratio_balanced']:.1f}",
        ]
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --- subcommand: verify -----------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    entries = _collect_entries(args, {})
    count = int(get_dimensionless(entries, "scenarios")) if "scenarios" in entries else args.scenarios
    cfg = oracle.OracleConfig(
        mode="exact-sum",
        n_max=args.n_max,
        samples=args.samples,
        seed=args.seed,
        shards=args.shards,
        workers=args.workers,
    )

    def value_or(key: str, default: float) -> float:
        return get_dimensionless(entries, key) if key in entries else default

    scenarios = oracle.random_scenarios(
        count,
        args.seed,
        eps_range=(value_or("eps_min", 0.01), value_or("eps_max", 0.45)),
        eta_range=(value_or("eta_min", 0.05), value_or("eta_max", 1.0)),
    )
    methods = {
        "exact": ("exact-sum",),
        "mc": ("monte-carlo",),
        "both": ("exact-sum", "monte-carlo"),
    }[args.method]
    report = oracle.verification_report(scenarios, cfg, p_sfg=args.p_sfg, methods=methods)
    _write_output(_format_json(report), args.out)
    return EXIT_OK if report["pass"] else EXIT_VERIFY_FAIL


# --- subcommand: fock-check --------------------------------------------------------


def run_fock_checks() -> list[dict]:
    """Invariant suite over the exact simulators; one row per check."""
    rows = []

    # Unitarity across a batch of states and interaction strengths.
    drift = 0.0
    for occupations in ((1, 1, 0), (2, 2, 0), (3, 1, 0), (2, 3, 1)):
        for gt in (1e-3, 1e-2, 5e-2, 0.5):
            state = tri_mode_state(*occupations, cutoff=6)
            drift = max(drift, abs(sfg_evolve(state, gt, 6).norm() - 1.0))
    rows.append(_check_row("unitarity", "norm drift across evolutions", drift, 1e-12))

    # Leading-order herald amplitude -i sqrt(p n_a n_b), third-order remainder.
    for gt in (1e-3, 1e-2, 5e-2):
        worst = 0.0
        for n_a in (1, 2, 3):
            for n_b in (1, 2, 3):
                amp = herald_amplitude(n_a, n_b, gt, cutoff=7)
                target = -1j * gt * math.sqrt(n_a * n_b)
                rel = abs(amp - target) / abs(target)
                worst = max(worst, rel / (gt * gt * n_a * n_b))
        rows.append(
            _check_row(
                f"amplitude-law gt={gt:g}",
                "relative error over remainder bound",
                worst,
                1.0,
            )
        )

    # The four herald projectors are orthonormal and complete.
    vectors = sfg_projection_vectors()
    gram_error = 0.0
    total = np.zeros((4, 4), dtype=complex)
    names = list(vectors)
    for i, name_i in enumerate(names):
        for j, name_j in enumerate(names):
            overlap = np.vdot(vectors[name_i], vectors[name_j])
            gram_error = max(gram_error, abs(overlap - (1.0 if i == j else 0.0)))
        total += np.outer(vectors[name_i], vectors[name_i].conj())
    completeness = float(np.max(np.abs(total - np.eye(4))))
    rows.append(_check_row("projector-orthonormality", "Gram matrix error", gram_error, 1e-12))
    rows.append(_check_row("projector-completeness", "sum vs identity", completeness, 1e-12))

    # Complete measurement resolves all four Bell states with unit fidelity.
    state = product_state(bell_state("phi+"), bell_state("phi+"))
    outcomes = swap_condition_on_sfg(state, elements="two")
    fid_error = 0.0
    weight_error = 0.0
    seen = []
    for outcome in outcomes:
        fid_error = max(
            fid_error, abs(1.0 - bell_fidelity(outcome.conditioned_state, outcome.label))
        )
        weight_error = max(weight_error, abs(outcome.probability - 0.25))
        seen.append(outcome.label)
    rows.append(_check_row("complete-bsm fidelity", "1 - overlap with Bell state", fid_error, 1e-12))
    rows.append(_check_row("complete-bsm weights", "outcome probability vs 1/4", weight_error, 1e-12))
    rows.append(
        _check_row(
            "complete-bsm coverage",
            "all four Bell states resolved",
            0.0 if sorted(seen) == sorted(BELL_LABELS) else 1.0,
            0.5,
        )
    )

    # Reverse-direction conversion is no cleaner than spontaneous splitting.
    ratio_error = 0.0
    for gt in (1e-3, 1e-2, 5e-2):
        dfg, spdc = dfg_spurious_amplitude(gt)
        ratio = abs(spdc) / abs(dfg)
        if not 0.5 <= ratio <= 2.0:
            ratio_error = max(ratio_error, abs(ratio - 1.0))
    rows.append(
        _check_row("dfg-counterexample", "spurious/intended amplitude comparable", ratio_error, 0.5)
    )
    return rows


def _check_row(name: str, detail: str, value: float, bound: float) -> dict:
    return {
        "check": name,
        "detail": detail,
        "value": value,
        "bound": bound,
        "pass": bool(value <= bound),
    }


def _dump_reference_states() -> str:
    """Byte-stable dumps of the conditioned states of the complete measurement."""
    state = product_state(bell_state("phi+"), bell_state("phi+"))
    blocks = []
    for outcome in swap_condition_on_sfg(state, elements="two"):
        blocks.append(f"# projector {outcome.projector} -> {outcome.label}")
        blocks.append(outcome.conditioned_state.dump())
    return "\n".join(blocks) + "\n"


def cmd_fock_check(args: argparse.Namespace) -> int:
    rows = run_fock_checks()
    if args.format == "json":
        _write_output(_format_json({"rows": rows, "pass": all(r["pass"] for r in rows)}), args.out)
    else:
        width = max(len(row["check"]) for row in rows)
        lines = []
        for row in rows:
            status = "pass" if row["pass"] else "FAIL"
            lines.append(
                f"{row['check']:<{width}}  {row['value']:.3e}  <=  {row['bound']:.3e}  {status}"
            )
        text = "\n".join(lines) + "\n"
        if args.dump_states:
            text += _dump_reference_states()
        _write_output(text, args.out)
    return EXIT_OK if all(row["pass"] for row in rows) else EXIT_VERIFY_FAIL


# --- entry point --------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="entswap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser, default_format: str, formats: tuple[str, ...]) -> None:
        p.add_argument("--config", default=None, help="key-value parameter file")
        p.add_argument("--preset", default=None, choices=preset_names(), help="named parameter set")
        p.add_argument("--out", default="-", help="output path, or - for stdout")
        p.add_argument("--format", default=default_format, choices=formats)

    sweep = sub.add_parser("fidelity-sweep", help="fidelity/rate columns over a grid")
    add_common(sweep, "csv", ("csv", "json"))
    sweep.add_argument("--variable", default=None, help=f"one of {SWEEP_VARIABLES}")
    sweep.add_argument("--start", default=None)
    sweep.add_argument("--stop", default=None)
    sweep.add_argument("--points", default=None)
    sweep.add_argument("--scale", default=None, help="linear or log")
    sweep.add_argument("--outputs", default=None, help="comma-separated column names")
    sweep.set_defaults(func=cmd_fidelity_sweep)

    device = sub.add_parser("device", help="conversion probability of a device")
    add_common(device, "text", ("text", "json"))
    device.set_defaults(func=cmd_device)

    rate = sub.add_parser("rate-compare", help="scheme rates and crossover")
    add_common(rate, "text", ("text", "json"))
    rate.add_argument("--p-sfg", dest="p_sfg", default=None)
    rate.add_argument("--clock", default=None)
    rate.add_argument(
        "--delta",
        type=float,
        default=0.01,
        help="back-off below 1/3 used to invert the linear-optical curves",
    )
    rate.set_defaults(func=cmd_rate_compare)

    verify = sub.add_parser("verify", help="oracle vs closed forms")
    add_common(verify, "json", ("json",))
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--scenarios", type=int, default=20)
    verify.add_argument("--samples", type=int, default=200_000)
    verify.add_argument("--n-max", dest="n_max", type=int, default=200)
    verify.add_argument("--shards", type=int, default=64)
    verify.add_argument("--workers", type=int, default=1)
    verify.add_argument("--p-sfg", dest="p_sfg", type=float, default=0.05)
    verify.add_argument("--method", default="exact", choices=("exact", "mc", "both"))
    verify.set_defaults(func=cmd_verify)

    fock = sub.add_parser("fock-check", help="exact simulator invariants")
    add_common(fock, "text", ("text", "json"))
    fock.add_argument(
        "--dump-states",
        action="store_true",
        help="append byte-stable dumps of the conditioned Bell states",
    )
    fock.set_defaults(func=cmd_fock_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DomainError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelValidityError as exc:
        print(f"model validity error: {exc}", file=sys.stderr)
        return EXIT_MODEL_VALIDITY


if __name__ == "__main__":
    sys.exit(main())
