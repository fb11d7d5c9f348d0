"""
Command-line interface for alexsim.

Every command is deterministic for a given scenario and seed. Files are
written only where ``--out`` points; summaries go to the terminal.

Exit codes: 0 on success, 2 for usage and scenario errors, 3 when a mission
disconnects or times out, a tuning search fails or a color is unrecognized.
"""

import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import List, NamedTuple, NoReturn, Optional, Sequence, Tuple

import click
from loguru import logger
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from alexsim import __version__
from alexsim.color import (
    FAR_CM,
    NEAR_CM,
    ChannelMFs,
    ChannelReading,
    ColorCalibration,
    ColorClass,
    ColorResult,
    ColorRuleSet,
    calibrate_memberships,
    classify,
    load_calibration,
    load_rule_set,
    run_noise_trials,
    self_classification,
    simulate_sensor,
)
from alexsim.config import get_settings
from alexsim.control.pid import PidGains
from alexsim.errors import ConfigError, NoUltimateGainError, UnrecognizedColorError
from alexsim.fuzzy import (
    control_surface,
    evaluate_rules,
    kd_rules,
    ki_rules,
    kp_rules,
    standard_variable,
)
from alexsim.kinematics import (
    BodyTwist,
    ChassisGeometry,
    Pose,
    WheelSpeeds,
    forward_kinematics,
    icr_radius,
    integrate_pose,
    inverse_kinematics,
    normalize_angle,
)
from alexsim.plant import MOTOR_PRESETS, motor_preset, speed_torque_curve
from alexsim.scenario import (
    SHIPPED_SCENARIOS,
    ControllerKind,
    MissionResult,
    ScenarioConfig,
    load_shipped_scenario,
    parse_scenario,
    run_mission,
    write_trace,
)
from alexsim.tuning import (
    GAIN_EFFECTS,
    LoopAxis,
    TuningCandidate,
    ZnKind,
    effects_check,
    format_gains_block,
    new_method_tune,
    write_tuning_report,
    zn_tune,
)

EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_FAILURE = 3

console = Console()

# Trace writers by --format name.
TRACE_WRITERS = {"csv": write_trace}


def _fail(message: str, code: int) -> NoReturn:
    console.print(f"[red]Error:[/red] {escape(message)}")
    sys.exit(code)


def _fmt(v: Optional[float], spec: str = ".6g") -> str:
    return "-" if v is None else format(v, spec)


def _load_scenario(
    config_path: Optional[Path], scenario: Optional[str], default: Optional[str] = None
) -> ScenarioConfig:
    if config_path is not None and scenario is not None:
        raise click.UsageError("use either --config or --scenario, not both")
    try:
        if config_path is not None:
            return parse_scenario(config_path)
        name = scenario or default
        if name is None:
            raise click.UsageError("one of --config or --scenario is required")
        return load_shipped_scenario(name)
    except ConfigError as e:
        _fail(f"{config_path or scenario}: {e}", EXIT_CONFIG_ERROR)


def scenario_options(f):  # type: ignore[no-untyped-def]
    f = click.option(
        "--scenario",
        type=click.Choice(SHIPPED_SCENARIOS),
        help="Name of a shipped scenario",
    )(f)
    f = click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="Scenario file",
    )(f)
    return f


@click.group()
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.version_option(__version__, "--version", "-v", prog_name="alexsim")
def cli(debug: bool) -> None:
    """alexsim - differential-drive robot simulator."""
    settings = get_settings()
    settings.debug_mode = debug

    logger.remove()
    log_level = "DEBUG" if debug else "WARNING"
    logger.add(
        lambda msg: console.print(msg, end="", markup=False, highlight=False),
        format=settings.logging.format,
        level=log_level,
    )
    if settings.logging.file:
        logger.add(settings.logging.file, level=log_level)


# --- sim -------------------------------------------------------------------


def _mission_table(config: ScenarioConfig, kind: ControllerKind, result: MissionResult) -> Table:
    table = Table(title=f"Mission: {config.name}")
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="magenta")

    pose = result.final_pose
    table.add_row("Controller", kind.value)
    table.add_row("Status", result.status.value)
    table.add_row("Time", f"{result.time:.2f} s")
    table.add_row("Legs completed", f"{result.legs_completed}/{len(config.legs)}")
    table.add_row(
        "Final pose",
        f"x={pose.x:.4f} m, y={pose.y:.4f} m, theta={math.degrees(pose.theta):.2f} deg",
    )
    table.add_row("Position error", f"{result.position_error:.4f} m")
    table.add_row("Heading error", f"{math.degrees(result.heading_error):.2f} deg")
    table.add_row("Max discrepancy", f"{result.max_discrepancy} counts")
    table.add_row("Trace rows", str(len(result.rows)))
    return table


@cli.command()
@scenario_options
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Trace CSV")
@click.option("--seed", type=int, help="Override the scenario seed")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(sorted(TRACE_WRITERS)),
    default="csv",
    show_default=True,
    help="Trace file format",
)
@click.option(
    "--controller",
    type=click.Choice([k.value for k in ControllerKind]),
    help="Override the scenario's translation controller",
)
def sim(
    config_path: Optional[Path],
    scenario: Optional[str],
    out: Optional[Path],
    seed: Optional[int],
    fmt: str,
    controller: Optional[str],
) -> None:
    """Fly a scenario's mission and write its trace."""
    config = _load_scenario(config_path, scenario)
    if seed is not None:
        config = config.with_seed(seed)
    kind = ControllerKind(controller) if controller else config.controller
    try:
        result = run_mission(config, kind)
    except ConfigError as e:
        _fail(str(e), EXIT_CONFIG_ERROR)

    if out is not None:
        TRACE_WRITERS[fmt](result.rows, out)
    console.print(_mission_table(config, kind, result))
    if not result.succeeded:
        sys.exit(EXIT_RUNTIME_FAILURE)


# --- tune ------------------------------------------------------------------


def _journal_table(journal: Sequence[TuningCandidate], title: str) -> Table:
    table = Table(title=title)
    for name in ("Phase", "kp", "ki", "kd", "Decay", "Period", "Settling", "SSE", "Verdict"):
        table.add_column(name, style="cyan" if name == "Phase" else None)
    for c in journal:
        table.add_row(
            c.phase.value,
            _fmt(c.gains.kp),
            _fmt(c.gains.ki),
            _fmt(c.gains.kd),
            _fmt(c.oscillation.decay_ratio, ".3f"),
            _fmt(c.oscillation.period, ".3f"),
            _fmt(c.metrics.settling_time, ".2f"),
            _fmt(c.metrics.steady_state_error, ".3g"),
            c.verdict,
        )
    return table


@cli.command()
@scenario_options
@click.option("--method", type=click.Choice(["zn", "new"]), default="new", show_default=True)
@click.option(
    "--kind",
    type=click.Choice([k.value for k in ZnKind]),
    default=ZnKind.PID.value,
    show_default=True,
    help="Ziegler-Nichols controller type",
)
@click.option("--axis", type=click.Choice([a.value for a in LoopAxis]), help="Loop to tune")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Report CSV")
def tune(
    config_path: Optional[Path],
    scenario: Optional[str],
    method: str,
    kind: str,
    axis: Optional[str],
    out: Optional[Path],
) -> None:
    """Tune a loop by Ziegler-Nichols or the four-step method."""
    config = _load_scenario(config_path, scenario, default="tune_forward")
    step = config.step_scenario(LoopAxis(axis) if axis else None)
    journal: List[TuningCandidate] = []
    gains: Optional[PidGains] = None
    failure: Optional[str] = None
    try:
        if method == "zn":
            ultimate, gains = zn_tune(step, ZnKind(kind), journal=journal)
            console.print(f"K_u = {ultimate.K_u:.6g}, P_u = {ultimate.P_u:.6g} s")
        else:
            gains = new_method_tune(step, journal=journal)
    except NoUltimateGainError as e:
        failure = str(e)

    if out is not None:
        write_tuning_report(journal, out, failure=failure)
    console.print(_journal_table(journal, f"Tuning: {config.name} ({step.axis.value})"))
    if failure is not None:
        _fail(failure, EXIT_RUNTIME_FAILURE)
    assert gains is not None
    section = "controller" if step.axis is LoopAxis.FORWARD else "steering"
    console.print(escape(format_gains_block(gains, section)), end="")


# --- effects ---------------------------------------------------------------


@cli.command()
@scenario_options
@click.option(
    "--gain",
    "gains_to_check",
    type=click.Choice(sorted(GAIN_EFFECTS)),
    multiple=True,
    help="Gain to raise (repeatable; default all)",
)
@click.option("--factor", type=click.FloatRange(min=1.0, min_open=True), default=2.0)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Report CSV")
def effects(
    config_path: Optional[Path],
    scenario: Optional[str],
    gains_to_check: Tuple[str, ...],
    factor: float,
    out: Optional[Path],
) -> None:
    """Raise each gain once and compare the response with the effects table."""
    config = _load_scenario(config_path, scenario, default="tune_forward")
    step = config.step_scenario()
    base = config.forward if step.axis is LoopAxis.FORWARD else config.steering
    journal: List[TuningCandidate] = []

    for which in gains_to_check or sorted(GAIN_EFFECTS):
        comparison = effects_check(step, base, which, factor=factor, journal=journal)
        table = Table(title=f"{which} x{factor:g} on {config.name}")
        for name in ("Metric", "Expected", "Before", "After", "Observed", "Verdict"):
            table.add_column(name, style="cyan" if name == "Metric" else None)
        for v in comparison.verdicts:
            verdict = "skipped" if v.agrees is None else ("agrees" if v.agrees else "disagrees")
            table.add_row(
                v.metric.value,
                v.expected.value,
                _fmt(v.before),
                _fmt(v.after),
                v.observed.value,
                verdict,
            )
        console.print(table)

    if out is not None:
        write_tuning_report(journal, out)


# --- color -----------------------------------------------------------------


@lru_cache(maxsize=1)
def _color_model() -> Tuple[ColorCalibration, ColorRuleSet, ChannelMFs]:
    cal = load_calibration()
    rules = load_rule_set()
    return cal, rules, calibrate_memberships(cal, rules)


def _parse_raw(raw: str) -> ChannelReading:
    parts = raw.replace(" ", "").split(",")
    try:
        r, g, b = (float(p) for p in parts)
        return ChannelReading(r_raw=r, g_raw=g, b_raw=b)
    except ValueError:
        raise click.BadParameter(f"expected three positive numbers 'r,g,b', got '{raw}'")


def _color_name(value: str) -> ColorClass:
    try:
        return ColorClass[value.upper()]
    except KeyError:
        raise click.BadParameter(f"unknown color '{value}'") from None


def _result_table(result: ColorResult) -> Table:
    table = Table(title=f"Winner: {result.winner.value} ({result.activation:.6f})")
    table.add_column("Color", style="cyan")
    table.add_column("Activation", style="magenta")
    for color, activation in result.activations.items():
        table.add_row(color.value, f"{activation:.6f}")
    return table


@cli.command()
@click.option("--color", "color_name", help="True color to simulate")
@click.option(
    "--distance",
    type=click.FloatRange(NEAR_CM, FAR_CM),
    default=FAR_CM,
    show_default=True,
    help="Sensor distance (cm)",
)
@click.option("--noise", type=click.FloatRange(min=0.0), help="Relative noise std")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--raw", help="Raw reading 'r,g,b' to classify instead of simulating")
@click.option("--trials", type=click.IntRange(min=1), help="Run seeded noise trials")
@click.option("--self-check", is_flag=True, help="Classify every calibration row")
def color(
    color_name: Optional[str],
    distance: float,
    noise: Optional[float],
    seed: int,
    raw: Optional[str],
    trials: Optional[int],
    self_check: bool,
) -> None:
    """Classify a simulated or raw color sensor reading."""
    modes = [color_name is not None, raw is not None, trials is not None, self_check]
    if sum(modes) != 1:
        raise click.UsageError("give exactly one of --color, --raw, --trials or --self-check")
    cal, rules, mfs = _color_model()
    noise = get_settings().color.noise if noise is None else noise

    if trials is not None:
        outcome = run_noise_trials(cal, mfs, rules, trials=trials, noise=noise, seed=seed)
        console.print(
            f"{outcome.correct}/{outcome.trials} correct ({outcome.accuracy:.1%}), "
            f"{outcome.unrecognized} unrecognized"
        )
        return

    if self_check:
        table = Table(title="Calibration self-check")
        for name in ("Color", "Distance", "Winner", "Ambiguous", "Correct"):
            table.add_column(name, style="cyan" if name == "Color" else None)
        rows = self_classification(cal, mfs, rules)
        for row in rows:
            table.add_row(
                row.color.value,
                f"{row.distance_cm:g} cm",
                row.result.winner.value,
                "/".join(c.value for c in row.result.ambiguous),
                "yes" if row.correct else "no",
            )
        console.print(table)
        console.print(f"{sum(r.correct for r in rows)}/{len(rows)} rows recognized")
        return

    if raw is not None:
        reading = _parse_raw(raw)
    else:
        assert color_name is not None
        reading = simulate_sensor(
            _color_name(color_name), distance, cal, noise=noise, seed=seed
        )
    try:
        result = classify(reading, mfs, rules, cal)
    except UnrecognizedColorError as e:
        _fail(str(e), EXIT_RUNTIME_FAILURE)

    r, g, b = reading.as_tuple()
    console.print(f"Reading: r={r:.6g} g={g:.6g} b={b:.6g}")
    console.print(_result_table(result))
    if result.is_ambiguous:
        console.print("Ambiguous: " + "/".join(c.value for c in result.ambiguous))


# --- fuzzy -----------------------------------------------------------------

_TABLES = {"kp": kp_rules, "ki": ki_rules, "kd": kd_rules}


@cli.command()
@click.option("--e", "e", type=float, default=0.0, show_default=True, help="Error")
@click.option("--ec", "ec", type=float, default=0.0, show_default=True, help="Error rate")
@click.option("--k-e", type=click.FloatRange(min=0.0, min_open=True), default=1.0)
@click.option("--k-ec", type=click.FloatRange(min=0.0, min_open=True), default=1.0)
@click.option("--surface", type=click.Choice(sorted(_TABLES)), help="Export a control surface")
@click.option("--points", type=click.IntRange(min=2), default=61, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Surface CSV")
def fuzzy(
    e: float,
    ec: float,
    k_e: float,
    k_ec: float,
    surface: Optional[str],
    points: int,
    out: Optional[Path],
) -> None:
    """Evaluate the gain-scheduling rules, or export one rule surface."""
    if surface is not None:
        grid = control_surface(_TABLES[surface](), n=points)
        axis = standard_variable().grid(points)
        rows = [["ec\\e", *(f"{x:.9g}" for x in axis)]]
        rows += [[f"{y:.9g}", *(f"{v:.9g}" for v in row)] for y, row in zip(axis, grid)]
        if out is None:
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerows(rows)
        else:
            with open(out, "w", newline="", encoding="utf-8") as f:
                csv.writer(f, lineterminator="\n").writerows(rows)
            console.print(f"{surface} surface ({points}x{points}) written to {escape(str(out))}")
        return

    tables = [factory() for factory in _TABLES.values()]
    delta = evaluate_rules(e, ec, tables, k_e=k_e, k_ec=k_ec)
    table = Table(title=f"e={e:g}, ec={ec:g}")
    table.add_column("Output", style="cyan")
    table.add_column("Value", style="magenta")
    table.add_row("dKp", f"{delta.d_kp:.9g}")
    table.add_row("dKi", f"{delta.d_ki:.9g}")
    table.add_row("dKd", f"{delta.d_kd:.9g}")
    console.print(table)


# --- kin -------------------------------------------------------------------


def chassis_options(f):  # type: ignore[no-untyped-def]
    f = click.option("--r-w", type=click.FloatRange(min=0.0, min_open=True), default=0.03)(f)
    f = click.option("--d-w", type=click.FloatRange(min=0.0, min_open=True), default=0.2)(f)
    return f


@cli.group()
def kin() -> None:
    """Evaluate the chassis kinematics once."""


@kin.command("forward")
@click.option("--v-l", type=float, required=True, help="Left rim speed (m/s)")
@click.option("--v-r", type=float, required=True, help="Right rim speed (m/s)")
@chassis_options
def kin_forward(v_l: float, v_r: float, d_w: float, r_w: float) -> None:
    """Wheel speeds to body twist."""
    twist = forward_kinematics(WheelSpeeds(v_l, v_r), ChassisGeometry(d_w=d_w, r_w=r_w))
    console.print(f"v_c={twist.v_c:.9g} m/s w={twist.w:.9g} rad/s")


@kin.command("inverse")
@click.option("--v-c", type=float, required=True, help="Linear speed (m/s)")
@click.option("--w", type=float, required=True, help="Yaw rate (rad/s)")
@chassis_options
def kin_inverse(v_c: float, w: float, d_w: float, r_w: float) -> None:
    """Body twist to wheel speeds."""
    ws = inverse_kinematics(BodyTwist(v_c, w), ChassisGeometry(d_w=d_w, r_w=r_w))
    console.print(f"v_l={ws.v_l:.9g} m/s v_r={ws.v_r:.9g} m/s")


@kin.command("icr")
@click.option("--v-l", type=float, required=True)
@click.option("--v-r", type=float, required=True)
@chassis_options
def kin_icr(v_l: float, v_r: float, d_w: float, r_w: float) -> None:
    """Radius of the instantaneous center of rotation."""
    r = icr_radius(WheelSpeeds(v_l, v_r), ChassisGeometry(d_w=d_w, r_w=r_w))
    console.print("r_c=inf (straight line)" if r is None else f"r_c={r:.9g} m")


@kin.command("integrate")
@click.option("--v-l", type=float, required=True)
@click.option("--v-r", type=float, required=True)
@click.option("--dt", type=click.FloatRange(min=0.0, min_open=True), default=0.001)
@click.option("--steps", type=click.IntRange(min=0), default=1000, show_default=True)
@click.option("--x", type=float, default=0.0)
@click.option("--y", type=float, default=0.0)
@click.option("--theta", "theta_deg", type=float, default=0.0, help="Start heading (deg)")
@chassis_options
def kin_integrate(
    v_l: float,
    v_r: float,
    dt: float,
    steps: int,
    x: float,
    y: float,
    theta_deg: float,
    d_w: float,
    r_w: float,
) -> None:
    """Integrate a constant wheel-speed pair from a start pose."""
    twist = forward_kinematics(WheelSpeeds(v_l, v_r), ChassisGeometry(d_w=d_w, r_w=r_w))
    pose = Pose(x, y, normalize_angle(math.radians(theta_deg)))
    for _ in range(steps):
        pose = integrate_pose(pose, twist, dt)
    console.print(
        f"x={pose.x:.9g} m y={pose.y:.9g} m theta={math.degrees(pose.theta):.9g} deg"
    )


# --- motor -----------------------------------------------------------------


@cli.command()
@click.option(
    "--preset", type=click.Choice(sorted(MOTOR_PRESETS)), default="alex-ref", show_default=True
)
@click.option("--voltage", type=click.FloatRange(min=0.0, min_open=True), help="Default: V_max")
@click.option("--points", type=click.IntRange(min=2), default=11, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Curve CSV")
def motor(preset: str, voltage: Optional[float], points: int, out: Optional[Path]) -> None:
    """Steady-state speed-torque line of a motor preset."""
    params = motor_preset(preset)
    V = params.V_max if voltage is None else voltage
    curve = speed_torque_curve(params, V, points)
    rows = list(zip(curve.torque, curve.omega, curve.current, curve.power))

    if out is not None:
        with open(out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["torque", "omega", "current", "power"])
            writer.writerows([[f"{v:.9g}" for v in row] for row in rows])

    table = Table(title=f"{preset} at {V:g} V")
    for name in ("Torque (N m)", "Speed (rad/s)", "Current (A)", "Power (W)"):
        table.add_column(name)
    for row in rows:
        table.add_row(*(f"{v:.6g}" for v in row))
    console.print(table)


# --- batch -----------------------------------------------------------------


class BatchOutcome(NamedTuple):
    source: str
    status: str
    time: Optional[float]
    output: Optional[str]
    error: Optional[str]


def run_batch_job(job: Tuple[str, str, Optional[int], Optional[str]]) -> BatchOutcome:
    """Run one scenario and write its trace; safe to call in a worker process."""
    source, out_path, seed, controller = job
    try:
        if source in SHIPPED_SCENARIOS and not Path(source).is_file():
            config = load_shipped_scenario(source)
        else:
            config = parse_scenario(Path(source))
        if seed is not None:
            config = config.with_seed(seed)
        result = run_mission(config, ControllerKind(controller) if controller else None)
    except (ConfigError, OSError) as e:
        return BatchOutcome(source, "config-error", None, None, str(e))
    write_trace(result.rows, out_path)
    return BatchOutcome(source, result.status.value, result.time, out_path, None)


@cli.command()
@click.argument("sources", nargs=-1, required=True)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory for one trace CSV per scenario",
)
@click.option("--workers", type=click.IntRange(min=1), help="Worker processes")
@click.option("--seed", type=int, help="Override every scenario's seed")
@click.option("--controller", type=click.Choice([k.value for k in ControllerKind]))
def batch(
    sources: Tuple[str, ...],
    out_dir: Path,
    workers: Optional[int],
    seed: Optional[int],
    controller: Optional[str],
) -> None:
    """Run independent scenarios (files or shipped names) in parallel."""
    stems = [Path(s).stem for s in sources]
    if len(set(stems)) != len(stems):
        raise click.UsageError("scenario names must be unique within a batch")
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(s, str(out_dir / f"{stem}.csv"), seed, controller) for s, stem in zip(sources, stems)]

    workers = workers or min(len(jobs), os.cpu_count() or 1)
    if workers == 1:
        outcomes = [run_batch_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_batch_job, jobs))

    table = Table(title="Batch")
    for name in ("Scenario", "Status", "Time", "Output"):
        table.add_column(name, style="cyan" if name == "Scenario" else None)
    for o in outcomes:
        table.add_row(
            o.source, o.status, _fmt(o.time, ".2f"), o.output or escape(o.error or "")
        )
    console.print(table)

    if any(o.status == "config-error" for o in outcomes):
        sys.exit(EXIT_CONFIG_ERROR)
    if any(o.status != "completed" for o in outcomes):
        sys.exit(EXIT_RUNTIME_FAILURE)


def main() -> None:
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
