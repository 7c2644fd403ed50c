"""Operator command line: run the robustness suite, score validation
reward, record and verify rollouts, and serve a live probe session.

Exit codes: 0 success, 2 configuration or input error, 3 policy failure.
COOPKITCHEN_SEED is the seed fallback when --seed is not given.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from coopkitchen import __version__


def _seed_default() -> int:
    return int(os.environ.get("COOPKITCHEN_SEED", "0"))


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_agent(spec: str):
    from coopkitchen.policies import parse_agent_spec

    try:
        return parse_agent_spec(spec)
    except ValueError as exc:
        _fail(2, str(exc))


def _load_layout(name_or_path: str):
    from coopkitchen.core import bundled_layout, bundled_layout_names, load_layout_file

    if name_or_path in bundled_layout_names():
        return bundled_layout(name_or_path)
    path = Path(name_or_path)
    if path.exists():
        try:
            return load_layout_file(path)
        except ValueError as exc:
            _fail(2, f"bad layout file {path}: {exc}")
    _fail(2, f"unknown layout {name_or_path!r} (not bundled, not a file)")


@click.group()
@click.version_option(__version__)
def main():
    """Cooperative kitchen test bench."""


@main.command("run-tests")
@click.option("--suite", "suite_path", default=None, help="Scenario directory (default: bundled suite).")
@click.option("--agent", required=True, help="Tested agent spec, e.g. tom:max_capability.")
@click.option("--seed", type=int, default=None, help="Base seed (default: COOPKITCHEN_SEED or 0).")
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel rollout workers.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here.")
def run_tests(suite_path, agent, seed, jobs, out_path):
    """Score an agent on a scenario suite and print category means."""
    from coopkitchen.harness import SchemaError, load_suite, run_suite

    tested = _parse_agent(agent)
    try:
        suite, warnings = load_suite(suite_path)
    except (SchemaError, ValueError) as exc:
        _fail(2, str(exc))
    for w in warnings:
        click.echo(f"warning: {w}", err=True)
    base_seed = seed if seed is not None else _seed_default()
    report = run_suite(suite, tested, base_seed=base_seed, parallelism=jobs)
    if out_path:
        Path(out_path).write_text(report.to_json())
    click.echo(report.table(), nl=False)
    if report.total_rollouts and report.error_rollouts == report.total_rollouts:
        _fail(3, "tested policy failed on every rollout")


@main.command()
@click.option("--agent", required=True, help="Tested agent spec.")
@click.option("--layout", "layout_name", required=True, help="Bundled layout name or .layout file.")
@click.option("--population", "population_spec", default="bundled", show_default=True,
              help="'bundled' or a file with one partner spec per line.")
@click.option("--episodes", type=int, default=5, show_default=True, help="Episodes per population member.")
@click.option("--horizon", type=int, default=400, show_default=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=None, help="Base seed (default: COOPKITCHEN_SEED or 0).")
@click.option("--start-pool", "pool_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Sample episode starts from this .pool file instead of the fixed start.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def validate(agent, layout_name, population_spec, episodes, horizon, gamma, seed, pool_path, out_path):
    """Mean episode reward against a partner population."""
    from coopkitchen.evaluation import (
        EvalConfig,
        StartStatePool,
        default_validation_population,
        validation_reward,
    )
    from coopkitchen.policies import Population

    tested = _parse_agent(agent)
    layout = _load_layout(layout_name)
    if population_spec == "bundled":
        try:
            population = default_validation_population(layout)
        except FileNotFoundError as exc:
            _fail(2, str(exc))
    else:
        path = Path(population_spec)
        if not path.exists():
            _fail(2, f"population file {path} not found")
        members = [_parse_agent(line.strip()) for line in path.read_text().splitlines() if line.strip()]
        if not members:
            _fail(2, f"population file {path} is empty")
        population = Population(members)
    start_pool = None
    if pool_path is not None:
        try:
            start_pool = StartStatePool.load(pool_path, layout)
        except ValueError as exc:
            _fail(2, f"bad start pool: {exc}")
    try:
        config = EvalConfig(episodes_per_member=episodes, horizon=horizon, gamma=gamma,
                            seed=seed if seed is not None else _seed_default(),
                            diverse_starts=start_pool is not None)
    except ValueError as exc:
        _fail(2, str(exc))
    from coopkitchen.policies import PolicyError

    try:
        report = validation_reward(layout, tested, population, config, start_pool=start_pool)
    except PolicyError as exc:
        _fail(3, f"policy failure: {exc}")
    if out_path:
        Path(out_path).write_text(report.to_json())
    click.echo(report.table(), nl=False)


@main.command()
@click.option("--layout", "layout_name", required=True)
@click.option("--agents", required=True, help="Two comma-separated agent specs.")
@click.option("--horizon", type=int, default=400, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True, help="Output .traj file.")
def record(layout_name, agents, horizon, seed, out_path):
    """Record one seeded rollout to a trajectory file."""
    from coopkitchen.policies import PolicyError, record_rollout

    specs = [s.strip() for s in agents.split(",")]
    if len(specs) != 2:
        _fail(2, "--agents needs exactly two comma-separated specs")
    handles = [_parse_agent(s) for s in specs]
    layout = _load_layout(layout_name)
    try:
        traj = record_rollout(layout, handles[0], handles[1], horizon,
                              seed if seed is not None else _seed_default())
    except PolicyError as exc:
        _fail(3, f"policy failure: {exc}")
    traj.save(out_path)
    click.echo(f"recorded {len(traj.actions)} ticks, total reward {traj.total_reward} -> {out_path}")


@main.command()
@click.option("--traj", "traj_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--verify", is_flag=True, help="Re-step the actions and compare against the recording.")
def replay(traj_path, verify):
    """Inspect (and optionally verify) a recorded trajectory."""
    from coopkitchen.policies import Trajectory, VerifyMismatch, verify_trajectory

    try:
        traj = Trajectory.load(traj_path)
    except (ValueError, KeyError) as exc:
        _fail(2, f"bad trajectory file: {exc}")
    layout = _load_layout(traj.layout_name)
    click.echo(
        f"layout {traj.layout_name}, {len(traj.actions)} ticks, total reward {traj.total_reward}"
    )
    if verify:
        try:
            verify_trajectory(traj, layout)
        except VerifyMismatch as exc:
            _fail(2, str(exc))
        click.echo("verify: ok")


@main.command()
@click.option("--layout", "layout_name", required=True)
@click.option("--agent", required=True, help="Agent spec for the non-human slot.")
@click.option("--human-slot", type=click.IntRange(0, 1), default=0, show_default=True)
@click.option("--port", type=int, default=8732, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--tick-rate", type=float, default=4.0, show_default=True, help="Ticks per second.")
@click.option("--seed", type=int, default=None)
@click.option("--capture-dir", type=click.Path(file_okay=False), default="captures", show_default=True)
def serve(layout_name, agent, human_slot, port, host, tick_rate, seed, capture_dir):
    """Serve a live probe session (WebSocket) plus the HTTP API."""
    import errno

    import uvicorn

    from coopkitchen.service.app import create_app
    from coopkitchen.service.session import SessionConfig

    handle = _parse_agent(agent)
    layout = _load_layout(layout_name)
    config = SessionConfig(
        layout=layout,
        agent=handle,
        human_slot=human_slot,
        tick_rate=tick_rate,
        seed=seed if seed is not None else _seed_default(),
        capture_dir=Path(capture_dir),
    )
    app = create_app(config)
    click.echo(f"session on ws://{host}:{port}/session (layout {layout.name}, human slot {human_slot})")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            _fail(2, f"port {port} is already in use")
        raise


@main.command("tom-stdio")
@click.option("--preset", default=None, help="Agent preset name (default: the layout's mle_like).")
@click.option("--params-file", default=None, type=click.Path(exists=True, dir_okay=False))
def tom_stdio(preset, params_file):
    """Run the built-in agent behind the external stdio protocol."""
    from coopkitchen.external_stdio import run_stdio_agent

    sys.exit(run_stdio_agent(preset, params_file))


if __name__ == "__main__":
    main()
