"""Parameter sweeps and threshold tables with CSV persistence.

A config is a flat JSON object; every key is optional and the defaults
reproduce the reference setup (N=1000, M_A=10, WS K=4 p=0.1, BA m0=m=2,
theta=1, delta in 0.2..2.0, 30 repetitions).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from .attack import AttackStrategy
from .graph import EdgeListFormatError, GraphInputError
from .loadmodel import ModelError, TransferMode
from .metrics import (
    AttackMode,
    epsilon_grid,
    find_epsilon_threshold,
    gamma_grid,
    make_instances,
)
from .netgen import BaParams, Topology, WsParams

log = logging.getLogger(__name__)

WORKERS_ENV = "EDGECASCADE_WORKERS"
SWEEP_HEADER = (
    "topology", "strategy", "delta", "epsilon",
    "gamma_mean", "gamma_std", "repetitions", "seed",
)
# strategy position in seed keys; fixed so reordering the config list is harmless
STRATEGY_INDEX = {AttackStrategy.HLEA: 0, AttackStrategy.LLEA: 1}
DEFAULT_DELTAS = (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0)


class ConfigError(ValueError):
    pass


class OutputError(ConfigError):
    """The output location cannot be written."""


def fmt(x: float) -> str:
    return f"{x:.6g}"


@dataclass(frozen=True)
class ExperimentConfig:
    topologies: tuple[str, ...] = ("ba", "ws")
    n: int = 1000
    k: int = 4
    p: float = 0.1
    m0: int = 2
    m: int = 2
    strategies: tuple[str, ...] = ("hlea", "llea")
    deltas: tuple[float, ...] = DEFAULT_DELTAS
    epsilons: tuple[float, ...] | None = None
    epsilon_min: float = 0.0
    epsilon_max: float = 0.8
    epsilon_step: float = 0.005
    theta: float = 1.0
    m_a: int = 10
    repetitions: int = 30
    master_seed: int = 0
    attack_mode: str = "independent"
    transfer: str = "current"
    # False redraws the networks for every epsilon instead of reusing them
    shared_networks: bool = True
    fast_threshold: bool = True
    workers: int | None = None
    output: str | None = None

    def __post_init__(self):
        try:
            self._validate()
        except (GraphInputError, ModelError, ValueError, TypeError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    def _validate(self):
        if not self.topologies:
            raise ConfigError("topologies must be non-empty")
        if not self.strategies:
            raise ConfigError("strategies must be non-empty")
        if not self.deltas:
            raise ConfigError("deltas must be non-empty")
        if any(not d > 0 for d in self.deltas):
            raise ConfigError("every delta must be > 0")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.m_a < 1:
            raise ConfigError("m_a must be >= 1")
        if not self.theta > 0:
            raise ConfigError("theta must be > 0")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for s in self.strategies:
            AttackStrategy(s)
        AttackMode(self.attack_mode)
        TransferMode(self.transfer)
        grid = self.epsilon_values()
        if not grid:
            raise ConfigError("epsilon grid is empty")
        if any(e < 0 for e in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("epsilon grid must be non-negative and strictly ascending")
        self.topology_specs()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kw = dict(data)
        for key in ("topologies", "strategies"):
            if key in kw:
                kw[key] = tuple(str(x).lower() for x in kw[key])
        for key in ("deltas", "epsilons"):
            if kw.get(key) is not None:
                kw[key] = tuple(float(x) for x in kw[key])
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def epsilon_values(self) -> list[float]:
        if self.epsilons is not None:
            return [float(e) for e in self.epsilons]
        return epsilon_grid(self.epsilon_min, self.epsilon_max, self.epsilon_step)

    def topology_specs(self) -> list[Topology]:
        specs = []
        for name in self.topologies:
            if name == "ws":
                specs.append(Topology.ws(WsParams(self.n, self.k, self.p)))
            elif name == "ba":
                specs.append(Topology.ba(BaParams(self.m0, self.m, self.n)))
            elif name.startswith("file:"):
                try:
                    specs.append(Topology.from_file(name[5:], label=name))
                except EdgeListFormatError as exc:
                    raise ConfigError(f"{name}: {exc}") from exc
                except OSError as exc:
                    raise ConfigError(f"{name}: cannot read edge list: {exc}") from exc
            else:
                raise ConfigError(f"unknown topology {name!r} (expected ws, ba or file:<path>)")
        labels = [t.label for t in specs]
        if len(set(labels)) != len(labels):
            raise ConfigError("topology labels must be unique")
        return specs

    def worker_count(self) -> int:
        env = os.environ.get(WORKERS_ENV)
        if env:
            try:
                value = int(env)
            except ValueError:
                raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
            if value < 1:
                raise ConfigError(f"{WORKERS_ENV} must be >= 1")
            return value
        return self.workers or os.cpu_count() or 1


@dataclass(frozen=True)
class SweepRecord:
    topology: str
    strategy: str
    delta: float
    epsilon: float
    gamma_mean: float
    gamma_std: float
    repetitions: int
    seed: int

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.topology, self.strategy, fmt(self.delta), fmt(self.epsilon))

    def sort_key(self):
        return (self.topology, self.strategy, self.delta, self.epsilon)

    def row(self) -> list[str]:
        return [
            self.topology, self.strategy, fmt(self.delta), fmt(self.epsilon),
            fmt(self.gamma_mean), fmt(self.gamma_std), str(self.repetitions), str(self.seed),
        ]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "SweepRecord":
        return cls(
            row["topology"], row["strategy"], float(row["delta"]), float(row["epsilon"]),
            float(row["gamma_mean"]), float(row["gamma_std"]),
            int(row["repetitions"]), int(row["seed"]),
        )


@dataclass(frozen=True)
class _Cell:
    topo_index: int
    strategy: str
    delta_index: int
    epsilons: tuple[float, ...]


def _run_cell(config: ExperimentConfig, cell: _Cell) -> list[SweepRecord]:
    topo = config.topology_specs()[cell.topo_index]
    strategy = AttackStrategy(cell.strategy)
    delta = config.deltas[cell.delta_index]
    key = (topo.label, STRATEGY_INDEX[strategy], cell.delta_index)
    grid = config.epsilon_values()

    if config.shared_networks:
        insts = make_instances(
            topo, delta, strategy, config.m_a, config.repetitions, config.master_seed, key
        )
        rows = gamma_grid(
            insts, cell.epsilons, delta, config.theta,
            mode=config.attack_mode, transfer=config.transfer,
        )
    else:
        rows = []
        for eps in cell.epsilons:
            insts = make_instances(
                topo, delta, strategy, config.m_a, config.repetitions, config.master_seed,
                key + ("eps", grid.index(eps)),
            )
            rows.extend(
                gamma_grid(
                    insts, [eps], delta, config.theta,
                    mode=config.attack_mode, transfer=config.transfer,
                )
            )
    return [
        SweepRecord(
            topo.label, strategy.value, delta, eps,
            float(np.mean(g)), float(np.std(g)), config.repetitions, config.master_seed,
        )
        for eps, g in zip(cell.epsilons, rows)
    ]


def _run_cells(config: ExperimentConfig, cells: Sequence[_Cell]) -> Iterator[list[SweepRecord]]:
    workers = min(config.worker_count(), max(1, len(cells)))
    if workers == 1:
        for cell in cells:
            yield _run_cell(config, cell)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_run_cell, [config] * len(cells), cells)


def read_sweep_csv(path: str | os.PathLike) -> list[SweepRecord]:
    """Parse a (possibly partial) sweep CSV; a truncated last line is ignored."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return out
        if tuple(reader.fieldnames) != SWEEP_HEADER:
            raise ConfigError(f"{path}: not a sweep CSV (header {reader.fieldnames})")
        for row in reader:
            try:
                out.append(SweepRecord.from_row(row))
            except (TypeError, ValueError, KeyError):
                log.warning("ignoring malformed row in %s: %s", path, row)
    return out


def write_sweep_csv(records: Iterable[SweepRecord], sink) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for rec in sorted(records, key=SweepRecord.sort_key):
        writer.writerow(rec.row())


def _check_writable(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8"):
            pass
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def run_sweep(config: ExperimentConfig, output: str | os.PathLike | None = None) -> list[SweepRecord]:
    """Gamma statistics for every (topology, strategy, delta, epsilon) cell.

    With an ``output`` path, rows are appended as cells finish and the file
    is rewritten sorted at the end. Rows already present in an existing
    file for this config's keys are kept and not recomputed.
    """
    output = output or config.output
    topos = config.topology_specs()
    grid = config.epsilon_values()
    path = Path(output) if output else None

    done: dict[tuple, SweepRecord] = {}
    if path is not None:
        if path.exists() and path.stat().st_size > 0:
            try:
                for rec in read_sweep_csv(path):
                    if rec.repetitions == config.repetitions and rec.seed == config.master_seed:
                        done[rec.key] = rec
            except OSError as exc:
                raise OutputError(f"cannot read {path}: {exc}") from exc
        _check_writable(path)

    wanted: dict[tuple, None] = {}
    cells = []
    for ti, topo in enumerate(topos):
        for strat in config.strategies:
            for di, delta in enumerate(config.deltas):
                keys = [(topo.label, strat, fmt(delta), fmt(e)) for e in grid]
                wanted.update(dict.fromkeys(keys))
                missing = tuple(e for e, k in zip(grid, keys) if k not in done)
                if missing:
                    cells.append(_Cell(ti, strat, di, missing))
    records = {k: v for k, v in done.items() if k in wanted}
    if records:
        log.info("resuming: %d of %d rows already present", len(records), len(wanted))

    sink = None
    if path is not None:
        # rewrite so the file holds exactly the kept rows before appending
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(records.values(), fh)
        sink = open(path, "a", encoding="utf-8", newline="")
    try:
        writer = csv.writer(sink, lineterminator="\n") if sink else None
        for i, recs in enumerate(_run_cells(config, cells), start=1):
            for rec in recs:
                records[rec.key] = rec
                if writer:
                    writer.writerow(rec.row())
            if sink:
                sink.flush()
            head = recs[0]
            log.info(
                "cell %d/%d done: %s %s delta=%s (%d eps)",
                i, len(cells), head.topology, head.strategy, fmt(head.delta), len(recs),
            )
    finally:
        if sink:
            sink.close()

    ordered = sorted(records.values(), key=SweepRecord.sort_key)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(ordered, fh)
    return ordered


@dataclass(frozen=True)
class ThresholdRow:
    topology: str
    strategy: str
    delta: float
    epsilon_t: float | None


def _threshold_cell(config: ExperimentConfig, ti: int, strat: str, di: int) -> ThresholdRow:
    topo = config.topology_specs()[ti]
    strategy = AttackStrategy(strat)
    res = find_epsilon_threshold(
        topo, config.deltas[di], strategy, config.m_a, config.repetitions,
        config.epsilon_values(), config.master_seed,
        theta=config.theta,
        seed_key=(topo.label, STRATEGY_INDEX[strategy], di),
        fast=config.fast_threshold,
        mode=config.attack_mode,
        transfer=config.transfer,
    )
    return ThresholdRow(topo.label, strategy.value, config.deltas[di], res.epsilon_t)


def run_threshold_table(config: ExperimentConfig, output: str | os.PathLike | None = None) -> list[ThresholdRow]:
    """Capacity threshold for every (topology, strategy, delta) combination."""
    output = output or config.output
    if output:
        _check_writable(Path(output))
    topos = config.topology_specs()
    jobs = [
        (ti, s, di)
        for ti in range(len(topos))
        for s in config.strategies
        for di in range(len(config.deltas))
    ]
    workers = min(config.worker_count(), len(jobs))
    rows: list[ThresholdRow] = []
    if workers == 1:
        for n_done, job in enumerate(jobs, start=1):
            rows.append(_threshold_cell(config, *job))
            r = rows[-1]
            log.info("threshold %d/%d: %s %s delta=%s -> %s", n_done, len(jobs),
                     r.topology, r.strategy, fmt(r.delta), _fmt_threshold(r.epsilon_t))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_threshold_cell, *zip(*[(config, *j) for j in jobs])))
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_threshold_table(rows, config))
    return rows


def _fmt_threshold(x: float | None) -> str:
    return "NA" if x is None else fmt(x)


def format_threshold_table(rows: Sequence[ThresholdRow], config: ExperimentConfig) -> str:
    """One line per delta, one column per (topology, strategy), like the reference table."""
    lookup = {(r.topology, r.strategy, fmt(r.delta)): r.epsilon_t for r in rows}
    columns = [(t.label, s) for t in config.topology_specs() for s in config.strategies]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta"] + [f"{t}_{s}" for t, s in columns])
    for delta in config.deltas:
        writer.writerow(
            [fmt(delta)]
            + [_fmt_threshold(lookup.get((t, s, fmt(delta)))) for t, s in columns]
        )
    return buf.getvalue()
