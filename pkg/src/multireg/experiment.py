"""Batch experiments: generate point schemes, measure reg / ri, compare with formulas."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .formulas import PreconditionError, reduced_regularity_formula, ri_bound
from .groebner import Ideal
from .hilbert import HilbertPolynomial, hilbert_polynomial_empirical, regularity_index
from .points import GenericityError, PointScheme, fat_point_ideal, random_points
from .regularity import DEFAULT_TRIALS, generic_initial_ideal, regularity
from .ring import FieldSpec, SpaceShape

log = logging.getLogger(__name__)

MODES = ("verify-theorem", "verify-bound", "ri", "hilbert", "regularity")
CSV_HEADER = ["shape", "s", "mults", "seed", "reg", "reg_formula", "ri", "ri_bound", "reg_bound", "gin_reg", "pass"]

MAX_VARS = 10
MAX_MULT_SUM = 8
MAX_HORIZON = 25


class ConfigError(ValueError):
    """Experiment configuration is invalid or exceeds the desk-scale caps."""


@dataclass
class ExperimentConfig:
    mode: str = "verify-theorem"
    shapes: list[tuple[int, ...]] = field(default_factory=lambda: [(1, 1)])
    s_range: tuple[int, int] = (2, 6)
    mult_profiles: list[tuple[int, ...]] | None = None  # None means reduced
    p: int = 32003
    seed: int = 0
    seeds_per_cell: int = 1
    trials: int = DEFAULT_TRIALS
    max_vars: int = MAX_VARS
    gin: bool = True

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not self.shapes:
            raise ConfigError("no shapes given")
        try:
            shapes = [SpaceShape(tuple(d)) for d in self.shapes]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        for sh in shapes:
            if sh.nvars > self.max_vars:
                raise ConfigError(f"{sh} has {sh.nvars} variables, cap is {self.max_vars}")
        lo, hi = self.s_range
        if self.mode == "verify-theorem" and not 1 <= lo <= hi:
            raise ConfigError(f"empty or invalid s range {self.s_range}")
        if self.mode in ("verify-bound", "ri"):
            if not self.mult_profiles:
                raise ConfigError(f"mode {self.mode} needs multiplicity profiles")
            for prof in self.mult_profiles:
                if not prof or min(prof) < 1:
                    raise ConfigError(f"invalid multiplicity profile {prof}")
                if sum(prof) > MAX_MULT_SUM:
                    raise ConfigError(f"multiplicity sum {sum(prof)} exceeds cap {MAX_MULT_SUM}")
        if self.trials < 1 or self.seeds_per_cell < 1:
            raise ConfigError("trials and seeds per cell must be positive")
        try:
            FieldSpec(self.p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def cells(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """(dims, mults) per cell, repeated seeds_per_cell times."""
        out = []
        for dims in self.shapes:
            if self.mode == "verify-theorem":
                profiles = [(1,) * s for s in range(self.s_range[0], self.s_range[1] + 1)]
            else:
                profiles = list(self.mult_profiles)
            for prof in profiles:
                for _ in range(self.seeds_per_cell):
                    out.append((tuple(dims), tuple(sorted(prof, reverse=True))))
        return out


@dataclass
class InstanceReport:
    shape: tuple[int, ...]
    s: int
    mults: tuple[int, ...]
    seed: int
    reg: int | None = None
    reg_formula: int | None = None
    ri: int | None = None
    ri_bound: int | None = None
    reg_bound: int | None = None
    gin_reg: int | None = None
    ri_expected: int | None = None
    status: str = "ok"
    reason: str = ""
    wall_time: float = 0.0

    @property
    def k(self) -> int:
        return len(self.shape)

    def flags(self) -> dict[str, bool]:
        """Pass flags; each is a function of the numeric fields only."""
        f: dict[str, bool] = {}
        if self.status != "ok":
            return f
        if self.reg_formula is not None:
            f["formula"] = self.reg == self.reg_formula
        if self.reg_bound is not None:
            f["reg_bound"] = self.reg <= self.reg_bound
        if self.ri_bound is not None and self.ri is not None:
            f["ri_bound"] = self.ri <= self.ri_bound
        if self.gin_reg is not None:
            f["gin"] = self.gin_reg == self.reg
        if self.ri is not None:
            f["sandwich"] = self.ri <= self.reg <= self.ri + self.k
        if self.ri_expected is not None:
            f["ri_value"] = self.ri == self.ri_expected
        return f

    @property
    def passed(self) -> bool | None:
        if self.status != "ok":
            return None
        return all(self.flags().values())

    def pass_field(self) -> str:
        return {True: "1", False: "0", None: "skip"}[self.passed]

    def csv_row(self) -> list[str]:
        def fmt(v):
            return "" if v is None else str(v)

        return [
            "x".join(map(str, self.shape)),
            str(self.s),
            "-".join(map(str, self.mults)),
            str(self.seed),
            fmt(self.reg),
            fmt(self.reg_formula),
            fmt(self.ri),
            fmt(self.ri_bound),
            fmt(self.reg_bound),
            fmt(self.gin_reg),
            self.pass_field(),
        ]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["shape"] = list(self.shape)
        d["mults"] = list(self.mults)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceReport":
        names = {f.name for f in fields(cls)}
        kw = {k: v for k, v in data.items() if k in names}
        kw["shape"] = tuple(kw["shape"])
        kw["mults"] = tuple(kw["mults"])
        return cls(**kw)


@dataclass
class Summary:
    cells: int
    passed: int
    violations: int
    skipped: int
    violated: list[int] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if self.violations else 0


# ---------------------------------------------------------------------------
# single-scheme analysis


@dataclass
class SchemeAnalysis:
    ideal: Ideal
    reg: int
    ri: int
    hp: HilbertPolynomial
    horizon: int
    certificate: object
    gin_reg: int | None
    ri_bound: int | None
    reg_bound: int | None
    reg_formula: int | None


def analyze_scheme(
    Z: PointScheme,
    rng,
    trials: int = DEFAULT_TRIALS,
    gin: bool = True,
    ideal: Ideal | None = None,
) -> SchemeAnalysis:
    """reg, ri, Hilbert polynomial and bounds for the fat point scheme Z."""
    shape, k = Z.shape, Z.shape.k
    I = ideal if ideal is not None else fat_point_ideal(Z)
    rib = regb = None
    if Z.s >= 2:
        rib = ri_bound(shape, Z.mults)
        regb = rib + k
    formula = reduced_regularity_formula(shape, Z.s) if Z.is_reduced() else None
    if rib is not None:
        # H = HP from the bound on; regularity then starts its scan at ri
        T = rib + 1
        hp = hilbert_polynomial_empirical(I, k, T)
        horizon = T + k
        ri = regularity_index(I, hp, horizon)
        reg, cert = regularity(I, rng, trials, lower=ri)
    else:
        reg, cert = regularity(I, rng, trials)
        T = reg
        hp = hilbert_polynomial_empirical(I, k, T)
        horizon = T + k
        ri = regularity_index(I, hp, horizon)
    if horizon > MAX_HORIZON:
        raise ConfigError(f"horizon {horizon} exceeds cap {MAX_HORIZON}")
    gin_reg = generic_initial_ideal(I, rng).regularity if gin else None
    return SchemeAnalysis(I, reg, ri, hp, horizon, cert, gin_reg, rib, regb, formula)


# ---------------------------------------------------------------------------
# sweeps


def cell_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_cell(cfg: ExperimentConfig, index: int, dims: tuple[int, ...], mults: tuple[int, ...]) -> InstanceReport:
    shape = SpaceShape(dims)
    seed = cell_seed(cfg.seed, index)
    rng = np.random.default_rng(seed)
    rep = InstanceReport(shape=dims, s=len(mults), mults=mults, seed=seed)
    start = time.perf_counter()
    try:
        X = random_points(shape, len(mults), rng, cfg.p, seed=seed)
        Z = X.with_mults(mults)
        res = analyze_scheme(Z, rng, cfg.trials, gin=cfg.gin)
        rep.reg, rep.ri, rep.gin_reg = res.reg, res.ri, res.gin_reg
        rep.ri_bound, rep.reg_bound = res.ri_bound, res.reg_bound
        if cfg.mode == "verify-theorem":
            rep.reg_formula = res.reg_formula
        if cfg.mode == "ri" and len(mults) == 1:
            rep.ri_expected = max(mults[0] - shape.k, 0)
    except GenericityError as exc:
        rep.status, rep.reason = "skipped", str(exc)
    except (PreconditionError, ConfigError) as exc:
        rep.status, rep.reason = "skipped", f"precondition: {exc}"
    rep.wall_time = round(time.perf_counter() - start, 3)
    return rep


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MULTIREG_THREADS", "1")))
    except ValueError:
        return 1


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> tuple[list[InstanceReport], Summary]:
    """One report per cell, ordered by cell index; deterministic given (p, seed)."""
    cfg.validate()
    cells = cfg.cells()
    workers = workers or _threads()
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_cell, cfg, i, d, m) for i, (d, m) in enumerate(cells)]
            reports = [f.result() for f in futures]
    else:
        reports = [run_cell(cfg, i, d, m) for i, (d, m) in enumerate(cells)]
    violated = [i for i, r in enumerate(reports) if r.passed is False]
    summary = Summary(
        cells=len(reports),
        passed=sum(1 for r in reports if r.passed),
        violations=len(violated),
        skipped=sum(1 for r in reports if r.passed is None),
        violated=violated,
    )
    return reports, summary


def reports_to_csv(reports: Sequence[InstanceReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def reports_to_json(reports: Sequence[InstanceReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"


def reports_from_json(text: str) -> list[InstanceReport]:
    return [InstanceReport.from_dict(d) for d in json.loads(text)]


def emit_report(reports: Sequence[InstanceReport], fmt: str, path: str | Path | None) -> str:
    """Serialize reports as csv or json; write to `path` when given."""
    if not reports:
        raise ValueError("no reports to emit")
    if fmt == "csv":
        text = reports_to_csv(reports)
    elif fmt == "json":
        text = reports_to_json(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc}") from exc
    return text
