"""Experiment configuration, orchestration and file output.

A run takes one validated :class:`ExperimentConfig` and writes data-only
artifacts (JSON, CSV, plain-text grids) into the output directory. Every
file carries a metadata header with version, conventions, parameters and
solver residuals, so results are comparable across truncation choices.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classical import classical_threshold, find_fixed_points, hypersphere_radius
from .entanglement import negativity
from .fock import FockSpace
from .liouvillian import VECTORIZATION, build_liouvillian
from .network import OPONetworkParams
from .observables import moments
from .presets import coupling_matrix, nonlinear_matrix, presets
from .steady import solve_steady_state
from .wigner import dump_grid, wigner

COUPLING_KINDS = (
    "decoupled",
    "ferromagnetic",
    "fully_frustrated",
    "non_ising",
    "hyperspin",
    "custom",
)
OUTPUT_KINDS = ("steady", "wigner", "negativity", "classical")


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries the offending key path."""


@dataclass
class ExperimentConfig:
    num_modes: int
    n_max: int
    loss: float
    saturation: float
    coupling: str = "decoupled"
    coupling_strength: float = 0.1
    linear_coupling: list = None  # explicit C, only for coupling="custom"
    nonlinear_coupling: list = None  # explicit W, only for coupling="custom"
    pump: float = None  # absolute pump; exclusive with pump_rel
    pump_rel: float = None  # pump as multiple of the classical threshold
    pump_rel_sweep: list = None  # sweep of pump_rel values
    solver_method: str = "auto"
    outputs: list = field(default_factory=lambda: ["steady"])
    wigner_modes: list = None  # defaults to all modes
    wigner_range: float = None  # half-width; defaults to S + 2
    wigner_step: float = 0.1
    negativity_modes: list = None  # defaults to all modes
    output_dir: str = "runs"
    seed: int = 0
    name: str = "run"

    # -- construction / validation -------------------------------------------------

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        for key in raw:
            if key not in known:
                raise ConfigError(f"config key {key!r}: unknown option")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def validate(self):
        def fail(key, msg):
            raise ConfigError(f"config key {key!r}: {msg}")

        if self.num_modes < 1:
            fail("num_modes", "must be >= 1")
        if self.n_max < 1:
            fail("n_max", "must be >= 1")
        if self.coupling not in COUPLING_KINDS:
            fail("coupling", f"must be one of {COUPLING_KINDS}")
        if self.coupling == "custom" and self.linear_coupling is None:
            fail("linear_coupling", "required for coupling='custom'")
        pump_specs = sum(
            x is not None for x in (self.pump, self.pump_rel, self.pump_rel_sweep)
        )
        if pump_specs != 1:
            fail("pump", "exactly one of pump, pump_rel, pump_rel_sweep required")
        if self.pump_rel_sweep is not None and len(self.pump_rel_sweep) == 0:
            fail("pump_rel_sweep", "sweep range must be non-empty")
        if not self.outputs:
            fail("outputs", "at least one requested output required")
        for out in self.outputs:
            if out not in OUTPUT_KINDS:
                fail("outputs", f"{out!r} is not one of {OUTPUT_KINDS}")
        if self.pump_rel_sweep is not None and "wigner" in self.outputs:
            fail("outputs", "wigner grids are per-point; use pump or pump_rel")
        for key in ("loss", "saturation", "wigner_step"):
            if getattr(self, key) is not None and getattr(self, key) <= 0 and key != "loss":
                fail(key, "must be > 0")

    # -- derived quantities ----------------------------------------------------------

    def network_params(self, pump: float) -> OPONetworkParams:
        if self.coupling == "custom":
            C = np.array(self.linear_coupling, dtype=float)
            W = (
                np.array(self.nonlinear_coupling, dtype=float)
                if self.nonlinear_coupling is not None
                else self.saturation * np.eye(self.num_modes)
            )
        else:
            C = coupling_matrix(self.coupling, self.num_modes, self.coupling_strength)
            W = nonlinear_matrix(self.coupling, self.num_modes, self.saturation)
        return OPONetworkParams(
            num_modes=self.num_modes,
            pump=pump,
            loss=self.loss,
            saturation=self.saturation,
            linear_coupling=C,
            nonlinear_coupling=W,
        )

    def threshold(self) -> float:
        return classical_threshold(self.network_params(pump=0.0))

    def pump_values(self) -> list:
        h_th = self.threshold()
        if self.pump is not None:
            return [self.pump]
        if self.pump_rel is not None:
            return [self.pump_rel * h_th]
        return [rel * h_th for rel in self.pump_rel_sweep]


@dataclass
class SweepRecord:
    pump: float
    pump_rel: float
    mean_n: list  # per-mode <n>
    negativities: dict  # transposed mode -> negativity
    min_eigenvalues: dict
    residual: float
    wall_time: float
    truncation_safe: bool


def _metadata(config: ExperimentConfig, params: OPONetworkParams) -> dict:
    return {
        "version": __version__,
        "vectorization": VECTORIZATION,
        "quadrature": "x = (a + a†)/2",
        "n_max_convention": "n_max is the maximum occupation; local dim = n_max + 1",
        "n_max": config.n_max,
        "num_modes": config.num_modes,
        "loss": params.loss,
        "saturation": params.saturation,
        "coupling": config.coupling,
        "coupling_strength": config.coupling_strength,
        "solver_method": config.solver_method,
        "seed": config.seed,
    }


def _solve_point(config: ExperimentConfig, pump: float):
    import time as _time

    space = FockSpace(config.num_modes, config.n_max + 1)
    params = config.network_params(pump)
    L = build_liouvillian(params, space)
    t0 = _time.perf_counter()
    rho = solve_steady_state(L, method=config.solver_method)
    wall = _time.perf_counter() - t0
    return params, rho, wall


def _sweep_point(args):
    config, pump, h_th, nu_list = args
    params, rho, wall = _solve_point(config, pump)
    negs = {nu: negativity(rho, nu) for nu in nu_list}
    return SweepRecord(
        pump=pump,
        pump_rel=pump / h_th if h_th != 0 else np.inf,
        mean_n=[moments(rho, m)["mean_n"] for m in range(1, config.num_modes + 1)],
        negativities={nu: r.negativity for nu, r in negs.items()},
        min_eigenvalues={nu: r.min_eigenvalue for nu, r in negs.items()},
        residual=rho.residual,
        wall_time=wall,
        truncation_safe=rho.truncation_safe,
    )


def run_sweep(config: ExperimentConfig, workers: int = None) -> list:
    """Solve all sweep points and return SweepRecords ordered by pump."""
    h_th = config.threshold()
    nu_list = config.negativity_modes or list(range(1, config.num_modes + 1))
    points = [(config, pump, h_th, nu_list) for pump in sorted(config.pump_values())]
    workers = workers or int(os.environ.get("OPONET_WORKERS", "1"))
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sweep_point, points))
    else:
        records = [_sweep_point(p) for p in points]
    return records


def write_sweep_csv(records, config: ExperimentConfig, params, path):
    """One CSV row per (pump, transposed mode), deterministic order and format."""
    meta = _metadata(config, params)
    with open(path, "w") as f:
        for k, v in meta.items():
            f.write(f"# {k}: {v}\n")
        f.write("h,h_rel,nu,negativity,min_eigenvalue,n_max,residual\n")
        for rec in records:
            for nu in sorted(rec.negativities):
                f.write(
                    f"{rec.pump:.12e},{rec.pump_rel:.12e},{nu},"
                    f"{rec.negativities[nu]:.12e},{rec.min_eigenvalues[nu]:.12e},"
                    f"{config.n_max},{rec.residual:.12e}\n"
                )


def run(config: ExperimentConfig, workers: int = None) -> dict:
    """Execute one experiment config; returns a manifest of written files."""
    config.validate()
    outdir = Path(config.output_dir) / config.name
    outdir.mkdir(parents=True, exist_ok=True)
    h_th = config.threshold()
    manifest = {"output_dir": str(outdir), "files": []}

    def emit(name):
        manifest["files"].append(str(outdir / name))
        return outdir / name

    if config.pump_rel_sweep is not None:
        records = run_sweep(config, workers=workers)
        params = config.network_params(config.pump_values()[0])
        write_sweep_csv(records, config, params, emit("sweep.csv"))
        return manifest

    pump = config.pump_values()[0]
    needs_quantum = any(k in config.outputs for k in ("steady", "wigner", "negativity"))
    if needs_quantum:
        params, rho, wall = _solve_point(config, pump)
    else:
        params, rho, wall = config.network_params(pump), None, 0.0
    meta = _metadata(config, params)
    meta.update(pump=pump, pump_rel=pump / h_th if h_th else np.inf)
    if rho is not None:
        meta.update(
            residual=rho.residual,
            solver=rho.solver,
            wall_time=wall,
            truncation_safe=rho.truncation_safe,
            min_eigenvalue=rho.min_eigenvalue,
        )

    if "steady" in config.outputs:
        summary = dict(meta)
        summary["moments"] = {
            str(m): moments(rho, m) for m in range(1, config.num_modes + 1)
        }
        with open(emit("steady.json"), "w") as f:
            json.dump(summary, f, indent=2, default=float)
        np.savetxt(
            emit("density_matrix_real.csv"), rho.data.real, delimiter=",", fmt="%.12e"
        )
        if np.abs(rho.data.imag).max() > 0:
            np.savetxt(
                emit("density_matrix_imag.csv"),
                rho.data.imag,
                delimiter=",",
                fmt="%.12e",
            )

    if "negativity" in config.outputs:
        nu_list = config.negativity_modes or list(range(1, config.num_modes + 1))
        negs = {nu: negativity(rho, nu) for nu in nu_list}
        rec = SweepRecord(
            pump=pump,
            pump_rel=pump / h_th if h_th else np.inf,
            mean_n=[moments(rho, m)["mean_n"] for m in range(1, config.num_modes + 1)],
            negativities={nu: r.negativity for nu, r in negs.items()},
            min_eigenvalues={nu: r.min_eigenvalue for nu, r in negs.items()},
            residual=rho.residual,
            wall_time=wall,
            truncation_safe=rho.truncation_safe,
        )
        write_sweep_csv([rec], config, params, emit("negativity.csv"))

    if "wigner" in config.outputs:
        S = hypersphere_radius(params)
        half = config.wigner_range or ((S or 1.0) + 2.0)
        ax = np.arange(-half, half + config.wigner_step / 2, config.wigner_step)
        modes = config.wigner_modes or list(range(1, config.num_modes + 1))
        fixed = {m: 0.0 for m in range(1, config.num_modes + 1) if m not in modes}
        grid = wigner(rho, modes, [ax] * len(modes), fixed)
        dump_grid(grid, emit("wigner.txt"), extra_metadata=meta)

    if "classical" in config.outputs:
        fps = find_fixed_points(params, seed=config.seed)
        payload = dict(meta)
        payload.update(
            threshold=h_th,
            hypersphere_radius=hypersphere_radius(params),
            fixed_points=[list(map(float, x)) for x in fps],
        )
        with open(emit("classical.json"), "w") as f:
            json.dump(payload, f, indent=2, default=float)

    return manifest


def load_preset(name: str):
    """Configs for a named preset, as a list of ExperimentConfig."""
    table = presets()
    if name not in table:
        raise ConfigError(f"config key 'preset': unknown preset {name!r}")
    return [ExperimentConfig.from_dict(raw) for raw in table[name]]
