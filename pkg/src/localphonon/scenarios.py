"""End-to-end reproductions of the two-ion blockade experiments.

Pipelines (ion 0 is "Ion 1", ion 1 is "Ion 2"):

* ``fig2``: prepare |up 2, up 0>, optionally drive a blockade beam on ion 1,
  hop for tau, map both ions with the phonon-number-resolving sequence and
  read out the joint populations P20, P11, P02.
* ``fig3``: prepare |up 1, up 1>, optional blockade on ion 1, hop for tau,
  BSB pi on both ions, report each ion's spin-down probability.
* ``fig4``: as fig3, then a carrier pi on both ions and a BSB Rabi probe on
  ion 0 whose fit yields ion 0's Fock populations p0, p1, p2.
* ``custom``: start from a product state given in the config, hop (with
  optional blockade) and report per-ion populations.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .chain import ChainGeometry, TrapConfig
from .constants import TWO_PI
from .detection import (
    RabiTrace,
    binomial_sigma,
    joint_pnr_probabilities,
    outside_pnr_model,
    pnr_map_sequence,
    rabi_fit,
    sample_trace,
    spin_down_probability,
    two_stage_readout,
)
from .dynamics import Propagator, Segment, dephasing_channels, propagate_lindblad, run_schedule
from .errors import NumericalError, ValidationError
from .hamiltonian import DriveSpec, blockade_hamiltonian, drive_term, hopping_hamiltonian
from .hilbert import (
    DOWN,
    UP,
    HilbertSpec,
    cutoff_population,
    fock_populations,
    joint_fock_populations,
    level_index,
    product_state,
)
from .pulses import PulseSequence, Simultaneous, apply_sequence, bsb, carrier, prep_sequence, sequence_segments

log = logging.getLogger(__name__)

SCENARIOS = (
    "fig2_free",
    "fig2_blockade",
    "fig3_free",
    "fig3_blockade",
    "fig4_free",
    "fig4_blockade",
    "custom",
)

DEFAULT_G = TWO_PI * 20e3
CUTOFF_ERROR = 1e-3


@dataclass
class TimeGrid:
    start: float = 0.0
    stop: float = 600e-6
    step: float = 20e-6

    def __post_init__(self):
        if not self.step > 0:
            raise ValidationError("time step must be positive")
        if self.start < 0 or self.stop < self.start:
            raise ValidationError("time grid needs 0 <= start <= stop")

    def times(self) -> np.ndarray:
        """Inclusive grid: start, start+step, ... up to and including stop."""
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return self.start + self.step * np.arange(n + 1)


@dataclass
class NoiseConfig:
    enabled: bool = True
    pulse_infidelity_target: float = 0.12
    nbar: float = 0.04
    dephasing: bool = True
    thermal: bool = True
    bsb_dephasing_rate: float | None = None
    rsb_dephasing_rate: float | None = None
    readout_flip: float = 0.0

    def __post_init__(self):
        if not 0 <= self.pulse_infidelity_target <= 1:
            raise ValidationError("pulse_infidelity_target must lie in [0, 1]")
        if self.nbar < 0:
            raise ValidationError("nbar must be >= 0")
        if not 0 <= self.readout_flip <= 1:
            raise ValidationError("readout_flip must lie in [0, 1]")
        for name in ("bsb_dephasing_rate", "rsb_dephasing_rate"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValidationError(f"{name} must be >= 0")


@dataclass
class ProbeConfig:
    """BSB Rabi probe used by the fig4 pipeline.

    ``hopping`` keeps the inter-ion hopping on while probing; the fit model
    assumes an isolated ion, so it is off by default. ``fit_g`` lets the fit
    search the Rabi frequency instead of using the calibrated ``pulse_g``.
    """

    points: int = 60
    periods: float = 3.0
    n_levels: int = 3
    hopping: bool = False
    fit_g: bool = False

    def __post_init__(self):
        if self.points < 3 * self.n_levels:
            raise ValidationError("probe needs at least 3 points per fitted level")
        if self.periods <= 0:
            raise ValidationError("probe periods must be positive")


@dataclass
class ScenarioConfig:
    scenario: str = "fig2_free"
    trap: TrapConfig = field(default_factory=TrapConfig)
    hilbert: HilbertSpec | None = None
    blockade: DriveSpec | None = None
    pulse_g: float = DEFAULT_G
    time_grid: TimeGrid | None = None
    shots: int | None = None
    seed: int = 0
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    ideal_mode: bool = False
    pulse_hopping: bool = True
    probe: ProbeConfig = field(default_factory=ProbeConfig)
    initial: list | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if not self.pulse_g > 0:
            raise ValidationError("pulse_g must be positive")
        if self.shots is not None and self.shots < 1 and not self.ideal_mode:
            raise ValidationError("shots must be >= 1 unless ideal_mode")

    @property
    def family(self) -> str:
        return self.scenario.split("_")[0]

    @property
    def blockade_on(self) -> bool:
        return self.scenario.endswith("_blockade") or (self.scenario == "custom" and self.blockade is not None)

    def resolved(self) -> "ScenarioConfig":
        """Copy with every scenario-dependent default filled in."""
        fam = self.family
        hilbert = self.hilbert
        levels = 3 if fam == "fig2" else 2
        if hilbert is None:
            # thermal prep can add a phonon per ion on top of the two prepared ones
            thermal = not self.ideal_mode and self.noise.enabled and self.noise.thermal and self.noise.nbar > 0
            n_max = 5 if thermal and fam == "fig2" else 4
            hilbert = HilbertSpec(self.trap.ion_count, n_max, levels)
        elif fam in ("fig2", "fig3", "fig4") and hilbert.internal_levels != levels:
            raise ValidationError(f"{self.scenario} needs internal_levels = {levels}")
        if hilbert.ion_count != self.trap.ion_count:
            raise ValidationError("hilbert.ion_count must equal trap.ion_count")
        if fam != "custom" and self.trap.ion_count != 2:
            raise ValidationError(f"{self.scenario} is a two-ion experiment")
        blockade = self.blockade
        if self.blockade_on and blockade is None:
            blockade = DriveSpec(site=1, g=DEFAULT_G, sideband="bsb")
        shots = self.shots if self.shots is not None else (500 if fam == "fig2" else 50)
        grid = self.time_grid or TimeGrid(0.0, 600e-6, 20e-6)
        if fam == "custom" and self.initial is None:
            raise ValidationError("custom scenario needs an 'initial' list of per-ion [level, n]")
        return replace(self, hilbert=hilbert, blockade=blockade, shots=shots, time_grid=grid)

    def to_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and hasattr(v, "__dataclass_fields__"):
                v = asdict(v)
            d[f.name] = v
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        nested = {
            "trap": TrapConfig,
            "hilbert": HilbertSpec,
            "blockade": DriveSpec,
            "time_grid": TimeGrid,
            "noise": NoiseConfig,
            "probe": ProbeConfig,
        }
        for key, typ in nested.items():
            if isinstance(data.get(key), dict):
                try:
                    data[key] = typ(**data[key])
                except TypeError as exc:
                    raise ValidationError(f"bad [{key}] table: {exc}") from None
        return cls(**data)


def load_config(path) -> ScenarioConfig:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"cannot parse {path}: {exc}") from None
    return ScenarioConfig.from_dict(data)


@dataclass
class TimeSeries:
    times: np.ndarray
    columns: dict
    meta: dict = field(default_factory=dict)

    def __getitem__(self, name) -> np.ndarray:
        return self.columns[name]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = list(self.columns)
        w.writerow(["time_s", *names])
        for i, t in enumerate(self.times):
            w.writerow([repr(float(t))] + [repr(float(self.columns[n][i])) for n in names])
        return buf.getvalue()


# -- noise -------------------------------------------------------------------

def pi_pulse_infidelity(rate: float, g: float, n_max: int = 3) -> float:
    """Infidelity of a lone BSB pi pulse |down,0> -> |up,1> under spin dephasing at ``rate``."""
    spec = HilbertSpec(1, n_max, 2)
    h = drive_term(spec, 0, "bsb", g)
    seg = Segment(h, math.pi / (2 * g))
    rho = propagate_lindblad(seg, dephasing_channels(spec, rate), product_state(spec, [(DOWN, 0)]))
    return float(1.0 - np.real(rho[spec.index([(UP, 1)]), spec.index([(UP, 1)])]))


def calibrate_noise(target_infidelity: float, g: float = DEFAULT_G, tol: float = 1e-4) -> float:
    """Spin-dephasing rate (1/s) giving a lone BSB pi pulse the requested infidelity."""
    if target_infidelity == 0:
        return 0.0
    if not 0 < target_infidelity < 0.5:
        raise ValidationError("target infidelity must lie in (0, 0.5)")
    lo, hi = 0.0, g
    while pi_pulse_infidelity(hi, g) < target_infidelity:
        hi *= 2
        if hi > 1e6 * g:
            raise NumericalError("target infidelity unreachable with spin dephasing")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        err = pi_pulse_infidelity(mid, g) - target_infidelity
        if abs(err) < tol:
            return mid
        if err < 0:
            lo = mid
        else:
            hi = mid
    raise NumericalError("noise calibration did not converge")


@dataclass
class _NoiseModel:
    pulse_channels: tuple = ()
    rsb_channels: tuple = ()
    thermal_p1: float = 0.0

    @property
    def active(self) -> bool:
        return bool(self.pulse_channels or self.rsb_channels)

    def channels_for(self, kind: str):
        if kind == "wait":
            return ()
        if kind == "rsb":
            return self.rsb_channels
        return self.pulse_channels

    def blockade_channels(self, drive: DriveSpec | None):
        if drive is None:
            return ()
        return self.rsb_channels if drive.sideband == "rsb" else self.pulse_channels


def _noise_model(cfg: ScenarioConfig) -> _NoiseModel:
    noise = cfg.noise
    if cfg.ideal_mode or not noise.enabled:
        return _NoiseModel()
    spec = cfg.hilbert
    pulse, rsb = (), ()
    if noise.dephasing:
        rate = noise.bsb_dephasing_rate
        if rate is None:
            rate = calibrate_noise(noise.pulse_infidelity_target, cfg.pulse_g)
        rsb_rate = rate if noise.rsb_dephasing_rate is None else noise.rsb_dephasing_rate
        if rate > 0:
            pulse = tuple(dephasing_channels(spec, rate, UP))
        if rsb_rate > 0:
            rsb = tuple(dephasing_channels(spec, rsb_rate, UP))
    p1 = noise.nbar / (1 + 2 * noise.nbar) if noise.thermal else 0.0
    return _NoiseModel(pulse, rsb, p1)


def _initial_state(spec: HilbertSpec, model: _NoiseModel, per_ion=None):
    """Ground state |down 0 ...>, or the n<=1 truncated thermal mixture when noisy."""
    if per_ion is None:
        per_ion = [(DOWN, 0)] * spec.ion_count
    psi = product_state(spec, per_ion)
    if model.thermal_p1 == 0:
        return psi
    p1 = model.thermal_p1
    rho = np.zeros((spec.dim, spec.dim), complex)
    for bits in np.ndindex((2,) * spec.ion_count):
        labels = [(lvl, n + b) for (lvl, n), b in zip(per_ion, bits)]
        weight = np.prod([p1 if b else 1 - p1 for b in bits])
        if any(n > spec.n_max for _, n in labels):
            continue
        idx = spec.index(labels)
        rho[idx, idx] += weight
    return rho / np.trace(rho).real


# -- pipelines ---------------------------------------------------------------

def _run_seq(cfg, geo, model, seq: PulseSequence, state):
    channels_for = model.channels_for if model.active else None
    if model.active and np.ndim(state) == 1:
        state = np.outer(state, state.conj())
    return apply_sequence(cfg.hilbert, geo, seq, state, cfg.pulse_hopping, channels_for)


def _map_all(cfg, geo, model, seq: PulseSequence, states):
    """Apply one pulse sequence to many states, reusing the unitary when noiseless."""
    if len(seq) == 0:
        return list(states)
    if not model.active:
        u = np.eye(cfg.hilbert.dim, dtype=complex)
        for seg in sequence_segments(cfg.hilbert, geo, seq, cfg.pulse_hopping):
            u = Propagator(seg.hamiltonian).unitary(seg.duration) @ u
        return [u @ s if np.ndim(s) == 1 else u @ s @ u.conj().T for s in states]
    stack = np.array([s if np.ndim(s) == 2 else np.outer(s, s.conj()) for s in states])
    return list(_run_seq(cfg, geo, model, seq, stack))


def _hop(cfg, geo, model, state, taus):
    spec = cfg.hilbert
    drives = [cfg.blockade] if cfg.blockade_on else []
    h = blockade_hamiltonian(spec, geo, drives)
    channels = model.blockade_channels(cfg.blockade if cfg.blockade_on else None)
    seg = Segment(h, float(taus[-1]), tuple(channels), label="hop")
    res = run_schedule([seg], initial=state, sample_times=taus)
    return res.sample_states


def _check_truncation(spec, states):
    worst = max(cutoff_population(spec, s) for s in states)
    if worst > CUTOFF_ERROR:
        raise NumericalError(
            f"population {worst:.3g} at the Fock cutoff n_max={spec.n_max}; increase n_max"
        )
    if worst > 1e-6:
        log.warning("population %.3g at the Fock cutoff n_max=%d", worst, spec.n_max)
    return worst


def _seeds(seed: int, count: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _true_pairs(spec, states):
    cols = {"true_P20": [], "true_P11": [], "true_P02": []}
    for s in states:
        j = joint_fock_populations(spec, s)
        cols["true_P20"].append(j[2, 0])
        cols["true_P11"].append(j[1, 1])
        cols["true_P02"].append(j[0, 2])
    return cols


def _fig2(cfg, geo, model, taus):
    spec = cfg.hilbert
    g = cfg.pulse_g
    start = _initial_state(spec, model)
    prepared = _run_seq(cfg, geo, model, prep_sequence("fig2", spec, geo, g), start)
    hopped = _hop(cfg, geo, model, prepared, taus)
    mapped = _map_all(cfg, geo, model, pnr_map_sequence([0, 1], g), hopped)
    states = hopped + mapped

    cols = {k: [] for k in ("P20", "P11", "P02")}
    for s in mapped:
        j = joint_pnr_probabilities(spec, s)
        cols["P20"].append(j[2, 0])
        cols["P11"].append(j[1, 1])
        cols["P02"].append(j[0, 2])
    cols.update(_true_pairs(spec, hopped))
    cols["outside_model"] = [outside_pnr_model(spec, s) for s in hopped]
    if not cfg.ideal_mode:
        sampled = {k: [] for k in ("P20_shots", "P11_shots", "P02_shots")}
        for s, rng in zip(mapped, _seeds(cfg.seed, len(mapped))):
            out = two_stage_readout(spec, s, cfg.shots, rng, flip_prob=cfg.noise.readout_flip)
            sampled["P20_shots"].append(out.probability(2, 0))
            sampled["P11_shots"].append(out.probability(1, 1))
            sampled["P02_shots"].append(out.probability(0, 2))
        for k, v in sampled.items():
            cols[k] = v
            cols[k.replace("_shots", "_sigma")] = binomial_sigma(v, cfg.shots)
    return cols, states


def _fig3(cfg, geo, model, taus):
    spec = cfg.hilbert
    g = cfg.pulse_g
    start = _initial_state(spec, model)
    prepared = _run_seq(cfg, geo, model, prep_sequence("fig3", spec, geo, g), start)
    hopped = _hop(cfg, geo, model, prepared, taus)
    readout = PulseSequence([Simultaneous((bsb(0, math.pi, g), bsb(1, math.pi, g)))], "bsb_pi_both")
    mapped = _map_all(cfg, geo, model, readout, hopped)

    cols = {
        "P_down_ion1": [spin_down_probability(spec, s, 0) for s in mapped],
        "P_down_ion2": [spin_down_probability(spec, s, 1) for s in mapped],
    }
    cols.update(_true_pairs(spec, hopped))
    cols["true_ion1_n1"] = [fock_populations(spec, s, 0)[1] for s in hopped]
    if not cfg.ideal_mode:
        rngs = _seeds(cfg.seed, len(mapped))
        for ion in (1, 2):
            p = np.clip(cols[f"P_down_ion{ion}"], 0, 1)
            k = np.array([rng.binomial(cfg.shots, pi) for rng, pi in zip(rngs, p)])
            cols[f"P_down_ion{ion}_shots"] = k / cfg.shots
            cols[f"P_down_ion{ion}_sigma"] = binomial_sigma(k / cfg.shots, cfg.shots)
    return cols, hopped + mapped


def probe_times(cfg: ScenarioConfig) -> np.ndarray:
    span = cfg.probe.periods * math.pi / cfg.pulse_g
    return np.linspace(0.0, span, cfg.probe.points)


def _fig4(cfg, geo, model, taus):
    spec = cfg.hilbert
    g = cfg.pulse_g
    nl = cfg.probe.n_levels
    start = _initial_state(spec, model)
    prepared = _run_seq(cfg, geo, model, prep_sequence("fig3", spec, geo, g), start)
    hopped = _hop(cfg, geo, model, prepared, taus)
    flip = PulseSequence([Simultaneous((carrier(0, math.pi, g), carrier(1, math.pi, g)))], "carrier_pi_both")
    flipped = _map_all(cfg, geo, model, flip, hopped)

    base = hopping_hamiltonian(spec, geo) if cfg.probe.hopping else np.zeros((spec.dim, spec.dim), complex)
    h_probe = base + drive_term(spec, 0, "bsb", g)
    tp = probe_times(cfg)
    channels = model.pulse_channels
    prop = None if channels else Propagator(h_probe)

    names = [f"p{n}" for n in range(nl)]
    cols = {f"true_{k}": [] for k in names}
    cols.update({k: [] for k in names})
    cols["fit_rms"] = []
    if not cfg.ideal_mode:
        for k in names:
            cols[f"{k}_shots"] = []
            cols[f"{k}_sigma"] = []
    fit_kw = {"g_guess": g} if cfg.probe.fit_g else {"g": g}
    rngs = _seeds(cfg.seed, len(taus))
    for i, (pre, s) in enumerate(zip(hopped, flipped)):
        true = fock_populations(spec, pre, 0)
        for n in range(nl):
            cols[f"true_p{n}"].append(true[n])
        if prop is not None:
            probed = prop.apply_many(s, tp)
        else:
            seg = Segment(h_probe, float(tp[-1]), tuple(channels), label="probe")
            probed = propagate_lindblad(seg, (), s, sample_times=tp)[1]
        trace = RabiTrace(tp, np.array([spin_down_probability(spec, x, 0) for x in probed]))
        fit = rabi_fit(trace, nl, **fit_kw)
        for n in range(nl):
            cols[f"p{n}"].append(fit.probs[n])
        cols["fit_rms"].append(fit.residual_rms)
        if not cfg.ideal_mode:
            noisy = sample_trace(trace, cfg.shots, rngs[i])
            nfit = rabi_fit(noisy, nl, **fit_kw)
            for n in range(nl):
                cols[f"p{n}_shots"].append(nfit.probs[n])
                cols[f"p{n}_sigma"].append(nfit.sigma[n])
    return cols, hopped


def _custom(cfg, geo, model, taus):
    spec = cfg.hilbert
    per_ion = [(level_index(lvl), int(n)) for lvl, n in cfg.initial]
    start = _initial_state(spec, model, per_ion)
    hopped = _hop(cfg, geo, model, start, taus)
    cols = {}
    for ion in range(spec.ion_count):
        cols[f"P_down_ion{ion + 1}"] = [spin_down_probability(spec, s, ion) for s in hopped]
        for n in range(spec.n_max + 1):
            cols[f"ion{ion + 1}_n{n}"] = [fock_populations(spec, s, ion)[n] for s in hopped]
    return cols, hopped


_PIPELINES = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "custom": _custom}


def run_scenario(config: ScenarioConfig) -> TimeSeries:
    """Run one experiment over the configured hopping-time grid."""
    cfg = config.resolved()
    geo = ChainGeometry.from_trap(cfg.trap)
    model = _noise_model(cfg)
    taus = cfg.time_grid.times()
    cols, states = _PIPELINES[cfg.family](cfg, geo, model, taus)
    cutoff = _check_truncation(cfg.hilbert, states)
    columns = {k: np.asarray(v, dtype=float) for k, v in cols.items()}
    meta = {
        "scenario": cfg.scenario,
        "kappa_rad_s": float(geo.kappa[0, 1]) if geo.ion_count > 1 else 0.0,
        "cutoff_population": float(cutoff),
        "noise_active": model.active or model.thermal_p1 > 0,
        "config": cfg.to_dict(),
    }
    return TimeSeries(taus, columns, meta)


# -- sweeps ------------------------------------------------------------------

@dataclass
class SweepTable:
    g_values: np.ndarray
    mean_leakage: np.ndarray
    max_leakage: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g_rad_s", "mean_leakage", "max_leakage"])
        for row in zip(self.g_values, self.mean_leakage, self.max_leakage):
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


def leakage(series: TimeSeries) -> np.ndarray:
    """Population that hopped away from the prepared configuration.

    fig2: 1 - P(2,0) from the readout. fig3: 1 - P(ion 1 holds one phonon);
    the undriven ion is used because the blockade beam itself flops ion 2
    between |up,1> and |down,0>.
    """
    if "P20" in series.columns:
        return 1.0 - series["P20"]
    return 1.0 - series["true_ion1_n1"]


def sweep_blockade(config: ScenarioConfig, g_values, workers: int = 1) -> SweepTable:
    """Leakage out of the prepared state versus blockade strength.

    g = 0 runs the free-hopping variant of the same experiment. Each run gets
    seed ``config.seed + index``; results keep the input order.
    """
    g_values = [float(g) for g in g_values]
    if len(g_values) < 2:
        raise ValidationError("sweep needs at least two g values")
    if any(g < 0 for g in g_values):
        raise ValidationError("g values must be >= 0")
    fam = config.family
    if fam not in ("fig2", "fig3"):
        raise ValidationError("sweeps are defined for fig2 and fig3 scenarios")
    base_drive = config.blockade or DriveSpec(site=1, g=DEFAULT_G, sideband="bsb")

    def one(item):
        idx, g = item
        if g == 0:
            cfg = replace(config, scenario=f"{fam}_free", blockade=None, seed=config.seed + idx)
        else:
            cfg = replace(config, scenario=f"{fam}_blockade", blockade=replace(base_drive, g=g),
                          seed=config.seed + idx)
        lk = leakage(run_scenario(cfg))
        return float(lk.mean()), float(lk.max())

    items = list(enumerate(g_values))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, items))
    else:
        rows = [one(it) for it in items]
    return SweepTable(np.array(g_values), np.array([r[0] for r in rows]), np.array([r[1] for r in rows]))


def sidecar_json(series: TimeSeries) -> str:
    return json.dumps(series.meta, indent=2, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


__all__ = [
    "SCENARIOS",
    "ScenarioConfig",
    "TimeGrid",
    "NoiseConfig",
    "ProbeConfig",
    "TimeSeries",
    "SweepTable",
    "run_scenario",
    "sweep_blockade",
    "calibrate_noise",
    "pi_pulse_infidelity",
    "load_config",
    "leakage",
    "sidecar_json",
    "probe_times",
]
