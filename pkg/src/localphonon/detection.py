"""Measurement emulation: phonon-number-resolving readout, spin-down probability,
blue-sideband Rabi traces and their inversion into Fock populations.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import RabiFitError, ValidationError
from .hilbert import DOWN, E0, UP, HilbertSpec, diagonal_populations, partial_populations
from .pulses import PulseSequence, Simultaneous, bsb, carrier, composite_cp, shelve

CLASS_LABELS = ("n0", "n1", "n2")


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# -- phonon-number-resolving protocol -------------------------------------------

def pnr_map_sequence(ion, g: float) -> PulseSequence:
    """Composite BSB, carrier pi, shelve pi, BSB pi.

    Maps |up,0>, |up,1>, |up,2> to |e0>, |up,0>, |down,0>. ``ion`` may be a
    list, in which case every step is applied to all listed ions at once.
    """
    ions = [ion] if isinstance(ion, (int, np.integer)) else list(ion)
    if not g > 0:
        raise ValidationError("g must be positive")
    steps = [[bsb(i, p.theta, g, p.phi) for i in ions] for p in composite_cp(ions[0], g).items]
    steps.append([carrier(i, math.pi, g) for i in ions])
    steps.append([shelve(i, math.pi, g) for i in ions])
    steps.append([bsb(i, math.pi, g) for i in ions])
    items = [s[0] if len(s) == 1 else Simultaneous(tuple(s)) for s in steps]
    return PulseSequence(items, name="pnr_map")


def _require_three_levels(spec: HilbertSpec):
    if spec.internal_levels != 3:
        raise ValidationError("phonon-number-resolving readout needs internal_levels = 3")


def pnr_probabilities(spec: HilbertSpec, state, ion: int) -> np.ndarray:
    """Classification probabilities (n0, n1, n2) of a mapped state under exact readout.

    n2 <=> bright in the first detection (|down> manifold), n0 <=> bright
    after de-shelving (|e0>), n1 <=> dark twice (|up>).
    """
    _require_three_levels(spec)
    table = partial_populations(spec, state, ion).sum(axis=1)
    return np.array([table[E0], table[UP], table[DOWN]])


def _manifold_distribution(spec: HilbertSpec, state, ions) -> np.ndarray:
    pops = diagonal_populations(state)
    out = np.zeros((spec.internal_levels,) * len(ions))
    np.add.at(out, tuple(spec.level_of(i) for i in ions), pops)
    return np.clip(out, 0.0, None)


_LEVEL_TO_CLASS = {E0: 0, UP: 1, DOWN: 2}


def joint_pnr_probabilities(spec: HilbertSpec, state, ions=(0, 1)) -> np.ndarray:
    """Joint exact classification table P[class_ion_a, class_ion_b, ...]."""
    _require_three_levels(spec)
    levels = _manifold_distribution(spec, state, ions)
    order = [E0, UP, DOWN]
    return levels[np.ix_(*[order] * len(ions))]


@dataclass
class PnrOutcome:
    """Per-shot classifications (shots x ions, values 0/1/2 for n0/n1/n2) and joint counts."""

    classes: np.ndarray
    counts: np.ndarray

    @property
    def shots(self) -> int:
        return int(self.classes.shape[0])

    def probability(self, *numbers) -> float:
        """Empirical frequency of the joint outcome, e.g. ``probability(2, 0)``."""
        return float(self.counts[tuple(numbers)]) / self.shots

    def labels(self):
        for idx in np.ndindex(self.counts.shape):
            yield "".join(str(i) for i in idx), int(self.counts[idx])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["outcome", "count"])
        for label, count in self.labels():
            w.writerow([label, count])
        return buf.getvalue()


def two_stage_readout(
    spec: HilbertSpec,
    state,
    shots: int,
    seed=None,
    ions=(0, 1),
    flip_prob: float = 0.0,
) -> PnrOutcome:
    """Sample the two fluorescence stages shot by shot.

    ``flip_prob`` is a symmetric bright/dark misidentification probability
    applied independently to each detection stage.
    """
    _require_three_levels(spec)
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    if not 0 <= flip_prob <= 1:
        raise ValidationError("flip_prob must be in [0, 1]")
    ions = tuple(ions)
    rng = _rng(seed)
    dist = _manifold_distribution(spec, state, ions).ravel()
    dist = dist / dist.sum()
    draws = rng.choice(dist.size, size=shots, p=dist)
    levels = np.stack(np.unravel_index(draws, (spec.internal_levels,) * len(ions)), axis=1)

    bright1 = levels == DOWN
    bright2 = levels == E0  # de-shelve swaps e0 and down
    if flip_prob > 0:
        bright1 ^= rng.random(levels.shape) < flip_prob
        bright2 ^= rng.random(levels.shape) < flip_prob
    classes = np.where(bright1, 2, np.where(bright2, 0, 1))
    counts = np.zeros((3,) * len(ions), dtype=int)
    np.add.at(counts, tuple(classes.T), 1)
    return PnrOutcome(classes=classes, counts=counts)


def spin_down_probability(spec: HilbertSpec, state, ion: int) -> float:
    """|<down|psi_ion>|^2 summed over Fock numbers."""
    return float(partial_populations(spec, state, ion)[DOWN].sum())


def outside_pnr_model(spec: HilbertSpec, state, ions=(0, 1), n_top: int = 2) -> float:
    """Population the readout model ignores: anything not in |up, n <= n_top> on every ion."""
    pops = diagonal_populations(state)
    inside = np.ones(spec.dim, bool)
    for i in ions:
        inside &= (spec.level_of(i) == UP) & (spec.fock_of(i) <= n_top)
    return float(max(0.0, 1.0 - pops[inside].sum()))


# -- Rabi traces ---------------------------------------------------------------

@dataclass(frozen=True)
class FockDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or p.size == 0:
            raise ValidationError("Fock distribution must be a non-empty vector")
        if np.any(p < -1e-12):
            raise ValidationError("Fock probabilities must be non-negative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValidationError(f"Fock probabilities must sum to 1, got {p.sum()!r}")

    def __getitem__(self, n):
        return self.probs[n]

    def __len__(self):
        return len(self.probs)


@dataclass
class RabiTrace:
    times: np.ndarray
    p_down: np.ndarray
    shots: int = 0
    sigma: np.ndarray | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.p_down = np.asarray(self.p_down, dtype=float)
        if self.times.shape != self.p_down.shape:
            raise ValidationError("times and p_down must have equal length")
        if self.sigma is None:
            self.sigma = binomial_sigma(self.p_down, self.shots)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time_s", "p_down", "sigma", "shots"])
        for t, p, s in zip(self.times, self.p_down, self.sigma):
            w.writerow([repr(float(t)), repr(float(p)), repr(float(s)), self.shots])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RabiTrace":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValidationError("empty Rabi trace")
        times = [float(r["time_s"]) for r in rows]
        p = [float(r["p_down"]) for r in rows]
        shots = int(rows[0].get("shots") or 0)
        sigma = [float(r["sigma"]) for r in rows] if "sigma" in rows[0] else None
        return cls(np.array(times), np.array(p), shots, None if sigma is None else np.array(sigma))


def binomial_sigma(p, shots: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if shots <= 0:
        return np.zeros_like(p)
    return np.sqrt(np.clip(p * (1 - p), 0.0, None) / shots)


def rabi_design(times, g: float, gamma: float, n_levels: int) -> np.ndarray:
    """Column n: P_down(t) for a BSB flop started in |down, n>."""
    t = np.asarray(times, dtype=float)[:, None]
    s = np.sqrt(np.arange(1, n_levels + 1))[None, :]
    return 0.5 * (1.0 + np.cos(2.0 * g * s * t) * np.exp(-gamma * s * t))


def rabi_forward(dist: FockDistribution, g: float, gamma: float, times) -> RabiTrace:
    """Noiseless P_down(t) = sum_n p_n (1 + cos(2 g sqrt(n+1) t) exp(-gamma sqrt(n+1) t)) / 2."""
    if gamma < 0:
        raise ValidationError("gamma must be >= 0")
    if not g > 0:
        raise ValidationError("g must be positive")
    if not isinstance(dist, FockDistribution):
        dist = FockDistribution(dist)
    a = rabi_design(times, g, gamma, len(dist))
    return RabiTrace(np.asarray(times, float), a @ dist.probs)


def sample_trace(trace: RabiTrace, shots: int, seed=None) -> RabiTrace:
    """Binomial shot sampling of an exact trace."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    rng = _rng(seed)
    k = rng.binomial(shots, np.clip(trace.p_down, 0.0, 1.0))
    return RabiTrace(trace.times.copy(), k / shots, shots)


# -- simplex-constrained least squares -----------------------------------------

def _eqp(ata, aty, free):
    """min p^T ata p - 2 aty^T p  s.t. sum(p[free]) = 1, p[~free] = 0."""
    idx = np.flatnonzero(free)
    k = len(idx)
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = 2 * ata[np.ix_(idx, idx)]
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.concatenate([2 * aty[idx], [1.0]])
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    p = np.zeros(len(free))
    p[idx] = sol[:k]
    return p, sol[k]


def simplex_lstsq(a, y, tol: float = 1e-12, max_iter: int = 200):
    """Least squares ``min ||a p - y||`` over the probability simplex.

    Primal active-set method: constraints p_i >= 0 enter the working set when
    they block a step and leave it when their multiplier turns negative.
    Returns ``(p, residual_norm)``.
    """
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    n = a.shape[1]
    ata = a.T @ a
    aty = a.T @ y
    x = np.full(n, 1.0 / n)
    free = np.ones(n, bool)
    scale = max(1.0, float(np.abs(ata).max(initial=0.0)))
    released = -1
    for _ in range(max_iter):
        p, lam = _eqp(ata, aty, free)
        d = p - x
        if np.max(np.abs(d)) <= 1e-14:
            grad = 2 * (ata @ x - aty)
            mu = grad - lam
            mu[free] = 0.0
            j = int(np.argmin(mu))
            if mu[j] >= -tol * scale:
                break
            free[j] = True
            released = j
            continue
        blocking = free & (d < 0)
        alpha, j = 1.0, -1
        if np.any(blocking):
            ratios = np.where(blocking, -x / np.where(blocking, d, -1.0), np.inf)
            j = int(np.argmin(ratios))
            alpha = min(1.0, ratios[j])
        if alpha <= 0.0 and j == released:
            # rounding noise: the released bound is not really violated
            free[j] = False
            break
        released = -1
        x = x + alpha * d
        if alpha < 1.0:
            x[j] = 0.0
            free[j] = False
    else:
        raise RabiFitError("simplex least squares did not converge")
    x = np.clip(x, 0.0, None)
    x /= x.sum()
    return x, float(np.linalg.norm(a @ x - y))


# -- fitting --------------------------------------------------------------------

@dataclass
class RabiFit:
    distribution: FockDistribution
    g: float
    gamma: float
    residual_rms: float
    condition: float
    low_confidence: bool
    identifiable: bool
    sigma: np.ndarray = field(default_factory=lambda: np.zeros(0))
    notes: list = field(default_factory=list)

    @property
    def probs(self) -> np.ndarray:
        return self.distribution.probs


def _profile(trace, n_levels, g, gamma):
    a = rabi_design(trace.times, g, gamma, n_levels)
    p, r = simplex_lstsq(a, trace.p_down)
    return p, r, a


def _batched_equality_residual(trace, n_levels, g_values, gamma_values):
    """Residuals of sum-to-one least squares (positivity ignored) for many (g, gamma)."""
    t = trace.times[None, :, None]
    s = np.sqrt(np.arange(1, n_levels + 1))[None, None, :]
    a = 0.5 * (1.0 + np.cos(2.0 * g_values[:, None, None] * s * t) * np.exp(-gamma_values[:, None, None] * s * t))
    y = trace.p_down
    ata = np.einsum("bti,btj->bij", a, a)
    aty = np.einsum("bti,t->bi", a, y)
    k = n_levels
    kkt = np.zeros((len(g_values), k + 1, k + 1))
    kkt[:, :k, :k] = 2 * ata
    kkt[:, :k, k] = 1.0
    kkt[:, k, :k] = 1.0
    kkt[:, k, k] = 0.0
    rhs = np.concatenate([2 * aty, np.ones((len(g_values), 1))], axis=1)
    # tiny ridge keeps collinear candidates solvable
    kkt[:, :k, :k] += 1e-12 * np.eye(k)
    sol = np.linalg.solve(kkt, rhs[..., None])[..., 0][:, :k]
    res = np.einsum("bti,bi->bt", a, sol) - y
    return np.sum(res**2, axis=1)


def rabi_fit(
    trace: RabiTrace,
    n_levels: int = 3,
    g_guess: float | None = None,
    g: float | None = None,
    gamma: float | None = None,
    residual_threshold: float | None = None,
) -> RabiFit:
    """Fock populations from a BSB Rabi trace started in |down, n>.

    Stage one searches (g, gamma) on the profiled residual, i.e. the residual
    of the best simplex-constrained population vector at that (g, gamma); a
    grid scan is refined by Nelder-Mead. Stage two solves for the
    populations at the optimum. ``g`` / ``gamma`` pin a parameter instead of
    fitting it; ``g_guess`` narrows the search to +-30 %.
    """
    times = trace.times
    if n_levels < 1:
        raise ValidationError("n_levels must be >= 1")
    if len(times) < 3 * n_levels:
        raise ValidationError(f"need at least {3 * n_levels} time points for {n_levels} levels")
    span = float(times.max() - times.min())
    if span <= 0:
        raise ValidationError("time points must span a non-zero interval")
    if gamma is not None and gamma < 0:
        raise ValidationError("gamma must be >= 0")

    dt = float(np.min(np.diff(np.unique(times))))
    root_n = math.sqrt(n_levels)
    if g is not None:
        g_grid = np.array([float(g)])
    elif g_guess is not None:
        g_grid = np.linspace(0.7 * g_guess, 1.3 * g_guess, 241)
    else:
        g_lo = 0.5 * math.pi / span
        g_hi = math.pi / (2 * root_n * dt)
        count = int(min(20000, max(200, math.ceil((g_hi - g_lo) * 8 * root_n * span))))
        g_grid = np.linspace(g_lo, g_hi, count)
    ratios = (0.0,) if gamma is not None and gamma == 0 else (0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0)

    def gamma_of(gv, c):
        return float(gamma) if gamma is not None else c * gv

    cand_g = np.repeat(g_grid, len(ratios))
    cand_c = np.tile(np.array(ratios), len(g_grid))
    cand_gamma = np.full_like(cand_g, float(gamma)) if gamma is not None else cand_c * cand_g
    screen = _batched_equality_residual(trace, n_levels, cand_g, cand_gamma)
    best = (np.inf, None, None)
    for k in np.argsort(screen)[:40]:
        _, r, _ = _profile(trace, n_levels, cand_g[k], cand_gamma[k])
        if r < best[0]:
            best = (r, cand_g[k], cand_c[k])
    _, g0, c0 = best

    free = []
    if g is None:
        free.append("g")
    if gamma is None:
        free.append("c")
    g_fit, c_fit = g0, c0
    if free:
        x0 = np.array([g0 / g0 if k == "g" else c0 for k in free])

        def objective(x):
            vals = dict(zip(free, x))
            gv = g0 * vals.get("g", 1.0)
            c = vals.get("c", c0)
            if gv <= 0 or c < 0 or c > 10:
                return np.inf
            return _profile(trace, n_levels, gv, gamma_of(gv, c))[1] ** 2

        res = minimize(
            objective, x0, method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": 1e-16,
                "maxiter": 4000,
                "initial_simplex": np.vstack([x0, x0 + 0.01 * np.eye(len(x0))]),
            },
        )
        if np.isfinite(res.fun) and res.fun <= best[0] ** 2:
            vals = dict(zip(free, res.x))
            g_fit = g0 * vals.get("g", 1.0)
            c_fit = vals.get("c", c0)
    gamma_fit = gamma_of(g_fit, c_fit)
    p, r, a = _profile(trace, n_levels, g_fit, gamma_fit)
    rms = r / math.sqrt(len(times))

    sv = np.linalg.svd(a - a.mean(axis=0), compute_uv=False) if n_levels > 1 else np.array([1.0])
    condition = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    decayed = gamma_fit * span > 5.0
    notes = []
    if condition > 1e10 and not decayed:
        raise RabiFitError(
            "design matrix is degenerate: the probe grid aliases the Rabi frequencies "
            f"(condition number {condition:.3g})"
        )
    identifiable = condition < 1e6 and not decayed
    if not identifiable:
        notes.append("oscillation decayed or columns collinear; populations unidentifiable")

    if residual_threshold is None:
        noise = float(np.sqrt(np.mean(trace.p_down * (1 - trace.p_down) / trace.shots))) if trace.shots else 0.0
        residual_threshold = 3 * noise + 0.01
    low_confidence = (not identifiable) or rms > residual_threshold
    if rms > residual_threshold:
        notes.append(f"rms residual {rms:.3g} above threshold {residual_threshold:.3g}")
    if span < math.pi / g_fit:
        low_confidence = True
        notes.append("trace shorter than one ground-state Rabi period")

    sigma = _population_sigma(a, p, trace)
    return RabiFit(
        distribution=FockDistribution(p),
        g=float(g_fit),
        gamma=float(gamma_fit),
        residual_rms=float(rms),
        condition=condition,
        low_confidence=bool(low_confidence),
        identifiable=bool(identifiable),
        sigma=sigma,
        notes=notes,
    )


def _population_sigma(a, p, trace: RabiTrace) -> np.ndarray:
    """Linearised 1-sigma errors of the populations on the active face of the simplex."""
    n = a.shape[1]
    if not trace.shots:
        return np.zeros(n)
    var = np.clip(trace.p_down * (1 - trace.p_down), 0.25 / trace.shots, None) / trace.shots
    free = np.flatnonzero(p > 1e-9)
    out = np.zeros(n)
    if len(free) <= 1:
        return out
    af = a[:, free] / np.sqrt(var)[:, None]
    # basis of {x : sum x = 0} on the free set
    z = np.linalg.svd(np.ones((1, len(free))))[2][1:].T
    m = z.T @ af.T @ af @ z
    try:
        cov = z @ np.linalg.inv(m) @ z.T
    except np.linalg.LinAlgError:
        return np.full(n, np.nan)
    out[free] = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return out
