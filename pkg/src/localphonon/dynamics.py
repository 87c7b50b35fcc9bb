"""Propagation under piecewise-constant Hamiltonians.

Closed-system evolution uses the Hermitian eigendecomposition of each
segment Hamiltonian, so it is exact up to floating point. Open-system
evolution integrates the Lindblad equation with an adaptive embedded
Runge-Kutta pair (Dormand-Prince 8(5,3) from scipy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp

from .errors import NumericalError, ValidationError
from .hilbert import check_cutoff, site_operator

# tight enough that ten hopping periods stay within 1e-8 of the exact unitary
RTOL = 1e-10
ATOL = 1e-12


@dataclass(frozen=True)
class NoiseChannel:
    collapse_operator: np.ndarray
    rate: float

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValidationError(f"noise rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class Segment:
    """Constant Hamiltonian applied for ``duration`` seconds.

    ``channels`` are noise channels active only during this segment; ``label``
    is free-form bookkeeping (e.g. ``"bsb ion0"``).
    """

    hamiltonian: np.ndarray
    duration: float
    channels: tuple = ()
    label: str = ""

    def __post_init__(self):
        if not self.duration >= 0:
            raise ValidationError(f"segment duration must be >= 0, got {self.duration}")

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


class Propagator:
    """Cached eigendecomposition of a Hermitian H for repeated exp(-iHt) evaluation."""

    def __init__(self, hamiltonian: np.ndarray, atol: float = 1e-10):
        h = np.asarray(hamiltonian)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValidationError("Hamiltonian must be a square matrix")
        scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
        if np.max(np.abs(h - h.conj().T), initial=0.0) > atol * scale:
            raise ValidationError("Hamiltonian is not Hermitian")
        self.energies, self.vectors = np.linalg.eigh(h)

    def unitary(self, t: float) -> np.ndarray:
        phases = np.exp(-1j * self.energies * t)
        return (self.vectors * phases) @ self.vectors.conj().T

    def apply(self, state: np.ndarray, t: float) -> np.ndarray:
        if t == 0:
            return np.array(state, dtype=complex, copy=True)
        phases = np.exp(-1j * self.energies * t)
        v = self.vectors
        if state.ndim == 1:
            return v @ (phases * (v.conj().T @ state))
        rho = v.conj().T @ state @ v
        rho = phases[:, None] * rho * phases.conj()[None, :]
        return v @ rho @ v.conj().T

    def apply_many(self, state: np.ndarray, times) -> list[np.ndarray]:
        """States at several times, sharing one basis change."""
        v = self.vectors
        if state.ndim == 1:
            c = v.conj().T @ state
            return [v @ (np.exp(-1j * self.energies * t) * c) for t in times]
        r = v.conj().T @ state @ v
        out = []
        for t in times:
            ph = np.exp(-1j * self.energies * t)
            out.append(v @ (ph[:, None] * r * ph.conj()[None, :]) @ v.conj().T)
        return out


def propagate_unitary(segment: Segment, state) -> np.ndarray:
    """exp(-i H t) applied to a state vector (or U rho U^dag for a density operator)."""
    state = np.asarray(state, dtype=complex)
    if segment.duration == 0:
        Propagator(segment.hamiltonian)  # validates Hermiticity
        return state.copy()
    return Propagator(segment.hamiltonian).apply(state, segment.duration)


def _lindblad_parts(hamiltonian, channels):
    """Effective non-Hermitian generator plus jump terms.

    Diagonal collapse operators are stored as vectors so the jump term
    L rho L^dag reduces to an elementwise product.
    """
    k = np.array(hamiltonian, dtype=complex)
    diag_jumps, dense_jumps = [], []
    for ch in channels:
        if ch.rate < 0:
            raise ValidationError("negative noise rate")
        if ch.rate == 0:
            continue
        op = np.asarray(ch.collapse_operator, dtype=complex)
        k = k - 0.5j * ch.rate * (op.conj().T @ op)
        d = np.diagonal(op)
        if np.count_nonzero(op - np.diag(d)) == 0:
            diag_jumps.append(math.sqrt(ch.rate) * d)
        else:
            dense_jumps.append(math.sqrt(ch.rate) * op)
    if diag_jumps:
        w = sum(np.outer(d, d.conj()) for d in diag_jumps)
    else:
        w = None
    return k, w, dense_jumps


def _left_product(k):
    """Callable rho -> k @ rho for a single or stacked rho; CSR when k is sparse."""
    if np.count_nonzero(k) > 0.1 * k.size:
        return lambda rho: k @ rho
    ks = sparse.csr_matrix(k)

    def apply(rho):
        if rho.ndim == 2:
            return ks @ rho
        b, d, _ = rho.shape
        flat = rho.transpose(1, 0, 2).reshape(d, b * d)
        return (ks @ flat).reshape(d, b, d).transpose(1, 0, 2)

    return apply


def lindblad_rhs(hamiltonian, channels):
    """Return f(rho) = -i[H, rho] + sum_k g_k (L rho L^dag - 1/2 {L^dag L, rho}).

    ``rho`` may carry a leading batch axis.
    """
    k, w, dense = _lindblad_parts(hamiltonian, channels)
    left = _left_product(k)

    def rhs(rho):
        kr = left(rho)
        # rho @ k^dag = (k @ rho^dag)^dag and rho is Hermitian only approximately,
        # so use the exact identity on rho itself
        rk = np.swapaxes(left(np.swapaxes(rho, -1, -2).conj()), -1, -2).conj()
        out = -1j * (kr - rk)
        if w is not None:
            out += w * rho
        for op in dense:
            out += op @ rho @ op.conj().T
        return out

    return rhs


def propagate_lindblad(
    segment: Segment,
    channels: Sequence[NoiseChannel],
    rho,
    rtol: float = RTOL,
    atol: float = ATOL,
    sample_times=None,
    integrate_closed: bool = False,
):
    """Integrate the Lindblad equation over one segment.

    ``rho`` may also be a stack of density operators (shape ``(B, d, d)``),
    integrated together as one system. Returns the final density operator,
    or, when ``sample_times`` (relative
    to the segment start) is given, ``(final, [rho(t) for t in sample_times])``.
    With every rate zero the exact unitary path is used unless
    ``integrate_closed`` is set.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    shape = rho.shape
    h = np.asarray(segment.hamiltonian)
    scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
    if np.max(np.abs(h - h.conj().T), initial=0.0) > 1e-10 * scale:
        raise ValidationError("Hamiltonian is not Hermitian")
    all_channels = tuple(channels) + tuple(segment.channels)
    for ch in all_channels:
        if ch.rate < 0:
            raise ValidationError("negative noise rate")

    t_end = float(segment.duration)
    samples = [] if sample_times is None else sorted(float(t) for t in sample_times)
    if samples and (samples[0] < 0 or samples[-1] > t_end):
        raise ValidationError("sample times must lie inside the segment")

    if t_end == 0:
        out = rho.copy()
        return out if sample_times is None else (out, [rho.copy() for _ in samples])

    if not integrate_closed and all(ch.rate == 0 for ch in all_channels):
        prop = Propagator(h)
        out = prop.apply(rho, t_end)
        if sample_times is None:
            return out
        return out, prop.apply_many(rho, samples)

    rhs = lindblad_rhs(h, all_channels)

    def f(_t, y):
        return rhs(y.reshape(shape)).ravel()

    t_eval = sorted(set(samples) | {t_end})
    sol = solve_ivp(
        f,
        (0.0, t_end),
        rho.ravel(),
        method="DOP853",
        t_eval=t_eval,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise NumericalError(f"Lindblad integration failed: {sol.message}")
    states = {t: sol.y[:, i].reshape(shape) for i, t in enumerate(sol.t)}
    final = states[t_eval[-1]]
    if sample_times is None:
        return final
    return final, [states[t] for t in samples]


@dataclass
class ScheduleResult:
    """States at segment boundaries (index 0 is the initial state) and at sample times."""

    boundary_times: list = field(default_factory=list)
    boundary_states: list = field(default_factory=list)
    sample_times: list = field(default_factory=list)
    sample_states: list = field(default_factory=list)
    cutoff_population: float | None = None

    @property
    def final(self):
        return self.boundary_states[-1]


def run_schedule(
    segments: Sequence[Segment],
    channels: Sequence[NoiseChannel] = (),
    initial=None,
    sample_times=(),
    rtol: float = RTOL,
    atol: float = ATOL,
    spec=None,
) -> ScheduleResult:
    """Propagate sequentially through ``segments``.

    Without any active noise, pure states stay state vectors and evolution is
    exact. ``sample_times`` are absolute times on the schedule clock. When
    ``spec`` is given the largest population at the Fock cutoff is recorded
    (and a :class:`TruncationWarning` emitted above 1e-6).
    """
    if not segments:
        raise ValidationError("schedule must contain at least one segment")
    if initial is None:
        raise ValidationError("initial state required")
    state = np.asarray(initial, dtype=complex)
    noisy = any(ch.rate > 0 for ch in channels) or any(
        ch.rate > 0 for seg in segments for ch in seg.channels
    )
    if noisy and state.ndim == 1:
        state = np.outer(state, state.conj())

    samples = sorted(float(t) for t in sample_times)
    result = ScheduleResult(boundary_times=[0.0], boundary_states=[state])
    t0 = 0.0
    k = 0
    for seg in segments:
        t1 = t0 + seg.duration
        inside = []
        while k < len(samples) and samples[k] <= t1:
            inside.append(samples[k])
            k += 1
        rel = [min(max(t - t0, 0.0), seg.duration) for t in inside]
        if noisy:
            state, got = propagate_lindblad(seg, channels, state, rtol=rtol, atol=atol, sample_times=rel)
        else:
            prop = Propagator(seg.hamiltonian)
            got = prop.apply_many(state, rel)
            state = prop.apply(state, seg.duration)
        result.sample_times.extend(inside)
        result.sample_states.extend(got)
        result.boundary_times.append(t1)
        result.boundary_states.append(state)
        t0 = t1
    if k < len(samples):
        raise ValidationError("sample times extend beyond the end of the schedule")
    if spec is not None:
        result.cutoff_population = max(
            check_cutoff(spec, s) for s in result.boundary_states + result.sample_states
        )
    return result


def expectation(op, state) -> float:
    state = np.asarray(state)
    if state.ndim == 1:
        return float(np.real(np.vdot(state, op @ state)))
    return float(np.real(np.trace(op @ state)))


def dephasing_channels(spec, rate: float, level: int = 1) -> list[NoiseChannel]:
    """Spin dephasing L = |level><level| on every ion at ``rate``."""
    return [
        NoiseChannel(site_operator(spec, i, "project_internal", level), rate)
        for i in range(spec.ion_count)
    ]
