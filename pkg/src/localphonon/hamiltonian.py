"""Rotating-frame Hamiltonians for hopping local phonons and sideband drives.

All Hamiltonians are in the frame where the radial secular frequency and the
laser detunings have been removed, hbar = 1, energies in rad/s.

Drive phase convention: the phase factor exp(i*phi) multiplies the
spin-raising half of the coupling, e.g. for the blue sideband
``g (exp(i phi) a^dag sigma^+ + exp(-i phi) a sigma^-)``. With phi = 0 this
is the literal anti-JC (blue) or JC (red) coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainGeometry
from .errors import ValidationError
from .hilbert import DOWN, E0, UP, HilbertSpec, embed, local_operator

SIDEBANDS = ("rsb", "bsb")
TRANSITIONS = ("carrier", "shelve", "bsb", "rsb")


@dataclass(frozen=True)
class DriveSpec:
    site: int
    g: float
    detuning: float = 0.0
    sideband: str = "bsb"
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sideband", self.sideband.lower())
        if self.sideband not in SIDEBANDS:
            raise ValidationError(f"sideband must be one of {SIDEBANDS}, got {self.sideband!r}")
        if not self.g >= 0:
            raise ValidationError("drive strength g must be >= 0")


@dataclass(frozen=True)
class JcLevel:
    n: int
    branch: str
    energy: float


def is_hermitian(op, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) <= atol)


def hopping_hamiltonian(spec: HilbertSpec, geometry: ChainGeometry) -> np.ndarray:
    """sum_i w_i a_i^dag a_i + sum_{i<j} (kappa_ij / 2)(a_i a_j^dag + h.c.)."""
    if spec.ion_count != geometry.ion_count:
        raise ValidationError(
            f"Hilbert space has {spec.ion_count} ions but geometry has {geometry.ion_count}"
        )
    a = [embed(spec, i, local_operator(spec, "annihilate")) for i in range(spec.ion_count)]
    h = np.zeros((spec.dim, spec.dim), complex)
    for i, ai in enumerate(a):
        h += geometry.site_shift[i] * (ai.conj().T @ ai)
    for i in range(spec.ion_count):
        for j in range(i + 1, spec.ion_count):
            hop = 0.5 * geometry.kappa[i, j] * (a[i] @ a[j].conj().T)
            h += hop + hop.conj().T
    return h


def drive_term(
    spec: HilbertSpec,
    site: int,
    transition: str,
    g: float,
    phase: float = 0.0,
    detuning: float = 0.0,
) -> np.ndarray:
    """Single-ion drive Hamiltonian (full space) for one laser transition.

    ``transition``:
      * ``bsb``: g(e^{i phi} a^dag sigma^+ + h.c.) + detuning |down><down|
      * ``rsb``: g(e^{i phi} a sigma^+ + h.c.) + detuning |up><up|
      * ``carrier``: g(e^{i phi} sigma^+ + h.c.) + detuning |up><up|
      * ``shelve``: g(e^{i phi} |e0><down| + h.c.) + detuning |e0><e0|
    """
    transition = transition.lower()
    a = local_operator(spec, "annihilate")
    raise_ = local_operator(spec, "spin_raise")
    if transition == "bsb":
        coupling = a.conj().T @ raise_
        shift = local_operator(spec, "project_internal", DOWN)
    elif transition == "rsb":
        coupling = a @ raise_
        shift = local_operator(spec, "project_internal", UP)
    elif transition == "carrier":
        coupling = raise_
        shift = local_operator(spec, "project_internal", UP)
    elif transition == "shelve":
        if spec.internal_levels < 3:
            raise ValidationError("shelving needs internal_levels = 3")
        coupling = local_operator(spec, "transition", (E0, DOWN))
        shift = local_operator(spec, "project_internal", E0)
    else:
        raise ValidationError(f"unknown transition {transition!r}")
    c = g * np.exp(1j * phase) * coupling
    local = c + c.conj().T + detuning * shift
    return embed(spec, site, local)


def blockade_hamiltonian(spec: HilbertSpec, geometry: ChainGeometry, drives) -> np.ndarray:
    """Hopping Hamiltonian plus resonant (or detuned) sideband drives, one per site."""
    h = hopping_hamiltonian(spec, geometry)
    seen = set()
    for d in drives:
        if not 0 <= d.site < spec.ion_count:
            raise ValidationError(f"drive on site {d.site} outside the chain")
        if d.site in seen:
            raise ValidationError(f"more than one drive on site {d.site}")
        seen.add(d.site)
        h = h + drive_term(spec, d.site, d.sideband, d.g, d.phase, d.detuning)
    return h


def excitation_operator(spec: HilbertSpec, sideband: str = "rsb") -> np.ndarray:
    """Conserved excitation counter: total phonons plus spins in |up> (RSB) or |down> (BSB)."""
    level = UP if sideband.lower() == "rsb" else DOWN
    diag = np.zeros(spec.dim)
    for i in range(spec.ion_count):
        diag += spec.fock_of(i) + (spec.level_of(i) == level)
    return np.diag(diag.astype(complex))


def spin_flip(spec: HilbertSpec) -> np.ndarray:
    """Global permutation exchanging |down> and |up> on every ion."""
    perm = np.eye(spec.internal_levels)
    perm[[DOWN, UP]] = perm[[UP, DOWN]]
    local = np.kron(perm, np.eye(spec.fock_dim))
    out = np.eye(1)
    for _ in range(spec.ion_count):
        out = np.kron(out, local)
    return out.astype(complex)


def jc_energies(omega_i: float, g: float, n: int) -> tuple[float, float]:
    """Resonant JC ladder energies E_+-(n) = n w_i +- g sqrt(n)."""
    if n < 0:
        raise ValidationError("excitation number must be >= 0")
    root = math.sqrt(n)
    return n * omega_i + g * root, n * omega_i - g * root


def jc_gap(omega_i: float, g: float, n: int) -> tuple[float, float]:
    """Spacing E(n+1) - E(n) on each branch: w_i +- g (sqrt(n+1) - sqrt(n))."""
    if n < 0:
        raise ValidationError("excitation number must be >= 0")
    delta = math.sqrt(n + 1) - math.sqrt(n)
    return omega_i + g * delta, omega_i - g * delta


def jc_levels(omega_i: float, g: float, n_max: int) -> list[JcLevel]:
    out = []
    for n in range(n_max + 1):
        plus, minus = jc_energies(omega_i, g, n)
        out.append(JcLevel(n, "+", plus))
        out.append(JcLevel(n, "-", minus))
    return out
