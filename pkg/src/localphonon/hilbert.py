"""Truncated tensor-product space of N ions, each an internal ladder times a Fock space.

Basis ordering: ion index major (ion 0 is the most significant factor of the
Kronecker product), then internal level, then Fock number. Within one ion the
local index is ``level * (n_max + 1) + n``.

Internal levels are labelled ``DOWN = 0`` (S1/2), ``UP = 1`` (D5/2, m=-1/2)
and ``E0 = 2`` (the D5/2, m=-5/2 shelving level, only present when
``internal_levels == 3``).

States are plain numpy arrays: a 1-D array is a state vector, a 2-D square
array is a density operator.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import TruncationWarning, ValidationError

DOWN, UP, E0 = 0, 1, 2
LEVEL_NAMES = {DOWN: "down", UP: "up", E0: "e0"}

CUTOFF_WARN = 1e-6

_LEVEL_ALIASES = {
    "down": DOWN, "dn": DOWN, "d": DOWN, "s": DOWN,
    "up": UP, "u": UP,
    "e0": E0, "shelf": E0,
}


def level_index(level) -> int:
    if isinstance(level, str):
        try:
            return _LEVEL_ALIASES[level.lower()]
        except KeyError:
            raise ValidationError(f"unknown internal level {level!r}") from None
    return int(level)


@dataclass(frozen=True)
class HilbertSpec:
    ion_count: int = 2
    n_max: int = 4
    internal_levels: int = 2

    def __post_init__(self):
        if int(self.ion_count) != self.ion_count or self.ion_count < 1:
            raise ValidationError("ion_count must be a positive integer")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValidationError("n_max must be a positive integer")
        if self.internal_levels not in (2, 3):
            raise ValidationError("internal_levels must be 2 or 3")

    @property
    def fock_dim(self) -> int:
        return self.n_max + 1

    @property
    def local_dim(self) -> int:
        return self.internal_levels * self.fock_dim

    @property
    def dim(self) -> int:
        return self.local_dim**self.ion_count

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.local_dim,) * self.ion_count

    def with_levels(self, internal_levels: int) -> "HilbertSpec":
        return HilbertSpec(self.ion_count, self.n_max, internal_levels)

    # -- labels ----------------------------------------------------------
    def index(self, labels) -> int:
        """Basis index of per-ion ``(level, n)`` labels."""
        if len(labels) != self.ion_count:
            raise ValidationError(f"expected {self.ion_count} per-ion labels, got {len(labels)}")
        idx = 0
        for level, n in labels:
            level = level_index(level)
            if not 0 <= level < self.internal_levels:
                raise ValidationError(f"internal level {level} out of range")
            if not 0 <= n <= self.n_max:
                raise ValidationError(f"Fock number {n} outside 0..{self.n_max}")
            idx = idx * self.local_dim + level * self.fock_dim + int(n)
        return idx

    def labels(self, index: int) -> tuple[tuple[int, int], ...]:
        if not 0 <= index < self.dim:
            raise ValidationError(f"basis index {index} out of range")
        out = []
        for _ in range(self.ion_count):
            index, local = divmod(index, self.local_dim)
            out.append(divmod(local, self.fock_dim))
        return tuple(reversed(out))

    def basis_labels(self):
        return [self.labels(i) for i in range(self.dim)]

    # -- cached diagonal tables used for fast population sums ----------------
    @cached_property
    def _label_table(self) -> np.ndarray:
        """Array of shape (dim, ion_count, 2) with (level, n) per basis state."""
        grid = np.indices(self.dims).reshape(self.ion_count, -1).T
        levels, fock = np.divmod(grid, self.fock_dim)
        return np.stack([levels, fock], axis=-1)

    def level_of(self, site: int) -> np.ndarray:
        return self._label_table[:, site, 0]

    def fock_of(self, site: int) -> np.ndarray:
        return self._label_table[:, site, 1]


# -- single-ion operators ----------------------------------------------------

def _local_annihilate(spec: HilbertSpec) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, spec.fock_dim)), k=1).astype(complex)
    return np.kron(np.eye(spec.internal_levels), a)


def _local_transition(spec: HilbertSpec, to_level: int, from_level: int) -> np.ndarray:
    t = np.zeros((spec.internal_levels, spec.internal_levels), complex)
    t[to_level, from_level] = 1.0
    return np.kron(t, np.eye(spec.fock_dim))


def local_operator(spec: HilbertSpec, kind: str, arg=None) -> np.ndarray:
    """Single-ion operator (dimension ``spec.local_dim``)."""
    if kind == "annihilate":
        return _local_annihilate(spec)
    if kind == "create":
        return _local_annihilate(spec).conj().T
    if kind == "spin_raise":
        return _local_transition(spec, UP, DOWN)
    if kind == "spin_lower":
        return _local_transition(spec, DOWN, UP)
    if kind == "transition":
        to_level, from_level = (level_index(x) for x in arg)
        if max(to_level, from_level) >= spec.internal_levels:
            raise ValidationError("transition level outside the internal space")
        return _local_transition(spec, to_level, from_level)
    if kind == "project_internal":
        level = level_index(arg)
        if not 0 <= level < spec.internal_levels:
            raise ValidationError(f"internal level {arg!r} out of range")
        return _local_transition(spec, level, level)
    if kind == "project_fock":
        n = int(arg)
        if not 0 <= n <= spec.n_max:
            raise ValidationError(f"Fock number {n} outside 0..{spec.n_max}")
        p = np.zeros((spec.fock_dim, spec.fock_dim), complex)
        p[n, n] = 1.0
        return np.kron(np.eye(spec.internal_levels), p)
    if kind == "number":
        # built directly so the diagonal is exactly 0..n_max
        return np.kron(np.eye(spec.internal_levels), np.diag(np.arange(spec.fock_dim))).astype(complex)
    raise ValidationError(f"unknown operator kind {kind!r}")


def embed(spec: HilbertSpec, site: int, local: np.ndarray) -> np.ndarray:
    """Tensor a single-ion operator into the full space at ``site``."""
    if not 0 <= site < spec.ion_count:
        raise ValidationError(f"site {site} out of range for {spec.ion_count} ions")
    left = np.eye(spec.local_dim**site)
    right = np.eye(spec.local_dim ** (spec.ion_count - site - 1))
    return np.kron(np.kron(left, local), right)


def site_operator(spec: HilbertSpec, site: int, kind: str, arg=None) -> np.ndarray:
    """Full-space operator acting as ``kind`` on ion ``site`` and identity elsewhere.

    ``kind`` is one of annihilate, create, spin_lower, spin_raise, number,
    project_internal (``arg`` = level), project_fock (``arg`` = n) or
    transition (``arg`` = (to_level, from_level)).
    """
    return embed(spec, site, local_operator(spec, kind, arg))


def total_phonon_number(spec: HilbertSpec) -> np.ndarray:
    n = sum(spec.fock_of(i) for i in range(spec.ion_count))
    return np.diag(n.astype(complex))


# -- states ------------------------------------------------------------------

def product_state(spec: HilbertSpec, per_ion) -> np.ndarray:
    """Basis vector for per-ion ``(level, n)`` labels, e.g. ``[("up", 2), ("up", 0)]``."""
    psi = np.zeros(spec.dim, complex)
    psi[spec.index(per_ion)] = 1.0
    return psi


def to_density(state) -> np.ndarray:
    state = np.asarray(state)
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return state


def is_density(state) -> bool:
    return np.ndim(state) == 2


def diagonal_populations(state) -> np.ndarray:
    """Populations of every basis state."""
    state = np.asarray(state)
    if state.ndim == 1:
        return np.abs(state) ** 2
    return np.real(np.diagonal(state)).copy()


def partial_populations(spec: HilbertSpec, state, site: int) -> np.ndarray:
    """Table ``P[level, n]`` for one ion, i.e. the diagonal of its reduced state."""
    if not 0 <= site < spec.ion_count:
        raise ValidationError(f"site {site} out of range")
    pops = diagonal_populations(state)
    table = np.zeros((spec.internal_levels, spec.fock_dim))
    np.add.at(table, (spec.level_of(site), spec.fock_of(site)), pops)
    return table


def fock_populations(spec: HilbertSpec, state, site: int) -> np.ndarray:
    """P(n) for one ion, summed over internal levels."""
    return partial_populations(spec, state, site).sum(axis=0)


def joint_fock_populations(spec: HilbertSpec, state) -> np.ndarray:
    """Joint phonon-number distribution P[n_0, n_1, ...] traced over internal levels."""
    pops = diagonal_populations(state)
    out = np.zeros((spec.fock_dim,) * spec.ion_count)
    idx = tuple(spec.fock_of(i) for i in range(spec.ion_count))
    np.add.at(out, idx, pops)
    return out


def cutoff_population(spec: HilbertSpec, state) -> float:
    """Largest single-ion population sitting in the Fock level n_max."""
    pops = diagonal_populations(state)
    return max(float(pops[spec.fock_of(i) == spec.n_max].sum()) for i in range(spec.ion_count))


def check_cutoff(spec: HilbertSpec, state, threshold: float = CUTOFF_WARN) -> float:
    p = cutoff_population(spec, state)
    if p > threshold:
        warnings.warn(
            f"population {p:.3g} at Fock cutoff n_max={spec.n_max}; increase n_max",
            TruncationWarning,
            stacklevel=3,
        )
    return p


def ptrace_keep(spec: HilbertSpec, state, site: int) -> np.ndarray:
    """Reduced density operator of a single ion."""
    rho = to_density(state).reshape(spec.dims * 2)
    n = spec.ion_count
    # move the kept ion's bra/ket axes to the front then trace the rest pairwise
    keep_ket, keep_bra = site, n + site
    others = [i for i in range(n) if i != site]
    perm = [keep_ket, keep_bra] + others + [n + i for i in others]
    rho = rho.transpose(perm)
    m = spec.local_dim ** (n - 1)
    rho = rho.reshape(spec.local_dim, spec.local_dim, m, m)
    return np.trace(rho, axis1=2, axis2=3)


def random_state(spec: HilbertSpec, rng: np.random.Generator, mixed: bool = False) -> np.ndarray:
    """Haar-like random pure state or full-rank random density operator."""
    if not mixed:
        v = rng.normal(size=spec.dim) + 1j * rng.normal(size=spec.dim)
        return v / np.linalg.norm(v)
    g = rng.normal(size=(spec.dim, spec.dim)) + 1j * rng.normal(size=(spec.dim, spec.dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def iter_product_labels(spec: HilbertSpec):
    per_ion = list(itertools.product(range(spec.internal_levels), range(spec.fock_dim)))
    return itertools.product(per_ion, repeat=spec.ion_count)
