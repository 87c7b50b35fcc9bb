"""Linear ion-chain geometry and local-phonon coupling constants.

Frequencies in :class:`TrapConfig` are ordinary frequencies (Hz). They are
converted to angular frequencies exactly once, when a :class:`ChainGeometry`
is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import CA40_ION_MASS, COULOMB_CONSTANT, ELEMENTARY_CHARGE, TWO_PI
from .errors import ConvergenceError, ValidationError


@dataclass(frozen=True)
class TrapConfig:
    ion_count: int = 2
    mass: float = CA40_ION_MASS
    charge: float = ELEMENTARY_CHARGE
    nu_x: float = 3.07e6
    nu_y: float = 2.87e6
    nu_z: float = 0.11e6

    def __post_init__(self):
        if int(self.ion_count) != self.ion_count or self.ion_count < 1:
            raise ValidationError(f"ion_count must be a positive integer, got {self.ion_count!r}")
        if not self.mass > 0:
            raise ValidationError("mass must be positive")
        if not self.charge > 0:
            raise ValidationError("charge must be positive")
        for name in ("nu_x", "nu_y", "nu_z"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if not (self.nu_z < self.nu_x and self.nu_z < self.nu_y):
            raise ValidationError("linear chain requires nu_z < nu_x and nu_z < nu_y")

    @property
    def omega_y(self) -> float:
        return TWO_PI * self.nu_y

    @property
    def omega_z(self) -> float:
        return TWO_PI * self.nu_z

    @property
    def coulomb(self) -> float:
        """q^2 / (4 pi eps0) for this ion species."""
        return COULOMB_CONSTANT * (self.charge / ELEMENTARY_CHARGE) ** 2

    def length_scale(self) -> float:
        """Characteristic axial length (q^2 / (4 pi eps0 m w_z^2))^(1/3)."""
        return (self.coulomb / (self.mass * self.omega_z**2)) ** (1.0 / 3.0)


@dataclass(frozen=True)
class ChainGeometry:
    positions: np.ndarray
    kappa: np.ndarray
    site_shift: np.ndarray
    trap: TrapConfig | None = field(default=None, compare=False)

    @property
    def ion_count(self) -> int:
        return len(self.positions)

    @classmethod
    def from_trap(cls, trap: TrapConfig) -> "ChainGeometry":
        pos = equilibrium_positions(trap)
        kappa = coupling_matrix(pos, trap)
        return cls(positions=pos, kappa=kappa, site_shift=site_shifts(kappa), trap=trap)

    @classmethod
    def from_kappa(cls, kappa, positions=None) -> "ChainGeometry":
        """Geometry with prescribed hopping rates (rad/s); useful for toy chains."""
        kappa = np.array(kappa, dtype=float)
        if kappa.ndim == 0:
            kappa = np.array([[0.0, float(kappa)], [float(kappa), 0.0]])
        n = kappa.shape[0]
        if positions is None:
            positions = np.arange(n, dtype=float) - (n - 1) / 2
        return cls(positions=np.asarray(positions, float), kappa=kappa, site_shift=site_shifts(kappa))

    def to_dict(self) -> dict:
        out = {
            "positions_m": self.positions.tolist(),
            "separations_m": np.diff(self.positions).tolist(),
            "kappa_rad_s": self.kappa.tolist(),
            "kappa_hz": (self.kappa / TWO_PI).tolist(),
            "site_shift_rad_s": self.site_shift.tolist(),
        }
        if self.trap is not None:
            t = self.trap
            out["trap"] = {
                "ion_count": t.ion_count,
                "mass": t.mass,
                "charge": t.charge,
                "nu_x": t.nu_x,
                "nu_y": t.nu_y,
                "nu_z": t.nu_z,
            }
        return out


def _scaled_gradient(u):
    # d/du_m of sum_m u_m^2/2 + sum_{m<n} 1/|u_m - u_n|
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, np.inf)
    return u - np.sum(np.sign(diff) / diff**2, axis=1)


def _scaled_hessian(u):
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, np.inf)
    off = -2.0 / np.abs(diff) ** 3
    hess = off.copy()
    np.fill_diagonal(hess, 0.0)
    hess[np.diag_indices_from(hess)] = 1.0 + 2.0 * np.sum(1.0 / np.abs(diff) ** 3, axis=1)
    return hess


def _scaled_energy(u):
    diff = np.abs(u[:, None] - u[None, :])
    iu = np.triu_indices(len(u), 1)
    return 0.5 * np.sum(u**2) + np.sum(1.0 / diff[iu])


def equilibrium_positions(trap: TrapConfig, tol: float = 1e-13, max_iter: int = 100) -> np.ndarray:
    """Axial equilibrium positions (m) of the chain, centered and ascending.

    Damped Newton iteration on the dimensionless force balance, seeded with a
    uniform chain at the known minimum spacing ~2.018 N^-0.559.
    """
    n = int(trap.ion_count)
    if n < 1:
        raise ValidationError("ion_count must be >= 1")
    if n == 1:
        return np.zeros(1)

    spacing = 2.018 * n**-0.559
    u = (np.arange(n) - (n - 1) / 2.0) * spacing
    for _ in range(max_iter):
        grad = _scaled_gradient(u)
        if np.linalg.norm(grad) < tol:
            break
        step = np.linalg.solve(_scaled_hessian(u), grad)
        energy = _scaled_energy(u)
        lam = 1.0
        while lam > 1e-8:
            trial = u - lam * step
            if np.all(np.diff(trial) > 0) and _scaled_energy(trial) <= energy + 1e-14:
                break
            lam *= 0.5
        u = trial
    else:
        raise ConvergenceError(f"equilibrium search did not converge in {max_iter} iterations")

    u = np.sort(u - u.mean())
    return u * trap.length_scale()


def coupling_matrix(positions, trap: TrapConfig) -> np.ndarray:
    """Hopping rates kappa_ij = q^2 / (4 pi eps0 m d_ij^3 w_y), in rad/s."""
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 1:
        raise ValidationError("positions must be one-dimensional")
    if np.any(np.diff(pos) <= 0):
        raise ValidationError("positions must be strictly increasing (no coincident ions)")
    d = np.abs(pos[:, None] - pos[None, :])
    np.fill_diagonal(d, np.inf)
    kappa = trap.coulomb / (trap.mass * d**3 * trap.omega_y)
    np.fill_diagonal(kappa, 0.0)
    return kappa


def site_shifts(kappa) -> np.ndarray:
    """omega_i = -1/2 sum_{j != i} kappa_ij."""
    kappa = np.asarray(kappa, dtype=float)
    if kappa.ndim != 2 or kappa.shape[0] != kappa.shape[1]:
        raise ValidationError("kappa must be a square matrix")
    if not np.allclose(kappa, kappa.T, rtol=1e-12, atol=0):
        raise ValidationError("kappa must be symmetric")
    if np.any(np.diag(kappa) != 0):
        raise ValidationError("kappa must have a zero diagonal")
    return -0.5 * kappa.sum(axis=1)


def two_ion_separation(trap: TrapConfig) -> float:
    """Closed-form N=2 separation 2^(1/3) * length_scale."""
    return 2.0 ** (1.0 / 3.0) * trap.length_scale()


def max_scaled_gradient(positions, trap: TrapConfig) -> float:
    return float(np.max(np.abs(_scaled_gradient(np.asarray(positions) / trap.length_scale())), initial=0.0))


__all__ = [
    "TrapConfig",
    "ChainGeometry",
    "equilibrium_positions",
    "coupling_matrix",
    "site_shifts",
    "two_ion_separation",
    "max_scaled_gradient",
]
