"""One-qubit Bloch-ball picture.

``to_bloch``/``from_bloch`` realise the isometry between one-qubit states and
the closed unit ball of R^3: ``rho(p, alpha)`` maps to
``(2 Re alpha, 2 Im alpha, 2p - 1)`` and trace-norm distance between states is
the Euclidean distance between their Bloch vectors (up to the factor 2 handled
by the state-space formula).  Unitary one-qubit channels act as rotations of
the ball; ``affine_of_channel`` extracts the affine action of an arbitrary
channel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, zeta

BALL_TOL = 1e-12


def to_bloch(rho: DensityMatrix) -> np.ndarray:
    """Bloch vector (2 Re alpha, 2 Im alpha, 2p - 1) of a one-qubit state."""
    if rho.n != 1:
        raise ValueError(f"Bloch coordinates need a one-qubit state, got n={rho.n}")
    alpha = rho.matrix[1, 0]
    p = float(np.real(rho.matrix[0, 0]))
    return np.array([2.0 * alpha.real, 2.0 * alpha.imag, 2.0 * p - 1.0])


def from_bloch(v) -> DensityMatrix:
    """State with the given Bloch vector; the vector must lie in the unit ball."""
    vec = np.asarray(v, dtype=float).reshape(-1)
    if vec.shape != (3,):
        raise ValueError(f"Bloch vector must have three components, got {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if norm > 1.0 + BALL_TOL:
        raise ValueError(f"Bloch vector norm {norm:.15g} exceeds 1")
    x, y, z = vec
    arr = 0.5 * np.array(
        [[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]], dtype=complex
    )
    return DensityMatrix(arr, validate=False)


def rotation_unitary(alpha: float, theta: float, phi: float) -> np.ndarray:
    """Unitary fixing the axis state psi(theta, phi) and phasing its complement.

    psi = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> is fixed and the
    orthogonal state picks up the phase e^{i alpha}.  On the Bloch ball this is
    the rotation by angle alpha about the axis through psi.  For theta = 0 the
    result is the phase gate diag(1, e^{i alpha}), independent of phi.
    """
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    e = cmath.exp(1j * phi)
    psi = np.array([c, e * s], dtype=complex)
    perp = np.array([s, -e * c], dtype=complex)
    return np.outer(psi, psi.conj()) + cmath.exp(1j * alpha) * np.outer(
        perp, perp.conj()
    )


@dataclass(frozen=True)
class BlochAffine:
    """Affine map v -> linear @ v + offset on R^3."""

    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float)
        off = np.array(self.offset, dtype=float).reshape(-1)
        if lin.shape != (3, 3) or off.shape != (3,):
            raise ValueError("affine map needs a 3x3 linear part and a 3-offset")
        lin.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    def __call__(self, v) -> np.ndarray:
        return self.linear @ np.asarray(v, dtype=float) + self.offset

    def is_rotation(self, tol: float = 1e-10) -> bool:
        orth = np.abs(self.linear.T @ self.linear - np.eye(3)).max()
        return (
            orth <= tol
            and abs(np.linalg.det(self.linear) - 1.0) <= tol
            and np.abs(self.offset).max() <= tol
        )


def affine_of_channel(channel) -> BlochAffine:
    """Affine Bloch action of a one-qubit channel.

    Extracted from the images of the maximally mixed state (giving the offset)
    and of the three positive axis states (giving the linear columns).
    """
    if channel.n != 1:
        raise ValueError(f"Bloch action needs a one-qubit channel, got n={channel.n}")
    center = DensityMatrix(np.eye(2) / 2.0, validate=False)
    offset = to_bloch(channel.apply(center))
    cols = [to_bloch(channel.apply(zeta(ax, +1))) - offset for ax in "xyz"]
    return BlochAffine(np.column_stack(cols), offset)
