"""Superoperators on n qubits stored as Choi matrices.

Conventions:

* ``choi = sum_ij |i><j| (x) G(|i><j|)`` — the input index is the first
  Kronecker factor, matching column-stacking vectorisation of Kraus operators
  (``choi = sum_K vec(K) vec(K)^dagger`` with ``vec`` stacking columns).
* G is completely positive iff ``choi`` is Hermitian PSD; trace preserving iff
  the partial trace over the output factor is the identity.  Both flags are
  computed at construction and exposed; nothing is silently clamped.
* ``transfer`` is the matrix acting on row-major vectorised operators:
  ``vec_r(G(m)) = transfer @ vec_r(m)``.  Channel composition is transfer
  multiplication.

The superoperator norm used everywhere is the unstabilised induced trace norm
``sup { ||G(V)||_1 : ||V||_1 = 1 }`` (no ancilla).  Its supremum is attained on
rank-one ``V = u v^dagger`` with unit vectors, which is what the optimiser
searches over.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .angles import parse_angle
from .bloch import rotation_unitary
from .qstate import DensityMatrix, NumericsError, validation_enabled

CP_TOL = 1e-10
TP_TOL = 1e-10
CHOI_CLOSE_TOL = 1e-10
SPREAD_FLAG_TOL = 1e-4


class Channel:
    """Linear superoperator on ``n`` qubits, stored as a Choi matrix.

    ``axis`` optionally records ``(theta, phi)`` for gates built as Bloch
    rotations, so noise models can overrotate about the same axis.
    """

    __slots__ = ("n", "choi", "is_cp", "is_tp", "choi_min_eig", "axis", "_transfer")

    def __init__(self, choi, *, axis: tuple[float, float] | None = None):
        arr = np.array(choi, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"Choi matrix must be square, got shape {arr.shape}")
        dim2 = arr.shape[0]
        dim = math.isqrt(dim2)
        n = dim.bit_length() - 1
        if dim * dim != dim2 or n < 1 or 2**n != dim:
            raise ValueError(f"Choi dimension {dim2} is not (2**n)**2 for n >= 1")
        arr.setflags(write=False)
        self.n = n
        self.choi = arr
        self.axis = axis
        self._transfer = None

        hermitian_defect = np.abs(arr - arr.conj().T).max()
        eigs = np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)
        self.choi_min_eig = float(eigs.min())
        self.is_cp = bool(hermitian_defect <= CP_TOL and self.choi_min_eig >= -CP_TOL)
        choi4 = arr.reshape(dim, dim, dim, dim)
        tp_defect = np.abs(np.einsum("ikjk->ij", choi4) - np.eye(dim)).max()
        self.is_tp = bool(tp_defect <= TP_TOL)

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def transfer(self) -> np.ndarray:
        if self._transfer is None:
            d = self.dim
            t = self.choi.reshape(d, d, d, d).transpose(1, 3, 0, 2).reshape(d * d, d * d)
            t.setflags(write=False)
            self._transfer = t
        return self._transfer

    def apply_matrix(self, m) -> np.ndarray:
        """Linear action on an arbitrary operator (no state validation)."""
        arr = np.asarray(m, dtype=complex)
        d = self.dim
        if arr.shape != (d, d):
            raise ValueError(f"operator shape {arr.shape} does not match dim {d}")
        return (self.transfer @ arr.reshape(-1)).reshape(d, d)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        """Image of a state; validated when the channel is CP and TP."""
        if rho.n != self.n:
            raise ValueError(f"state has {rho.n} qubits, channel has {self.n}")
        out = self.apply_matrix(rho.matrix)
        validate = validation_enabled() and self.is_cp and self.is_tp
        return DensityMatrix(out, validate=validate)

    def is_close(self, other: "Channel", tol: float = CHOI_CLOSE_TOL) -> bool:
        """Channel equality: maximum Choi-entry deviation within tolerance."""
        if self.n != other.n:
            return False
        return bool(np.abs(self.choi - other.choi).max() <= tol)

    def __repr__(self) -> str:
        return f"Channel(n={self.n}, cp={self.is_cp}, tp={self.is_tp})"


def _channel_from_transfer(transfer: np.ndarray, axis=None) -> Channel:
    d2 = transfer.shape[0]
    d = math.isqrt(d2)
    choi = transfer.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d2, d2)
    return Channel(choi, axis=axis)


def from_choi(choi, *, axis=None) -> Channel:
    """Wrap a raw Choi matrix (the caller vouches for its meaning)."""
    return Channel(choi, axis=axis)


def identity(n: int = 1) -> Channel:
    d = 2**n
    vec = np.eye(d, dtype=complex).T.reshape(-1)
    return Channel(np.outer(vec, vec.conj()))


def from_unitary(u, *, axis=None) -> Channel:
    """Conjugation channel rho -> U rho U^dagger; global phases drop out."""
    arr = np.asarray(u, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"unitary must be square, got shape {arr.shape}")
    defect = np.abs(arr.conj().T @ arr - np.eye(arr.shape[0])).max()
    if defect > 1e-10:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    vec = arr.T.reshape(-1)
    return Channel(np.outer(vec, vec.conj()), axis=axis)


def from_kraus(ops) -> Channel:
    """Channel sum_K K rho K^dagger from a trace-preserving Kraus family."""
    mats = [np.asarray(k, dtype=complex) for k in ops]
    if not mats:
        raise ValueError("need at least one Kraus operator")
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise ValueError("Kraus operators must share one square shape")
    total = sum(m.conj().T @ m for m in mats)
    if np.abs(total - np.eye(d)).max() > 1e-10:
        raise ValueError("Kraus operators do not sum to the identity (not TP)")
    choi = np.zeros((d * d, d * d), dtype=complex)
    for m in mats:
        vec = m.T.reshape(-1)
        choi += np.outer(vec, vec.conj())
    return Channel(choi)


def apply(g: Channel, rho: DensityMatrix) -> DensityMatrix:
    return g.apply(rho)


def compose(g: Channel, h: Channel) -> Channel:
    """Composite G after H (apply H first)."""
    if g.n != h.n:
        raise ValueError(f"cannot compose channels on {g.n} and {h.n} qubits")
    return _channel_from_transfer(g.transfer @ h.transfer)


def power(g: Channel, k: int) -> Channel:
    if k < 0:
        raise ValueError(f"channel exponent must be >= 0, got {k}")
    if k == 0:
        return identity(g.n)
    return _channel_from_transfer(np.linalg.matrix_power(g.transfer, k))


def tensor_channels(g: Channel, h: Channel) -> Channel:
    """Parallel composition acting on the concatenated qubit registers."""
    dg, dh = g.dim, h.dim
    tg = g.transfer.reshape(dg, dg, dg, dg)
    th = h.transfer.reshape(dh, dh, dh, dh)
    d = dg * dh
    joint = np.einsum("KLIJ,klij->KkLlIiJj", tg, th).reshape(d * d, d * d)
    return _channel_from_transfer(joint)


# ----------------------------------------------------------------------------
# standard gates


def hadamard(phi: float = 0.0) -> Channel:
    """Involutive rotation exchanging |0> and the phi-equator superposition."""
    return from_unitary(
        rotation_unitary(math.pi, math.pi / 4.0, phi), axis=(math.pi / 4.0, phi)
    )


def not_gate(phi: float = 0.0) -> Channel:
    """Phase-twisted NOT: |0> -> e^{i phi}|1>, e^{i phi}|1> -> |0>."""
    return from_unitary(
        rotation_unitary(math.pi, math.pi / 2.0, phi), axis=(math.pi / 2.0, phi)
    )


def rotation_gate(alpha: float, theta: float, phi: float) -> Channel:
    return from_unitary(rotation_unitary(alpha, theta, phi), axis=(theta, phi))


def phase_gate(alpha: float) -> Channel:
    """diag(1, e^{i alpha}) conjugation; the theta = 0 rotation."""
    return from_unitary(rotation_unitary(alpha, 0.0, 0.0), axis=(0.0, 0.0))


def cnot(phi: float = 0.0) -> Channel:
    """Controlled phase-twisted NOT, control on the left qubit."""
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = rotation_unitary(math.pi, math.pi / 2.0, phi)
    return from_unitary(u)


def measurement(n: int = 1) -> Channel:
    """Complete von Neumann measurement: kills all off-diagonal entries."""
    d = 2**n
    ops = []
    for i in range(d):
        k = np.zeros((d, d), dtype=complex)
        k[i, i] = 1.0
        ops.append(k)
    return from_kraus(ops)


def transpose_map() -> Channel:
    """One-qubit transpose: positive but not completely positive."""
    eye = np.eye(2)
    transfer = np.einsum("kj,li->klij", eye, eye).reshape(4, 4)
    return _channel_from_transfer(transfer.astype(complex))


_GATE_BUILDERS = {
    "hadamard": lambda params: hadamard(_angle(params.get("phi", 0.0))),
    "not": lambda params: not_gate(_angle(params.get("phi", 0.0))),
    "rotation": lambda params: rotation_gate(
        _angle(params["alpha"]), _angle(params["theta"]), _angle(params.get("phi", 0.0))
    ),
    "phase": lambda params: phase_gate(_angle(params["alpha"])),
    "cnot": lambda params: cnot(_angle(params.get("phi", 0.0))),
    "measurement": lambda params: measurement(int(params.get("n", 1))),
    "transpose": lambda params: transpose_map(),
}


def _angle(token) -> float:
    return parse_angle(token).radians


def standard_gate(label: str, **params) -> Channel:
    builder = _GATE_BUILDERS.get(label)
    if builder is None:
        raise ValueError(f"unknown gate label {label!r}")
    return builder(params)


# ----------------------------------------------------------------------------
# noise models

NOISE_KINDS = ("depolarize", "overrotate", "phase_drift", "amplitude_damp")


@dataclass(frozen=True)
class NoiseModel:
    """A named perturbation with one strength parameter.

    depolarize, amplitude_damp: probability-like strength in [0, 1].
    overrotate, phase_drift: an angle in radians, restricted to [0, 2 pi].
    """

    kind: str
    strength: float

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        s = float(self.strength)
        if not math.isfinite(s) or s < 0.0:
            raise ValueError(f"noise strength must be finite and >= 0, got {s}")
        if self.kind in ("depolarize", "amplitude_damp") and s > 1.0:
            raise ValueError(f"{self.kind} strength must lie in [0, 1], got {s}")
        if self.kind in ("overrotate", "phase_drift") and s > 2.0 * math.pi:
            raise ValueError(f"{self.kind} strength must lie in [0, 2 pi], got {s}")
        object.__setattr__(self, "strength", s)


def _depolarizing(n: int, lam: float) -> Channel:
    d = 2**n
    choi = (1.0 - lam) * identity(n).choi + (lam / d) * np.eye(d * d, dtype=complex)
    return Channel(choi)


def _per_qubit(gate: Channel, n: int) -> Channel:
    out = gate
    for _ in range(n - 1):
        out = tensor_channels(out, gate)
    return out


def apply_noise(g: Channel, model: NoiseModel) -> Channel:
    """Compose the noise with the gate (noise acts after the gate).

    overrotate shares the gate's rotation axis when that axis is known and
    falls back to a per-qubit z-axis phase otherwise; phase_drift conjugates
    the gate by a per-qubit z-axis phase.
    """
    s = model.strength
    if model.kind == "depolarize":
        return compose(_depolarizing(g.n, s), g)
    if model.kind == "overrotate":
        if g.axis is not None:
            theta, phi = g.axis
            rot = rotation_gate(s, theta, phi)
            noisy = compose(rot, g)
            return Channel(noisy.choi, axis=g.axis)
        return compose(_per_qubit(phase_gate(s), g.n), g)
    if model.kind == "phase_drift":
        fwd = _per_qubit(phase_gate(s), g.n)
        back = _per_qubit(phase_gate(-s), g.n)
        drifted = compose(fwd, compose(g, back))
        if g.axis is not None:
            theta, phi = g.axis
            return Channel(drifted.choi, axis=(theta, phi + s))
        return drifted
    damp = from_kraus(
        [
            np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - s)]], dtype=complex),
            np.array([[0.0, math.sqrt(s)], [0.0, 0.0]], dtype=complex),
        ]
    )
    return compose(_per_qubit(damp, g.n), g)


# ----------------------------------------------------------------------------
# superoperator norm

@dataclass
class SupNormResult:
    """Outcome of the rank-one maximisation of ||Delta(V)||_1.

    value is a certified lower bound (it is an exact evaluation at the reported
    maximiser); converged is cleared when the best starts disagree by more than
    SPREAD_FLAG_TOL, signalling possible under-maximisation.
    """

    value: float
    spread: float
    converged: bool
    u: np.ndarray | None = None
    v: np.ndarray | None = None


def _ascent_starts(dim: int, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng((0x5EED, seed, dim, count))
    us = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    vs = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    basis = np.eye(dim, dtype=complex)
    fixed_u = np.repeat(basis, dim, axis=0)
    fixed_v = np.tile(basis, (dim, 1))
    u = np.concatenate([fixed_u, us])
    v = np.concatenate([fixed_v, vs])
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return u, v


def _trace_norm_batch(m: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.svd(m, compute_uv=False).sum(axis=-1)
    except np.linalg.LinAlgError as exc:
        raise NumericsError("SVD did not converge inside the norm optimiser") from exc


def _ascent(delta4: np.ndarray, u, v, max_iter: int, tol: float):
    """Monotone alternating maximisation of ||Delta(u v*)||_1.

    Alternates the exact solutions of the three partial problems: the dual
    unitary W (polar factor of the image), then the left and right vectors
    (each a normalised linear functional).  Every step is closed-form, so the
    objective value never decreases between iterations.
    """
    vals = np.zeros(u.shape[0])
    for _ in range(max_iter):
        m = np.einsum("klij,bi,bj->bkl", delta4, u, v.conj(), optimize=True)
        try:
            uu, sing, vh = np.linalg.svd(m)
        except np.linalg.LinAlgError as exc:
            raise NumericsError("SVD did not converge inside the norm optimiser") from exc
        new_vals = sing.sum(axis=-1)
        w = uu @ vh
        d = np.einsum("bkl,klij->bij", w.conj(), delta4, optimize=True)
        c = np.einsum("bij,bj->bi", d, v.conj())
        cn = np.linalg.norm(c, axis=1)
        ok = cn > 1e-30
        u = np.where(ok[:, None], c.conj() / np.where(ok, cn, 1.0)[:, None], u)
        e = np.einsum("bi,bij->bj", u, d)
        en = np.linalg.norm(e, axis=1)
        ok = en > 1e-30
        v = np.where(ok[:, None], e / np.where(ok, en, 1.0)[:, None], v)
        if np.abs(new_vals - vals).max() < tol * max(1.0, new_vals.max()):
            vals = new_vals
            break
        vals = new_vals
    m = np.einsum("klij,bi,bj->bkl", delta4, u, v.conj(), optimize=True)
    return _trace_norm_batch(m), u, v


def sup_norm_report(
    g: Channel,
    h: Channel | None = None,
    *,
    starts: int = 64,
    seed: int = 0,
    max_iter: int = 200,
    tol: float = 1e-13,
) -> SupNormResult:
    """Maximise ||(G - H)(V)||_1 over the trace-norm unit ball.

    Multistart over random unit-vector pairs plus all basis pairs; the
    supremum is attained on rank-one V, so this is exhaustive in kind.  The
    spread between the best and the 90th-percentile start value is reported as
    a convergence diagnostic.
    """
    if h is not None and g.n != h.n:
        raise ValueError(f"cannot compare channels on {g.n} and {h.n} qubits")
    d = g.dim
    delta = g.transfer if h is None else g.transfer - h.transfer
    if np.abs(delta).max() < 1e-14:
        return SupNormResult(0.0, 0.0, True)
    delta4 = delta.reshape(d, d, d, d)
    u0, v0 = _ascent_starts(d, starts, seed)
    vals, u, v = _ascent(delta4, u0, v0, max_iter, tol)
    best = int(np.argmax(vals))
    value = float(vals[best])
    spread = float(value - np.quantile(vals, 0.9))
    return SupNormResult(value, spread, spread <= SPREAD_FLAG_TOL, u[best], v[best])


def sup_norm_distance(g: Channel, h: Channel | None = None, **kwargs) -> float:
    """Induced trace-norm distance ||G - H|| (or the norm ||G|| when H is None)."""
    return sup_norm_report(g, h, **kwargs).value


def rank_one_sample_max(
    g: Channel,
    h: Channel | None = None,
    *,
    samples: int = 100_000,
    seed: int = 987,
    chunk: int = 4096,
) -> float:
    """Independent dense-sampling lower bound on the superoperator norm.

    Used to cross-check the optimiser: draws Haar-random rank-one operators
    and returns the best value seen.  Deliberately has no shared machinery
    with the ascent in :func:`sup_norm_report` beyond the transfer matrix.
    """
    d = g.dim
    delta = g.transfer if h is None else g.transfer - h.transfer
    delta4 = delta.reshape(d, d, d, d)
    rng = np.random.default_rng(seed)
    best = 0.0
    remaining = samples
    while remaining > 0:
        b = min(chunk, remaining)
        remaining -= b
        u = rng.normal(size=(b, d)) + 1j * rng.normal(size=(b, d))
        v = rng.normal(size=(b, d)) + 1j * rng.normal(size=(b, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        m = np.einsum("klij,bi,bj->bkl", delta4, u, v.conj(), optimize=True)
        best = max(best, float(_trace_norm_batch(m).max()))
    return best


# ----------------------------------------------------------------------------
# JSON gate specs

def _complex_matrix(entries) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix entries must be a square grid of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def gate_from_spec(spec: dict) -> Channel:
    """Build a channel from a JSON-style gate description.

    Shape: {"kind": ..., "params": {...}, "noise": [{"kind": ..., "strength": ...}]}.
    Angle parameters accept numbers (radians) or tokens like "pi" and "2/3pi".
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("gate spec must be an object with a 'kind' field")
    kind = spec["kind"]
    params = spec.get("params") or {}
    if kind == "unitary":
        gate = from_unitary(_complex_matrix(params["matrix"]))
    elif kind == "kraus":
        gate = from_kraus([_complex_matrix(m) for m in params["operators"]])
    else:
        gate = standard_gate(kind, **params)
    for entry in spec.get("noise") or []:
        gate = apply_noise(gate, NoiseModel(entry["kind"], float(entry["strength"])))
    return gate
