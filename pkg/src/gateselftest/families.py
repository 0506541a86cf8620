"""Gate families closed under the unobservable symmetries.

A family collects the gate tuples that no interference experiment on
computational-basis preparations and measurements can tell apart: the free
parameters are the equator longitude ``phi`` (conjugate-basis freedom, shared
by every member gate built from the same basis) and, where a phase rotation is
involved, the sign of its angle.  ``dist_to_family`` minimises the worst
per-gate superoperator distance over those parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.optimize import minimize_scalar

from .channel import (
    Channel,
    cnot,
    hadamard,
    not_gate,
    phase_gate,
    rotation_gate,
    sup_norm_report,
)

FAMILY_KINDS = ("hadamard", "rotation", "h-not", "h-phase", "h-cnot", "h-phase-cnot")

# Coefficient of sqrt(eps) in the proven distance bound for the hadamard
# family: any gate eps-satisfying its three equations is within
# HADAMARD_ROBUSTNESS_COEFF * sqrt(eps) of some member.
HADAMARD_ROBUSTNESS_COEFF = 4579.0

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Family:
    """A named gate family, with the rotation parameters where they apply.

    * ``hadamard`` — single equator-axis involution H_phi.
    * ``rotation`` — single rotation by +-alpha about a theta-latitude axis;
      needs ``alpha`` (a reduced rational multiple of pi in (0, 1]) and
      ``theta`` in (0, pi/2], excluding the NOT point (pi, pi/2).
    * ``h-not`` — pair (H_phi, NOT_phi), shared phi.
    * ``h-phase`` — pair (H_phi, phase(+-alpha)); needs ``alpha``.
    * ``h-cnot`` — pair (H_phi, CNOT_phi), shared phi.
    * ``h-phase-cnot`` — triple (H_phi, phase(+-alpha), CNOT_phi), shared phi;
      ``alpha`` defaults to pi/4.
    """

    kind: str
    alpha: Fraction | None = None
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        needs_alpha = self.kind in ("rotation", "h-phase", "h-phase-cnot")
        if needs_alpha:
            if self.alpha is None:
                raise ValueError(f"family {self.kind!r} needs an alpha fraction of pi")
            frac = Fraction(self.alpha)
            if not 0 < frac <= 1:
                raise ValueError(f"alpha must satisfy 0 < alpha <= pi, got {frac}*pi")
            object.__setattr__(self, "alpha", frac)
        elif self.alpha is not None:
            raise ValueError(f"family {self.kind!r} takes no alpha parameter")
        if self.kind == "rotation":
            if self.theta is None:
                raise ValueError("rotation family needs a latitude theta")
            th = float(self.theta)
            if not 0.0 < th <= math.pi / 2.0 + 1e-12:
                raise ValueError(f"theta must lie in (0, pi/2], got {th}")
            if self.alpha == 1 and abs(th - math.pi / 2.0) < 1e-12:
                raise ValueError(
                    "alpha = pi with theta = pi/2 is the NOT gate, which this "
                    "family cannot pin down; use the h-not family instead"
                )
            object.__setattr__(self, "theta", th)
        elif self.theta is not None:
            raise ValueError(f"family {self.kind!r} takes no theta parameter")

    @property
    def arity(self) -> int:
        return {"h-not": 2, "h-phase": 2, "h-cnot": 2, "h-phase-cnot": 3}.get(
            self.kind, 1
        )

    @property
    def alpha_radians(self) -> float:
        return float(self.alpha) * math.pi if self.alpha is not None else 0.0

    @property
    def label(self) -> str:
        if self.kind == "rotation":
            return f"rotation({self.alpha}pi,{self.theta:.12g})"
        if self.kind in ("h-phase", "h-phase-cnot"):
            return f"{self.kind}({self.alpha}pi)"
        return self.kind

    @property
    def signs(self) -> tuple[int, ...]:
        if self.kind in ("rotation", "h-phase", "h-phase-cnot"):
            return (1, -1)
        return (1,)


def hadamard_family() -> Family:
    return Family("hadamard")


def rotation_family(a: int, b: int, theta: float) -> Family:
    return Family("rotation", alpha=Fraction(a, b), theta=theta)


def h_not_family() -> Family:
    return Family("h-not")


def h_phase_family(a: int, b: int) -> Family:
    return Family("h-phase", alpha=Fraction(a, b))


def h_cnot_family() -> Family:
    return Family("h-cnot")


def triple_family(a: int = 1, b: int = 4) -> Family:
    return Family("h-phase-cnot", alpha=Fraction(a, b))


def _components(family: Family, sign: int):
    """(builder(phi) -> Channel, phi_dependent) per member gate, in order."""
    alpha = sign * family.alpha_radians
    if family.kind == "hadamard":
        return [(lambda phi: hadamard(phi), True)]
    if family.kind == "rotation":
        theta = family.theta
        return [(lambda phi: rotation_gate(alpha, theta, phi), True)]
    if family.kind == "h-not":
        return [(lambda phi: hadamard(phi), True), (lambda phi: not_gate(phi), True)]
    if family.kind == "h-phase":
        return [
            (lambda phi: hadamard(phi), True),
            (lambda phi: phase_gate(alpha), False),
        ]
    if family.kind == "h-cnot":
        return [(lambda phi: hadamard(phi), True), (lambda phi: cnot(phi), True)]
    return [
        (lambda phi: hadamard(phi), True),
        (lambda phi: phase_gate(alpha), False),
        (lambda phi: cnot(phi), True),
    ]


def member_gates(family: Family, phi: float, sign: int = 1) -> tuple[Channel, ...]:
    """The family member at equator longitude phi and angle sign."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return tuple(builder(phi) for builder, _ in _components(family, sign))


@dataclass
class FamilyFit:
    """Best family member found: worst-gate distance and the argmin parameters."""

    distance: float
    phi: float
    sign: int
    converged: bool


def dist_to_family(
    gates,
    family: Family,
    *,
    grid_points: int = 256,
    starts: int = 64,
    grid_starts: int = 16,
    phi_tol: float = 1e-6,
    seed: int = 0,
) -> FamilyFit:
    """Minimise the worst per-gate superoperator distance over the family.

    Coarse phi grid (with cheaper multistarts) followed by bounded scalar
    refinement of the best bracket down to phi_tol; sign choices are
    enumerated.  The returned distance is re-evaluated with the full number of
    starts, so it is a certified lower bound at the reported member.
    """
    if isinstance(gates, Channel):
        gates = (gates,)
    gates = tuple(gates)
    if len(gates) != family.arity:
        raise ValueError(
            f"family {family.label} has arity {family.arity}, got {len(gates)} gates"
        )

    best: FamilyFit | None = None
    for sign in family.signs:
        comps = _components(family, sign)
        for gate, (builder, _) in zip(gates, comps):
            probe = builder(0.0)
            if gate.n != probe.n:
                raise ValueError(
                    f"gate acts on {gate.n} qubits where the family member "
                    f"acts on {probe.n}"
                )

        static = [
            sup_norm_report(g, builder(0.0), starts=starts, seed=seed).value
            for g, (builder, dep) in zip(gates, comps)
            if not dep
        ]
        floor = max(static) if static else 0.0

        def objective(phi: float, n_starts: int) -> float:
            worst = floor
            for g, (builder, dep) in zip(gates, comps):
                if not dep:
                    continue
                val = sup_norm_report(g, builder(phi), starts=n_starts, seed=seed).value
                worst = max(worst, val)
            return worst

        step = TWO_PI / grid_points
        grid_vals = [objective(j * step, grid_starts) for j in range(grid_points)]
        j_best = int(min(range(grid_points), key=grid_vals.__getitem__))
        lo = (j_best - 1) * step
        hi = (j_best + 1) * step
        res = minimize_scalar(
            lambda phi: objective(phi, starts),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": phi_tol},
        )
        phi_star = float(res.x) % TWO_PI

        spread = 0.0
        converged = True
        worst = floor
        for g, (builder, dep) in zip(gates, comps):
            report = sup_norm_report(g, builder(phi_star), starts=starts, seed=seed)
            if report.value >= worst:
                worst = report.value
            spread = max(spread, report.spread)
            converged = converged and report.converged
        if best is None or worst < best.distance:
            best = FamilyFit(worst, phi_star, sign, converged)
    return best
