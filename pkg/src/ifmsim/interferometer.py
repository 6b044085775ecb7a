"""Staged Mach-Zehnder evolution of a photon probing a two-region object.

Pipeline::

    psi0 --BS1--> psi1 --interaction--> psi2 --mirrors--> psi3 --BS2--> psi_final

The photon enters along x with the object in ``alpha|GX> + beta|GY>``.
Each beam splitter adds a factor ``i`` on reflection. When the photon arm
matches the object region, the interaction sends
``|arm, G> -> gamma |arm, G> + delta |VAC, E>``; ``gamma=0, delta=1`` is
full absorption and ``gamma=1, delta=0`` is a transparent object, which
recovers the empty-interferometer calibration where the y output port
(the dark detector, DD) never fires.

Output ports: ONE_X is the light detector (LD), ONE_Y the dark detector
(DD), and VAC the absorption sector (ABS).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import qstate
from .errors import InvalidConfig, InvalidDistribution, InvalidSpec, ZeroProbability
from .qstate import (
    N_OBJECT,
    N_PHOTON,
    JointState,
    ObjectState,
    PhotonMode,
    Subsystem,
    basis_index,
)

__all__ = [
    "Outcome",
    "EVConfig",
    "InteractionSpec",
    "EV_ABSORBER",
    "TRANSPARENT",
    "StageTrace",
    "DetectorDistribution",
    "BEAM_SPLITTER",
    "MIRRORS",
    "interaction_matrix",
    "initial_state",
    "apply_bs1",
    "apply_interaction",
    "apply_mirrors",
    "apply_bs2",
    "run_ev",
    "detector_probabilities",
    "conditional_object_state",
    "correlation_c",
    "postselected_correlation",
    "entropy_alpha_closed",
    "entropy_gamma_closed",
    "entanglement_alpha",
    "entanglement_gamma",
]

PARAM_TOL = 1e-12
PROB_TOL = 1e-10
_SQRT_HALF = 1.0 / math.sqrt(2.0)


class Outcome(Enum):
    LD = "LD"
    DD = "DD"
    ABS = "ABS"

    @property
    def photon_mode(self) -> PhotonMode:
        return _OUTCOME_MODE[self]


_OUTCOME_MODE = {
    Outcome.LD: PhotonMode.ONE_X,
    Outcome.DD: PhotonMode.ONE_Y,
    Outcome.ABS: PhotonMode.VAC,
}


@dataclass(frozen=True)
class EVConfig:
    """Object superposition ``alpha|GX> + beta|GY>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (cmath.isfinite(a) and cmath.isfinite(b)):
            raise InvalidConfig("alpha and beta must be finite")
        weight = abs(a) ** 2 + abs(b) ** 2
        if abs(weight - 1.0) > PARAM_TOL:
            raise InvalidConfig(f"|alpha|^2 + |beta|^2 = {weight!r}, expected 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_modulus(cls, alpha_abs: float) -> EVConfig:
        """Real configuration with ``alpha = |alpha|`` and ``beta = sqrt(1 - |alpha|^2)``."""
        if not 0.0 <= alpha_abs <= 1.0:
            raise InvalidConfig(f"|alpha| must lie in [0, 1], got {alpha_abs!r}")
        return cls(alpha_abs, math.sqrt(max(0.0, 1.0 - alpha_abs * alpha_abs)))

    def object_vector(self) -> np.ndarray:
        vec = np.zeros(N_OBJECT, dtype=np.complex128)
        vec[ObjectState.GX] = self.alpha
        vec[ObjectState.GY] = self.beta
        return vec


@dataclass(frozen=True)
class InteractionSpec:
    """Amplitudes for a matching photon/object pair to pass (gamma) or be absorbed (delta)."""

    gamma: complex
    delta: complex

    def __post_init__(self):
        g, d = complex(self.gamma), complex(self.delta)
        if not (cmath.isfinite(g) and cmath.isfinite(d)):
            raise InvalidSpec("gamma and delta must be finite")
        weight = abs(g) ** 2 + abs(d) ** 2
        if abs(weight - 1.0) > PARAM_TOL:
            raise InvalidSpec(f"|gamma|^2 + |delta|^2 = {weight!r}, expected 1")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "delta", d)

    @classmethod
    def from_gamma(cls, gamma: float) -> InteractionSpec:
        """Real channel with ``delta = sqrt(1 - gamma^2) >= 0``."""
        if not 0.0 <= gamma <= 1.0:
            raise InvalidSpec(f"gamma must lie in [0, 1], got {gamma!r}")
        return cls(gamma, math.sqrt(max(0.0, 1.0 - gamma * gamma)))


EV_ABSORBER = InteractionSpec(0.0, 1.0)
TRANSPARENT = InteractionSpec(1.0, 0.0)


@dataclass(frozen=True)
class StageTrace:
    psi0: JointState
    psi1: JointState
    psi2: JointState
    psi3: JointState
    psi_final: JointState

    def stages(self) -> list[tuple[str, JointState]]:
        return [
            ("psi0", self.psi0),
            ("psi1", self.psi1),
            ("psi2", self.psi2),
            ("psi3", self.psi3),
            ("psi_final", self.psi_final),
        ]


@dataclass(frozen=True)
class DetectorDistribution:
    p_ld: float
    p_dd: float
    p_abs: float

    def __post_init__(self):
        probs = (float(self.p_ld), float(self.p_dd), float(self.p_abs))
        for p in probs:
            if not (math.isfinite(p) and -PROB_TOL <= p <= 1.0 + PROB_TOL):
                raise InvalidDistribution(f"probability {p!r} outside [0, 1]")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistribution(f"probabilities sum to {total!r}, expected 1")
        clipped = [min(1.0, max(0.0, p)) for p in probs]
        object.__setattr__(self, "p_ld", clipped[0])
        object.__setattr__(self, "p_dd", clipped[1])
        object.__setattr__(self, "p_abs", clipped[2])

    def __getitem__(self, outcome: Outcome) -> float:
        return {Outcome.LD: self.p_ld, Outcome.DD: self.p_dd, Outcome.ABS: self.p_abs}[
            Outcome(outcome)
        ]

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_ld, self.p_dd, self.p_abs)


# Photon-register operators, columns are images of ONE_X, ONE_Y, VAC.
BEAM_SPLITTER = np.array(
    [
        [_SQRT_HALF, 1j * _SQRT_HALF, 0.0],
        [1j * _SQRT_HALF, _SQRT_HALF, 0.0],
        [0.0, 0.0, 1.0],
    ],
    dtype=np.complex128,
)
MIRRORS = np.array(
    [
        [0.0, -1.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
    ],
    dtype=np.complex128,
)
BEAM_SPLITTER.setflags(write=False)
MIRRORS.setflags(write=False)


def _apply_photon_operator(op: np.ndarray, s: JointState) -> JointState:
    return JointState((op @ s.as_matrix()).reshape(-1))


def initial_state(cfg: EVConfig) -> JointState:
    """``|1x0y> (x) (alpha|GX> + beta|GY>)``."""
    if not isinstance(cfg, EVConfig):
        raise InvalidConfig(f"expected EVConfig, got {type(cfg).__name__}")
    photon = np.zeros(N_PHOTON, dtype=np.complex128)
    photon[PhotonMode.ONE_X] = 1.0
    return JointState(np.kron(photon, cfg.object_vector()))


def apply_bs1(s: JointState) -> JointState:
    return _apply_photon_operator(BEAM_SPLITTER, s)


def apply_bs2(s: JointState) -> JointState:
    # both splitters are balanced and identical
    return _apply_photon_operator(BEAM_SPLITTER, s)


def apply_mirrors(s: JointState) -> JointState:
    return _apply_photon_operator(MIRRORS, s)


_COLLISION_PAIRS = (
    (basis_index(PhotonMode.ONE_X, ObjectState.GX), basis_index(PhotonMode.VAC, ObjectState.EX)),
    (basis_index(PhotonMode.ONE_Y, ObjectState.GY), basis_index(PhotonMode.VAC, ObjectState.EY)),
)


def interaction_matrix(spec: InteractionSpec) -> np.ndarray:
    """12x12 unitary for the photon/object interaction.

    On each collision pair (|arm, G_arm>, |VAC, E_arm>) it acts as
    ``[[gamma, -conj(delta)], [delta, conj(gamma)]]``; everything else is
    left alone. The second column only matters for inputs that already
    carry absorbed-photon amplitude, and is fixed by unitarity.
    """
    g, d = spec.gamma, spec.delta
    u = np.eye(qstate.DIM, dtype=np.complex128)
    for pass_idx, abs_idx in _COLLISION_PAIRS:
        u[pass_idx, pass_idx] = g
        u[abs_idx, pass_idx] = d
        u[pass_idx, abs_idx] = -d.conjugate()
        u[abs_idx, abs_idx] = g.conjugate()
    return u


def apply_interaction(s: JointState, spec: InteractionSpec) -> JointState:
    if not isinstance(spec, InteractionSpec):
        raise InvalidSpec(f"expected InteractionSpec, got {type(spec).__name__}")
    return JointState(interaction_matrix(spec) @ s.amps)


def run_ev(cfg: EVConfig, spec: InteractionSpec = EV_ABSORBER) -> StageTrace:
    """Run the photon through the full interferometer, keeping every stage."""
    psi0 = initial_state(cfg)
    psi1 = apply_bs1(psi0)
    psi2 = apply_interaction(psi1, spec)
    psi3 = apply_mirrors(psi2)
    psi_final = apply_bs2(psi3)
    return StageTrace(psi0, psi1, psi2, psi3, psi_final)


def detector_probabilities(s_final: JointState) -> DetectorDistribution:
    weights = np.sum(np.abs(s_final.as_matrix()) ** 2, axis=1)
    return DetectorDistribution(
        float(weights[PhotonMode.ONE_X]),
        float(weights[PhotonMode.ONE_Y]),
        float(weights[PhotonMode.VAC]),
    )


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    for x in vec:
        if abs(x) > 1e-12:
            return vec * (abs(x) / x)
    return vec


def conditional_object_state(s_final: JointState, outcome: Outcome | str) -> np.ndarray:
    """Normalized object vector after post-selecting on a detector outcome.

    The global phase is fixed so the first non-negligible component is
    real and positive.

    Raises
    ------
    ZeroProbability
        If the outcome has probability below 1e-12.
    """
    outcome = Outcome(outcome)
    row = np.array(s_final.as_matrix()[outcome.photon_mode], dtype=np.complex128)
    weight = float(np.vdot(row, row).real)
    if weight <= 1e-12:
        raise ZeroProbability(f"outcome {outcome.value} has probability {weight!r}")
    vec = _fix_global_phase(row / math.sqrt(weight))
    vec.setflags(write=False)
    return vec


def correlation_c(cfg: EVConfig) -> float:
    """Closed-form overlap ``(|alpha|^2 - |beta|^2)^2`` between the initial
    object state and its DD-conditioned final state under full absorption."""
    return (abs(cfg.alpha) ** 2 - abs(cfg.beta) ** 2) ** 2


def postselected_correlation(cfg: EVConfig, spec: InteractionSpec = EV_ABSORBER) -> float:
    """Same quantity as :func:`correlation_c`, computed through the pipeline."""
    final = run_ev(cfg, spec).psi_final
    return qstate.overlap_squared(conditional_object_state(final, Outcome.DD), cfg.object_vector())


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


def entropy_alpha_closed(alpha_abs: float) -> float:
    """Entanglement of the fully-absorbing final state versus ``|alpha|``.

    ``ln 2 - |a|^2 ln|a| - (1 - |a|^2) ln sqrt(1 - |a|^2)``
    """
    a2 = alpha_abs * alpha_abs
    b2 = max(0.0, 1.0 - a2)
    return math.log(2.0) - 0.5 * _xlogx(a2) - 0.5 * _xlogx(b2)


def entropy_gamma_closed(gamma_abs: float) -> float:
    """Entanglement for the EV object state behind a partially absorbing channel.

    ``ln 2 - (1 + g^2) ln sqrt(1 + g^2) - (1 - g^2) ln sqrt(1 - g^2)``
    """
    g2 = gamma_abs * gamma_abs
    # log1p keeps the O(g^4) departure from ln 2 resolvable near g = 0
    plus = (1.0 + g2) * math.log1p(g2)
    minus = (1.0 - g2) * math.log1p(-g2) if g2 < 1.0 else 0.0
    return math.log(2.0) - 0.5 * plus - 0.5 * minus


def entanglement_alpha(cfg: EVConfig) -> tuple[float, float]:
    """(closed form, numeric) entanglement of the final state under full absorption."""
    closed = entropy_alpha_closed(abs(cfg.alpha))
    final = run_ev(cfg, EV_ABSORBER).psi_final
    numeric = qstate.entanglement_entropy(final, Subsystem.PHOTON)
    return closed, numeric


def entanglement_gamma(g: float) -> tuple[float, float]:
    """(closed form, numeric) entanglement for object state |GY> and real gamma in [0, 1]."""
    spec = InteractionSpec.from_gamma(g)
    closed = entropy_gamma_closed(g)
    final = run_ev(EVConfig(0.0, 1.0), spec).psi_final
    numeric = qstate.entanglement_entropy(final, Subsystem.PHOTON)
    return closed, numeric
