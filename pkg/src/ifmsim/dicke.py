"""Two-particle collision model: a probe P scattering off a free target T.

After the collision the pair is in ``alpha |free>P|free>T + beta |scatt>P|scatt>T``.
Each particle is a qubit with basis (free, scatt); the joint basis is
ordered (free,free), (free,scatt), (scatt,free), (scatt,scatt).

Observing no scattered probe (a null result) projects the target back onto
``|free>T``: the null result leaves the target state untouched rather than
"erasing" part of it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import InvalidConfig, NotNormalized, ZeroProbability
from .qstate import eig_hermitian, reduce_bipartite, von_neumann_entropy

__all__ = [
    "Branch",
    "DickeConfig",
    "DickeState",
    "FREE_TARGET",
    "dicke_state",
    "condition_on_null",
    "dicke_entanglement",
    "dicke_entanglement_numeric",
]

PARAM_TOL = 1e-12


class Branch(IntEnum):
    FREE = 0
    SCATT = 1


FREE_TARGET = np.array([1.0, 0.0], dtype=np.complex128)
FREE_TARGET.setflags(write=False)


@dataclass(frozen=True)
class DickeConfig:
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


@dataclass(frozen=True, eq=False)
class DickeState:
    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if arr.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got {arr.size}")
        norm = math.sqrt(float(np.vdot(arr, arr).real))
        if abs(norm - 1.0) > 1e-10:
            raise NotNormalized(f"collision state has norm {norm!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    def amp(self, probe: Branch | int, target: Branch | int) -> complex:
        return complex(self.amps[2 * int(Branch(probe)) + int(Branch(target))])

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as a (probe, target) = (2, 2) matrix."""
        return self.amps.reshape(2, 2)


def dicke_state(cfg: DickeConfig) -> DickeState:
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = cfg.alpha
    amps[3] = cfg.beta
    return DickeState(amps)


def condition_on_null(s: DickeState) -> tuple[np.ndarray, float]:
    """Post-select on the probe staying free.

    Returns the normalized target vector and the probability of the null
    result.
    """
    row = np.array(s.as_matrix()[Branch.FREE], dtype=np.complex128)
    prob = float(np.vdot(row, row).real)
    if prob <= 1e-12:
        raise ZeroProbability("null result has vanishing probability")
    target = row / math.sqrt(prob)
    # fix global phase: first nonzero component real-positive
    for x in target:
        if abs(x) > 1e-12:
            target = target * (abs(x) / x)
            break
    target.setflags(write=False)
    return target, prob


def dicke_entanglement(cfg: DickeConfig) -> float:
    """Binary entropy of the branch weights, which is the entanglement of
    the two-branch (Schmidt-form) collision state."""
    h = 0.0
    for w in (abs(cfg.alpha) ** 2, abs(cfg.beta) ** 2):
        if w > 0.0:
            h -= w * math.log(w)
    return h


def dicke_entanglement_numeric(cfg: DickeConfig) -> float:
    """Entanglement from the probe's reduced density matrix."""
    rho = reduce_bipartite(dicke_state(cfg).as_matrix(), keep_first=True)
    return von_neumann_entropy(eig_hermitian(rho))
