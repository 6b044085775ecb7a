"""Dense complex state algebra for the photon (x) object Hilbert space.

The joint space is the tensor product of a 3-level photon register and a
4-level object register, flattened row-major with the photon index varying
slowest::

    index = 4 * photon + object

    photon:  ONE_X=0  |1x0y>   one photon travelling along x
             ONE_Y=1  |0x1y>   one photon travelling along y
             VAC=2    |0x0y>   photon absorbed
    object:  GX=0, GY=1 (ground, region X/Y), EX=2, EY=3 (excited)

Amplitudes are numpy ``complex128`` (an explicit re/im pair per entry).
Everything here is immutable; arrays handed out are read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllZero,
    ConvergenceError,
    InvalidSpectrum,
    NonFinite,
    NotHermitian,
    NotNormalized,
)

__all__ = [
    "PhotonMode",
    "ObjectState",
    "Subsystem",
    "JointState",
    "DensityMatrix",
    "Spectrum",
    "N_PHOTON",
    "N_OBJECT",
    "DIM",
    "basis_index",
    "basis_labels",
    "make_state",
    "basis_state",
    "product_state",
    "inner_product",
    "overlap_squared",
    "reduce_bipartite",
    "partial_trace",
    "jacobi_eigh",
    "eig_hermitian",
    "von_neumann_entropy",
    "entanglement_entropy",
]

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
TRACE_TOL = 1e-9
NEGATIVE_TOL = 1e-10


class PhotonMode(IntEnum):
    ONE_X = 0
    ONE_Y = 1
    VAC = 2


class ObjectState(IntEnum):
    GX = 0
    GY = 1
    EX = 2
    EY = 3


class Subsystem(Enum):
    PHOTON = "photon"
    OBJECT = "object"


N_PHOTON = len(PhotonMode)
N_OBJECT = len(ObjectState)
DIM = N_PHOTON * N_OBJECT


def basis_index(photon: PhotonMode | int, obj: ObjectState | int) -> int:
    """Flat index of the product basis vector ``|photon> (x) |obj>``."""
    photon = PhotonMode(photon)
    obj = ObjectState(obj)
    return N_OBJECT * int(photon) + int(obj)


def basis_labels() -> list[tuple[PhotonMode, ObjectState]]:
    """All (photon, object) labels in canonical order."""
    return [(p, o) for p in PhotonMode for o in ObjectState]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def _as_complex_vector(amps, length: int) -> np.ndarray:
    arr = np.asarray(amps)
    # accept explicit (re, im) pairs as well as complex scalars
    if arr.ndim == 2 and arr.shape == (length, 2) and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.asarray(arr, dtype=np.complex128).reshape(-1)
    if arr.shape != (length,):
        raise ValueError(f"expected {length} amplitudes, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("amplitudes must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class JointState:
    """Normalized pure state on the 12-dimensional photon (x) object space.

    Use :func:`make_state` to build one from arbitrary amplitudes; the
    constructor itself only accepts vectors that are already normalized.
    """

    amps: np.ndarray

    def __post_init__(self):
        arr = _as_complex_vector(self.amps, DIM)
        norm = math.sqrt(float(np.vdot(arr, arr).real))
        if abs(norm - 1.0) > 1e-10:
            raise NotNormalized(f"joint state has norm {norm!r}")
        object.__setattr__(self, "amps", _frozen(arr))

    def amp(self, photon: PhotonMode | int, obj: ObjectState | int) -> complex:
        return complex(self.amps[basis_index(photon, obj)])

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as a (photon, object) = (3, 4) matrix."""
        return self.amps.reshape(N_PHOTON, N_OBJECT)

    def norm(self) -> float:
        return math.sqrt(float(np.vdot(self.amps, self.amps).real))

    def __repr__(self):
        terms = [
            f"({a.real:+.6g}{a.imag:+.6g}j)|{p.name},{o.name}>"
            for (p, o), a in zip(basis_labels(), self.amps)
            if abs(a) > 1e-15
        ]
        return "JointState(" + " ".join(terms) + ")"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Reduced density matrix of one subsystem.

    Validated on construction for Hermiticity and unit trace. Positivity
    is checked lazily by :func:`von_neumann_entropy`, which needs the
    spectrum anyway.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NonFinite("density matrix entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > NORM_TOL:
            raise NotHermitian("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidSpectrum(f"density matrix trace is {tr!r}, expected 1")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues, sorted in descending order."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(sorted((float(x) for x in self.eigenvalues), reverse=True))
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    @property
    def total(self) -> float:
        return math.fsum(self.eigenvalues)


def make_state(amps: Sequence[complex] | np.ndarray) -> JointState:
    """Normalize 12 amplitudes into a :class:`JointState`.

    Relative phases are preserved. ``amps`` may be complex numbers or a
    (12, 2) array of (re, im) pairs.

    Raises
    ------
    NonFinite
        If any component is NaN or infinite.
    AllZero
        If every amplitude vanishes.
    """
    arr = _as_complex_vector(amps, DIM)
    norm = math.sqrt(float(np.vdot(arr, arr).real))
    if norm == 0.0:
        raise AllZero("cannot normalize the zero vector")
    if not math.isfinite(norm):
        raise NonFinite("amplitude norm overflowed")
    return JointState(arr / norm)


def basis_state(photon: PhotonMode | int, obj: ObjectState | int) -> JointState:
    arr = np.zeros(DIM, dtype=np.complex128)
    arr[basis_index(photon, obj)] = 1.0
    return JointState(arr)


def product_state(photon_vec: Iterable[complex], object_vec: Iterable[complex]) -> JointState:
    """Normalized ``|photon_vec> (x) |object_vec>``."""
    p = _as_complex_vector(list(photon_vec), N_PHOTON)
    o = _as_complex_vector(list(object_vec), N_OBJECT)
    return make_state(np.kron(p, o))


def inner_product(a: JointState, b: JointState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    return complex(np.vdot(a.amps, b.amps))


def overlap_squared(a, b) -> float:
    """Squared overlap ``|<a|b>|^2`` of two normalized object vectors."""
    va = _as_complex_vector(a, N_OBJECT)
    vb = _as_complex_vector(b, N_OBJECT)
    for name, v in (("a", va), ("b", vb)):
        n = math.sqrt(float(np.vdot(v, v).real))
        if abs(n - 1.0) > 1e-9:
            raise NotNormalized(f"object vector {name} has norm {n!r}")
    return min(1.0, abs(np.vdot(va, vb)) ** 2)


def reduce_bipartite(psi: np.ndarray, keep_first: bool) -> np.ndarray:
    """Reduced density matrix of a pure state given as a (dA, dB) amplitude matrix.

    Tracing out B gives ``psi @ psi^H``; tracing out A gives ``psi^T @ psi*``.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if keep_first:
        rho = psi @ psi.conj().T
    else:
        rho = psi.T @ psi.conj()
    # remove rounding asymmetry so the Hermitian check is exact
    return 0.5 * (rho + rho.conj().T)


def partial_trace(s: JointState, keep: Subsystem) -> DensityMatrix:
    """Reduced state of the photon (3x3) or the object (4x4)."""
    keep = Subsystem(keep)
    return DensityMatrix(reduce_bipartite(s.as_matrix(), keep is Subsystem.PHOTON))


def jacobi_eigh(
    m: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each pivot (p, q) is first phase-rotated so the off-diagonal entry is
    real and positive, then annihilated by a real plane rotation. Sweeps
    stop once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||m||_F)``.

    Returns
    -------
    values : ndarray of float, shape (n,)
        Eigenvalues in descending order.
    vectors : ndarray of complex, shape (n, n)
        Orthonormal eigenvectors as columns, matching ``values``.
    """
    a = np.array(m, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    offdiag = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[offdiag]) ** 2)))
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = c
                rot[p, q] = s
                rot[q, p] = -s * phase.conjugate()
                rot[q, q] = c * phase.conjugate()
                a = rot.conj().T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot
    else:
        off = math.sqrt(float(np.sum(np.abs(a[offdiag]) ** 2)))
        if off >= threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")

    values = a.diagonal().real.copy()
    order = np.argsort(values, kind="stable")[::-1]
    return values[order], v[:, order]


def eig_hermitian(m: DensityMatrix | np.ndarray) -> Spectrum:
    """Eigenvalues of a Hermitian matrix via :func:`jacobi_eigh`.

    Raises
    ------
    NotHermitian
        If ``m`` deviates from its conjugate transpose by more than 1e-10.
    """
    arr = m.entries if isinstance(m, DensityMatrix) else np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix must be square, got shape {arr.shape}")
    if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-10")
    values, _ = jacobi_eigh(arr)
    return Spectrum(tuple(values))


def von_neumann_entropy(spec: Spectrum | Sequence[float]) -> float:
    """Entropy ``-sum(l * ln l)`` in nats, with ``0 ln 0 = 0``.

    Eigenvalues in [-1e-10, 0) are rounding noise and are clamped to zero;
    anything more negative, or a trace off by more than 1e-9, raises
    :class:`InvalidSpectrum`.
    """
    vals = spec.eigenvalues if isinstance(spec, Spectrum) else tuple(float(x) for x in spec)
    if not vals:
        raise InvalidSpectrum("empty spectrum")
    total = math.fsum(vals)
    if abs(total - 1.0) > TRACE_TOL:
        raise InvalidSpectrum(f"eigenvalues sum to {total!r}, expected 1")
    if min(vals) < -NEGATIVE_TOL:
        raise InvalidSpectrum(f"negative eigenvalue {min(vals)!r}")
    h = -math.fsum(x * math.log(x) for x in vals if x > 0.0)
    return max(0.0, h)


def entanglement_entropy(s: JointState, keep: Subsystem = Subsystem.PHOTON) -> float:
    """Entanglement entropy of a pure joint state from one reduced side."""
    return von_neumann_entropy(eig_hermitian(partial_trace(s, keep)))
