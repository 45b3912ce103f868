"""Small dense complex linear algebra on ``numpy.ndarray`` values.

Matrices are plain ``complex128`` arrays.  Joint bases list the first
subsystem as the slow index, so for a qubit-qutrit pair the order is
``|1/2,1>, |1/2,0>, |1/2,-1>, |-1/2,1>, |-1/2,0>, |-1/2,-1>`` and the ground
state of every factor is its last basis vector.
"""

from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .errors import PreconditionError

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 64


@dataclass(frozen=True)
class BipartiteShape:
    dim_a: int
    dim_b: int

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise PreconditionError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def ket(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def ground_projector(dim: int) -> np.ndarray:
    """``|g><g|``; the ground state is the last basis vector."""
    g = ket(dim, dim - 1)
    return np.outer(g, g.conj())


def tensor(a, b) -> np.ndarray:
    """Kronecker product, first factor is the first subsystem."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose(m, shape: BipartiteShape, subsystem: str = "B") -> np.ndarray:
    m = as_matrix(m)
    if m.shape != (shape.dim, shape.dim):
        raise PreconditionError(
            f"matrix shape {m.shape} does not match {shape.dim_a}x{shape.dim_b}")
    t = m.reshape(shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise PreconditionError("subsystem must be 'A' or 'B'")
    return np.ascontiguousarray(t.reshape(shape.dim, shape.dim))


def partial_trace(m, shape: BipartiteShape, keep: str = "B") -> np.ndarray:
    m = as_matrix(m)
    if m.shape != (shape.dim, shape.dim):
        raise PreconditionError("dimension mismatch in partial_trace")
    t = m.reshape(shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)
    if keep == "B":
        return np.einsum("ijik->jk", t)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    raise PreconditionError("keep must be 'A' or 'B'")


def expect(rho, op) -> complex:
    rho = as_matrix(rho)
    op = as_matrix(op)
    if rho.shape != op.shape or rho.shape[0] != rho.shape[1]:
        raise PreconditionError("expect needs square matrices of equal size")
    # Tr(rho op) without forming the product
    return complex(np.sum(rho * op.T))


@njit
def _jacobi_sweeps(a, tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        scale = 0.0
        for i in range(n):
            scale += abs(a[i, i]) ** 2
            for j in range(n):
                if i != j:
                    off += abs(a[i, j]) ** 2
        if off <= tol * tol * max(scale, 1e-300) or off == 0.0:
            return sweep, np.sqrt(off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns p, q
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * np.conj(ph) * akq
                    a[k, q] = s * ph * akp + c * akq
                # rows p, q
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * np.conj(ph) * apk + c * aqk
                # exact pivot updates keep small eigenvalues relatively accurate
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                a[p, q] = 0.0
                a[q, p] = 0.0
    off = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off += abs(a[i, j]) ** 2
    return max_sweeps, np.sqrt(off)


def jacobi_diagonalize(m):
    """Run cyclic Jacobi; returns (diagonalised copy, sweeps, off-diagonal norm)."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise PreconditionError("eig_hermitian needs a square matrix")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > HERMITIAN_TOL:
        raise PreconditionError(f"matrix is not Hermitian (deviation {dev:.3e})")
    a = np.ascontiguousarray(0.5 * (a + a.conj().T))
    sweeps, off = _jacobi_sweeps(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    return a, int(sweeps), float(off)


def eig_hermitian(m) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (cyclic Jacobi)."""
    a, _, _ = jacobi_diagonalize(m)
    return np.sort(np.diag(a).real)
