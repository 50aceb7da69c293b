"""Dense complex linear algebra for small quantum registers.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
single tensor convention used throughout the package is row-major with the
first Kronecker factor as the most significant index, i.e. the basis vector
``|a>|b>`` of ``C^dA (x) C^dB`` sits at position ``a * dB + b``.

All entropies are in bits.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeEigenvalue,
    NoConvergence,
    NonHermitian,
    InvalidState,
)

HERMITIAN_TOL = 1e-8
CLAMP_TOL = 1e-8
MAX_DIM = 64


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_square(m: np.ndarray) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1]


def is_hermitian(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if not is_square(m):
        return False
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol)


def is_psd(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if not is_hermitian(m, max(tol, 1e-10)):
        return False
    if m.size == 0:
        return True
    return bool(np.linalg.eigvalsh(hermitize(m))[0] >= -tol)


def is_unitary(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if not is_square(m):
        return False
    return bool(np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0])), initial=0.0) <= tol)


def is_density(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return is_psd(m, tol) and abs(np.trace(m) - 1.0) <= tol


def check_density(rho, tol: float = 1e-10) -> np.ndarray:
    """Return ``rho`` as a complex matrix, raising InvalidState unless it is a density operator."""
    rho = as_matrix(rho)
    if not is_square(rho):
        raise DimensionMismatch(f"density operator must be square, got {rho.shape}")
    if not is_hermitian(rho, tol):
        raise InvalidState("state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidState(f"state trace {np.trace(rho).real:.3g} != 1")
    if np.linalg.eigvalsh(hermitize(rho))[0] < -tol:
        raise InvalidState("state has a negative eigenvalue")
    return rho


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def _require_hermitian(m, tol: float) -> np.ndarray:
    m = as_matrix(m)
    if not is_square(m):
        raise DimensionMismatch(f"matrix must be square, got {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if not is_hermitian(m, tol * scale):
        raise NonHermitian("matrix fails the Hermitian symmetry check")
    return hermitize(m)


def herm_eig(m, tol: float = HERMITIAN_TOL, method: str = "lapack"):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues real and sorted in
    descending order and eigenvectors as the columns of a unitary matrix, so
    that ``U @ diag(w) @ U^dagger`` reconstructs ``m``.

    ``method="jacobi"`` runs the cyclic Jacobi solver instead of LAPACK; it is
    kept as an independent second route for cross-checking.
    """
    h = _require_hermitian(m, tol)
    if method == "lapack":
        w, v = np.linalg.eigh(h)
    elif method == "jacobi":
        w, v = jacobi_eigh(h)
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    order = np.argsort(w, kind="stable")[::-1]
    return w[order], v[:, order]


def jacobi_eigh(m: np.ndarray, max_sweeps: int = 100, threshold: float = 1e-12):
    """Cyclic complex Jacobi eigensolver for a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a_pq`` and then
    applies a real Givens rotation that annihilates it. Iterates until the
    off-diagonal Frobenius norm drops below ``threshold * ||m||_F``.
    Eigenvalues are returned unsorted.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n <= 1:
        return a.diagonal().real.copy(), v
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= threshold * scale:
            return a.diagonal().real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                theta = 0.5 * np.arctan2(2.0 * r, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = dagger(g) @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = a[q, p] = 0.0
    raise NoConvergence(f"Jacobi sweeps exhausted after {max_sweeps} sweeps")


def eigvals_psd(m, tol: float = CLAMP_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian PSD matrix, with rounding noise in [-tol, 0] clamped to 0."""
    h = _require_hermitian(m, HERMITIAN_TOL)
    w = np.linalg.eigvalsh(h)
    if w.size and w[0] < -tol:
        raise NegativeEigenvalue(f"eigenvalue {w[0]:.3g} below -{tol:g}")
    return np.clip(w, 0.0, None)


def entropy_of_spectrum(w: np.ndarray) -> float:
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho. Accepts subnormalized PSD inputs."""
    return entropy_of_spectrum(eigvals_psd(rho))


def kron(*ms) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem of ``m`` not listed in ``keep``.

    ``dims`` lists subsystem dimensions in tensor order; ``keep`` is a single
    subsystem index or a sequence of them (kept in ascending order). For the
    bipartite case ``keep`` may also be ``"A"`` or ``"B"``.
    """
    if isinstance(keep, str):
        keep = {"A": 0, "B": 1}[keep]
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims)) if dims else 1
    if m.shape != (total, total):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match dims {dims}")
    keep = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatch(f"keep={keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = m.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # contract traced axes pairwise, highest first so axis numbers stay valid
    for k in sorted(traced, reverse=True):
        nk = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + nk)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def trace_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    if a.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(hermitize(a - b))
    return float(0.5 * np.sum(np.abs(w)))


def max_entangled(d: int) -> np.ndarray:
    """Column vector (1/sqrt d) sum_a |a>|a> of length d*d."""
    if d < 1:
        raise DimensionMismatch("dimension must be positive")
    v = np.zeros((d * d, 1), dtype=complex)
    v[np.arange(d) * (d + 1), 0] = 1.0 / np.sqrt(d)
    return v


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def ket(index: int, d: int) -> np.ndarray:
    v = np.zeros((d, 1), dtype=complex)
    v[index, 0] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1, 1)
    return v @ dagger(v)


def psd_sqrt(m) -> np.ndarray:
    w, u = np.linalg.eigh(hermitize(as_matrix(m)))
    return (u * np.sqrt(np.clip(w, 0.0, None))) @ dagger(u)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitize(g)
