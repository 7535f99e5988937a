"""Hamiltonians of permutation dynamics.

A cyclic permutation of N states taking time T per step (a "cogwheel") has
an exactly known Hamiltonian with uniformly spaced levels 2*pi*n/(N T).
Arbitrary permutations are handled cycle by cycle.  All matrices are dense
numpy arrays; the module is a verification tool, so sizes are capped.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "VerificationError",
    "CogwheelSpec",
    "permutation_unitary",
    "hamiltonian_standard",
    "hamiltonian_diagonal",
    "matrix_exponential",
    "max_deviation",
    "verify_exponential",
    "cycle_decomposition",
    "permutation_matrix",
    "cycle_hamiltonian",
    "exchange_operator",
    "exchange_pauli_check",
    "MAX_DIMENSION",
]

MAX_DIMENSION = 4096

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class VerificationError(AssertionError):
    """A numerical identity failed beyond its tolerance."""


@dataclass(frozen=True)
class CogwheelSpec:
    N: int
    T: float = 1.0
    phases: tuple = field(default=())

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        phases = tuple(float(p) for p in self.phases) or (0.0,) * self.N
        if len(phases) != self.N:
            raise ValueError(f"expected {self.N} phases, got {len(phases)}")
        object.__setattr__(self, "phases", phases)

    @property
    def has_phases(self):
        return any(p != 0.0 for p in self.phases)


def permutation_unitary(spec):
    """N x N matrix with ``U[k+1, k] = exp(i phi_k)`` (indices mod N)."""
    N = spec.N
    U = np.zeros((N, N), dtype=complex)
    k = np.arange(N)
    U[(k + 1) % N, k] = np.exp(1j * np.array(spec.phases))
    return U


def hamiltonian_standard(spec):
    """Cogwheel Hamiltonian in the basis the permutation acts on.

    Diagonal ``pi (N-1) / (N T)``, off-diagonal
    ``(pi / (N T)) (-1 + i cot(pi (m - n) / N))``, so that
    ``expm(-i H T)`` equals :func:`permutation_unitary`.
    """
    if spec.has_phases:
        raise ValueError("standard-basis Hamiltonian is only provided for zero phases")
    N, T = spec.N, spec.T
    n = np.arange(N)
    diff = n[None, :] - n[:, None]  # m - n
    off = diff % N != 0
    H = np.full((N, N), np.pi * (N - 1) / (N * T), dtype=complex)
    H[off] = (np.pi / (N * T)) * (-1 + 1j / np.tan(np.pi * diff[off] / N))
    return H


def hamiltonian_diagonal(spec):
    """Energy levels ``(2 pi (n-1) - sum phi) / (N T)``, n = 1..N."""
    N, T = spec.N, spec.T
    return (2 * np.pi * np.arange(N) - sum(spec.phases)) / (N * T)


def matrix_exponential(H, t=1.0, method="pade"):
    """``expm(-i H t)``; ``method`` is ``"pade"`` (scaling and squaring) or
    ``"spectral"`` (Hermitian eigendecomposition)."""
    if method == "pade":
        return scipy.linalg.expm(-1j * t * H)
    if method == "spectral":
        w, V = np.linalg.eigh(H)
        return (V * np.exp(-1j * t * w)) @ V.conj().T
    raise ValueError(f"unknown method {method!r}")


def max_deviation(A, B):
    """Max-entry absolute difference."""
    return float(np.abs(np.asarray(A) - np.asarray(B)).max())


def _check_deviation(A, B, tol, what):
    D = np.abs(A - B)
    dev = float(D.max())
    if dev > tol:
        i, j = np.unravel_index(int(D.argmax()), D.shape)
        raise VerificationError(
            f"{what}: deviation {dev:.3e} > {tol:.1e} at entry ({i}, {j}): "
            f"got {A[i, j]:.12g}, expected {B[i, j]:.12g}"
        )
    return dev


def verify_exponential(spec, tol=1e-9, method="pade"):
    """Check ``expm(-i H T) == U`` entrywise; return the max deviation."""
    H = hamiltonian_standard(spec)
    return _check_deviation(
        matrix_exponential(H, spec.T, method), permutation_unitary(spec), tol, f"cogwheel N={spec.N}"
    )


def cycle_decomposition(perm):
    """Disjoint cycles of ``perm`` (``i -> perm[i]``), each starting at its
    smallest element, ordered by that element.  Fixed points are 1-cycles."""
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.size
    if perm.ndim != 1 or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError("input is not a bijection on 0..n-1")
    seen = np.zeros(n, dtype=bool)
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc, j = [], start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = int(perm[j])
        cycles.append(cyc)
    return cycles


def permutation_matrix(perm):
    """``P[perm[i], i] = 1``: column i carries basis state i to ``perm[i]``."""
    perm = np.asarray(perm, dtype=np.int64)
    P = np.zeros((perm.size, perm.size))
    P[perm, np.arange(perm.size)] = 1.0
    return P


def cycle_hamiltonian(perm, T=1.0, max_dim=MAX_DIMENSION):
    """Hermitian H with ``expm(-i H T)`` equal to the permutation matrix.

    Each cycle of length N gets the N-state cogwheel block, laid out along
    the cycle order.
    """
    perm = np.asarray(perm, dtype=np.int64)
    if perm.size > max_dim:
        raise ValueError(f"dimension {perm.size} exceeds guard {max_dim}")
    H = np.zeros((perm.size, perm.size), dtype=complex)
    blocks = {}
    for cyc in cycle_decomposition(perm):
        N = len(cyc)
        if N not in blocks:
            blocks[N] = hamiltonian_standard(CogwheelSpec(N, T))
        idx = np.array(cyc)
        H[np.ix_(idx, idx)] = blocks[N]
    return H


def exchange_operator(n_spins, i, j):
    """Matrix swapping spins ``i`` and ``j`` (0-based) on ``n_spins`` two-state
    spins; basis index bit ``n_spins - 1 - k`` is spin k (1 = down)."""
    dim = 2**n_spins
    P = np.zeros((dim, dim))
    for state in range(dim):
        bi = (state >> (n_spins - 1 - i)) & 1
        bj = (state >> (n_spins - 1 - j)) & 1
        image = state
        if bi != bj:
            image ^= (1 << (n_spins - 1 - i)) | (1 << (n_spins - 1 - j))
        P[image, state] = 1.0
    return P


def _pauli_dot(n_spins, i, j):
    out = np.zeros((2**n_spins, 2**n_spins), dtype=complex)
    for sigma in PAULI:
        ops = [np.eye(2)] * n_spins
        ops[i] = sigma
        ops[j] = sigma
        term = ops[0]
        for op in ops[1:]:
            term = np.kron(term, op)
        out += term
    return out


def exchange_pauli_check(tol=1e-12):
    """Check the two-spin exchange identities.

    Returns a dict with the deviations of ``P = (sigma_1 . sigma_2 + 1) / 2``
    and ``P @ P = 1`` (4 x 4), and the norm of ``[P12, P23]`` on three spins,
    which must be nonzero.
    """
    P = exchange_operator(2, 0, 1)
    identity_dev = _check_deviation(P.astype(complex), (_pauli_dot(2, 0, 1) + np.eye(4)) / 2, tol, "P = (s.s+1)/2")
    square_dev = _check_deviation(P @ P, np.eye(4), tol, "P^2 = 1")
    P12 = exchange_operator(3, 0, 1)
    P23 = exchange_operator(3, 1, 2)
    commutator = float(np.abs(P12 @ P23 - P23 @ P12).max())
    if commutator <= tol:
        raise VerificationError("[P12, P23] vanished")
    return {"pauli_identity": identity_dev, "square": square_dev, "commutator": commutator}
