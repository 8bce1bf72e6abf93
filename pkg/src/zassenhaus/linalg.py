"""Dense exact linear algebra over a table-driven finite field.

Matrices are 2D integer arrays of packed field elements.  Row reduction
always pivots on the first nonzero entry so every basis we report is
reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np

from .field import GF


class NoSolution(ValueError):
    pass


class NotDiagonalizable(ValueError):
    """The supplied spectrum does not account for the whole space."""


def identity(size: int) -> np.ndarray:
    return np.eye(size, dtype=np.int64)


def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    A = np.array(M, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = F.mul(F.inv(int(A[r, c])), A[r])
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = F.sub(A[hit], F.mul(col[hit, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F: GF, M) -> np.ndarray:
    """Kernel basis as rows, one per free column, in echelon order."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, pivots = rref(F, M) if M.shape[0] else (M, [])
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = F.neg(int(R[row, fc]))
    return basis


def solve(F: GF, M, target) -> np.ndarray:
    """Some x with M x = target (the one with zero free variables)."""
    M = np.asarray(M, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64)
    aug = np.concatenate([M, target[:, None]], axis=1)
    R, pivots = rref(F, aug)
    if pivots and pivots[-1] == M.shape[1]:
        raise NoSolution("target is outside the column space")
    x = np.zeros(M.shape[1], dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, -1]
    return x


def inverse(F: GF, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    size = M.shape[0]
    R, pivots = rref(F, np.concatenate([M, identity(size)], axis=1))
    if pivots[:size] != list(range(size)):
        raise NoSolution("matrix is singular")
    return R[:, size:]


def matpow(F: GF, M, e: int) -> np.ndarray:
    """M**e by repeated squaring (works on stacks of matrices)."""
    M = np.asarray(M, dtype=np.int64)
    result = None
    base = M
    while e:
        if e & 1:
            result = base if result is None else F.matmul(result, base)
        e >>= 1
        if e:
            base = F.matmul(base, base)
    if result is None:
        result = np.broadcast_to(identity(M.shape[-1]), M.shape).copy()
    return result


def matrix_p_power(F: GF, M, k: int) -> np.ndarray:
    """M**(p**k): k rounds of raising to the p-th power."""
    M = np.asarray(M, dtype=np.int64)
    for _ in range(k):
        M = matpow(F, M, F.p)
    return M


def eigen_split(F: GF, M, spectrum) -> dict[int, np.ndarray]:
    """Eigenspace (rows of a basis) for each candidate eigenvalue.

    Raises NotDiagonalizable when the eigenspaces do not fill the space.
    """
    M = np.asarray(M, dtype=np.int64)
    size = M.shape[0]
    spaces = {}
    total = 0
    eye = identity(size)
    for lam in spectrum:
        lam = int(lam)
        shifted = F.sub(M, F.mul(lam, eye))
        basis = nullspace(F, shifted)
        if len(basis):
            spaces[lam] = basis
            total += len(basis)
    if total != size:
        raise NotDiagonalizable(f"eigenspaces span {total} of {size} dimensions")
    return spaces


def is_zero(M) -> bool:
    return not np.any(M)
