"""Deterministic dense linear algebra over a :class:`~hypsupport.fields.Field`.

Matrices are 2-d ``int64`` numpy arrays holding canonical field elements.
Row reduction always takes the leftmost pivot column and, inside it, the
first row with a nonzero entry, so kernels and complements are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ComplexError, WindowTooSmall
from .fields import Field


def as_matrix(A, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        if A.size == 0 and rows is not None and cols is not None:
            return np.zeros((rows, cols), dtype=np.int64)
        raise ValueError("expected a 2-d array")
    return A


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(F: Field, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(A, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        lead = A[r, c]
        if lead != 1:
            A[r] = F.mul(A[r], F.inv(lead))
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others] = F.sub(A[others], F.mul(col[others, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: Field, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(F, A)[1])


def kernel_basis(F: Field, A) -> np.ndarray:
    """Rows spanning ``{v : A v^T = 0}``; ``cols(A) - rank(A)`` rows."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return identity(cols)
    R, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = zeros(len(free), cols)
    for t, f in enumerate(free):
        K[t, f] = 1
        if pivots:
            K[t, pivots] = F.neg(R[:, f])
    return K


def row_space(F: Field, A) -> tuple[np.ndarray, list[int]]:
    """Echelon basis of the row space (alias of :func:`rref` tolerant of empties)."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[0] == 0:
        return zeros(0, A.shape[1]), []
    return rref(F, A)


def reduce_rows(F: Field, V, basis: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Reduce each row of ``V`` modulo the echelon ``basis`` (clears pivot columns)."""
    V = np.array(V, dtype=np.int64, copy=True)
    if not pivots or V.shape[0] == 0:
        return V
    coeff = V[:, pivots]
    return F.sub(V, F.matmul(coeff, basis))


def solve(F: Field, A, b) -> np.ndarray | None:
    """One solution ``x`` of ``A x = b`` or ``None`` if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    R, pivots = rref(F, np.hstack([A, b]))
    n = A.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, n]
    return x


def direct_sum(*mats: np.ndarray) -> np.ndarray:
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = zeros(r, c)
    i = j = 0
    for m in mats:
        out[i : i + m.shape[0], j : j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


@dataclass(frozen=True)
class ChainComplex:
    """Bounded complex ``C_lo <- ... <- C_hi`` of finite-dimensional spaces.

    ``diffs[d]`` is the matrix of ``d_d : C_d -> C_{d-1}`` acting on column
    vectors (shape ``dims[d-1] x dims[d]``) for ``lo < d <= hi``.
    """

    field: Field
    lo: int
    hi: int
    dims: dict
    diffs: dict = dc_field(repr=False)
    check: bool = True

    def __post_init__(self):
        for d in range(self.lo + 1, self.hi + 1):
            M = self.diffs[d]
            if M.shape != (self.dims[d - 1], self.dims[d]):
                raise ComplexError(
                    f"d_{d} has shape {M.shape}, expected {(self.dims[d - 1], self.dims[d])}"
                )
        if self.check:
            for d in range(self.lo + 2, self.hi + 1):
                comp = self.field.matmul(self.diffs[d - 1], self.diffs[d])
                if comp.any():
                    raise ComplexError(f"d_{d - 1} d_{d} != 0")

    def term(self, d: int) -> int:
        return self.dims.get(d, 0)


def homology_dims(C: ChainComplex) -> dict[int, int]:
    """``dim H_i`` for the interior degrees ``lo < i < hi``."""
    if C.hi - C.lo < 2:
        raise WindowTooSmall(f"window [{C.lo}, {C.hi}] has no interior degree")
    ranks = {d: rank(C.field, C.diffs[d]) for d in range(C.lo + 1, C.hi + 1)}
    return {
        i: C.dims[i] - ranks[i] - ranks[i + 1]
        for i in range(C.lo + 1, C.hi)
    }
