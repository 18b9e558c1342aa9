"""Exact row reduction, rank, kernel and image over a :class:`FieldSpec`.

Dense matrices are numpy arrays (int64 mod p, or object arrays of Fractions).
Matrices with more columns than ``SPARSE_THRESHOLD`` are reduced with a
dictionary-of-rows elimination instead, which keeps the multiplication-map
matrices (a handful of nonzeros per column) cheap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldSpec

SPARSE_THRESHOLD = 2000


@dataclass(frozen=True)
class RowEchelon:
    """Reduced row echelon form: ``rows`` has one row per pivot."""

    rows: np.ndarray
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _use_sparse(M: np.ndarray, threshold: int | None) -> bool:
    threshold = SPARSE_THRESHOLD if threshold is None else threshold
    return M.shape[1] > threshold


def _eliminate_dense(field: FieldSpec, M: np.ndarray, full: bool) -> RowEchelon:
    M = field.reduce(np.array(M, dtype=field.dtype, copy=True))
    nrows, ncols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = field.inv(M[r, c])
        M[r, c:] = field.reduce(M[r, c:] * inv)
        lo = 0 if full else r + 1
        col = M[lo:, c].copy()
        if full:
            col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            idx = hit + lo
            M[idx, c:] = field.reduce(
                M[idx, c:] - field.reduce(np.outer(col[hit], M[r, c:]))
            )
        pivots.append(c)
        r += 1
    return RowEchelon(M[:r], tuple(pivots))


def _eliminate_sparse(field: FieldSpec, M: np.ndarray, full: bool) -> RowEchelon:
    p = field.p if field.is_prime else None
    ncols = M.shape[1]
    basis: dict[int, dict[int, object]] = {}
    for i in range(M.shape[0]):
        nz = np.flatnonzero(M[i])
        row = {int(c): field(M[i, c]) for c in nz}
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            piv = basis.get(c)
            if piv is None:
                inv = field.inv(row[c])
                row = {k: (v * inv) % p if p else v * inv for k, v in row.items()}
                basis[c] = row
                break
            f = row[c]
            for k, v in piv.items():
                w = row.get(k, 0) - f * v
                if p:
                    w %= p
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
    order = sorted(basis)
    if full:
        # back-substitute from the last pivot upwards
        for c in reversed(order):
            piv = basis[c]
            for c2 in order:
                if c2 >= c:
                    break
                row = basis[c2]
                f = row.get(c)
                if not f:
                    continue
                for k, v in piv.items():
                    w = row.get(k, 0) - f * v
                    if p:
                        w %= p
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
    out = field.zeros((len(order), ncols))
    for r, c in enumerate(order):
        for k, v in basis[c].items():
            out[r, k] = v
    return RowEchelon(out, tuple(order))


def rref(field: FieldSpec, M, threshold: int | None = None) -> RowEchelon:
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return RowEchelon(field.zeros((0, M.shape[1])), ())
    if _use_sparse(M, threshold):
        return _eliminate_sparse(field, M, full=True)
    return _eliminate_dense(field, M, full=True)


def rank(field: FieldSpec, M, threshold: int | None = None) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    # elimination cost is driven by the short side
    if M.shape[0] > M.shape[1]:
        M = M.T
    if _use_sparse(M, threshold):
        return _eliminate_sparse(field, M, full=False).rank
    return _eliminate_dense(field, M, full=False).rank


def kernel_from_rref(field: FieldSpec, E: RowEchelon, ncols: int) -> np.ndarray:
    """Rows of the result form a basis of the right kernel."""
    free = [c for c in range(ncols) if c not in set(E.pivots)]
    K = field.zeros((len(free), ncols))
    for k, f in enumerate(free):
        K[k, f] = field.one()
        for r, c in enumerate(E.pivots):
            K[k, c] = field.reduce(-E.rows[r, f]) if field.is_prime else -E.rows[r, f]
    return K


def rank_kernel_image(field: FieldSpec, M, threshold: int | None = None):
    """Return ``(rank, kernel, image)``.

    ``kernel`` has the kernel basis vectors as rows; ``image`` has a basis of
    the column space as columns (a subset of the columns of ``M``).
    """
    M = np.asarray(M)
    nrows, ncols = M.shape
    E = rref(field, M, threshold)
    K = kernel_from_rref(field, E, ncols)
    image = field.reduce(np.array(M[:, list(E.pivots)], dtype=field.dtype)).reshape(
        nrows, len(E.pivots)
    )
    return E.rank, K, image


def matmul(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if field.is_prime:
        inner = max(A.shape[1], 1)
        if (field.p - 1) ** 2 * inner < 2**62:
            return (A.astype(np.int64) @ B.astype(np.int64)) % field.p
        out = A.astype(object) @ B.astype(object)
        return (out % field.p).astype(np.int64)
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return field.zeros((A.shape[0], B.shape[1]))
    return A @ B


class Subspace:
    """A subspace W of k^N kept in reduced echelon form.

    ``coords`` projects vectors onto k^N / W in the coordinates of the
    non-pivot positions.
    """

    def __init__(self, field: FieldSpec, spanning_columns: np.ndarray, ambient: int):
        self.field = field
        self.ambient = ambient
        cols = np.asarray(spanning_columns)
        if cols.ndim != 2 or cols.shape[0] != ambient:
            raise ValueError("spanning columns do not live in the ambient space")
        self.echelon = rref(field, cols.T) if cols.shape[1] and ambient else RowEchelon(
            field.zeros((0, ambient)), ()
        )
        piv = set(self.echelon.pivots)
        self.free = tuple(c for c in range(ambient) if c not in piv)

    @property
    def dim(self) -> int:
        return self.echelon.rank

    @property
    def codim(self) -> int:
        return len(self.free)

    def quotient_map(self) -> np.ndarray:
        """Matrix (codim x ambient) of k^N -> k^N / W."""
        f = self.field
        Q = f.zeros((self.codim, self.ambient))
        R = self.echelon.rows
        piv = list(self.echelon.pivots)
        for k, c in enumerate(self.free):
            Q[k, c] = f.one()
            if piv:
                col = -R[:, c]
                Q[k, piv] = f.reduce(col) if f.is_prime else col
        return Q

    def section(self) -> np.ndarray:
        """Matrix (ambient x codim) lifting quotient coordinates to k^N."""
        S = self.field.zeros((self.ambient, self.codim))
        for k, c in enumerate(self.free):
            S[c, k] = self.field.one()
        return S
