"""Exact dense linear algebra over the prime field F_p.

Matrices are ``int64`` numpy arrays with entries in ``[0, p)``.  Vectors are
rows; a linear map is applied as ``v @ A``.  The row-reduction kernel is the
hot loop of every cohomology computation, so it has a numba implementation and
a vectorised numpy fallback (see ``_accel``).
"""

from __future__ import annotations

import numpy as np

from ._accel import njit, use_numba

_FLOAT_EXACT = 2**52


def as_mod(A, p: int) -> np.ndarray:
    return np.mod(np.asarray(A, dtype=np.int64), p)


@njit
def _inv_mod(a, p):
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit
def _rref_numba(A, p):
    m, n = A.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        k = -1
        for i in range(r, m):
            if A[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[k, j]
                A[k, j] = tmp
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            for j in range(c, n):
                A[r, j] = A[r, j] * inv % p
        for i in range(m):
            if i != r:
                f = A[i, c]
                if f != 0:
                    for j in range(c, n):
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[r] = c
        r += 1
    return A, pivots[:r]


def _rref_numpy(A: np.ndarray, p: int):
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[np.ix_(rows, np.arange(c, n))] = (A[np.ix_(rows, np.arange(c, n))] - np.outer(col[rows], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A, np.array(pivots, dtype=np.int64)


def rref(A, p: int, *, accel: bool | None = None):
    """Reduced row echelon form of ``A`` mod ``p``.

    Returns ``(R, pivots)`` where ``R`` has the same shape as ``A`` (zero rows
    at the bottom) and ``pivots`` lists the pivot column of each nonzero row.
    """
    A = as_mod(A, p).copy()
    if A.size == 0:
        return A, np.zeros(0, dtype=np.int64)
    if accel is None:
        accel = use_numba()
    if accel:
        return _rref_numba(A, p)
    return _rref_numpy(A, p)


def rank(A, p: int) -> int:
    return len(rref(A, p)[1])


def row_basis(A, p: int) -> np.ndarray:
    R, piv = rref(A, p)
    return R[: len(piv)]


def right_kernel(A, p: int) -> np.ndarray:
    """Rows spanning ``{x : A @ x = 0}``."""
    A = as_mod(A, p)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    piv = list(piv)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for i, c in enumerate(piv):
            K[t, c] = (-R[i, f]) % p
    return K


def left_kernel(A, p: int) -> np.ndarray:
    """Rows spanning ``{v : v @ A = 0}``."""
    return right_kernel(as_mod(A, p).T, p)


def matmul(A, B, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        C = np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
        return C % p
    return (A @ B) % p


def matpow(A, e: int, p: int) -> np.ndarray:
    A = as_mod(A, p)
    result = np.eye(A.shape[0], dtype=np.int64)
    while e > 0:
        if e & 1:
            result = matmul(result, A, p)
        A = matmul(A, A, p)
        e >>= 1
    return result


def inverse(A, p: int) -> np.ndarray:
    A = as_mod(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return R[:, n:]


def coordinates(basis, X, p: int, *, check: bool = True) -> np.ndarray:
    """Solve ``C @ basis = X`` for ``C``; ``basis`` must have independent rows."""
    basis = as_mod(basis, p)
    X = as_mod(np.atleast_2d(X), p)
    k = basis.shape[0]
    if k == 0:
        if check and X.any():
            raise ValueError("vector not in the (zero) row space")
        return np.zeros((X.shape[0], 0), dtype=np.int64)
    _, piv = rref(basis, p)
    if len(piv) != k:
        raise ValueError("basis rows are dependent")
    C = matmul(X[:, piv], inverse(basis[:, piv], p), p)
    if check and not np.array_equal(matmul(C, basis, p), X):
        raise ValueError("vector not in the row space")
    return C


def restrict(basis, A, p: int) -> np.ndarray:
    """Matrix of ``v -> v @ A`` on the invariant row space spanned by ``basis``."""
    return coordinates(basis, matmul(basis, A, p), p)


def intersect_rowspaces(A, B, p: int) -> np.ndarray:
    A = as_mod(A, p)
    B = as_mod(B, p)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    K = left_kernel(np.vstack([A, B]), p)
    return row_basis(matmul(K[:, : A.shape[0]], A, p), p)


def charpoly(A, p: int) -> list[int]:
    """Characteristic polynomial of ``A`` mod ``p``, coefficients high degree first.

    Hessenberg reduction followed by the usual three-term recurrence; exact
    over F_p and O(n^3).
    """
    H = as_mod(A, p).copy()
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.flatnonzero(H[m:, m - 1])
        if nz.size == 0:
            continue
        i = m + nz[0]
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        inv = pow(int(H[m, m - 1]), p - 2, p)
        for i in range(m + 1, n):
            u = H[i, m - 1] * inv % p
            if u:
                H[i, :] = (H[i, :] - u * H[m, :]) % p
                H[:, m] = (H[:, m] + u * H[:, i]) % p
    # polys[k] = charpoly of leading k x k block, low degree first
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[-1]
        cur = [0] + prev  # x * p_{k-1}
        h = int(H[k - 1, k - 1])
        for d, c in enumerate(prev):
            cur[d] = (cur[d] - h * c) % p
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = prod * int(H[i, i - 1]) % p
            if prod == 0:
                break
            coef = int(H[i - 1, k - 1]) * prod % p
            if coef:
                for d, c in enumerate(polys[i - 1]):
                    cur[d] = (cur[d] - coef * c) % p
        polys.append(cur)
    return [c % p for c in reversed(polys[-1])]


def poly_eval_matrix(coeffs_high_first, A, p: int) -> np.ndarray:
    A = as_mod(A, p)
    n = A.shape[0]
    result = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in coeffs_high_first:
        result = (matmul(result, A, p) + int(c) * eye) % p
    return result
