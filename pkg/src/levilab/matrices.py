"""Dense matrix helpers over a prime field F_q.

Matrices are numpy int arrays with entries reduced mod q.  Batched helpers
accept arrays of shape (..., n, n).  Row spaces are canonicalized through
reduced row echelon form, which doubles as the encoding of a subspace.
"""

from __future__ import annotations

import numpy as np


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int8)


def mul(a, b, q: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % q


def inv(a, q: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % q
    n = a.shape[0]
    m = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % q), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
        m[c] = m[c] * pow(int(m[c][c]), q - 2, q) % q
        for r in range(n):
            if r != c and m[r][c]:
                m[r] = (m[r] - m[r][c] * m[c]) % q
    return m[:, n:].astype(np.int8)


def det(a, q: int) -> int:
    a = np.asarray(a, dtype=np.int64) % q
    a = a.copy()
    n = a.shape[0]
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] % q), None)
        if piv is None:
            return 0
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            d = (-d) % q
        d = d * a[c][c] % q
        ic = pow(int(a[c][c]), q - 2, q)
        a[c] = a[c] * ic % q
        for r in range(c + 1, n):
            if a[r][c]:
                a[r] = (a[r] - a[r][c] * a[c]) % q
    return d % q


def rref(rows, q: int):
    """Reduced row echelon form; returns (R, pivot_columns) with zero rows
    dropped."""
    B = np.asarray(rows, dtype=np.int64) % q
    if B.ndim == 1:
        B = B[None]
    B = B.copy()
    nr, nc = B.shape
    piv = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if B[i][c] % q), None)
        if pr is None:
            continue
        if pr != r:
            B[[r, pr]] = B[[pr, r]]
        B[r] = B[r] * pow(int(B[r][c]), q - 2, q) % q
        for i in range(nr):
            if i != r and B[i][c]:
                B[i] = (B[i] - B[i][c] * B[r]) % q
        piv.append(c)
        r += 1
    return B[:r], piv


def rank(rows, q: int) -> int:
    return len(rref(rows, q)[1])


def encode(m) -> bytes:
    """Row-major byte encoding of a matrix (the canonical element encoding)."""
    return np.asarray(m, dtype=np.int8).tobytes()


def subspace_key(rows, q: int) -> bytes:
    """Canonical byte key of a row space (its RREF, prefixed by its shape)."""
    R, _ = rref(rows, q)
    return bytes([R.shape[0], R.shape[1]]) + R.astype(np.int8).tobytes()


def in_rowspace(vecs, basis, q: int) -> bool:
    """Whether every row of `vecs` lies in the row space of `basis`."""
    R, piv = rref(basis, q)
    V = np.asarray(vecs, dtype=np.int64) % q
    if V.ndim == 1:
        V = V[None]
    V = V.copy()
    for r, c in enumerate(piv):
        f = V[:, c].copy()
        V = (V - f[:, None] * R[r][None, :]) % q
    return bool((V == 0).all())


def intersect_rowspaces(A, B, q: int) -> np.ndarray:
    """Basis (RREF) of the intersection of two row spaces."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64)) % q
    B = np.atleast_2d(np.asarray(B, dtype=np.int64)) % q
    RA, _ = rref(A, q)
    RB, _ = rref(B, q)
    if RA.shape[0] == 0 or RB.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    # solve x*RA = y*RB: null space of [RA^T | -RB^T]
    n = RA.shape[1]
    M = np.concatenate([RA.T, (-RB.T) % q], axis=1) % q
    K = nullspace_mod(M, q)
    if K.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    xs = K[:, : RA.shape[0]]
    vecs = (xs @ RA) % q
    R, _ = rref(vecs, q)
    return R


def nullspace_mod(M, q: int) -> np.ndarray:
    """Basis of the right null space of M over F_q (rows are basis vectors)."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64)) % q
    nr, nc = M.shape
    R, piv = rref(M, q)
    free = [c for c in range(nc) if c not in piv]
    out = np.zeros((len(free), nc), dtype=np.int64)
    for k, fc in enumerate(free):
        out[k][fc] = 1
        for r, pc in enumerate(piv):
            out[k][pc] = (-int(R[r][fc])) % q
    return out


def gram(basis, form, q: int) -> np.ndarray:
    B = np.atleast_2d(np.asarray(basis, dtype=np.int64)) % q
    return (B @ (np.asarray(form, dtype=np.int64) % q) @ B.T) % q


def radical_dim(basis, form, q: int) -> int:
    """Dimension of the radical of the form restricted to the row space."""
    G = gram(basis, form, q)
    return G.shape[0] - rank(G, q)


def witt_index(basis, form, q: int, symmetric: bool) -> int:
    """Witt index of the restricted form on the (assumed nondegenerate part of
    the) row space; brute force, intended for dimension <= 6."""
    B, _ = rref(np.atleast_2d(np.asarray(basis, dtype=np.int64)) % q, q)
    k = B.shape[0]
    if k == 0:
        return 0
    G = gram(B, form, q)
    if rank(G, q) < k:
        raise ValueError("witt_index expects a nondegenerate restriction")
    # find an isotropic vector, split a hyperbolic plane, recurse
    for x in _nonzero_coords(k, q):
        if symmetric and int(x @ G @ x % q) != 0:
            continue
        # partner y with <x,y> != 0
        w = (G @ x) % q
        if not w.any():
            continue
        j = int(np.nonzero(w)[0][0])
        y = np.zeros(k, dtype=np.int64)
        y[j] = 1
        # complement = vectors orthogonal to x and y
        M = np.stack([(G @ x) % q, (G @ y) % q])
        comp = nullspace_mod(M, q)
        sub = (comp @ B) % q
        if sub.shape[0] == 0:
            return 1
        return 1 + witt_index(sub, form, q, symmetric)
    return 0


def _nonzero_coords(k, q):
    if k > 6:
        raise ValueError("witt_index brute force limited to dim <= 6")
    idx = np.indices((q,) * k).reshape(k, -1).T
    return [x for x in idx.astype(np.int64) if x.any()]


def anisotropic_dim(basis, form, q: int, symmetric: bool) -> int:
    """Dimension of the anisotropic kernel of the restricted form: strip the
    radical, then subtract two per hyperbolic plane."""
    B, _ = rref(np.atleast_2d(np.asarray(basis, dtype=np.int64)) % q, q)
    k = B.shape[0]
    if k == 0:
        return 0
    G = gram(B, form, q)
    K = nullspace_mod(G, q)
    rad = K.shape[0]
    if rad:
        # complement of the radical inside the row space
        R, piv = rref(K, q)
        free = [c for c in range(k) if c not in piv]
        comp = np.zeros((len(free), k), dtype=np.int64)
        for i, c in enumerate(free):
            comp[i][c] = 1
        sub = (comp @ B) % q
    else:
        sub = B
    nd = sub.shape[0]
    if nd == 0:
        return 0
    return nd - 2 * witt_index(sub, form, q, symmetric)


def projection_onto(rows, target_basis, complement_basis, q: int) -> np.ndarray:
    """Project each row of `rows` onto span(target) along span(complement)."""
    T = np.atleast_2d(np.asarray(target_basis, dtype=np.int64)) % q
    C = np.atleast_2d(np.asarray(complement_basis, dtype=np.int64)) % q
    V = np.atleast_2d(np.asarray(rows, dtype=np.int64)) % q
    n = T.shape[1]
    B = np.concatenate([T, C], axis=0)
    assert B.shape[0] == n, "target + complement must span"
    Binv = inv(B, q).astype(np.int64)
    coords = (V @ Binv) % q
    coords[:, T.shape[0]:] = 0
    return (coords @ B) % q
