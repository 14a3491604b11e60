"""Dense determinants, Pfaffians, and a Hermitian eigensolver.

Determinants and spectra are delegated to LAPACK through numpy; the
Pfaffian uses skew-symmetric (Parlett-Reid style) elimination with
pivoting, since no standard library routine exists for it.
"""

import numpy as np

__all__ = ["determinant", "skew_from_upper", "pfaffian", "symmetric_eigenvalues"]


def determinant(m):
    """Determinant by LU with partial pivoting."""
    m = np.asarray(m, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError("matrix must be square")
    return np.linalg.det(m)


def skew_from_upper(upper):
    """Skew-symmetric matrix A with A[i, j] = upper[i, j] for i < j.

    The diagonal and lower triangle of the input are ignored, so the result
    is exactly skew by construction.
    """
    upper = np.asarray(upper, dtype=float)
    a = np.triu(upper, k=1)
    return a - a.T


def pfaffian(a, atol=1e-12):
    """Pfaffian of an even-dimensional skew-symmetric matrix.

    Skew elimination with pivoting on the largest magnitude in the working
    column; satisfies pfaffian(a)^2 = det(a).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n % 2 != 0:
        raise ValueError("Pfaffian requires even dimension")
    scale = np.abs(a).max() if n else 0.0
    if not np.allclose(a, -a.T, atol=atol * max(scale, 1.0)):
        raise ValueError("matrix is not skew-symmetric")
    if n == 0:
        return 1.0

    pf = 1.0
    for k in range(0, n - 2, 2):
        # pivot: bring the largest |a[k, j]|, j > k, into position k+1
        col = np.abs(a[k, k + 1:])
        j = k + 1 + int(np.argmax(col))
        if col.max() == 0.0:
            return 0.0
        if j != k + 1:
            a[[k + 1, j], :] = a[[j, k + 1], :]
            a[:, [k + 1, j]] = a[:, [j, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf *= pivot
        # eliminate the rest of row/column k and k+1
        tail = slice(k + 2, n)
        u = a[k, tail] / pivot
        v = a[k + 1, tail] / pivot
        a[np.ix_(range(k + 2, n), range(k + 2, n))] += np.outer(v, a[k, tail]) - np.outer(u, a[k + 1, tail])
        a[k, tail] = 0.0
        a[tail, k] = 0.0
        a[k + 1, tail] = 0.0
        a[tail, k + 1] = 0.0
    return pf * a[n - 2, n - 1]


def symmetric_eigenvalues(m, atol=1e-12):
    """Ascending eigenvalues of a real symmetric or complex Hermitian matrix."""
    m = np.asarray(m)
    scale = np.abs(m).max() if m.size else 0.0
    if not np.allclose(m, np.conj(np.swapaxes(m, -1, -2)), atol=atol * max(scale, 1.0)):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)
