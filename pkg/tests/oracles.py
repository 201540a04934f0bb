"""Independent reference computations used by the tests."""

import numpy as np


def gauss_solve(a, b):
    """Solve a square system by Gaussian elimination with partial pivoting."""
    a = np.array(a, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    n = a.shape[0]
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, n):
            f = a[row, col] / a[col, col]
            a[row, col:] -= f * a[col, col:]
            b[row] -= f * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def normal_equations_lstsq(a, y):
    a = np.asarray(a, dtype=np.float64)
    return gauss_solve(a.T @ a, a.T @ np.asarray(y, dtype=np.float64))


def random_well_conditioned(rng, m, n, max_cond=1e6):
    while True:
        a = rng.standard_normal((m, n))
        if np.linalg.cond(a) < max_cond:
            return a
