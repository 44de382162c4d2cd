"""Exact integer linear algebra helpers (Smith normal form and friends).

Matrices here are small (a handful of rows and columns), so the classic
elimination algorithm with Python integers is plenty fast and avoids any
floating-point pitfalls.
"""

from __future__ import annotations

import numpy as np


def smith_normal_form(M):
    """Return (U, D, V) with U @ M @ V = D, U and V unimodular.

    D is diagonal with nonnegative entries d_1 | d_2 | ... followed by
    zeros.  Input is any integer matrix (list of lists or array).
    """
    D = np.array(M, dtype=object)
    if D.ndim != 2:
        raise ValueError("need a 2-d integer matrix")
    m, n = D.shape
    U = np.eye(m, dtype=object)
    V = np.eye(n, dtype=object)

    def swap_rows(i, j):
        D[[i, j], :] = D[[j, i], :]
        U[[i, j], :] = U[[j, i], :]

    def swap_cols(i, j):
        D[:, [i, j]] = D[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        D[dst, :] += q * D[src, :]
        U[dst, :] += q * U[src, :]

    def add_col(src, dst, q):
        D[:, dst] += q * D[:, src]
        V[:, dst] += q * V[:, src]

    t = 0
    while t < min(m, n):
        # locate a pivot: smallest nonzero absolute value in the submatrix
        sub = [(abs(D[i, j]), i, j) for i in range(t, m) for j in range(t, n) if D[i, j] != 0]
        if not sub:
            break
        _, pi, pj = min(sub)
        swap_rows(t, pi)
        swap_cols(t, pj)
        again = True
        while again:
            again = False
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    q = D[i, t] // D[t, t]
                    add_row(t, i, -q)
                    if D[i, t] != 0:
                        swap_rows(t, i)
                        again = True
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    q = D[t, j] // D[t, t]
                    add_col(t, j, -q)
                    if D[t, j] != 0:
                        swap_cols(t, j)
                        again = True
        # enforce divisibility of the remaining block by the pivot
        piv = D[t, t]
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i, j] % piv != 0:
                    add_row(i, t, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if D[t, t] < 0:
            D[t, :] *= -1
            U[t, :] *= -1
        t += 1

    return U, D, V


def extended_gcd_row(r):
    """For an integer row r, return (g, c) with r @ c = g = gcd(r) >= 0.

    Also returns a basis of the integer kernel of r as the remaining
    columns: (g, c, kernel_basis) where kernel_basis has shape (len(r), len(r)-1)
    when g > 0, and is the identity when r == 0.
    """
    r = np.array(r, dtype=object).reshape(1, -1)
    n = r.shape[1]
    U, D, V = smith_normal_form(r)
    g = int(D[0, 0])
    if g == 0:
        return 0, np.zeros(n, dtype=object), np.eye(n, dtype=object)
    c = V[:, 0] * int(U[0, 0])
    # r @ V = U^{-1} D; with U 1x1 unimodular, U^{-1} = U
    if int(np.dot(np.array(r[0], dtype=object), np.array(c, dtype=object))) < 0:
        c = -c
    kernel = V[:, 1:]
    return g, c, kernel
