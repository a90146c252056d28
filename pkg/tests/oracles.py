"""Independent reference computations used to check the library.

Nothing here imports sharedrand; values are derived with plain math/numpy
(or frozen from an mpmath evaluation at 30 digits).
"""
import math

import numpy as np

# frozen with mpmath (dps=30)
H_THIRD = 0.918295834054489514787          # H(1/3, 2/3)
LOG2_3_2 = 0.584962500721156181454         # log2(3/2)
CAP_DEPOL_025 = 0.0455659970750350354641   # 1 - H(0.625)
CAP_DEPOL_03 = 0.0659319446245089939923    # 1 - H(0.65)


def h2(x):
    if x in (0.0, 1.0):
        return 0.0
    return -(x * math.log2(x) + (1 - x) * math.log2(1 - x))


def entropy(p):
    return -sum(v * math.log2(v) for v in np.ravel(p) if v > 0)


def mutual_info(p):
    p = np.asarray(p, dtype=float)
    return entropy(p.sum(axis=1)) + entropy(p.sum(axis=0)) - entropy(p)


def edge_closed_form(t):
    """alpha-edge decomposition of a 2x2 table without any search.

    S_A = identity, alpha = first row sum, columns of S_B are the normalized
    rows of the target (any column works for an empty row).
    """
    t = np.asarray(t, dtype=float)
    alpha = t[0].sum()
    cols = []
    for r in range(2):
        s = t[r].sum()
        cols.append(t[r] / s if s > 0 else np.array([0.5, 0.5]))
    return alpha, np.eye(2), np.column_stack(cols)


def werner_min_pt(p):
    return (1 - 3 * p) / 4


def werner_matrix(p):
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    return p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4


def pt_b(m):
    return np.asarray(m).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def born(rho, a, b):
    return np.array([[np.trace(rho @ np.kron(x, y)).real for y in b] for x in a])


def simplex_projection_sort(v):
    """Textbook sort-based projection (Held, Wolfe and Crowder)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - (css - 1) / k > 0)[0][-1]
    theta = (css[rho] - 1) / (rho + 1)
    return np.maximum(v - theta, 0)
