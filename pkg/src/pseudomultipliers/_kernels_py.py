"""Pure numpy versions of the scan kernels (used when the extension is absent)."""
from __future__ import annotations

import numpy as np


def pair_gap_scan(G, R, det_floor: float = 1e-14) -> np.ndarray:
    """Squared gap between ``span{y_a, y_b}`` and a target, for every pair.

    ``G[a, b] = <y_b, y_a>`` is the Gram matrix of the candidate vectors and
    ``R`` the Gram matrix of their residuals off the target.  The squared gap
    is the largest eigenvalue of the 2x2 pencil ``(R_ab, G_ab)``.  Pairs whose
    normalized Gram determinant is below ``det_floor`` (and the diagonal) get 1.
    """
    G = np.asarray(G, dtype=complex)
    R = np.asarray(R, dtype=complex)
    ga = np.real(np.diag(G))
    ra = np.real(np.diag(R))
    gaa, gbb = ga[:, None], ga[None, :]
    raa, rbb = ra[:, None], ra[None, :]
    dg = gaa * gbb - np.abs(G) ** 2
    ok = dg > det_floor * gaa * gbb
    dg_safe = np.where(ok, dg, 1.0)
    t = (gbb * raa + gaa * rbb - 2.0 * np.real(G * R.T)) / dg_safe
    d = (raa * rbb - np.abs(R) ** 2) / dg_safe
    lam = 0.5 * t + np.sqrt(np.maximum(0.25 * t * t - d, 0.0))
    out = np.where(ok, np.clip(lam, 0.0, 1.0), 1.0)
    np.fill_diagonal(out, 1.0)
    return out


def line_gap_scan(G, R) -> np.ndarray:
    """Squared gap between each line ``C y_a`` and a one-dimensional target."""
    g = np.real(np.diag(np.asarray(G)))
    r = np.real(np.diag(np.asarray(R)))
    return np.clip(np.where(g > 0, r / np.where(g > 0, g, 1.0), 1.0), 0.0, 1.0)
