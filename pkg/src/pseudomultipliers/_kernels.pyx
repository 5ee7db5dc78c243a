# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def pair_gap_scan(G, R, double det_floor=1e-14):
    cdef double complex[:, ::1] g = np.ascontiguousarray(G, dtype=np.complex128)
    cdef double complex[:, ::1] r = np.ascontiguousarray(R, dtype=np.complex128)
    cdef Py_ssize_t m = g.shape[0]
    out_arr = np.ones((m, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t a, b
    cdef double gaa, gbb, raa, rbb, dg, t, d, lam, disc
    cdef double complex gab, rab
    for a in range(m):
        gaa = g[a, a].real
        raa = r[a, a].real
        for b in range(a + 1, m):
            gbb = g[b, b].real
            rbb = r[b, b].real
            gab = g[a, b]
            rab = r[a, b]
            dg = gaa * gbb - (gab.real * gab.real + gab.imag * gab.imag)
            if dg <= det_floor * gaa * gbb:
                continue
            # tr(adj(g) r) = gbb raa + gaa rbb - 2 Re(g_ab r_ba)
            t = (gbb * raa + gaa * rbb - 2.0 * (gab.real * rab.real + gab.imag * rab.imag)) / dg
            d = (raa * rbb - (rab.real * rab.real + rab.imag * rab.imag)) / dg
            disc = 0.25 * t * t - d
            lam = 0.5 * t + (sqrt(disc) if disc > 0.0 else 0.0)
            if lam < 0.0:
                lam = 0.0
            elif lam > 1.0:
                lam = 1.0
            out[a, b] = lam
            out[b, a] = lam
    return out_arr


def line_gap_scan(G, R):
    cdef double complex[:, ::1] g = np.ascontiguousarray(G, dtype=np.complex128)
    cdef double complex[:, ::1] r = np.ascontiguousarray(R, dtype=np.complex128)
    cdef Py_ssize_t m = g.shape[0]
    out_arr = np.ones(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t a
    cdef double v
    for a in range(m):
        if g[a, a].real > 0.0:
            v = r[a, a].real / g[a, a].real
            out[a] = 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)
    return out_arr
