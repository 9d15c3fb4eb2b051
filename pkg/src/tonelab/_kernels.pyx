# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernel for linear second-order ODEs on a half-step grid.

Mirrors ``tonelab._pykernels`` exactly; see that module for the contract.
"""

from libc.math cimport fabs

DEF OVERFLOW = 1e12


def integrate_linear2(const double[::1] a, const double[::1] b,
                      const double[::1] g, double h, Py_ssize_t i0,
                      double y0, double dy0, double[::1] y_out,
                      double[::1] dy_out, bint stop_on_zero):
    cdef Py_ssize_t n_nodes = y_out.shape[0]
    cdef Py_ssize_t i, k
    cdef double y = y0, z = dy0
    cdef double a0, am, a1, b0, bm, b1, g0, gm, g1
    cdef double k1y, k1z, k2y, k2z, k3y, k3z, k4y, k4z
    cdef double hh = 0.5 * h, h6 = h / 6.0

    y_out[i0] = y
    dy_out[i0] = z
    for i in range(i0, n_nodes - 1):
        k = 2 * i
        a0 = a[k]; am = a[k + 1]; a1 = a[k + 2]
        b0 = b[k]; bm = b[k + 1]; b1 = b[k + 2]
        g0 = g[k]; gm = g[k + 1]; g1 = g[k + 2]

        k1y = z
        k1z = g0 - a0 * z - b0 * y
        k2y = z + hh * k1z
        k2z = gm - am * k2y - bm * (y + hh * k1y)
        k3y = z + hh * k2z
        k3z = gm - am * k3y - bm * (y + hh * k2y)
        k4y = z + h * k3z
        k4z = g1 - a1 * k4y - b1 * (y + h * k3y)

        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = z + h6 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        y_out[i + 1] = y
        dy_out[i + 1] = z
        if fabs(y) > OVERFLOW:
            return -2
        if stop_on_zero and y <= 0.0:
            return i + 1
    return -1
