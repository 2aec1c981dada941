# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled edge kernels.

Twin of ``_kernels_py``: same functions, same formulas, one C loop per
batch instead of a chain of numpy temporaries.  Keep the two in lockstep;
tests/test_kernels.py asserts numerical agreement.
"""

import numpy as np

from libc.math cimport atan2, log, log1p, sin, sinh, sqrt, tan, tanh

BACKEND_NAME = "compiled"


def s_of_theta(int delta, double[::1] theta):
    cdef Py_ssize_t n = theta.shape[0]
    cdef Py_ssize_t i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] s = out
    if delta == 1:
        for i in range(n):
            s[i] = 1.0 / tan(0.5 * theta[i])
    elif delta == -1:
        for i in range(n):
            s[i] = 1.0 / tanh(0.5 * theta[i])
    else:
        for i in range(n):
            s[i] = 1.0 / theta[i]
    return out


def angles_110(double[::1] theta, double[::1] u1, double[::1] u2):
    cdef Py_ssize_t n = theta.shape[0]
    cdef Py_ssize_t i
    b1 = np.empty(n, dtype=np.float64)
    b2 = np.empty(n, dtype=np.float64)
    cdef double[::1] b1v = b1
    cdef double[::1] b2v = b2
    cdef double t, a, b, four_t2, diff
    for i in range(n):
        t = theta[i]
        a = u1[i]
        b = u2[i]
        four_t2 = 4.0 * t * t
        diff = a * a - b * b
        b1v[i] = atan2(-4.0 * t * a, four_t2 - diff)
        b2v[i] = atan2(-4.0 * t * b, four_t2 + diff)
    return b1, b2


def full_110(double[::1] theta, double[::1] u1, double[::1] u2):
    cdef Py_ssize_t n = theta.shape[0]
    cdef Py_ssize_t i
    b1 = np.empty(n, dtype=np.float64)
    b2 = np.empty(n, dtype=np.float64)
    ell = np.empty(n, dtype=np.float64)
    dd = np.empty(n, dtype=np.float64)
    do = np.empty(n, dtype=np.float64)
    cdef double[::1] b1v = b1, b2v = b2, lv = ell, ddv = dd, dov = do
    cdef double t, a, b, four_t2, diff, dm, cm1, sh2, off
    for i in range(n):
        t = theta[i]
        a = u1[i]
        b = u2[i]
        four_t2 = 4.0 * t * t
        diff = a * a - b * b
        b1v[i] = atan2(-4.0 * t * a, four_t2 - diff)
        b2v[i] = atan2(-4.0 * t * b, four_t2 + diff)
        dm = four_t2 + (a - b) * (a - b)
        cm1 = dm / (2.0 * a * b)
        sh2 = cm1 * (cm1 + 2.0)
        lv[i] = log1p(cm1 + sqrt(sh2))
        off = 4.0 * t / (dm * (cm1 + 2.0))
        dov[i] = off
        ddv[i] = -(1.0 + cm1) * off
    return b1, b2, ell, dd, do


def angles_00d(int delta, double[::1] theta, double[::1] u1, double[::1] u2):
    cdef Py_ssize_t n = theta.shape[0]
    cdef Py_ssize_t i
    b1 = np.empty(n, dtype=np.float64)
    b2 = np.empty(n, dtype=np.float64)
    cdef double[::1] b1v = b1, b2v = b2
    cdef double s
    for i in range(n):
        if delta == 1:
            s = 1.0 / tan(0.5 * theta[i])
        elif delta == -1:
            s = 1.0 / tanh(0.5 * theta[i])
        else:
            s = 1.0 / theta[i]
        b1v[i] = -0.5 * s * u1[i]
        b2v[i] = -0.5 * s * u2[i]
    return b1, b2


def full_00d(int delta, double[::1] theta, double[::1] u1, double[::1] u2):
    cdef Py_ssize_t n = theta.shape[0]
    cdef Py_ssize_t i
    b1 = np.empty(n, dtype=np.float64)
    b2 = np.empty(n, dtype=np.float64)
    ell = np.empty(n, dtype=np.float64)
    dd = np.empty(n, dtype=np.float64)
    do = np.zeros(n, dtype=np.float64)
    cdef double[::1] b1v = b1, b2v = b2, lv = ell, ddv = dd
    cdef double s, w
    for i in range(n):
        if delta == 1:
            s = 1.0 / tan(0.5 * theta[i])
            w = sin(0.5 * theta[i])
        elif delta == -1:
            s = 1.0 / tanh(0.5 * theta[i])
            w = sinh(0.5 * theta[i])
        else:
            s = 1.0 / theta[i]
            w = theta[i]
        b1v[i] = -0.5 * s * u1[i]
        b2v[i] = -0.5 * s * u2[i]
        lv[i] = log(4.0 * w * w / (u1[i] * u2[i]))
        ddv[i] = -0.5 * s
    return b1, b2, ell, dd, do
