# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evolution kernel; same algorithm as _pykernels.evolve_dopri5."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, atan, fabs, sqrt, pow, fmax, fmin
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef double complex cplx

cdef double E_CONST = 2.718281828459045

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40


cdef inline double schedule_value(int kind, double param, double t) noexcept nogil:
    if kind == 0:
        return exp(-param * t)
    elif kind == 1:
        return 1.0 / log(t + E_CONST)
    elif kind == 2:
        return 1.0 - 0.5 * (atan(t - 0.5 * param) / fabs(atan(-0.5 * param)) + 1.0)
    return param


cdef struct Csr:
    int n
    const int* indptr
    const int* indices
    const cplx* data


cdef inline void rhs(Csr* H0, Csr* H1, int kind, double param, double t,
                     const cplx* v, cplx* out) noexcept nogil:
    cdef double g = schedule_value(kind, param, t)
    cdef double w0 = 1.0 - g
    cdef int i, j
    cdef cplx s0, s1
    for i in range(H0.n):
        s0 = 0
        for j in range(H0.indptr[i], H0.indptr[i + 1]):
            s0 = s0 + H0.data[j] * v[H0.indices[j]]
        s1 = 0
        for j in range(H1.indptr[i], H1.indptr[i + 1]):
            s1 = s1 + H1.data[j] * v[H1.indices[j]]
        # -i * (w0 s0 + g s1)
        s0 = w0 * s0 + g * s1
        out[i] = s0.imag - 1j * s0.real


cdef inline double cabs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def evolve_dopri5(H0, H1, psi0, int kind, double param, t_out, double rtol, double atol,
                  double h_init, long max_steps):
    """Integrate i dpsi/dt = ((1 - g(t)) H0 + g(t) H1) psi, returning states at ``t_out``.

    Returns ``(states, accepted, rejected, status)``.
    """
    cdef const int[::1] ip0 = np.ascontiguousarray(H0.indptr, dtype=np.intc)
    cdef const int[::1] ix0 = np.ascontiguousarray(H0.indices, dtype=np.intc)
    cdef const cplx[::1] d0 = np.ascontiguousarray(H0.data, dtype=np.complex128)
    cdef const int[::1] ip1 = np.ascontiguousarray(H1.indptr, dtype=np.intc)
    cdef const int[::1] ix1 = np.ascontiguousarray(H1.indices, dtype=np.intc)
    cdef const cplx[::1] d1 = np.ascontiguousarray(H1.data, dtype=np.complex128)
    cdef const double[::1] times = np.ascontiguousarray(t_out, dtype=np.float64)
    cdef cplx[::1] y = np.array(psi0, dtype=np.complex128)
    cdef int n = y.shape[0]
    cdef int n_out = times.shape[0]
    states = np.empty((n_out, n), dtype=np.complex128)
    cdef cplx[:, ::1] out = states

    cdef cplx[::1] dummy = np.zeros(1, dtype=np.complex128)
    cdef Csr A, B
    A.n = n
    A.indptr = &ip0[0]
    A.indices = &ix0[0] if ix0.shape[0] else NULL
    A.data = &d0[0] if d0.shape[0] else &dummy[0]
    B.n = n
    B.indptr = &ip1[0]
    B.indices = &ix1[0] if ix1.shape[0] else NULL
    B.data = &d1[0] if d1.shape[0] else &dummy[0]

    work = np.zeros((9, n), dtype=np.complex128)
    cdef cplx[:, ::1] w = work
    cdef cplx* k1 = &w[0, 0]
    cdef cplx* k2 = &w[1, 0]
    cdef cplx* k3 = &w[2, 0]
    cdef cplx* k4 = &w[3, 0]
    cdef cplx* k5 = &w[4, 0]
    cdef cplx* k6 = &w[5, 0]
    cdef cplx* k7 = &w[6, 0]
    cdef cplx* tmp = &w[7, 0]
    cdef cplx* ynew = &w[8, 0]
    cdef cplx* yp = &y[0]
    cdef cplx* swap

    cdef double t = times[0], target, hs, err, fac, sc, a, b, h = h_init, t_new
    cdef long accepted = 0, rejected = 0
    cdef int status = 0, idx, i
    cdef bint last
    cdef cplx e

    with nogil:
        rhs(&A, &B, kind, param, t, yp, k1)
        for i in range(n):
            out[0, i] = yp[i]
        for idx in range(1, n_out):
            target = times[idx]
            while t < target:
                if accepted + rejected >= max_steps:
                    status = 1
                    break
                if h < 1e-13 * fmax(1.0, fabs(t)):
                    status = 2
                    break
                last = h >= target - t
                hs = target - t if last else h
                for i in range(n):
                    tmp[i] = yp[i] + hs * (A21 * k1[i])
                rhs(&A, &B, kind, param, t + C2 * hs, tmp, k2)
                for i in range(n):
                    tmp[i] = yp[i] + hs * (A31 * k1[i] + A32 * k2[i])
                rhs(&A, &B, kind, param, t + C3 * hs, tmp, k3)
                for i in range(n):
                    tmp[i] = yp[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
                rhs(&A, &B, kind, param, t + C4 * hs, tmp, k4)
                for i in range(n):
                    tmp[i] = yp[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                rhs(&A, &B, kind, param, t + C5 * hs, tmp, k5)
                for i in range(n):
                    tmp[i] = yp[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                           + A64 * k4[i] + A65 * k5[i])
                rhs(&A, &B, kind, param, t + hs, tmp, k6)
                for i in range(n):
                    ynew[i] = yp[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                                            + B5 * k5[i] + B6 * k6[i])
                t_new = target if last else t + hs
                rhs(&A, &B, kind, param, t_new, ynew, k7)
                err = 0.0
                for i in range(n):
                    e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                              + E6 * k6[i] + E7 * k7[i])
                    a = sqrt(cabs2(yp[i]))
                    b = sqrt(cabs2(ynew[i]))
                    sc = atol + rtol * fmax(a, b)
                    err += cabs2(e) / (sc * sc)
                err = sqrt(err / n)
                if err <= 1.0:
                    if err == 0.0:
                        fac = 5.0
                    else:
                        fac = fmin(5.0, fmax(0.2, 0.9 * pow(err, -0.2)))
                    if not last:
                        h = hs * fac
                    elif fac < 1.0:
                        h = fmin(h, hs * fac)
                    t = t_new
                    for i in range(n):
                        yp[i] = ynew[i]
                    swap = k1
                    k1 = k7
                    k7 = swap
                    accepted += 1
                else:
                    h = hs * fmax(0.2, 0.9 * pow(err, -0.2))
                    rejected += 1
            if status:
                break
            for i in range(n):
                out[idx, i] = yp[i]
    return states, accepted, rejected, status
