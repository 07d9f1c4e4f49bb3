# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation engine; mirrors ``_fallback`` slot for slot."""

NAME = "cython"


cdef inline void _slot(double a, double h, double g, const double[::1] adv,
                       int mode, int ext, double p_x, double p10,
                       double q0, double q1, long b_max,
                       long *c, long *s, long *b,
                       long *x, long *y, long *z, long *of, long *uf) noexcept nogil:
    # branch-free form of the reference step functions; the usage state
    # after a slot always equals the demand bit just emitted
    cdef long e
    if mode == 0:
        x[0] = a < p_x
    else:
        e = a < adv[c[0]]
        x[0] = (1 - ext) ^ e
        c[0] = e * (c[0] + 1)
    y[0] = x[0] & (h >= p10)
    z[0] = (g < q1) if s[0] else (g >= q0)
    s[0] = z[0]
    of[0] = (b[0] == b_max) & y[0] & (1 - z[0])
    uf[0] = (b[0] == 0) & (1 - y[0]) & z[0]
    b[0] = min(b_max, max(0, b[0] + y[0] - z[0]))


def advance(const double[:, ::1] uniforms, const double[::1] adv, int mode, int ext,
            double p_x, double p10, double q0, double q1, long b_max,
            long[::1] state, long[::1] counts):
    cdef Py_ssize_t t, m = uniforms.shape[1]
    cdef long c = state[0], s = state[1], b = state[2]
    cdef long x, y, z, of, uf, n_of = 0, n_uf = 0
    with nogil:
        for t in range(m):
            _slot(uniforms[0, t], uniforms[1, t], uniforms[2, t], adv, mode, ext,
                  p_x, p10, q0, q1, b_max, &c, &s, &b, &x, &y, &z, &of, &uf)
            n_of += of
            n_uf += uf
    state[0] = c
    state[1] = s
    state[2] = b
    counts[0] += n_of
    counts[1] += n_uf


def trace(const double[:, ::1] uniforms, const double[::1] adv, int mode, int ext,
          double p_x, double p10, double q0, double q1, long b_max,
          long[::1] state, long[:, ::1] out):
    cdef Py_ssize_t t, m = uniforms.shape[1]
    cdef long c = state[0], s = state[1], b = state[2]
    cdef long x, y, z, of, uf
    with nogil:
        for t in range(m):
            out[0, t] = c
            out[4, t] = b
            _slot(uniforms[0, t], uniforms[1, t], uniforms[2, t], adv, mode, ext,
                  p_x, p10, q0, q1, b_max, &c, &s, &b, &x, &y, &z, &of, &uf)
            out[1, t] = x
            out[2, t] = y
            out[3, t] = z
            out[5, t] = of
            out[6, t] = uf
    state[0] = c
    state[1] = s
    state[2] = b
