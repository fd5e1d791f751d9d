# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernel; mirrors _pure.count_stratum exactly."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


def count_stratum(int q, int nvars, int[:] fixed, int[:] free_pos,
                  int[:] free_start, int ngens, int[:] gen_off,
                  int[:] gen_coeff, int[:] gen_exps, int[:] mul,
                  int[:] add, int[:] powt, int maxd):
    cdef int k = free_pos.shape[0]
    cdef long long count
    cdef int *x = <int *> PyMem_Malloc(nvars * sizeof(int))
    cdef int *idx = <int *> PyMem_Malloc((k if k else 1) * sizeof(int))
    if x == NULL or idx == NULL:
        PyMem_Free(x)
        PyMem_Free(idx)
        raise MemoryError()
    cdef int i
    for i in range(nvars):
        x[i] = fixed[i]
    try:
        with nogil:
            count = _run(q, nvars, x, k, &free_pos[0] if k else NULL,
                         &free_start[0] if k else NULL, idx, ngens,
                         &gen_off[0], &gen_coeff[0] if gen_coeff.shape[0] else NULL,
                         &gen_exps[0] if gen_exps.shape[0] else NULL,
                         &mul[0], &add[0], &powt[0], maxd)
    finally:
        PyMem_Free(x)
        PyMem_Free(idx)
    return count


cdef long long _run(int q, int nvars, int *x, int k, int *free_pos,
                    int *free_start, int *idx, int ngens, int *gen_off,
                    int *gen_coeff, int *gen_exps, int *mul, int *add,
                    int *powt, int maxd) noexcept nogil:
    cdef long long count = 0
    cdef int stride = maxd + 1
    cdef int j, g, t, i, e, v, acc, base
    cdef bint ok

    if k == 0:
        return 1 if _zero_here(q, nvars, x, ngens, gen_off, gen_coeff,
                                gen_exps, mul, add, powt, stride) else 0

    for j in range(k):
        idx[j] = free_start[j]
        x[free_pos[j]] = idx[j]
    while True:
        if _zero_here(q, nvars, x, ngens, gen_off, gen_coeff, gen_exps,
                      mul, add, powt, stride):
            count += 1
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < q:
                x[free_pos[j]] = idx[j]
                break
            idx[j] = free_start[j]
            x[free_pos[j]] = idx[j]
            j -= 1
        if j < 0:
            return count


cdef inline bint _zero_here(int q, int nvars, int *x, int ngens, int *gen_off,
                            int *gen_coeff, int *gen_exps, int *mul, int *add,
                            int *powt, int stride) noexcept nogil:
    cdef int g, t, i, e, v, acc, base
    for g in range(ngens):
        acc = 0
        for t in range(gen_off[g], gen_off[g + 1]):
            v = gen_coeff[t]
            base = t * nvars
            for i in range(nvars):
                e = gen_exps[base + i]
                if e:
                    v = mul[v * q + powt[x[i] * stride + e]]
                    if v == 0:
                        break
            acc = add[acc * q + v]
        if acc != 0:
            return False
    return True
