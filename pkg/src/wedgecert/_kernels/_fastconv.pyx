# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the pure convolution kernels.

Coefficients are arbitrary-precision Python ints, so the arithmetic stays
on the C API; the win over the pure backend is loop and indexing
overhead, which dominates at desk-scale truncations.  Semantics must stay
bit-identical to ``wedgecert._kernels.pure``.
"""

BACKEND = "cython"


def tri_len(Py_ssize_t n):
    return n * (n + 1) // 2


def conv_tri(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t da, ia, db, ib, base_a, base_b, base_c, idx
    cdef object va, vb, acc
    cdef list out = [0] * (n * (n + 1) // 2)
    base_a = 0
    for da in range(n):
        for ia in range(da + 1):
            va = a[base_a + ia]
            if va:
                base_b = 0
                for db in range(n - da):
                    base_c = (da + db) * (da + db + 1) // 2 + ia
                    for ib in range(db + 1):
                        vb = b[base_b + ib]
                        if vb:
                            idx = base_c + ib
                            acc = out[idx]
                            out[idx] = acc + va * vb
                    base_b += db + 1
        base_a += da + 1
    return out


def conv_lin(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t i, j, la, lb, idx
    cdef object va, vb, acc
    cdef list out = [0] * n
    la = len(a)
    if la > n:
        la = n
    for i in range(la):
        va = a[i]
        if va:
            lb = len(b)
            if lb > n - i:
                lb = n - i
            for j in range(lb):
                vb = b[j]
                if vb:
                    idx = i + j
                    acc = out[idx]
                    out[idx] = acc + va * vb
    return out
