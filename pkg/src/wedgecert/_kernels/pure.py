"""Pure-Python reference kernels for truncated integer convolution.

Coefficient normalization (common denominators, Fraction rebuild) happens
in the series layer; the kernels see plain Python ints only, so both
backends share exact semantics.  Layout for the bivariate kernel: the
coefficient of x^i y^j sits at index T(i+j) + i where T(d) = d(d+1)/2,
for all i + j < n.
"""

BACKEND = "pure"


def tri_len(n: int) -> int:
    return n * (n + 1) // 2


def conv_tri(a, b, n):
    """Triangular truncated product of two packed coefficient lists."""
    out = [0] * tri_len(n)
    base_a = 0
    for da in range(n):
        for ia in range(da + 1):
            va = a[base_a + ia]
            if va:
                base_b = 0
                for db in range(n - da):
                    base_c = tri_len(da + db) + ia
                    for ib in range(db + 1):
                        vb = b[base_b + ib]
                        if vb:
                            out[base_c + ib] += va * vb
                    base_b += db + 1
        base_a += da + 1
    return out


def conv_lin(a, b, n):
    """Truncated univariate product: out[k] = sum a[i] b[k-i], k < n."""
    out = [0] * n
    for i in range(min(len(a), n)):
        va = a[i]
        if va:
            for j in range(min(len(b), n - i)):
                vb = b[j]
                if vb:
                    out[i + j] += va * vb
    return out
