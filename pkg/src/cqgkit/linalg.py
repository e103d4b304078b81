"""Dense exact matrices over the scalar field: small helpers shared by the
corepresentation, dual and regular-representation modules."""

from __future__ import annotations

from .scalar import ONE, ZERO, LinearSystem, solve_exact


def smat(rows):
    return [list(r) for r in rows]


def smat_identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def smat_zero(n, m=None):
    m = n if m is None else m
    return [[ZERO] * m for _ in range(n)]


def smat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_scale(a, c):
    return [[x * c for x in r] for r in a]


def smat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = smat_zero(n, m)
    for i in range(n):
        ai = a[i]
        for l in range(k):
            c = ai[l]
            if c.is_zero():
                continue
            bl = b[l]
            row = out[i]
            for j in range(m):
                if not bl[j].is_zero():
                    row[j] = row[j] + c * bl[j]
    return out


def smat_conj_t(a):
    n, m = len(a), len(a[0])
    return [[a[j][i].conj() for j in range(n)] for i in range(m)]


def smat_transpose(a):
    n, m = len(a), len(a[0])
    return [[a[j][i] for j in range(n)] for i in range(m)]


def smat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def smat_is_identity(a):
    return smat_eq(a, smat_identity(len(a)))


def smat_is_zero(a):
    return all(x.is_zero() for r in a for x in r)


def smat_inv(a):
    """Exact inverse; raises ValueError when singular."""
    n = len(a)
    cols = []
    for j in range(n):
        rhs = [ONE if i == j else ZERO for i in range(n)]
        res = solve_exact(LinearSystem([list(r) for r in a], rhs))
        if not res.consistent or res.nullspace:
            raise ValueError("singular matrix")
        cols.append(res.particular)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def smat_rank(a):
    if not a:
        return 0
    res = solve_exact(LinearSystem([list(r) for r in a], [ZERO] * len(a)))
    return res.rank


def smat_eval(a, q0):
    import numpy as np
    return np.array([[x.eval(q0) for x in r] for r in a], dtype=complex)


def smat_is_hermitian(a):
    return smat_eq(a, smat_conj_t(a))


def ldl_decomposition(m):
    """m = L D L* for Hermitian m with nonzero leading minors: L unit lower
    triangular, D diagonal (list).  Raises ValueError on a zero pivot."""
    n = len(m)
    L = smat_identity(n)
    D = [ZERO] * n
    A = [list(r) for r in m]
    for k in range(n):
        d = A[k][k]
        if d.is_zero():
            raise ValueError("zero pivot in LDL decomposition")
        D[k] = d
        for i in range(k + 1, n):
            L[i][k] = A[i][k] / d
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - L[i][k] * d * L[j][k].conj()
    return L, D
