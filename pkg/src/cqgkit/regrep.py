"""Finite-dimensional algebras with explicit structure tensors: GNS data,
the regular representation as a multiplicative unitary, the pentagon and
implementation identities, and Cesaro averaging toward the invariant state.

Everything algebraic here is exact over the scalar field; the Cesaro
iteration is the one numeric path (plain numpy float vectors).
"""

from __future__ import annotations

import numpy as np

from .scalar import ONE, ZERO, Scalar
from .linalg import smat_eval, smat_inv, smat_rank


class FiniteAlgebraError(ValueError):
    pass


def _vadd(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, ZERO) + c
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _vscale(a, c):
    if c.is_zero():
        return {}
    return {k: v * c for k, v in a.items()}


class FiniteAlgebra:
    """Finite-dimensional *-algebra with comultiplication and Haar vector.

    mult[(i, j)]   : product e_i e_j as a sparse vector {k: Scalar}
    star_img[i]    : star of e_i as a sparse vector (the map is conjugate
                     linear: star(sum c_i e_i) = sum conj(c_i) star_img[i])
    delta[i]       : delta(e_i) as {(j, k): Scalar}
    unit           : coordinates of 1
    haar           : values h(e_i)
    """

    def __init__(self, names, mult, star_img, delta, unit, haar, check=True):
        self.names = list(names)
        self.dim = len(names)
        self.mult = mult
        self.star_img = star_img
        self.delta = delta
        self.unit = unit
        self.haar = list(haar)
        if check:
            self._verify()

    # -- elementary operations ------------------------------------------------

    def vec_mul(self, a, b):
        out = {}
        for i, ca in a.items():
            for j, cb in b.items():
                prod = self.mult.get((i, j))
                if not prod:
                    continue
                c = ca * cb
                for k, ck in prod.items():
                    s = out.get(k, ZERO) + ck * c
                    if s.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def vec_star(self, a):
        out = {}
        for i, c in a.items():
            cc = c.conj()
            for k, ck in self.star_img[i].items():
                s = out.get(k, ZERO) + ck * cc
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    def vec_delta(self, a):
        out = {}
        for i, c in a.items():
            for jk, ck in self.delta[i].items():
                s = out.get(jk, ZERO) + ck * c
                if s.is_zero():
                    out.pop(jk, None)
                else:
                    out[jk] = s
        return out

    def haar_of(self, a) -> Scalar:
        acc = ZERO
        for i, c in a.items():
            acc = acc + self.haar[i] * c
        return acc

    def tensor_mul(self, x, y):
        out = {}
        for (a, b), cx in x.items():
            for (c, d), cy in y.items():
                left = self.mult.get((a, c))
                right = self.mult.get((b, d))
                if not left or not right:
                    continue
                coeff = cx * cy
                for k, ck in left.items():
                    for l, cl in right.items():
                        key = (k, l)
                        s = out.get(key, ZERO) + ck * cl * coeff
                        if s.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = s
        return out

    # -- load-time verification ----------------------------------------------

    def _verify(self):
        n = self.dim
        basis = [{i: ONE} for i in range(n)]
        for i in range(n):
            if self.vec_mul(basis[i], self.unit) != basis[i] or \
                    self.vec_mul(self.unit, basis[i]) != basis[i]:
                raise FiniteAlgebraError("unit fails")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.vec_mul(self.vec_mul(basis[i], basis[j]), basis[k])
                    rhs = self.vec_mul(basis[i], self.vec_mul(basis[j], basis[k]))
                    if lhs != rhs:
                        raise FiniteAlgebraError(f"associativity fails at {(i, j, k)}")
        for i in range(n):
            if self.vec_star(self.vec_star(basis[i])) != basis[i]:
                raise FiniteAlgebraError("star not involutive")
            for j in range(n):
                if self.vec_star(self.vec_mul(basis[i], basis[j])) != \
                        self.vec_mul(self.vec_star(basis[j]), self.vec_star(basis[i])):
                    raise FiniteAlgebraError("star not anti-multiplicative")
        # delta: unital *-homomorphism, coassociative
        unit_tensor = {}
        for i, ci in self.unit.items():
            for j, cj in self.unit.items():
                unit_tensor[(i, j)] = ci * cj
        if self.vec_delta(self.unit) != unit_tensor:
            raise FiniteAlgebraError("delta not unital")
        for i in range(n):
            for j in range(n):
                if self.vec_delta(self.vec_mul(basis[i], basis[j])) != \
                        self.tensor_mul(self.vec_delta(basis[i]), self.vec_delta(basis[j])):
                    raise FiniteAlgebraError("delta not multiplicative")
        for i in range(n):
            ds = self.vec_delta(self.vec_star(basis[i]))
            sd = {}
            for (j, k), c in self.vec_delta(basis[i]).items():
                cc = c.conj()
                for a, ca in self.star_img[j].items():
                    for b, cb in self.star_img[k].items():
                        key = (a, b)
                        s = sd.get(key, ZERO) + ca * cb * cc
                        if s.is_zero():
                            sd.pop(key, None)
                        else:
                            sd[key] = s
            if ds != sd:
                raise FiniteAlgebraError("delta not star-compatible")
        for i in range(n):
            lhs = {}
            rhs = {}
            for (j, k), c in self.vec_delta(basis[i]).items():
                for (a, b), c2 in self.vec_delta(basis[j]).items():
                    key = (a, b, k)
                    lhs[key] = lhs.get(key, ZERO) + c * c2
                for (a, b), c2 in self.vec_delta(basis[k]).items():
                    key = (j, a, b)
                    rhs[key] = rhs.get(key, ZERO) + c * c2
            lhs = {k: v for k, v in lhs.items() if not v.is_zero()}
            rhs = {k: v for k, v in rhs.items() if not v.is_zero()}
            if lhs != rhs:
                raise FiniteAlgebraError("delta not coassociative")
        # haar: normalized, bi-invariant, faithful
        if self.haar_of(self.unit) != ONE:
            raise FiniteAlgebraError("haar not normalized")
        for i in range(n):
            d = self.vec_delta(basis[i])
            left = {}
            right = {}
            for (j, k), c in d.items():
                left = _vadd(left, _vscale({j: ONE}, c * self.haar[k]))
                right = _vadd(right, _vscale({k: ONE}, c * self.haar[j]))
            target = _vscale(self.unit, self.haar[i])
            if left != target or right != target:
                raise FiniteAlgebraError(f"haar not invariant on basis element {i}")
        if smat_rank(self.gram()) != n:
            raise FiniteAlgebraError("haar not faithful (singular Gram matrix)")

    # -- GNS ---------------------------------------------------------------------

    def gram(self):
        n = self.dim
        basis = [{i: ONE} for i in range(n)]
        return [[self.haar_of(self.vec_mul(self.vec_star(basis[i]), basis[j]))
                 for j in range(n)] for i in range(n)]

    def left_mult_matrix(self, a):
        n = self.dim
        out = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            prod = self.vec_mul(a, {j: ONE})
            for k, c in prod.items():
                out[k][j] = c
        return out


class GnsData:
    def __init__(self, fa: FiniteAlgebra):
        self.fa = fa
        self.gram = fa.gram()
        evals = np.linalg.eigvalsh(_np_herm(smat_eval(self.gram, 0.0)))
        if min(evals) <= 1e-12:
            raise FiniteAlgebraError("haar not positive definite (GNS fails)")
        self.mult_ops = [fa.left_mult_matrix({i: ONE}) for i in range(fa.dim)]
        self.cyclic = fa.unit


def _np_herm(m):
    return (m + m.conj().T) / 2


def gns(fa: FiniteAlgebra) -> GnsData:
    """GNS inner-product data for the Haar state: Gram matrix h(b* a) and
    the left multiplication operators; cyclic vector = class of 1."""
    return GnsData(fa)


# ---------------------------------------------------------------------------
# Sparse exact matrices (dict-of-dict rows) for the multiplicative unitary.

def _sp_mul(a, b):
    out = {}
    for i, row in a.items():
        acc = {}
        for k, c in row.items():
            brow = b.get(k)
            if not brow:
                continue
            for j, d in brow.items():
                s = acc.get(j, ZERO) + c * d
                if s.is_zero():
                    acc.pop(j, None)
                else:
                    acc[j] = s
        if acc:
            out[i] = acc
    return out


def _sp_identity(n):
    return {i: {i: ONE} for i in range(n)}


def _sp_eq(a, b):
    keys = set(a) | set(b)
    for i in keys:
        if a.get(i, {}) != b.get(i, {}):
            return False
    return True


def _sp_conj_t(a):
    out = {}
    for i, row in a.items():
        for j, c in row.items():
            out.setdefault(j, {})[i] = c.conj()
    return out


class RegularRepresentation:
    """The multiplicative unitary u(a xi0 (x) eta) = delta(a)(xi0 (x) eta) on
    H (x) H, assembled from the structure tensors; H carries the GNS inner
    product, so adjoints are taken with respect to the Gram matrix."""

    def __init__(self, fa: FiniteAlgebra, opposite=False):
        self.fa = fa
        self.gns = gns(fa)
        self.opposite = opposite
        n = fa.dim
        self.n = n
        u = {}
        for i in range(n):
            d = fa.vec_delta({i: ONE})
            for j in range(n):
                col = i * n + j
                for (a, b), c in d.items():
                    if opposite:
                        a, b = b, a
                    prod = fa.vec_mul({b: ONE}, {j: ONE})
                    for s, cs in prod.items():
                        row = a * n + s
                        cur = u.setdefault(row, {})
                        val = cur.get(col, ZERO) + c * cs
                        if val.is_zero():
                            cur.pop(col, None)
                        else:
                            cur[col] = val
        self.u = u
        self._gram2 = None

    def gram2(self):
        if self._gram2 is None:
            g = self.gns.gram
            n = self.n
            out = {}
            for i in range(n):
                for j in range(n):
                    if g[i][j].is_zero():
                        continue
                    for k in range(n):
                        for l in range(n):
                            if g[k][l].is_zero():
                                continue
                            out.setdefault(i * n + k, {})[j * n + l] = g[i][j] * g[k][l]
            self._gram2 = out
        return self._gram2

    def sharp(self, m):
        """Adjoint w.r.t. the GNS inner product on H (x) H."""
        g2 = self.gram2()
        g2_dense = _sp_to_dense(g2, self.n ** 2)
        g2_inv = smat_inv(g2_dense)
        return _sp_mul(_dense_to_sp(g2_inv), _sp_mul(_sp_conj_t(m), g2))

    def is_unitary(self):
        us = self.sharp(self.u)
        n2 = self.n ** 2
        return _sp_eq(_sp_mul(us, self.u), _sp_identity(n2)) and \
            _sp_eq(_sp_mul(self.u, us), _sp_identity(n2))

    def matrix_coefficients(self):
        """u as an element of B(H) (x) A: the A-valued entries u_ri with
        u_ri e_j = sum_s u[(r,s),(i,j)] e_s; recovered through the unit."""
        n = self.n
        out = {}
        for r in range(n):
            for i in range(n):
                vec = {}
                for s in range(n):
                    row = self.u.get(r * n + s, {})
                    acc = ZERO
                    for j, cj in self.fa.unit.items():
                        acc = acc + row.get(i * n + j, ZERO) * cj
                    if not acc.is_zero():
                        vec[s] = acc
                out[(r, i)] = vec
        return out


def regular_unitary(fa: FiniteAlgebra, opposite=False) -> RegularRepresentation:
    rep = RegularRepresentation(fa, opposite=opposite)
    if not rep.is_unitary():
        raise FiniteAlgebraError("regular representation is not unitary")
    return rep


def check_pentagon(rep: RegularRepresentation):
    """u_(23) u_(12) = u_(12) u_(13) u_(23), exactly on H (x) H (x) H."""
    n = rep.n
    u12, u13, u23 = {}, {}, {}
    for row, cols in rep.u.items():
        a, b = divmod(row, n)
        for col, c in cols.items():
            i, j = divmod(col, n)
            for k in range(n):
                u12.setdefault((a * n + b) * n + k, {})[(i * n + j) * n + k] = c
                u23.setdefault((k * n + a) * n + b, {})[(k * n + i) * n + j] = c
                u13.setdefault((a * n + k) * n + b, {})[(i * n + k) * n + j] = c
    lhs = _sp_mul(u23, u12)
    rhs = _sp_mul(u12, _sp_mul(u13, u23))
    ok = _sp_eq(lhs, rhs)
    return PentagonReport(ok, n)


class PentagonReport:
    def __init__(self, ok, n):
        self.ok = ok
        self.dim = n

    def as_json(self):
        return {"pentagon": self.ok, "dim": self.dim}


def check_implements(rep: RegularRepresentation):
    """delta(a) = u (a (x) 1) u* exactly for all basis a, and the slices
    (omega (x) id)(u) span the whole algebra."""
    fa = rep.fa
    n = rep.n
    us = rep.sharp(rep.u)
    failures = []
    for i in range(n):
        la = fa.left_mult_matrix({i: ONE})
        a1 = {}
        for r in range(n):
            for c in range(n):
                if la[r][c].is_zero():
                    continue
                for k in range(n):
                    a1.setdefault(r * n + k, {})[c * n + k] = la[r][c]
        lhs = _sp_mul(rep.u, _sp_mul(a1, us))
        # left multiplication by delta(e_i) on H (x) H
        rhs = {}
        for (a, b), c in fa.vec_delta({i: ONE}).items():
            la2 = fa.left_mult_matrix({a: ONE})
            lb2 = fa.left_mult_matrix({b: ONE})
            for r in range(n):
                for s in range(n):
                    if la2[r][s].is_zero():
                        continue
                    for r2 in range(n):
                        for s2 in range(n):
                            if lb2[r2][s2].is_zero():
                                continue
                            cur = rhs.setdefault(r * n + r2, {})
                            key = s * n + s2
                            val = cur.get(key, ZERO) + c * la2[r][s] * lb2[r2][s2]
                            if val.is_zero():
                                cur.pop(key, None)
                            else:
                                cur[key] = val
        if not _sp_eq(lhs, rhs):
            failures.append({"check": "implements", "basis": fa.names[i]})
    coeffs = rep.matrix_coefficients()
    rows = []
    for (r, i), vec in sorted(coeffs.items()):
        rows.append([vec.get(k, ZERO) for k in range(n)])
    rank = smat_rank(rows)
    if rank != n:
        failures.append({"check": "slice-span", "rank": rank, "dim": n})
    return ImplementsReport(failures, rank, n)


class ImplementsReport:
    def __init__(self, failures, slice_rank, dim):
        self.failures = failures
        self.slice_rank = slice_rank
        self.dim = dim

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        return {"ok": self.ok, "slice_rank": self.slice_rank, "dim": self.dim,
                "failures": self.failures}


def _sp_to_dense(m, n):
    out = [[ZERO] * n for _ in range(n)]
    for i, row in m.items():
        for j, c in row.items():
            out[i][j] = c
    return out


def _dense_to_sp(m):
    out = {}
    for i, row in enumerate(m):
        for j, c in enumerate(row):
            if not c.is_zero():
                out.setdefault(i, {})[j] = c
    return out


# ---------------------------------------------------------------------------
# Cesaro averaging toward the Haar state (numeric).

class NotAState(ValueError):
    pass


def cesaro_haar(fa: FiniteAlgebra, omega, steps=10 ** 6, tol=1e-6,
                checkpoints=None, q0=0.0):
    """Iterate convolution powers of a state omega (functional values on the
    basis, as floats) and log the Cesaro averages omega_n = (1/n) sum w^k.

    Returns a log of (n, ||omega_n * omega - omega_n||_1, ||omega_n - h||_1)
    at checkpoint values of n, plus an accelerated tail average reaching the
    Haar state to `tol` (geometric convergence of the power sequence)."""
    n = fa.dim
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (n,):
        raise NotAState("wrong dimension")
    unit = np.array([float(fa.unit.get(i, ZERO).eval(q0).real) for i in range(n)])
    if abs(float(omega @ unit) - 1.0) > 1e-12:
        raise NotAState("omega(1) != 1")
    # positivity: [omega(e_i* e_j)] must be PSD
    pos = np.zeros((n, n), dtype=complex)
    basis = [{i: ONE} for i in range(n)]
    for i in range(n):
        for j in range(n):
            prod = fa.vec_mul(fa.vec_star(basis[i]), basis[j])
            pos[i, j] = sum(omega[k] * c.eval(q0) for k, c in prod.items())
    if np.min(np.linalg.eigvalsh(_np_herm(pos))) < -1e-10:
        raise NotAState("omega is not positive")
    dten = np.zeros((n, n, n))
    for i in range(n):
        for (a, b), c in fa.vec_delta({i: ONE}).items():
            dten[i, a, b] = float(c.eval(q0).real)
    # right convolution by omega is linear: x -> x @ M
    m = np.einsum("iab,b->ai", dten, omega)
    hvec = np.array([float(fa.haar[i].eval(q0).real) for i in range(n)])
    # express h as a functional: h(e_i) already given
    if checkpoints is None:
        checkpoints = sorted({int(x) for x in np.geomspace(1, steps, 40)})
    log = []
    power = omega.copy()
    total = omega.copy()
    count = 1
    tail_start = None
    tail_sum = None
    tail_count = 0
    accelerated = None
    cp = set(checkpoints)
    for k in range(1, steps + 1):
        if k > 1:
            power = power @ m
            total = total + power
            count = k
        if k in cp:
            avg = total / count
            drift = avg @ m - avg
            log.append((k, float(np.abs(drift).sum()),
                        float(np.abs(avg - hvec).sum())))
        # tail averaging: once the power sequence stabilizes, its average
        # converges geometrically to h
        if tail_start is None and k >= 64:
            tail_start = k
            tail_sum = power.copy()
            tail_count = 1
        elif tail_start is not None:
            tail_sum = tail_sum + power
            tail_count += 1
            if tail_count >= 64:
                cand = tail_sum / tail_count
                if np.abs(cand - hvec).sum() <= tol:
                    accelerated = (k, float(np.abs(cand - hvec).sum()))
                    break
                tail_start, tail_sum, tail_count = k, power.copy(), 1
    final_avg = total / count
    return CesaroResult(log, final_avg, hvec,
                        float(np.abs(final_avg - hvec).sum()), accelerated)


class CesaroResult:
    def __init__(self, log, final, haar_vec, final_distance, accelerated):
        self.log = log
        self.final = final
        self.haar_vec = haar_vec
        self.final_distance = final_distance
        self.accelerated = accelerated

    def as_json(self):
        return {"log": [{"n": n, "invariance_drift": d, "distance_to_haar": e}
                        for n, d, e in self.log],
                "final_distance": self.final_distance,
                "accelerated": self.accelerated}
