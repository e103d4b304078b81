"""The Haar state, computed exactly from the invariance equations.

For every normal monomial m of degree <= d and every tensor leg b of
delta(m), left invariance (id (x) h)delta(m) = h(m) 1 and right invariance
(h (x) id)delta(m) = h(m) 1 give one linear equation over the unknowns
{h(monomial)}.  The homogeneous system must have a one-dimensional solution
space (the uniqueness certificate); normalizing h(1) = 1 fixes the state.
Both sides are assembled even though one would do: the over-determination
catches broken presentations early.

Also here: the orthogonality F-matrices, the Peter-Weyl vanishing
cross-check, and the Gram positivity (faithfulness) report.
"""

from __future__ import annotations

import numpy as np

from .hopf import CqgAlgebra
from .ncalg import NcPoly
from .scalar import ONE, ZERO, Scalar, _solve_sparse
from .linalg import smat_eval, smat_zero


class HaarError(RuntimeError):
    pass


class HaarTable:
    """h on normal monomials of degree <= degree, exact, with the
    uniqueness certificate (solution-space dimension, always 1)."""

    def __init__(self, alg: CqgAlgebra, degree, values, nullity):
        self.alg = alg
        self.degree = degree
        self.values = values          # {word: Scalar}
        self.nullity = nullity

    def eval_word(self, word) -> Scalar:
        if len(word) > self.degree:
            raise HaarError(f"monomial degree {len(word)} exceeds table degree "
                            f"{self.degree}")
        return self.values.get(word, ZERO)

    def eval_poly(self, x: NcPoly) -> Scalar:
        acc = ZERO
        for w, c in x.terms.items():
            acc = acc + self.eval_word(w) * c
        return acc

    def as_json(self):
        from .scalar import scalar_to_text
        return {self.alg.pres.word_str(w): scalar_to_text(c)
                for w, c in sorted(self.values.items(),
                                   key=lambda kv: self.alg.pres.order_key(kv[0]))}

    @staticmethod
    def from_json(alg: CqgAlgebra, data, degree) -> "HaarTable":
        from .dsl import parse_word
        from .scalar import parse_scalar
        values = {}
        for wtext, ctext in data.items():
            word = parse_word(alg.pres, wtext)
            values[word] = parse_scalar(ctext)
        return HaarTable(alg, degree, values, 1)


def compute_haar(alg: CqgAlgebra, degree: int) -> HaarTable:
    """Exact Haar table at the given degree; fails loudly when the degree
    closure is violated or the invariance system is not one-dimensional."""
    alg.ensure_certified(degree)
    if not alg.certified_ok:
        raise HaarError(
            "no confluence certificate: the invariance equations compare "
            "coefficients in the normal-word basis, which needs canonical "
            "normal forms")
    # degree closure: no rewrite rule may increase word length
    for lhs, rhs in alg.pres.rules.items():
        if any(len(w) > len(lhs) for w in rhs):
            raise HaarError("degree closure violated: a rewrite rule increases "
                            "word length")
    monos = alg.monomials(degree)
    index = {w: i for i, w in enumerate(monos)}
    rows = []
    for m in monos:
        d = alg.delta_word(m)
        left = {}
        right = {}
        for (b, bp), c in d.terms.items():
            if len(b) > degree or len(bp) > degree:
                raise HaarError(f"delta leg degree exceeds {degree} on "
                                f"{alg.pres.word_str(m)}")
            row = left.setdefault(b, {})
            j = index[bp]
            row[j] = row.get(j, ZERO) + c
            row = right.setdefault(bp, {})
            j = index[b]
            row[j] = row.get(j, ZERO) + c
        mi = index[m]
        for b, row in left.items():
            if b == ():
                row[mi] = row.get(mi, ZERO) - ONE
            row = {j: c for j, c in row.items() if not c.is_zero()}
            if row:
                rows.append(row)
        for bp, row in right.items():
            if bp == ():
                row[mi] = row.get(mi, ZERO) - ONE
            row = {j: c for j, c in row.items() if not c.is_zero()}
            if row:
                rows.append(row)
    res = _solve_sparse(rows, [ZERO] * len(rows), len(monos))
    if not res.consistent:
        raise HaarError("invariance system inconsistent")
    if len(res.nullspace) != 1:
        raise HaarError(f"invariance solution space has dimension "
                        f"{len(res.nullspace)}, expected 1")
    ray = res.nullspace[0]
    unit = ray[index[()]]
    if unit.is_zero():
        raise HaarError("invariant ray is not normalizable (h(1) = 0)")
    values = {}
    for w, i in index.items():
        v = ray[i] / unit
        if not v.is_zero():
            values[w] = v
    table = HaarTable(alg, degree, values, len(res.nullspace))
    _verify_invariance(alg, table, monos)
    return table


def _verify_invariance(alg, table, monos):
    """Residuals of both invariance identities must vanish exactly."""
    for m in monos:
        d = alg.delta_word(m)
        hm = table.eval_word(m)
        left = d.apply_scalar_leg(1, table.eval_word)
        right = d.apply_scalar_leg(0, table.eval_word)
        target = alg.one().scale(hm)
        if left != target or right != target:
            raise HaarError(f"invariance residual nonzero on {alg.pres.word_str(m)}")


def haar_eval(x: NcPoly, table: HaarTable) -> Scalar:
    return table.eval_poly(x)


# ---------------------------------------------------------------------------
# Peter-Weyl vanishing cross-check.

def haar_peter_weyl_check(registry, table: HaarTable):
    """h vanishes on every matrix coefficient of a nontrivial registry
    irreducible and is 1 on the trivial one: the matrix-coefficient form of
    the unique invariant functional, checked against the equation-solver
    table."""
    failures = []
    for entry in registry.entries:
        v = entry.corep
        for p in range(v.n):
            for q in range(v.n):
                val = table.eval_poly(v.entries[p][q])
                want = ONE if (v.n == 1 and v.entries[0][0] == v.alg.one()) \
                    else ZERO
                if val != want:
                    failures.append({"label": str(entry.label), "entry": (p, q),
                                     "value": str(val)})
    return PeterWeylReport(failures)


class PeterWeylReport:
    def __init__(self, failures):
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        return {"ok": self.ok, "failures": self.failures}


# ---------------------------------------------------------------------------
# F-matrices.

class FMatrixError(RuntimeError):
    pass


class FMatrix:
    def __init__(self, label, matrix, gauge):
        self.label = label
        self.matrix = matrix
        self.gauge = gauge            # None for honest-unitary entries

    def as_json(self):
        from .scalar import scalar_to_text
        return {"label": str(self.label),
                "matrix": [[scalar_to_text(c) for c in row] for row in self.matrix]}


def f_matrix(entry, table: HaarTable, q_samples=(0.5,)) -> FMatrix:
    """F from h((u_ip)* u_jq) = F_ij * M_pq (M = identity for unitary
    entries), checked consistent across all (p, q); the trace identity
    sum_k h((u_ik)* u_jk) = F_ij tr(M) and the intertwining identity
    sum_{k,l} F_kl (u_ik)* u_jl = F_ij 1 are verified exactly, and positive
    definiteness numerically at the sample points."""
    v = entry.corep
    n = v.n
    m = entry.gauge_matrix()
    # normalization: M[0][0] = 1 by construction
    f = smat_zero(n)
    for i in range(n):
        for j in range(n):
            f[i][j] = table.eval_poly(v.entries[i][0].star() * v.entries[j][0])
    for p in range(n):
        for q in range(n):
            for i in range(n):
                for j in range(n):
                    got = table.eval_poly(v.entries[i][p].star() * v.entries[j][q])
                    if got != f[i][j] * m[p][q]:
                        raise FMatrixError(
                            f"orthogonality inconsistent at i,j,p,q = {(i, j, p, q)}")
    trace_m = ZERO
    for k in range(n):
        trace_m = trace_m + m[k][k]
    for i in range(n):
        for j in range(n):
            acc = ZERO
            for k in range(n):
                acc = acc + table.eval_poly(v.entries[i][k].star() * v.entries[j][k])
            if acc != f[i][j] * trace_m:
                raise FMatrixError(f"trace identity fails at {(i, j)}")
    one = v.alg.one()
    for i in range(n):
        for j in range(n):
            acc = None
            for k in range(n):
                for l in range(n):
                    if f[k][l].is_zero():
                        continue
                    term = (v.entries[i][k].star() * v.entries[j][l]).scale(f[k][l])
                    acc = term if acc is None else acc + term
            if acc != one.scale(f[i][j]):
                raise FMatrixError(f"intertwining identity fails at {(i, j)}")
    for q0 in q_samples:
        fn = smat_eval(f, q0)
        evals = np.linalg.eigvalsh((fn + fn.conj().T) / 2)
        if min(evals) <= 1e-9:
            raise FMatrixError(f"F not positive definite at q0 = {q0}")
    return FMatrix(entry.label, f, entry.gauge)


# ---------------------------------------------------------------------------
# Gram positivity (faithfulness surrogate).

def gram_positivity(alg: CqgAlgebra, table: HaarTable, degree: int,
                    q_samples=(1 / 3, 1 / 2, 9 / 10)):
    """Gram matrix G_mn = h(m* n) on monomials of degree <= degree,
    evaluated at each real sample; PASS iff positive definite (eigenvalues
    above 1e-9)."""
    if table.degree < 2 * degree:
        raise HaarError("table degree too small for the requested Gram matrix")
    monos = alg.monomials(degree)
    polys = [NcPoly(alg.pres, {w: ONE}, _normal=True) for w in monos]
    n = len(monos)
    gram = smat_zero(n)
    for i in range(n):
        si = polys[i].star()
        for j in range(n):
            gram[i][j] = table.eval_poly(si * polys[j])
    results = []
    ok = True
    for q0 in q_samples:
        g = smat_eval(gram, q0)
        evals = np.linalg.eigvalsh((g + g.conj().T) / 2)
        mineig = float(min(evals))
        results.append({"q0": q0, "min_eigenvalue": mineig,
                        "positive": mineig > 1e-9})
        ok = ok and mineig > 1e-9
    return GramReport(degree, n, results, ok)


class GramReport:
    def __init__(self, degree, size, samples, ok):
        self.degree = degree
        self.size = size
        self.samples = samples
        self.ok = ok
        # faithfulness here is a positivity surrogate; the modular
        # automorphism (h(ab) = h(b sigma(a))) is not modeled
        self.notes = ["positivity sampled numerically",
                      "modular automorphism sigma not modeled"]

    def as_json(self):
        return {"degree": self.degree, "size": self.size, "ok": self.ok,
                "samples": self.samples, "notes": self.notes}
