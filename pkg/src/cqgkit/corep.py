"""Finite-dimensional corepresentations: construction, verification,
tensor/sum/adjoint, intertwiner spaces, unitarization, exact decomposition
into irreducibles, and fusion tables.

A corepresentation is a square matrix v over the algebra with
delta(v_pq) = sum_k v_pk (x) v_kq.  Entries live in normal form, so all
checks here are exact.  Where an entry of the irreducible registry cannot
be regauged to an exactly unitary matrix inside Q(i)(q) (a genuine field
obstruction, not a numerical one), it is stored together with an exact
positive gauge certificate M such that v*(M (x) 1)v = M (x) 1; M = I is the
honest-unitary case and everything downstream degrades to the textbook
formulas then.
"""

from __future__ import annotations

import itertools
import threading

import sympy

from .hermsq import NotHermitianSquare, hermitian_square_root, _poly_to_sympy, \
    _sympy_fraction_to_scalar
from .hopf import CqgAlgebra
from .linalg import (ldl_decomposition, smat_add, smat_conj_t, smat_eval,
                     smat_identity, smat_inv, smat_is_identity, smat_mul,
                     smat_rank, smat_scale, smat_sub, smat_zero)
from .ncalg import NcPoly, TensorPoly
from .scalar import ONE, ZERO, LinearSystem, Scalar, solve_exact


class CorepError(ValueError):
    pass


class SplittingError(RuntimeError):
    """decompose could not find an exact invariant splitting; diagnostics
    attached, nothing is silently merged."""


class Corep:
    """n x n matrix over the algebra, with verification flags and an exact
    gauge certificate (None means the identity gauge, i.e. honest unitary
    when `unitary` is set)."""

    def __init__(self, alg: CqgAlgebra, entries, check=True):
        self.alg = alg
        self.n = len(entries)
        assert all(len(row) == self.n for row in entries)
        self.entries = [list(row) for row in entries]
        self.verified_corep = False
        self.unitary = None          # True / False / None (unknown)
        self.gauge = None            # exact Hermitian positive M, None = identity
        self.label = None
        if check:
            ok, witness = is_corep(self)
            if not ok:
                raise CorepError(f"not a corepresentation, first failure at {witness}")

    def entry(self, p, q) -> NcPoly:
        return self.entries[p][q]

    def degree(self):
        return max(e.degree() for row in self.entries for e in row)

    def conj_transpose_entries(self):
        return [[self.entries[q][p].star() for q in range(self.n)]
                for p in range(self.n)]

    def __repr__(self):
        return f"Corep(dim={self.n}, label={self.label}, unitary={self.unitary})"


# ---------------------------------------------------------------------------
# Verification.

def is_corep(v: Corep):
    """Exact check of delta(v_pq) = sum_k v_pk (x) v_kq; returns (bool, witness)."""
    alg = v.alg
    alg.ensure_certified(max(2 * v.degree(), 2))
    for p in range(v.n):
        for q in range(v.n):
            lhs = alg.comultiply(v.entries[p][q])
            rhs = TensorPoly.zero(alg.pres)
            for k in range(v.n):
                rhs = rhs + TensorPoly.of(v.entries[p][k], v.entries[k][q])
            if lhs != rhs:
                v.verified_corep = False
                return False, (p, q, repr(lhs - rhs))
    v.verified_corep = True
    return True, None


def is_unitary(v: Corep):
    """Exact check of v v* = v* v = I in M_n(A0); returns (bool, witness)."""
    one = v.alg.one()
    for p in range(v.n):
        for q in range(v.n):
            want = one if p == q else NcPoly.zero(v.alg.pres)
            a = _sum_poly(v.entries[p][k] * v.entries[q][k].star() for k in range(v.n))
            if a != want:
                v.unitary = False
                return False, ("vv*", p, q, str(a - want))
            b = _sum_poly(v.entries[k][p].star() * v.entries[k][q] for k in range(v.n))
            if b != want:
                v.unitary = False
                return False, ("v*v", p, q, str(b - want))
    v.unitary = True
    return True, None


def is_gauge_unitary(v: Corep, m):
    """Exact check of v*(M (x) 1)v = M (x) 1 and v(M^-1 (x) 1)v* = M^-1 (x) 1."""
    alg = v.alg
    one = alg.one()
    minv = smat_inv(m)
    for p in range(v.n):
        for q in range(v.n):
            a = _sum_poly(v.entries[i][p].star().scale(m[i][j]) * v.entries[j][q]
                          for i in range(v.n) for j in range(v.n)
                          if not m[i][j].is_zero())
            if a != one.scale(m[p][q]):
                return False, ("v*Mv", p, q)
            b = _sum_poly(v.entries[p][i].scale(minv[i][j]) * v.entries[q][j].star()
                          for i in range(v.n) for j in range(v.n)
                          if not minv[i][j].is_zero())
            if b != one.scale(minv[p][q]):
                return False, ("vM^-1v*", p, q)
    return True, None


def _sum_poly(items):
    out = None
    for x in items:
        out = x if out is None else out + x
    return out


# ---------------------------------------------------------------------------
# Constructions.

def trivial_corep(alg: CqgAlgebra) -> Corep:
    v = Corep(alg, [[alg.one()]], check=False)
    v.verified_corep = True
    v.unitary = True
    return v


def tensor(v: Corep, w: Corep, check=True) -> Corep:
    """Entry at ((p,q),(r,s)) is v_pr * w_qs; index (p,q) -> p*dim(w)+q."""
    if v.alg is not w.alg:
        raise CorepError("coreps over different algebras")
    n, m = v.n, w.n
    entries = [[v.entries[p][r] * w.entries[q][s]
                for r in range(n) for s in range(m)]
               for p in range(n) for q in range(m)]
    return Corep(v.alg, entries, check=check)


def direct_sum(v: Corep, w: Corep, check=True) -> Corep:
    zero = NcPoly.zero(v.alg.pres)
    n, m = v.n, w.n
    entries = [[v.entries[p][q] if p < n and q < n else
                w.entries[p - n][q - n] if p >= n and q >= n else zero
                for q in range(n + m)] for p in range(n + m)]
    return Corep(v.alg, entries, check=check)


def adjoint(v: Corep, check=True) -> Corep:
    """Entrywise star (the conjugate corepresentation v-bar)."""
    entries = [[v.entries[p][q].star() for q in range(v.n)] for p in range(v.n)]
    return Corep(v.alg, entries, check=check)


def transform(v: Corep, t, tinv=None, check=False) -> Corep:
    """T v T^-1 for an exact scalar matrix T."""
    tinv = smat_inv(t) if tinv is None else tinv
    return Corep(v.alg, _sandwich(t, v.entries, tinv), check=check)


def _sandwich(a, entries, b):
    """a . entries . b with scalar matrices a, b and NcPoly entries."""
    n = len(entries)
    ra, rb = len(a), len(b[0])
    mid = [[None] * rb for _ in range(n)]
    for i in range(n):
        for j in range(rb):
            acc = None
            for k in range(n):
                c = b[k][j]
                if c.is_zero():
                    continue
                term = entries[i][k].scale(c)
                acc = term if acc is None else acc + term
            mid[i][j] = acc
    out = [[None] * rb for _ in range(ra)]
    for i in range(ra):
        for j in range(rb):
            acc = None
            for k in range(n):
                c = a[i][k]
                if c.is_zero():
                    continue
                term = mid[k][j].scale(c)
                acc = term if acc is None else acc + term
            if acc is None:
                acc = NcPoly.zero(entries[0][0].pres)
            out[i][j] = acc
    return out


# ---------------------------------------------------------------------------
# Intertwiners.

def intertwiners(v: Corep, w: Corep):
    """Exact basis of Mor(v, w) = {x : (x (x) 1) v = w (x (x) 1)} as scalar
    matrices (w.n x v.n), from the null space of the coefficient system."""
    if v.alg is not w.alg:
        raise CorepError("coreps over different algebras")
    alg = v.alg
    alg.ensure_certified(max(v.degree(), w.degree(), 1))
    nv, nw = v.n, w.n
    nvars = nw * nv
    rows = {}
    for p in range(nw):
        for q in range(nv):
            expr = {}
            for k in range(nv):
                for word, c in v.entries[k][q].terms.items():
                    expr.setdefault(word, {})
                    var = p * nv + k
                    expr[word][var] = expr[word].get(var, ZERO) + c
            for k in range(nw):
                for word, c in w.entries[p][k].terms.items():
                    expr.setdefault(word, {})
                    var = k * nv + q
                    expr[word][var] = expr[word].get(var, ZERO) - c
            for word, coeffs in expr.items():
                coeffs = {j: c for j, c in coeffs.items() if not c.is_zero()}
                if coeffs:
                    rows[(p, q, word)] = coeffs
    from .scalar import _solve_sparse
    sys_rows = [rows[k] for k in sorted(rows)]
    res = _solve_sparse(sys_rows, [ZERO] * len(sys_rows), nvars)
    basis = []
    for vec in res.nullspace:
        basis.append([[vec[p * nv + q] for q in range(nv)] for p in range(nw)])
    return basis


def averaged_intertwiner(v: Corep, w: Corep, x, haar):
    """y = (id (x) h)(w* (x (x) 1) v); for unitary w this lies in Mor(v, w).
    x is a scalar matrix (w.n x v.n); haar is a HaarTable."""
    y = smat_zero(w.n, v.n)
    for p in range(w.n):
        for q in range(v.n):
            acc = ZERO
            for i in range(w.n):
                for j in range(v.n):
                    if x[i][j].is_zero():
                        continue
                    val = haar.eval_poly(w.entries[i][p].star() * v.entries[j][q])
                    acc = acc + x[i][j] * val
            y[p][q] = acc
    if w.unitary:
        resid = _mor_residual(v, w, y)
        assert resid is None, f"averaged intertwiner fails at {resid}"
    return y


def _mor_residual(v, w, x):
    for p in range(w.n):
        for q in range(v.n):
            a = _sum_poly(v.entries[k][q].scale(x[p][k]) for k in range(v.n))
            b = _sum_poly(w.entries[p][k].scale(x[k][q]) for k in range(w.n))
            if a != b:
                return (p, q)
    return None


# ---------------------------------------------------------------------------
# Unitarization (numeric square root over an exact skeleton).

def unitarize(v: Corep, haar, q0=0.5):
    """w = (y^{1/2} (x) 1) v (y^{-1/2} (x) 1) with y = (id (x) h)(v* v).

    y is exact and the sandwich identities v*(y (x) 1)v = y (x) 1 and
    v(y^-1 (x) 1)v* = y^-1 (x) 1 are verified exactly (they are precisely
    unitarity of w); the returned matrix carries floating coefficients since
    y^{1/2} leaves the field.  Raises CorepError when y is not positive
    definite at q0."""
    import numpy as np
    y = smat_zero(v.n, v.n)
    for p in range(v.n):
        for q in range(v.n):
            acc = ZERO
            for k in range(v.n):
                acc = acc + haar.eval_poly(v.entries[k][p].star() * v.entries[k][q])
            y[p][q] = acc
    ok, where = is_gauge_unitary(v, y)
    if not ok:
        raise CorepError(f"averaging failed to produce an invariant form at {where}")
    y0 = smat_eval(y, q0)
    evals, evecs = np.linalg.eigh((y0 + y0.conj().T) / 2)
    if min(evals) <= 1e-12:
        raise CorepError(f"y not positive definite at q0={q0}")
    rt = evecs @ np.diag(np.sqrt(evals)) @ evecs.conj().T
    rti = evecs @ np.diag(1 / np.sqrt(evals)) @ evecs.conj().T
    # floating corepresentation entries: dict word -> complex
    float_entries = [[_float_combo(v, rt, rti, p, q, q0) for q in range(v.n)]
                     for p in range(v.n)]
    return UnitarizeResult(v, y, rt, float_entries, q0)


def _float_combo(v, rt, rti, p, q, q0):
    out = {}
    for a in range(v.n):
        for b in range(v.n):
            c = rt[p][a] * rti[b][q]
            if abs(c) < 1e-300:
                continue
            for word, s in v.entries[a][b].terms.items():
                out[word] = out.get(word, 0j) + c * s.eval(q0)
    return {w: c for w, c in out.items() if abs(c) > 1e-13}


class UnitarizeResult:
    def __init__(self, source, y, root, float_entries, q0):
        self.source = source
        self.invariant_form = y       # exact
        self.root = root              # numeric y^{1/2}
        self.entries = float_entries  # numeric coefficients per word
        self.q0 = q0


# ---------------------------------------------------------------------------
# Registry of irreducibles and exact decomposition.

class IrrepRegistry:
    """Ordered list of pairwise-inequivalent irreducible coreps with labels
    (dimension, discovery index).  Single-writer registration behind a lock."""

    def __init__(self, alg: CqgAlgebra):
        self.alg = alg
        self.entries = []
        self._lock = threading.Lock()
        self._dim_counts = {}
        triv = trivial_corep(alg)
        self._insert(triv, None, 0)

    def _insert(self, corep, gauge, tensor_degree):
        idx = self._dim_counts.get(corep.n, 0)
        self._dim_counts[corep.n] = idx + 1
        corep.label = (corep.n, idx)
        corep.gauge = gauge
        entry = RegistryEntry(corep.label, corep, gauge, tensor_degree)
        self.entries.append(entry)
        return entry

    def find_equivalent(self, v: Corep):
        for entry in self.entries:
            if entry.corep.n != v.n:
                continue
            basis = intertwiners(v, entry.corep)
            if basis:
                return entry, basis[0]
        return None, None

    def register(self, v: Corep, gauge, tensor_degree):
        """Label v, registering it as a new irreducible when it matches no
        existing entry.  Attempts an exact unitary regauge first."""
        with self._lock:
            entry, _ = self.find_equivalent(v)
            if entry is not None:
                return entry
            w, m = _best_gauge(v, gauge)
            return self._insert(w, m, tensor_degree)

    def by_label(self, label):
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def labels(self):
        return [e.label for e in self.entries]


class RegistryEntry:
    def __init__(self, label, corep, gauge, tensor_degree):
        self.label = label
        self.corep = corep
        self.gauge = gauge        # None = identity (exactly unitary entry)
        self.tensor_degree = tensor_degree

    @property
    def dim(self):
        return self.corep.n

    @property
    def unitary(self):
        return self.gauge is None

    def gauge_matrix(self):
        return smat_identity(self.corep.n) if self.gauge is None else self.gauge


def _best_gauge(v: Corep, gauge):
    """Try to conjugate v into an exactly unitary matrix; fall back to the
    normalized gauge certificate when the field obstructs it."""
    if gauge is None or smat_is_identity(gauge):
        ok, _ = is_unitary(v)
        if ok:
            return v, None
        raise CorepError("identity gauge but corep is not exactly unitary")
    ok, where = is_gauge_unitary(v, gauge)
    if not ok:
        raise CorepError(f"gauge certificate fails at {where}")
    ok, _ = is_unitary(v)
    if ok:
        return v, None
    try:
        # gauge rescaling is free, so work with M[0][0] = 1
        scaled = smat_scale(gauge, gauge[0][0].inv())
        l, d = ldl_decomposition(scaled)
        f = [hermitian_square_root(di) for di in d]
        t = [[l[j][i].conj() * f[i] for j in range(v.n)] for i in range(v.n)]
        w = transform(v, t)
        ok, _ = is_unitary(w)
        if ok:
            w.verified_corep = True
            return w, None
    except (NotHermitianSquare, ValueError):
        pass
    # keep the certified gauge, normalized so that M[0][0] = 1
    m = smat_scale(gauge, gauge[0][0].inv())
    w = Corep(v.alg, v.entries, check=False)
    w.verified_corep = v.verified_corep
    w.unitary = False
    return w, m


def decompose(v: Corep, registry: IrrepRegistry, haar=None, q0=0.5,
              tensor_degree=None):
    """Split a (gauge-)unitary corepresentation into irreducibles, exactly.

    End(v) is computed exactly; splitting elements are taken from a
    deterministic candidate list in End(v), their minimal polynomials are
    factored over the field, and kernels of the factors give exact invariant
    subspaces.  Irreducible leaves are matched against the registry by
    intertwiner search or registered freshly.  Returns a DecompositionResult
    whose embeddings satisfy v S = S w exactly."""
    gauge = v.gauge if v.gauge is not None else smat_identity(v.n)
    ok, where = is_gauge_unitary(v, gauge)
    if not ok:
        raise CorepError(f"decompose needs a (gauge-)unitary corep; fails at {where}")
    if tensor_degree is None:
        tensor_degree = 1
    leaves = []
    _split_recursive(v, gauge, smat_identity(v.n), leaves)
    summands = []
    for w, m, s in leaves:
        entry = registry.register(w, m, tensor_degree)
        summands.append((entry.label, s))
    assert sum(registry.by_label(l).dim for l, _ in summands) == v.n, \
        "decomposition is incomplete"
    result = DecompositionResult(v, summands, registry)
    _verify_decomposition(v, result, q0)
    return result


def _split_recursive(v, gauge, embed, leaves):
    basis = intertwiners(v, v)
    if len(basis) == 1:
        leaves.append((v, gauge, embed))
        return
    t = _find_splitter(v, gauge, basis)
    if t is None:
        raise SplittingError(
            f"no exact splitting element found in End(v), dim End = {len(basis)}")
    factors = _min_poly_factors(t)
    if len(factors) == 1:
        raise SplittingError(
            "minimal polynomial of the splitting element is irreducible over "
            "Q(i)(q); an exact split would need a field extension")
    for p in factors:
        pt = _poly_at(p, t)
        s = _kernel_basis(pt)
        if not s:
            continue
        w, m, s_cols = _subcorep(v, gauge, s)
        _split_recursive(w, m, smat_mul(embed, s_cols), leaves)


def _find_splitter(v, gauge, basis):
    """First non-scalar self-adjoint (w.r.t. the gauge) element from a
    deterministic candidate list in End(v)."""
    ginv = smat_inv(gauge)

    def sharp(x):
        return smat_mul(ginv, smat_mul(smat_conj_t(x), gauge))

    from .scalar import I as IMAG
    cands = []
    for b in basis:
        bs = sharp(b)
        cands.append(smat_add(b, bs))
        cands.append(smat_scale(smat_sub(b, bs), IMAG))
        cands.append(smat_mul(bs, b))
    for b, c in itertools.combinations(basis, 2):
        cands.append(smat_add(smat_mul(b, c), sharp(smat_mul(b, c))))
    for t in cands:
        if not _is_scalar_matrix(t):
            if _min_poly_splits_precheck(t):
                return t
    for t in cands:
        if not _is_scalar_matrix(t):
            return t
    return None


def _is_scalar_matrix(t):
    n = len(t)
    c = t[0][0]
    for i in range(n):
        for j in range(n):
            if (t[i][j] != c if i == j else not t[i][j].is_zero()):
                return False
    return True


def _min_poly_splits_precheck(t):
    return len(_min_poly_factors(t)) > 1


def _min_poly(t):
    """Coefficients (ascending) of the monic minimal polynomial of t."""
    n = len(t)
    powers = [smat_identity(n)]
    while True:
        powers.append(smat_mul(powers[-1], t))
        k = len(powers) - 1
        cols = [[powers[m][i][j] for m in range(k)]
                for i in range(n) for j in range(n)]
        rhs = [powers[k][i][j] for i in range(n) for j in range(n)]
        res = solve_exact(LinearSystem(cols, rhs))
        if res.consistent:
            coeffs = [-c for c in res.particular] + [ONE]
            return coeffs


def _min_poly_factors(t):
    """Distinct irreducible factors of the minimal polynomial over Q(i)(q),
    each as ascending Scalar coefficient lists."""
    coeffs = _min_poly(t)
    lam = sympy.Symbol("lam")
    qsym = sympy.Symbol("q")
    expr = sympy.Integer(0)
    for k, c in enumerate(coeffs):
        num = _poly_to_sympy(c.num).subs(sympy.Symbol("q"), qsym)
        den = _poly_to_sympy(c.den).subs(sympy.Symbol("q"), qsym)
        expr += lam ** k * num / den
    expr = sympy.together(expr)
    numer, _ = sympy.fraction(sympy.cancel(expr))
    numer = sympy.expand(numer)
    _, factors = sympy.factor_list(numer, lam, qsym, gaussian=True)
    out = []
    for base, _exp in factors:
        poly = sympy.Poly(base, lam)
        if poly.degree() < 1:
            continue
        fc = []
        for k in range(poly.degree() + 1):
            c = poly.nth(k)
            fc.append(_sympy_fraction_to_scalar(sympy.together(c)))
        out.append(fc)
    out.sort(key=lambda f: (len(f), [str(c) for c in f]))
    return out


def _poly_at(coeffs, t):
    n = len(t)
    out = smat_zero(n)
    power = smat_identity(n)
    for c in coeffs:
        if not c.is_zero():
            out = smat_add(out, smat_scale(power, c))
        power = smat_mul(power, t)
    return out


def _kernel_basis(m):
    res = solve_exact(LinearSystem([list(r) for r in m], [ZERO] * len(m)))
    return res.nullspace  # list of column vectors


def _subcorep(v, gauge, kernel_vectors):
    """Restrict v to the invariant subspace spanned by the kernel vectors;
    returns (w, gauge_w, S) with v S = S w exactly."""
    n, m = v.n, len(kernel_vectors)
    s = [[kernel_vectors[j][i] for j in range(m)] for i in range(n)]  # n x m
    st = smat_conj_t(s)
    sts = smat_mul(st, s)
    pinv = smat_mul(smat_inv(sts), st)          # m x n left inverse
    w_entries = _sandwich(pinv, v.entries, s)
    w = Corep(v.alg, w_entries, check=False)
    w.verified_corep = v.verified_corep
    # invariance: v S = S w exactly
    for i in range(n):
        for j in range(m):
            lhs = _sum_poly(v.entries[i][k].scale(s[k][j]) for k in range(n))
            rhs = _sum_poly(w_entries[k][j].scale(s[i][k]) for k in range(m))
            assert lhs == rhs, "kernel is not invariant (splitter not in End?)"
    gauge_w = smat_mul(st, smat_mul(gauge, s))
    w.gauge = gauge_w
    return w, gauge_w, s


class DecompositionResult:
    def __init__(self, source, summands, registry):
        self.source = source
        self.summands = summands          # list of (label, embedding matrix)
        self.registry = registry

    def multiset(self):
        out = {}
        for label, _ in self.summands:
            out[label] = out.get(label, 0) + 1
        return out

    def __repr__(self):
        parts = [f"{l[0]}#{l[1]}" + (f" x{c}" if c > 1 else "")
                 for l, c in sorted(self.multiset().items())]
        return "DecompositionResult(" + " + ".join(parts) + ")"


def _verify_decomposition(v, result, q0):
    import numpy as np
    n = v.n
    cols = []
    for _, s in result.summands:
        for j in range(len(s[0])):
            cols.append([s[i][j] for i in range(n)])
    x = [[cols[j][i] for j in range(n)] for i in range(n)]
    if smat_rank(x) != n:
        raise SplittingError("embeddings do not assemble to an invertible matrix")
    # numeric orthogonality of the blocks in the gauge inner product at q0
    gauge = v.gauge if v.gauge is not None else smat_identity(n)
    b = smat_eval(gauge, q0)
    xn = smat_eval(x, q0)
    gram = xn.conj().T @ b @ xn
    offsets = []
    pos = 0
    for _, s in result.summands:
        offsets.append((pos, pos + len(s[0])))
        pos += len(s[0])
    for (a0, a1), (b0, b1) in itertools.combinations(offsets, 2):
        if np.max(np.abs(gram[a0:a1, b0:b1])) > 1e-9:
            raise SplittingError("summand subspaces are not orthogonal at q0")


# ---------------------------------------------------------------------------
# Fusion.

def fusion_table(registry: IrrepRegistry, depth: int, haar=None, q0=0.5):
    """Decompose all pairwise tensor products of registry entries with total
    tensor degree <= depth; returns {(label_a, label_b): multiset}."""
    table = {}
    done = set()
    while True:
        pending = []
        for ea in list(registry.entries):
            for eb in list(registry.entries):
                key = (ea.label, eb.label)
                if key in done:
                    continue
                if ea.tensor_degree + eb.tensor_degree <= depth:
                    pending.append((ea, eb))
        if not pending:
            break
        pending.sort(key=lambda p: (p[0].tensor_degree + p[1].tensor_degree,
                                    p[0].label, p[1].label))
        for ea, eb in pending:
            key = (ea.label, eb.label)
            if key in done:
                continue
            prod = tensor(ea.corep, eb.corep, check=False)
            prod.verified_corep = ea.corep.verified_corep and eb.corep.verified_corep
            prod.gauge = _tensor_gauge(ea, eb)
            res = decompose(prod, registry, haar=haar, q0=q0,
                            tensor_degree=ea.tensor_degree + eb.tensor_degree)
            table[key] = res.multiset()
            done.add(key)
    return table


def _tensor_gauge(ea, eb):
    if ea.gauge is None and eb.gauge is None:
        return None
    ma = ea.gauge_matrix()
    mb = eb.gauge_matrix()
    n, m = ea.dim, eb.dim
    out = smat_zero(n * m)
    for p in range(n):
        for q in range(m):
            for r in range(n):
                for s in range(m):
                    out[p * m + q][r * m + s] = ma[p][r] * mb[q][s]
    return out


# ---------------------------------------------------------------------------
# The antipode inverse identities for a corepresentation matrix.

def verify_antipode_identities(v: Corep, alg: CqgAlgebra = None):
    """The antipode matrix is a two-sided inverse: sum_k kappa(v_pk) v_kq =
    delta_pq 1 = sum_k v_pk kappa(v_kq), exactly, entrywise."""
    alg = alg or v.alg
    failures = []
    one = alg.one()
    for p in range(v.n):
        for q in range(v.n):
            want = one if p == q else NcPoly.zero(alg.pres)
            a = _sum_poly(alg.antipode(v.entries[p][k]) * v.entries[k][q]
                          for k in range(v.n))
            if a != want:
                failures.append({"family": "kappa-left", "entry": (p, q),
                                 "residual": str(a - want)})
            b = _sum_poly(v.entries[p][k] * alg.antipode(v.entries[k][q])
                          for k in range(v.n))
            if b != want:
                failures.append({"family": "kappa-right", "entry": (p, q),
                                 "residual": str(b - want)})
    return AntipodeIdentityReport(v, failures)


class AntipodeIdentityReport:
    def __init__(self, corep, failures):
        self.dim = corep.n
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        return {"dim": self.dim, "ok": self.ok, "failures": self.failures}
