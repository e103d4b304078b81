"""Hopf *-algebra structure on a presented algebra: comultiplication,
counit, antipode, axiom verification and the Galois-map density checks.

The generator tables are extended multiplicatively (comultiplication,
counit) / anti-multiplicatively (antipode) to all normal monomials, with
memoization keyed on words.  Axioms are verified exactly on every normal
monomial up to a degree bound.
"""

from __future__ import annotations

from .ncalg import (NcPoly, Presentation, PresentationError, TensorPoly,
                    check_confluence, normal_words)
from .scalar import ONE, ZERO, Scalar


class DegreeError(RuntimeError):
    """Operation would exceed the certified degree and recertification failed."""


class HopfConsistencyError(ValueError):
    """A generator table does not respect the defining relations."""


class CqgAlgebra:
    """Presented *-algebra with comultiplication, counit and antipode tables.

    delta, eps, kappa map generator index -> TensorPoly / Scalar / NcPoly;
    tables must cover every generator (stars included).  The confluence
    certificate is re-established automatically when an operation needs a
    higher degree.
    """

    def __init__(self, pres: Presentation, delta, eps, kappa, name="",
                 cert_degree=0, check_tables=True, strict=True):
        self.pres = pres
        self.name = name
        self.strict = strict
        n = len(pres.names)
        if set(delta) != set(range(n)) or set(eps) != set(range(n)) \
                or set(kappa) != set(range(n)):
            raise HopfConsistencyError("incomplete generator tables")
        self.delta_table = dict(delta)
        self.eps_table = dict(eps)
        self.kappa_table = dict(kappa)
        self._delta_cache = {(): TensorPoly.one(pres)}
        self._kappa_cache = {(): NcPoly.one(pres)}
        self._cert = 0
        self.certified_ok = True
        self._cert_reports = []
        if cert_degree:
            self.ensure_certified(cert_degree)
        if check_tables:
            self._check_tables()

    # -- certification ---------------------------------------------------------

    def ensure_certified(self, degree: int):
        """Re-certify confluence up to `degree`.  In strict mode a failure
        raises; otherwise it is recorded (reductions to zero stay sound, only
        nonzero normal-form equality loses its uniqueness certificate)."""
        if degree <= self._cert:
            return
        maxlhs = max((len(l) for l in self.pres.rules), default=1)
        report = check_confluence(self.pres, max(degree, 2 * maxlhs))
        self._cert_reports.append(report)
        if not report.ok:
            if self.strict:
                raise DegreeError(
                    f"rewriting not confluent at degree {degree}: "
                    f"{report.failures[:3]}")
            self.certified_ok = False
        self._cert = report.bound

    @property
    def certified_degree(self):
        return self._cert

    # -- load-time checks --------------------------------------------------------

    def _check_tables(self):
        pres = self.pres
        for g in range(len(pres.names)):
            gs = pres.star[g]
            if self.delta_table[g].star() != self.delta_table[gs]:
                raise HopfConsistencyError(
                    f"delta({pres.names[gs]}) is not the star of "
                    f"delta({pres.names[g]})")
            if self.eps_table[g].conj() != self.eps_table[gs]:
                raise HopfConsistencyError("counit table is not star-compatible")
        # generator images must satisfy the defining relations
        for lhs, rhs in pres.rules.items():
            rel = {lhs: ONE}
            for w, c in rhs.items():
                rel[w] = rel.get(w, ZERO) - c
            if not self._delta_of_dict(rel).is_zero():
                raise HopfConsistencyError(
                    f"comultiplication does not respect rule on {pres.word_str(lhs)}")
            if not self._eps_of_dict(rel).is_zero():
                raise HopfConsistencyError(
                    f"counit does not respect rule on {pres.word_str(lhs)}")
        # the antipode table is validated through the axiom suite: the
        # anti-homomorphic extension of a wrong table fails the antipode
        # axiom on generators, which verify_hopf checks exactly

    def _delta_of_dict(self, terms):
        out = TensorPoly.zero(self.pres)
        for w, c in terms.items():
            out = out + self.delta_word(w).scale(c)
        return out

    def _eps_of_dict(self, terms):
        acc = ZERO
        for w, c in terms.items():
            acc = acc + self.eps_word(w) * c
        return acc

    def _kappa_of_dict(self, terms):
        out = NcPoly.zero(self.pres)
        for w, c in terms.items():
            out = out + self.kappa_word(w).scale(c)
        return out

    # -- structure maps ------------------------------------------------------------

    def delta_word(self, word) -> TensorPoly:
        cached = self._delta_cache.get(word)
        if cached is not None:
            return cached
        out = self.delta_word(word[:-1]) * self.delta_table[word[-1]]
        self._delta_cache[word] = out
        return out

    def eps_word(self, word) -> Scalar:
        acc = ONE
        for g in word:
            acc = acc * self.eps_table[g]
            if acc.is_zero():
                return ZERO
        return acc

    def kappa_word(self, word) -> NcPoly:
        cached = self._kappa_cache.get(word)
        if cached is not None:
            return cached
        # kappa(g1 ... gn) = kappa(gn) ... kappa(g1)
        out = self.kappa_word(word[1:]) * self.kappa_table[word[0]]
        self._kappa_cache[word] = out
        return out

    def comultiply(self, x: NcPoly) -> TensorPoly:
        self.ensure_certified(max(x.degree(), 1))
        return self._delta_of_dict(x.terms)

    def counit(self, x: NcPoly) -> Scalar:
        return self._eps_of_dict(x.terms)

    def antipode(self, x: NcPoly) -> NcPoly:
        self.ensure_certified(max(x.degree(), 1))
        return self._kappa_of_dict(x.terms)

    # -- helpers used across modules --------------------------------------------------

    def poly(self, terms) -> NcPoly:
        return NcPoly(self.pres, terms)

    def one(self) -> NcPoly:
        return NcPoly.one(self.pres)

    def generator(self, name) -> NcPoly:
        return NcPoly.generator(self.pres, name)

    def monomials(self, degree, exact=False):
        return normal_words(self.pres, degree, exact=exact)


# ---------------------------------------------------------------------------
# Axiom verification.

def verify_hopf(alg: CqgAlgebra, degree_bound: int):
    """Check coassociativity, the counit and antipode axioms, and the
    involution identity kappa(kappa(a*)*) = a exactly on every normal-form
    monomial of degree <= degree_bound.  Returns a report (list of failures,
    empty = pass)."""
    alg.ensure_certified(2 * degree_bound)
    pres = alg.pres
    failures = []
    one = alg.one()
    for word in alg.monomials(degree_bound):
        m = NcPoly(pres, {word: ONE}, _normal=True)
        d = alg.delta_word(word)
        # coassociativity
        lhs = d.expand_leg(0, alg.delta_word)
        rhs = d.expand_leg(1, alg.delta_word)
        if lhs != rhs:
            failures.append({"axiom": "coassociativity", "monomial": pres.word_str(word),
                             "residual": repr(lhs - rhs)})
        # counit
        left = d.apply_scalar_leg(0, alg.eps_word)
        right = d.apply_scalar_leg(1, alg.eps_word)
        if left != m or right != m:
            failures.append({"axiom": "counit", "monomial": pres.word_str(word),
                             "residual": str((left - m) + (right - m))})
        # antipode
        eps_m = alg.eps_word(word)
        target = one.scale(eps_m)
        lhs_a = _mult_contract(alg, d, kappa_leg=0)
        rhs_a = _mult_contract(alg, d, kappa_leg=1)
        if lhs_a != target or rhs_a != target:
            failures.append({"axiom": "antipode", "monomial": pres.word_str(word),
                             "residual": str((lhs_a - target) + (rhs_a - target))})
        # kappa(kappa(a*)*) = a
        k = alg.antipode(m.star()).star()
        if alg.antipode(k) != m:
            failures.append({"axiom": "involution", "monomial": pres.word_str(word),
                             "residual": str(alg.antipode(k) - m)})
    return HopfReport(alg, degree_bound, failures)


def _mult_contract(alg, tensor: TensorPoly, kappa_leg: int) -> NcPoly:
    """m(kappa (x) id) or m(id (x) kappa) applied to an arity-2 tensor."""
    out = NcPoly.zero(alg.pres)
    for (w1, w2), c in tensor.terms.items():
        if kappa_leg == 0:
            prod = alg.kappa_word(w1) * NcPoly(alg.pres, {w2: ONE}, _normal=True)
        else:
            prod = NcPoly(alg.pres, {w1: ONE}, _normal=True) * alg.kappa_word(w2)
        out = out + prod.scale(c)
    return out


class HopfReport:
    def __init__(self, alg, bound, failures):
        self.algebra = alg.name
        self.bound = bound
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        return {"algebra": self.algebra, "degree_bound": self.bound,
                "ok": self.ok, "failures": self.failures}


# ---------------------------------------------------------------------------
# Galois maps T1: x (x) y -> delta(x)(1 (x) y), T2: x (x) y -> (x (x) 1) delta(y).

def galois_maps(alg: CqgAlgebra, degree_bound: int):
    """Verify that T1 and T2 are injective on the degree-filtered tensor
    space and that g (x) 1 (resp. 1 (x) g) has an explicit preimage built
    from the antipode, for every generator g."""
    alg.ensure_certified(2 * degree_bound)
    pres = alg.pres
    failures = []

    pair_basis = []
    for w1 in alg.monomials(degree_bound):
        for w2 in alg.monomials(degree_bound - len(w1)):
            pair_basis.append((w1, w2))
    pair_basis.sort(key=lambda k: (pres.order_key(k[0]), pres.order_key(k[1])))

    def tmap(which, w1, w2):
        d = alg.delta_word(w1 if which == 1 else w2)
        out = {}
        for (a, b), c in d.terms.items():
            key = (a, b + w2) if which == 1 else (w1 + a, b)
            _acc_pair(pres, out, key, c)
        return out

    for which in (1, 2):
        images = [tmap(which, w1, w2) for (w1, w2) in pair_basis]
        cols = sorted({k for img in images for k in img},
                      key=lambda k: (pres.order_key(k[0]), pres.order_key(k[1])))
        col_index = {k: j for j, k in enumerate(cols)}
        rows = [{col_index[k]: c for k, c in img.items()} for img in images]
        # injectivity == trivial kernel of the transpose-free system M^T x = 0
        # where unknowns are the domain basis coefficients
        sys_rows = []
        for j in range(len(cols)):
            row = {}
            for idx, img in enumerate(rows):
                if j in img:
                    row[idx] = img[j]
            sys_rows.append(row)
        from .scalar import _solve_sparse
        res = _solve_sparse(sys_rows, [ZERO] * len(sys_rows), len(pair_basis))
        if res.nullspace:
            failures.append({"check": f"T{which}-injectivity",
                             "kernel_dim": len(res.nullspace)})

    # explicit witnesses: x (x) 1 = T1(sum x1 (x) kappa(x2)),
    #                     1 (x) x = T2(sum kappa(x1) (x) x2)
    for g in range(len(pres.names)):
        gp = NcPoly.generator(pres, g)
        d = alg.delta_word((g,))
        wit1 = TensorPoly.zero(pres)
        wit2 = TensorPoly.zero(pres)
        for (a, b), c in d.terms.items():
            wit1 = wit1 + TensorPoly.of(NcPoly(pres, {a: ONE}, _normal=True),
                                        alg.kappa_word(b)).scale(c)
            wit2 = wit2 + TensorPoly.of(alg.kappa_word(a),
                                        NcPoly(pres, {b: ONE}, _normal=True)).scale(c)
        img1 = _apply_t1(alg, wit1)
        img2 = _apply_t2(alg, wit2)
        want1 = TensorPoly.of(gp, alg.one())
        want2 = TensorPoly.of(alg.one(), gp)
        if img1 != want1:
            failures.append({"check": "T1-witness", "generator": pres.names[g],
                             "residual": repr(img1 - want1)})
        if img2 != want2:
            failures.append({"check": "T2-witness", "generator": pres.names[g],
                             "residual": repr(img2 - want2)})
    return GaloisReport(alg, degree_bound, failures)


def _acc_pair(pres, acc, key, coeff):
    from .ncalg import _accumulate_normalized
    _accumulate_normalized(pres, acc, key, coeff)


def _apply_t1(alg, tp: TensorPoly) -> TensorPoly:
    out = TensorPoly.zero(alg.pres)
    for (x, y), c in tp.terms.items():
        d = alg.delta_word(x)
        prod = d * TensorPoly.of(alg.one(), NcPoly(alg.pres, {y: ONE}, _normal=True))
        out = out + prod.scale(c)
    return out


def _apply_t2(alg, tp: TensorPoly) -> TensorPoly:
    out = TensorPoly.zero(alg.pres)
    for (x, y), c in tp.terms.items():
        d = alg.delta_word(y)
        prod = TensorPoly.of(NcPoly(alg.pres, {x: ONE}, _normal=True), alg.one()) * d
        out = out + prod.scale(c)
    return out


class GaloisReport:
    def __init__(self, alg, bound, failures):
        self.algebra = alg.name
        self.bound = bound
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        return {"algebra": self.algebra, "degree_bound": self.bound,
                "ok": self.ok, "failures": self.failures}


def structurally_equal(a: CqgAlgebra, b: CqgAlgebra) -> bool:
    """Same generators, star pairing, weights, rules and Hopf tables as
    data (presentation objects may differ)."""
    pa, pb = a.pres, b.pres
    if (pa.names, pa.star, pa.weights) != (pb.names, pb.star, pb.weights):
        return False
    if pa.rules != pb.rules:
        return False
    n = len(pa.names)
    for g in range(n):
        if a.delta_table[g].terms != b.delta_table[g].terms:
            return False
        if a.eps_table[g] != b.eps_table[g]:
            return False
        if a.kappa_table[g].terms != b.kappa_table[g].terms:
            return False
    return True
