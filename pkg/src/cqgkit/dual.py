"""The dual discrete quantum group B0 = (+)_alpha M_n(alpha): basis
functionals, convolution, *-structure, pairing with the comultiplication,
and the K operators implementing the squared antipode.

Dual elements live over a fixed registry snapshot; all identities are
evaluated exactly through the Haar pairing omega(x) = h(a x), where a is
the representing element of the functional.  Blocks are written in the
gauge of the registry entry: for honest-unitary entries (gauge = identity)
every formula below reduces to the classical one; for a gauge certificate M
the involution picks up the documented M-twist.
"""

from __future__ import annotations

from .corep import Corep, adjoint, intertwiners
from .haar import FMatrix, HaarTable, f_matrix
from .linalg import (smat_conj_t, smat_identity, smat_inv, smat_mul,
                     smat_scale, smat_zero)
from .ncalg import NcPoly
from .scalar import ONE, ZERO, Scalar


class DualError(RuntimeError):
    pass


class DualContext:
    """Snapshot of an irreducible registry plus the Haar table: the ambient
    space for dual elements.  Extending the registry later does not affect
    existing contexts."""

    def __init__(self, registry, table: HaarTable, q_samples=(0.5,)):
        self.alg = registry.alg
        self.table = table
        self.entries = list(registry.entries)
        self.labels = [e.label for e in self.entries]
        self._by_label = {e.label: e for e in self.entries}
        self._f = {}
        self._repelt = {}
        self._conj = {}
        self._k = {}
        self._q_samples = q_samples

    def entry(self, label):
        try:
            return self._by_label[label]
        except KeyError:
            raise DualError(f"label {label} not in the dual snapshot") from None

    def fmatrix(self, label) -> FMatrix:
        if label not in self._f:
            self._f[label] = f_matrix(self.entry(label), self.table,
                                      q_samples=self._q_samples)
        return self._f[label]

    def representing_element(self, label, p, q) -> NcPoly:
        """a with h(a u^beta_rs) = delta_{label beta} delta_pr delta_qs:
        a = sum_{k,l} (F^-1)_pk (u_kl)* (M^-1)_lq."""
        key = (label, p, q)
        if key not in self._repelt:
            entry = self.entry(label)
            f_inv = smat_inv(self.fmatrix(label).matrix)
            m_inv = smat_inv(entry.gauge_matrix())
            v = entry.corep
            acc = NcPoly.zero(self.alg.pres)
            for k in range(v.n):
                if f_inv[p][k].is_zero():
                    continue
                for l in range(v.n):
                    c = f_inv[p][k] * m_inv[l][q]
                    if c.is_zero():
                        continue
                    acc = acc + v.entries[k][l].star().scale(c)
            self._repelt[key] = acc
        return self._repelt[key]

    def conjugate_label(self, label):
        """alpha-bar: the registry label of the unitarizable model of the
        adjoint; resolved by an exact intertwiner search."""
        if label not in self._conj:
            bar = adjoint(self.entry(label).corep, check=False)
            bar.verified_corep = True
            found = None
            for e in self.entries:
                if e.dim != bar.n:
                    continue
                if intertwiners(bar, e.corep):
                    found = e.label
                    break
            if found is None:
                raise DualError(f"conjugate of {label} is not in the registry "
                                "snapshot; extend the registry first")
            self._conj[label] = found
        return self._conj[label]

    def zero(self) -> "DualElement":
        return DualElement(self, {})

    def basis(self, label, p, q) -> "DualElement":
        entry = self.entry(label)
        m = smat_zero(entry.dim)
        m[p][q] = ONE
        return DualElement(self, {label: m})


def dual_basis(ctx: DualContext, label, p, q):
    """The basis functional omega^alpha_pq together with its representing
    element; the pairing values against every registry coefficient are
    checked exactly on construction."""
    omega = ctx.basis(label, p, q)
    a = ctx.representing_element(label, p, q)
    for e in ctx.entries:
        v = e.corep
        for r in range(v.n):
            for s in range(v.n):
                want = ONE if (e.label == label and r == p and s == q) else ZERO
                got = ctx.table.eval_poly(a * v.entries[r][s])
                if got != want:
                    raise DualError(
                        f"pairing failure: omega{label}[{p}{q}] on "
                        f"u{e.label}[{r}{s}] = {got}")
    return omega, a


class DualElement:
    """Finitely supported block matrix over the snapshot labels."""

    def __init__(self, ctx: DualContext, blocks):
        self.ctx = ctx
        self.blocks = {l: m for l, m in blocks.items() if not _is_zero_mat(m)}

    def block(self, label):
        n = self.ctx.entry(label).dim
        return self.blocks.get(label, smat_zero(n))

    def representing_element(self) -> NcPoly:
        acc = NcPoly.zero(self.ctx.alg.pres)
        for label, m in self.blocks.items():
            for p, row in enumerate(m):
                for q, c in enumerate(row):
                    if not c.is_zero():
                        acc = acc + self.ctx.representing_element(label, p, q).scale(c)
        return acc

    def __call__(self, x: NcPoly) -> Scalar:
        return pair(self, x)

    def __add__(self, other):
        assert self.ctx is other.ctx
        out = {}
        for label in set(self.blocks) | set(other.blocks):
            n = self.ctx.entry(label).dim
            a = self.block(label)
            b = other.block(label)
            out[label] = [[a[i][j] + b[i][j] for j in range(n)] for i in range(n)]
        return DualElement(self.ctx, out)

    def __sub__(self, other):
        return self + other.scale(-ONE)

    def scale(self, c: Scalar):
        return DualElement(self.ctx,
                           {l: smat_scale(m, c) for l, m in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, DualElement) or self.ctx is not other.ctx:
            return NotImplemented
        labels = set(self.blocks) | set(other.blocks)
        return all(_mat_eq(self.block(l), other.block(l)) for l in labels)

    def __repr__(self):
        parts = []
        for l in sorted(self.blocks):
            parts.append(f"{l}:{self.blocks[l]}")
        return "DualElement(" + "; ".join(parts) + ")" if parts else "DualElement(0)"


def _is_zero_mat(m):
    return all(c.is_zero() for row in m for c in row)


def _mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def pair(omega: DualElement, x: NcPoly, table=None) -> Scalar:
    """omega(x) = h(a x) with a the representing element."""
    table = table or omega.ctx.table
    acc = ZERO
    for label, m in omega.blocks.items():
        for p, row in enumerate(m):
            for q, c in enumerate(row):
                if c.is_zero():
                    continue
                a = omega.ctx.representing_element(label, p, q)
                acc = acc + table.eval_poly(a * x) * c
    return acc


def convolve(omega: DualElement, psi: DualElement) -> DualElement:
    """(omega psi)(a) = (omega (x) psi) delta(a): blockwise matrix product in
    the block model."""
    if omega.ctx is not psi.ctx:
        raise DualError("dual elements over different registry snapshots")
    out = {}
    for label in set(omega.blocks) & set(psi.blocks):
        out[label] = smat_mul(omega.blocks[label], psi.blocks[label])
    return DualElement(omega.ctx, out)


def convolve_via_delta(omega: DualElement, psi: DualElement, x: NcPoly) -> Scalar:
    """Independent route: (omega (x) psi) delta(x), evaluated legwise through
    the Haar pairing; must agree with pair(convolve(omega, psi), x)."""
    ctx = omega.ctx
    d = ctx.alg.comultiply(x)
    acc = ZERO
    for (w1, w2), c in d.terms.items():
        acc = acc + omega(NcPoly(ctx.alg.pres, {w1: ONE}, _normal=True)) \
            * psi(NcPoly(ctx.alg.pres, {w2: ONE}, _normal=True)) * c
    return acc


def dual_star(omega: DualElement) -> DualElement:
    """omega* with omega*(x) = conj(omega(kappa(x)*)); blockwise this is
    X -> M^-1 X-dagger M in the entry gauge (conjugate transpose for honest
    unitary entries)."""
    out = {}
    for label, m in omega.blocks.items():
        entry = omega.ctx.entry(label)
        gm = entry.gauge_matrix()
        out[label] = smat_mul(smat_inv(gm), smat_mul(smat_conj_t(m), gm))
    return DualElement(omega.ctx, out)


def dual_star_via_kappa(omega: DualElement) -> DualElement:
    """The defining formula evaluated exactly: reconstruct the block matrix
    of x -> conj(omega(kappa(x)*)) from its values on matrix coefficients."""
    ctx = omega.ctx
    alg = ctx.alg
    out = {}
    for e in ctx.entries:
        v = e.corep
        # coordinates of the functional in the dual pairing basis: the block
        # matrix entry (r, s) is the value on u_rs, extracted through the
        # gauge-corrected pairing below
        raw = smat_zero(v.n)
        for r in range(v.n):
            for s in range(v.n):
                val = pair(omega, alg.antipode(v.entries[r][s]).star())
                raw[r][s] = val.conj()
        out[e.label] = raw
    return DualElement(ctx, out)


def dual_comult_eval(omega: DualElement, a: NcPoly, b: NcPoly) -> Scalar:
    """delta-hat(omega)(a (x) b) = omega(a b)."""
    return pair(omega, a * b)


def k_matrix(ctx: DualContext, label):
    """K_alpha from the pairing sums <K_alpha, u^beta_pq> =
    sum_k h((u^alpha-bar_kk)* u^beta_pq); verifies the vanishing off
    beta = alpha-bar, the closed form F^bar_qp on unitary entries, and
    kappa-hat^2 = Ad(K) blockwise on B_alpha-bar."""
    bar = ctx.conjugate_label(label)
    ebar = ctx.entry(bar)
    vbar = ebar.corep
    table = ctx.table
    failures = []
    for e in ctx.entries:
        v = e.corep
        vals = smat_zero(v.n)
        for p in range(v.n):
            for q in range(v.n):
                acc = ZERO
                for k in range(vbar.n):
                    acc = acc + table.eval_poly(
                        vbar.entries[k][k].star() * v.entries[p][q])
                vals[p][q] = acc
        if e.label == bar:
            k_mat = vals
        elif not _is_zero_mat(vals):
            failures.append({"check": "k-support", "label": str(e.label)})
    f_bar = ctx.fmatrix(bar).matrix
    m_bar = ebar.gauge_matrix()
    want = smat_mul([[f_bar[j][i] for j in range(vbar.n)] for i in range(vbar.n)],
                    m_bar)  # F^T M
    if not _mat_eq(k_mat, want):
        failures.append({"check": "k-closed-form"})
    # kappa-hat^2 = Ad(K) on the bar block
    alg = ctx.alg
    kinv = smat_inv(k_mat)
    for p in range(vbar.n):
        for q in range(vbar.n):
            omega = ctx.basis(bar, p, q)
            got = smat_zero(vbar.n)
            for r in range(vbar.n):
                for s in range(vbar.n):
                    got[r][s] = pair(omega, alg.antipode(
                        alg.antipode(vbar.entries[r][s])))
            e_pq = smat_zero(vbar.n)
            e_pq[p][q] = ONE
            want2 = smat_mul(kinv, smat_mul(e_pq, k_mat))
            if not _mat_eq(got, want2):
                failures.append({"check": "kappa-squared", "basis": (p, q)})
    return KMatrixReport(label, bar, k_mat, failures)


class KMatrixReport:
    def __init__(self, label, bar, matrix, failures):
        self.label = label
        self.conjugate = bar
        self.matrix = matrix
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        from .scalar import scalar_to_text
        return {"label": str(self.label), "conjugate": str(self.conjugate),
                "ok": self.ok,
                "matrix": [[scalar_to_text(c) for c in r] for r in self.matrix],
                "failures": self.failures}


def counit_not_inner_report(ctx: DualContext, probe: Corep):
    """B0 has no identity: the dual element matching the counit on every
    snapshot block still disagrees with the counit on a coefficient of a
    corepresentation outside the snapshot (probe), so no finitely supported
    functional represents the counit."""
    candidate = DualElement(ctx, {e.label: smat_identity(e.dim)
                                  for e in ctx.entries})
    alg = ctx.alg
    mismatches = []
    for p in range(probe.n):
        for q in range(probe.n):
            x = probe.entries[p][q]
            eps = alg.counit(x)
            got = pair(candidate, x)
            if got != eps:
                mismatches.append({"entry": (p, q), "counit": str(eps),
                                   "candidate": str(got)})
    return mismatches


def dual_export(ctx: DualContext):
    """JSON form: blocks, K matrices, conjugation map."""
    from .scalar import scalar_to_text
    blocks = {}
    k_mats = {}
    conj = {}
    for e in ctx.entries:
        blocks[_label_str(e.label)] = {"dim": e.dim, "unitary_gauge": e.unitary}
        conj[_label_str(e.label)] = _label_str(ctx.conjugate_label(e.label))
        rep = k_matrix(ctx, e.label)
        k_mats[_label_str(e.label)] = [[scalar_to_text(c) for c in r]
                                       for r in rep.matrix]
    return {"blocks": blocks, "k_matrices": k_mats, "conjugation_map": conj}


def _label_str(label):
    return f"{label[0]}#{label[1]}"
