"""Built-in quantum groups: the q-deformed SU(2) and SU(n) families, the
universal unitary algebras A_u(Q), and function/group algebras of finite
groups (Z2, Z4, S3, D4, Q8, or any user Cayley table).

Each preset bundles a presented Hopf *-algebra, a fundamental
corepresentation to seed the irreducible registry, and (for finite groups)
the structure-tensor algebra used by the regular-representation module,
together with the basis bridge between the two views.
"""

from __future__ import annotations

from .corep import Corep
from .hopf import CqgAlgebra
from .ncalg import NcPoly, TensorPoly, build_from_relations
from .regrep import FiniteAlgebra
from .scalar import I, MINUS_ONE, ONE, ZERO, Q, Scalar, qpow, rational
from .linalg import smat_inv


class Preset:
    def __init__(self, name, algebra, fundamental, finite=None, group=None,
                 bridge=None, warnings=None):
        self.name = name
        self.algebra = algebra
        self.fundamental = fundamental
        self.finite = finite
        self.group = group
        self.bridge = bridge            # finite basis index -> NcPoly
        self.warnings = warnings or []


def _collapse_warnings(alg):
    """Report generators that the relation ideal collapses at the certified
    bound (a universal construction may degenerate for special parameters)."""
    out = []
    for g, nm in enumerate(alg.pres.names):
        nf = alg.pres.reduce_word((g,))
        if list(nf) != [(g,)]:
            out.append(f"generator {nm} reduces to {NcPoly(alg.pres, nf, _normal=True)}")
    return out


# ---------------------------------------------------------------------------
# SU_q(2).

def su_q_2() -> Preset:
    """Generators a (= alpha), g (= gamma) with the five defining relations;
    weighted order {a: 2, g: 1} orients them into a confluent system whose
    normal words are a^k g^n g*^m and a*^k g^n g*^m."""
    names = ["a", "a*", "g", "g*"]
    star = [1, 0, 3, 2]
    weights = [2, 2, 1, 1]
    A, AS, G, GS = range(4)
    rels = [
        {(G, A): ONE, (A, G): -qpow(-1)},          # g a = q^-1 a g
        {(GS, A): ONE, (A, GS): -qpow(-1)},
        {(G, AS): ONE, (AS, G): -Q},
        {(GS, AS): ONE, (AS, GS): -Q},
        {(GS, G): ONE, (G, GS): MINUS_ONE},        # g* g = g g*
        {(A, AS): ONE, (): MINUS_ONE, (G, GS): Q * Q},   # a a* + q^2 g g* = 1
        {(AS, A): ONE, (): MINUS_ONE, (G, GS): ONE},     # a* a + g* g = 1
    ]
    pres = build_from_relations(names, star, rels, weights=weights)

    def w(*letters):
        return NcPoly.word(pres, list(letters))

    one = NcPoly.one(pres)
    delta_a = TensorPoly.of(w("a"), w("a")) - TensorPoly.of(w("g*"), w("g")).scale(Q)
    delta_g = TensorPoly.of(w("g"), w("a")) + TensorPoly.of(w("a*"), w("g"))
    delta = {A: delta_a, AS: delta_a.star(), G: delta_g, GS: delta_g.star()}
    eps = {A: ONE, AS: ONE, G: ZERO, GS: ZERO}
    kappa = {A: w("a*"), AS: w("a"), G: w("g").scale(-Q), GS: w("g*").scale(-qpow(-1))}
    alg = CqgAlgebra(pres, delta, eps, kappa, name="su_q_2", cert_degree=4)
    u = Corep(alg, [[w("a"), w("g*").scale(-Q)], [w("g"), w("a*")]])
    u.unitary = True
    return Preset("su_q_2", alg, u)


# ---------------------------------------------------------------------------
# SU_q(n).

def _inversions(t):
    return sum(1 for i in range(len(t)) for j in range(i + 1, len(t)) if t[i] > t[j])


def quantum_eps(t) -> Scalar:
    """E(k_1..k_n): 0 on repeated indices, (-q)^inversions on permutations."""
    if len(set(t)) != len(t):
        return ZERO
    inv = _inversions(t)
    return (MINUS_ONE * Q) ** inv if inv else ONE


def su_q_n(n: int) -> Preset:
    """n^2 generators u_pq with the unitarity rows/columns and the quantum
    determinant relations; kappa(u_pq) = u_qp*, kappa(u_pq*) = q^(2(q-p)) u_qp."""
    assert n >= 2
    names = []
    for p in range(n):
        for q in range(n):
            names.append(f"u{p + 1}{q + 1}")
            names.append(f"u{p + 1}{q + 1}*")
    star = []
    for k in range(n * n):
        star.extend([2 * k + 1, 2 * k])

    def g(p, q):
        return 2 * (p * n + q)

    def gs(p, q):
        return 2 * (p * n + q) + 1

    rels = []
    for p in range(n):
        for q in range(n):
            r1 = {(gs(k, p), g(k, q)): ONE for k in range(n)}
            r2 = {(g(p, k), gs(q, k)): ONE for k in range(n)}
            if p == q:
                r1[()] = MINUS_ONE
                r2[()] = MINUS_ONE
            rels.append(r1)
            rels.append(r2)
    import itertools
    warnings = []
    if n <= 4:
        tuples = itertools.product(range(n), repeat=n)
    else:
        # n^n tuples of degree-n relations are impractical eagerly; the
        # permutation tuples generate the determinant itself, the repeated-
        # index (row q-symmetry) relations are left to on-demand use
        tuples = itertools.permutations(range(n))
        warnings.append("determinant relations with repeated row indices "
                        "omitted for n > 4")
    for l in tuples:
        rel = {}
        for k in itertools.permutations(range(n)):
            word = tuple(g(l[i], k[i]) for i in range(n))
            rel[word] = rel.get(word, ZERO) + quantum_eps(k)
        el = quantum_eps(l)
        if not el.is_zero():
            rel[()] = rel.get((), ZERO) - el
        rel = {w: c for w, c in rel.items() if not c.is_zero()}
        if rel:
            rels.append(rel)
    pres = build_from_relations(names, star, rels)
    delta = {}
    eps = {}
    kappa = {}
    for p in range(n):
        for q in range(n):
            d = TensorPoly.zero(pres)
            for k in range(n):
                d = d + TensorPoly.of(NcPoly.generator(pres, g(p, k)),
                                      NcPoly.generator(pres, g(k, q)))
            delta[g(p, q)] = d
            delta[gs(p, q)] = d.star()
            eps[g(p, q)] = ONE if p == q else ZERO
            eps[gs(p, q)] = ONE if p == q else ZERO
            kappa[g(p, q)] = NcPoly.generator(pres, gs(q, p))
            kappa[gs(p, q)] = NcPoly.generator(pres, g(q, p)).scale(qpow(2 * (q - p)))
    # the shipped rule set is the defining relations, oriented; the diamond
    # completion (e.g. the n = 2 star identifications u11* = u22,
    # u12* = -q^-1 u21) is out of scope, so nonzero normal forms carry no
    # uniqueness certificate here (reductions to zero stay sound)
    alg = CqgAlgebra(pres, delta, eps, kappa, name=f"su_q_{n}", strict=False)
    u = Corep(alg, [[NcPoly.generator(pres, g(p, q)) for q in range(n)]
                    for p in range(n)])
    u.unitary = True
    # the kappa table on star generators is the inverse witness for the
    # adjoint matrix; the uncompleted rule set cannot reduce that identity
    # to zero, so it stays a recorded candidate rather than a verified fact
    warnings.append("adjoint inverse witness recorded via the antipode "
                    "table but not reducible by the shipped rules")
    return Preset(f"su_q_{n}", alg, u,
                  warnings=warnings + _collapse_warnings(alg))


# ---------------------------------------------------------------------------
# A_u(Q).

def a_u(qmat) -> Preset:
    """Universal unitary algebra: u u* = I = u* u and
    u^t Q ubar Q^-1 = I = Q ubar Q^-1 u^t, for an invertible Q over Q(i)."""
    n = len(qmat)
    try:
        qinv = smat_inv(qmat)
    except ValueError:
        raise ValueError("singular Q") from None
    names = []
    for p in range(n):
        for q in range(n):
            names.append(f"u{p + 1}{q + 1}")
            names.append(f"u{p + 1}{q + 1}*")
    star = []
    for k in range(n * n):
        star.extend([2 * k + 1, 2 * k])

    def g(p, q):
        return 2 * (p * n + q)

    def gs(p, q):
        return 2 * (p * n + q) + 1

    rels = []
    for p in range(n):
        for q in range(n):
            r1 = {(g(p, k), gs(q, k)): ONE for k in range(n)}          # u u*
            r2 = {(gs(k, p), g(k, q)): ONE for k in range(n)}          # u* u
            r3 = {}
            r4 = {}
            for k in range(n):
                for l in range(n):
                    for m in range(n):
                        c = qmat[k][l] * qinv[m][q]
                        if not c.is_zero():
                            w = (g(k, p), gs(l, m))
                            r3[w] = r3.get(w, ZERO) + c           # u^t Q ubar Q^-1
                        c2 = qmat[p][k] * qinv[l][m]
                        if not c2.is_zero():
                            w2 = (gs(k, l), g(q, m))
                            r4[w2] = r4.get(w2, ZERO) + c2        # Q ubar Q^-1 u^t
            for r in (r1, r2, r3, r4):
                if p == q:
                    r[()] = r.get((), ZERO) - ONE
                rels.append({w: c for w, c in r.items() if not c.is_zero()})
    pres = build_from_relations(names, star, rels)
    delta = {}
    eps = {}
    kappa = {}
    for p in range(n):
        for q in range(n):
            d = TensorPoly.zero(pres)
            for k in range(n):
                d = d + TensorPoly.of(NcPoly.generator(pres, g(p, k)),
                                      NcPoly.generator(pres, g(k, q)))
            delta[g(p, q)] = d
            delta[gs(p, q)] = d.star()
            eps[g(p, q)] = ONE if p == q else ZERO
            eps[gs(p, q)] = ONE if p == q else ZERO
            kappa[g(p, q)] = NcPoly.generator(pres, gs(q, p))
            # kappa(ubar) = ubar^{-1} = Q^-1 u^t Q
            acc = NcPoly.zero(pres)
            for a in range(n):
                for b in range(n):
                    c = qinv[p][a] * qmat[b][q]
                    if not c.is_zero():
                        acc = acc + NcPoly.generator(pres, g(b, a)).scale(c)
            kappa[gs(p, q)] = acc
    alg = CqgAlgebra(pres, delta, eps, kappa, name=f"a_u({n})", strict=False)
    u = Corep(alg, [[NcPoly.generator(pres, g(p, q)) for q in range(n)]
                    for p in range(n)])
    u.unitary = True
    return Preset(f"a_u({n})", alg, u, warnings=_collapse_warnings(alg))


def identity_qmat(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Finite groups.

class Group:
    """Finite group given by a Cayley table over element names."""

    def __init__(self, elements, table):
        self.elements = list(elements)
        self.table = dict(table)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._check()
        self.identity = self._find_identity()
        # put the identity first for a canonical element order
        if self.elements[0] != self.identity:
            self.elements.remove(self.identity)
            self.elements.insert(0, self.identity)
            self.index = {g: i for i, g in enumerate(self.elements)}
        self.inv = {}
        for g in self.elements:
            for h in self.elements:
                if self.table[(g, h)] == self.identity:
                    self.inv[g] = h
        missing = [g for g in self.elements if g not in self.inv]
        if missing:
            raise ValueError(f"not a group: no inverse for {missing}")

    def _check(self):
        els = set(self.elements)
        for g in self.elements:
            for h in self.elements:
                if (g, h) not in self.table or self.table[(g, h)] not in els:
                    raise ValueError(f"not a group: product {g}*{h} missing")
        for g in self.elements:
            for h in self.elements:
                for k in self.elements:
                    if self.mul(self.mul(g, h), k) != self.mul(g, self.mul(h, k)):
                        raise ValueError("not a group: associativity fails")

    def _find_identity(self):
        for e in self.elements:
            if all(self.mul(e, g) == g and self.mul(g, e) == g
                   for g in self.elements):
                return e
        raise ValueError("not a group: no identity")

    def mul(self, g, h):
        return self.table[(g, h)]

    @property
    def order(self):
        return len(self.elements)

    @staticmethod
    def from_cayley_csv(text: str) -> "Group":
        """CSV Cayley table: header row/column give element names; entry at
        (row g, column h) is g*h."""
        rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
        cells = [[c.strip() for c in r.split(",")] for r in rows]
        header = cells[0][1:]
        table = {}
        for r in cells[1:]:
            g = r[0]
            for h, prod in zip(header, r[1:]):
                table[(g, h)] = prod
        return Group(header, table)


def cyclic_group(n: int) -> Group:
    els = [f"g{k}" for k in range(n)]
    table = {(f"g{a}", f"g{b}"): f"g{(a + b) % n}" for a in range(n) for b in range(n)}
    return Group(els, table)


def symmetric_group_3() -> Group:
    import itertools
    perms = sorted(itertools.permutations(range(3)))
    name = {p: "e" if p == (0, 1, 2) else "p" + "".join(str(x) for x in p)
            for p in perms}
    table = {}
    for p in perms:
        for r in perms:
            comp = tuple(p[r[i]] for i in range(3))
            table[(name[p], name[r])] = name[comp]
    return Group([name[p] for p in perms], table)


def dihedral_group_4() -> Group:
    els = [f"r{a}s{b}" for b in range(2) for a in range(4)]

    def mul(x, y):
        a1, b1 = int(x[1]), int(x[3])
        a2, b2 = int(y[1]), int(y[3])
        # (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + a2*(-1)^b1) s^(b1+b2)
        a = (a1 + (a2 if b1 == 0 else -a2)) % 4
        return f"r{a}s{(b1 + b2) % 2}"
    table = {(x, y): mul(x, y) for x in els for y in els}
    return Group(els, table)


def quaternion_group() -> Group:
    els = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
            ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
            ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}

    def mul(x, y):
        sx = -1 if x.startswith("-") else 1
        sy = -1 if y.startswith("-") else 1
        bx, by = x.lstrip("-"), y.lstrip("-")
        if bx == "1":
            core, s = by, 1
        elif by == "1":
            core, s = bx, 1
        elif bx == by:
            core, s = "1", -1
        else:
            core = base[(bx, by)]
            s = -1 if core.startswith("-") else 1
            core = core.lstrip("-")
        sign = sx * sy * s
        return core if sign == 1 else ("-" + core if core != "1" else "-1")
    table = {(x, y): mul(x, y) for x in els for y in els}
    return Group(els, table)


NAMED_GROUPS = {
    "z2": lambda: cyclic_group(2),
    "z4": lambda: cyclic_group(4),
    "s3": symmetric_group_3,
    "d4": dihedral_group_4,
    "q8": quaternion_group,
}


# ---------------------------------------------------------------------------
# C(G): the function algebra, presented and as structure tensors.

def c_of_group(group: Group, name=None) -> Preset:
    """Delta-basis function algebra.  The presented view eliminates the last
    delta through sum_g delta_g = 1; the structure-tensor view keeps all of
    them.  The bridge maps finite basis indices to normal-form elements."""
    n = group.order
    name = name or f"c({group.order})"
    names = [f"d_{g}" for g in group.elements]
    star = list(range(n))
    rels = []
    for i in range(n - 1):
        for j in range(n - 1):
            if i == j:
                rels.append({(i, i): ONE, (i,): MINUS_ONE})
            else:
                rels.append({(i, j): ONE})
    rels.append({(n - 1,): ONE, (): MINUS_ONE,
                 **{(i,): ONE for i in range(n - 1)}})
    pres = build_from_relations(names, star, rels)

    def dvec(i):
        return NcPoly.generator(pres, i)

    delta = {}
    eps = {}
    kappa = {}
    for i, gel in enumerate(group.elements):
        d = TensorPoly.zero(pres)
        for x in group.elements:
            for y in group.elements:
                if group.mul(x, y) == gel:
                    d = d + TensorPoly.of(dvec(group.index[x]), dvec(group.index[y]))
        delta[i] = d
        eps[i] = ONE if gel == group.identity else ZERO
        kappa[i] = dvec(group.index[group.inv[gel]])
    alg = CqgAlgebra(pres, delta, eps, kappa, name=name, cert_degree=4)
    # fundamental: the regular permutation corepresentation u_pq = delta_{p^-1 q}
    ent = [[dvec(group.index[group.mul(group.inv[p], q)])
            for q in group.elements] for p in group.elements]
    u = Corep(alg, ent)
    u.unitary = True
    finite = _c_of_group_finite(group)
    bridge = [dvec(i) for i in range(n)]
    return Preset(name, alg, u, finite=finite, group=group, bridge=bridge)


def _c_of_group_finite(group: Group) -> FiniteAlgebra:
    n = group.order
    mult = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                mult[(i, j)] = {i: ONE}
    star_img = [{i: ONE} for i in range(n)]
    delta = []
    for i, gel in enumerate(group.elements):
        d = {}
        for x in group.elements:
            for y in group.elements:
                if group.mul(x, y) == gel:
                    d[(group.index[x], group.index[y])] = ONE
        delta.append(d)
    unit = {i: ONE for i in range(n)}
    haar = [rational(1, n) for _ in range(n)]
    return FiniteAlgebra([f"d_{g}" for g in group.elements],
                         mult, star_img, delta, unit, haar)


# ---------------------------------------------------------------------------
# C[Gamma]: the group algebra.

def group_algebra(group: Group, name=None) -> Preset:
    """Group-element basis: delta(g) = g (x) g, eps(g) = 1, kappa(g) = g^-1;
    the identity element is the empty word."""
    n = group.order
    name = name or f"c[{group.order}]"
    nontriv = group.elements[1:]
    names = [f"u_{g}" for g in nontriv]
    idx = {g: i for i, g in enumerate(nontriv)}
    star = [idx[group.inv[g]] for g in nontriv]
    rels = []
    for g in nontriv:
        for h in nontriv:
            prod = group.mul(g, h)
            if prod == group.identity:
                rels.append({(idx[g], idx[h]): ONE, (): MINUS_ONE})
            else:
                rels.append({(idx[g], idx[h]): ONE, (idx[prod],): MINUS_ONE})
    pres = build_from_relations(names, star, rels)
    delta = {}
    eps = {}
    kappa = {}
    for g in nontriv:
        i = idx[g]
        gi = NcPoly.generator(pres, i)
        delta[i] = TensorPoly.of(gi, gi)
        eps[i] = ONE
        kappa[i] = NcPoly.one(pres) if group.inv[g] == group.identity \
            else NcPoly.generator(pres, idx[group.inv[g]])
    alg = CqgAlgebra(pres, delta, eps, kappa, name=name, cert_degree=4)
    # fundamental: the diagonal corepresentation of all group-likes
    zero = NcPoly.zero(pres)
    ent = [[zero] * n for _ in range(n)]
    ent[0][0] = NcPoly.one(pres)
    for k, g in enumerate(nontriv):
        ent[k + 1][k + 1] = NcPoly.generator(pres, idx[g])
    u = Corep(alg, ent)
    u.unitary = True
    finite = _group_algebra_finite(group)
    bridge = [NcPoly.one(pres)] + [NcPoly.generator(pres, idx[g]) for g in nontriv]
    return Preset(name, alg, u, finite=finite, group=group, bridge=bridge)


def _group_algebra_finite(group: Group) -> FiniteAlgebra:
    n = group.order
    gi = group.index
    mult = {}
    for g in group.elements:
        for h in group.elements:
            mult[(gi[g], gi[h])] = {gi[group.mul(g, h)]: ONE}
    star_img = [{gi[group.inv[g]]: ONE} for g in group.elements]
    delta = [{(gi[g], gi[g]): ONE} for g in group.elements]
    unit = {0: ONE}
    haar = [ONE if g == group.identity else ZERO for g in group.elements]
    return FiniteAlgebra([f"u_{g}" for g in group.elements],
                         mult, star_img, delta, unit, haar)


# ---------------------------------------------------------------------------
# Lookup used by the CLI.

def load_preset(spec: str) -> Preset:
    """Preset names: su_q_2, su_q_3, ..., a_u_2, a_u_3 (identity Q),
    c_z2/c_z4/c_s3/c_d4/c_q8, alg_z2/..., or group names for defaults."""
    s = spec.lower()
    if s == "su_q_2":
        return su_q_2()
    if s.startswith("su_q_"):
        return su_q_n(int(s.rsplit("_", 1)[1]))
    if s.startswith("a_u_"):
        return a_u(identity_qmat(int(s.rsplit("_", 1)[1])))
    if s.startswith("c_"):
        g = s[2:]
        if g in NAMED_GROUPS:
            return c_of_group(NAMED_GROUPS[g](), name=s)
    if s.startswith("alg_"):
        g = s[4:]
        if g in NAMED_GROUPS:
            return group_algebra(NAMED_GROUPS[g](), name=s)
    raise KeyError(f"unknown preset {spec!r}")


PRESET_NAMES = ["su_q_2", "su_q_3", "a_u_2", "a_u_3",
                "c_z2", "c_z4", "c_s3", "c_d4", "c_q8",
                "alg_z2", "alg_z4", "alg_s3", "alg_d4", "alg_q8"]
