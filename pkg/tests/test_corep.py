import itertools

import pytest

from cqgkit.corep import (Corep, IrrepRegistry, adjoint,
                          averaged_intertwiner, decompose, direct_sum,
                          fusion_table, intertwiners, is_corep, is_gauge_unitary,
                          is_unitary, tensor, transform, trivial_corep,
                          unitarize, verify_antipode_identities)
from cqgkit.linalg import smat_identity, smat_eq
from cqgkit.ncalg import NcPoly
from cqgkit.scalar import ONE, ZERO, I, Q, rational
from cqgkit import presets


def test_fundamental_is_unitary_corep(suq2):
    u = suq2.fundamental
    ok, wit = is_corep(u)
    assert ok and wit is None
    ok, wit = is_unitary(u)
    assert ok and wit is None


def test_trivial_corep(suq2):
    one = trivial_corep(suq2.algebra)
    assert is_corep(one)[0] and is_unitary(one)[0]


def test_is_corep_failure_witness(suq2):
    pres = suq2.algebra.pres
    bad = Corep(suq2.algebra,
                [[NcPoly.word(pres, ["a"]), NcPoly.zero(pres)],
                 [NcPoly.zero(pres), NcPoly.one(pres)]], check=False)
    ok, wit = is_corep(bad)
    assert not ok
    assert wit[:2] == (0, 0)  # delta(a) != a (x) a


def test_tensor_direct_sum_adjoint(suq2):
    u = suq2.fundamental
    uu = tensor(u, u)
    assert uu.n == 4
    assert is_corep(uu)[0] and is_unitary(uu)[0]
    s = direct_sum(u, u)
    assert s.n == 4 and is_corep(s)[0] and is_unitary(s)[0]
    one = trivial_corep(suq2.algebra)
    t1 = tensor(one, u)
    assert all(t1.entries[p][q] == u.entries[p][q] for p in range(2) for q in range(2))
    bar = adjoint(u)
    assert is_corep(bar)[0]
    assert bar.entries[0][0] == NcPoly.word(suq2.algebra.pres, ["a*"])
    assert bar.entries[1][0] == NcPoly.word(suq2.algebra.pres, ["g*"])
    back = adjoint(bar)
    assert all(back.entries[p][q] == u.entries[p][q]
               for p in range(2) for q in range(2))


def test_intertwiner_examples(suq2):
    u = suq2.fundamental
    one = trivial_corep(suq2.algebra)
    mor_uu = intertwiners(u, u)
    assert len(mor_uu) == 1                      # Schur: Mor(u,u) = C I
    x = mor_uu[0]
    assert x[0][1].is_zero() and x[1][0].is_zero() and x[0][0] == x[1][1]
    assert intertwiners(u, one) == []
    uu = tensor(u, u)
    assert len(intertwiners(uu, uu)) == 2        # matches classical Schur-Weyl


def test_schur_dichotomy(suq2_registry):
    entries = suq2_registry.entries
    for a, b in itertools.product(entries, repeat=2):
        basis = intertwiners(a.corep, b.corep)
        if a.label == b.label:
            assert len(basis) == 1
        else:
            assert basis == []


def test_averaged_intertwiner(suq2, suq2_haar6):
    u = suq2.fundamental
    one = trivial_corep(suq2.algebra)
    # v = w = u, x = e11: y is the F-related scalar multiple of I
    x = [[ONE, ZERO], [ZERO, ZERO]]
    y = averaged_intertwiner(u, u, x, suq2_haar6)
    assert y[0][1].is_zero() and y[1][0].is_zero()
    assert y[0][0] == y[1][1]
    assert y[0][0] == (Q * Q) / (ONE + Q * Q)    # h(a* a)
    # v = u, w = trivial: averaging kills everything
    y2 = averaged_intertwiner(u, one, [[ONE, ZERO]], suq2_haar6)
    assert all(c.is_zero() for row in y2 for c in row)
    # v = w = trivial, x = 1
    y3 = averaged_intertwiner(one, one, [[ONE]], suq2_haar6)
    assert y3 == [[ONE]]


def test_unitarize_already_unitary(suq2, suq2_haar6):
    u = suq2.fundamental
    res = unitarize(u, suq2_haar6, q0=0.5)
    assert smat_eq(res.invariant_form, smat_identity(2))


def test_unitarize_recovers_conjugated(suq2, suq2_haar6):
    u = suq2.fundamental
    s = [[rational(2), rational(1)], [rational(1, 3), rational(1)]]
    v = transform(u, s, check=True)
    assert is_corep(v)[0]
    res = unitarize(v, suq2_haar6, q0=0.5)
    # exact invariant form + Mor dimension 1 back to u
    ok, _ = is_gauge_unitary(v, res.invariant_form)
    assert ok
    assert len(intertwiners(v, u)) == 1


def test_unitarize_scalar(suq2, suq2_haar6):
    one = trivial_corep(suq2.algebra)
    res = unitarize(one, suq2_haar6, q0=0.5)
    assert res.invariant_form == [[ONE]]


def test_decompose_examples(suq2, suq2_registry):
    u = suq2.fundamental
    reg = suq2_registry
    one = trivial_corep(suq2.algebra)
    assert decompose(one, reg).multiset() == {(1, 0): 1}
    uu = tensor(u, u)
    res = decompose(uu, reg, tensor_degree=2)
    assert res.multiset() == {(1, 0): 1, (3, 0): 1}
    res2 = decompose(direct_sum(u, u), reg)
    assert res2.multiset() == {(2, 0): 2}


def test_decompose_completeness_and_embeddings(suq2, suq2_registry):
    u = suq2.fundamental
    uu = tensor(u, u)
    res = decompose(uu, suq2_registry, tensor_degree=2)
    total = sum(suq2_registry.by_label(l).dim for l, _ in res.summands)
    assert total == uu.n
    # each embedding satisfies v S = S w exactly (checked inside decompose);
    # spot-check the trivial block: its entry is exactly 1
    lab, s = [t for t in res.summands if t[0] == (1, 0)][0]
    col = [s[i][0] for i in range(4)]
    img = None
    for i in range(4):
        term = None
        for k in range(4):
            t = uu.entries[i][k].scale(col[k])
            term = t if term is None else term + t
        want = col[i]
        assert term == NcPoly.one(suq2.algebra.pres).scale(want)


def test_adjoint_of_irreducible_is_irreducible(suq2_registry):
    for entry in suq2_registry.entries:
        bar = adjoint(entry.corep, check=False)
        bar.verified_corep = True
        assert len(intertwiners(bar, bar)) == 1


def test_registry_labels_deterministic(suq2):
    reg = IrrepRegistry(suq2.algebra)
    decompose(suq2.fundamental, reg)
    uu = tensor(suq2.fundamental, suq2.fundamental)
    decompose(uu, reg, tensor_degree=2)
    assert [e.label for e in reg.entries] == [(1, 0), (2, 0), (3, 0)]


def test_fusion_su_q_2_depth_3(suq2):
    reg = IrrepRegistry(suq2.algebra)
    decompose(suq2.fundamental, reg, tensor_degree=1)
    tab = fusion_table(reg, 3)
    # oracle: classical SU(2) Clebsch-Gordan by character arithmetic;
    # dimension n corresponds to spin (n-1)/2
    def cg(n, m):
        lo, hi = abs(n - m), n + m - 1
        return sorted(range(lo + 1, hi + 1, 2))
    by_dim = {}
    for (la, lb), counts in tab.items():
        got = sorted(d for (d, i), c in counts.items() for _ in range(c))
        assert got == cg(la[0], lb[0]), (la, lb)
        by_dim[(la[0], lb[0])] = got
    assert by_dim[(2, 2)] == [1, 3]
    assert by_dim[(2, 3)] == [2, 4]


def test_fusion_with_trivial_is_identity(suq2):
    reg = IrrepRegistry(suq2.algebra)
    decompose(suq2.fundamental, reg, tensor_degree=1)
    tab = fusion_table(reg, 2)
    for (la, lb), counts in tab.items():
        if la == (1, 0):
            assert counts == {lb: 1}
        if lb == (1, 0):
            assert counts == {la: 1}


S3_CHARACTERS = {
    # classical character table of S3 on {e, transpositions, 3-cycles}
    "triv": {1: 1, 2: 1, 3: 1},
    "sign": {1: 1, 2: -1, 3: 1},
    "std": {1: 2, 2: 0, 3: -1},
}


def _s3_class_of(perm_name):
    if perm_name == "e":
        return 1
    # names are p<image>: transpositions fix one point
    img = perm_name[1:]
    fixed = sum(1 for i, ch in enumerate(img) if int(ch) == i)
    return 2 if fixed == 1 else 3


def test_fusion_cs3_matches_character_oracle(cs3, cs3_registry):
    tab = fusion_table(cs3_registry, 2)
    # oracle: classical Schur orthogonality over the character table; the
    # class sizes of S3 are 1 (identity), 3 (transpositions), 2 (3-cycles)
    sizes = {1: 1, 2: 3, 3: 2}

    def inner(chi1, chi2):
        val = sum(sizes[c] * chi1[c] * chi2[c] for c in (1, 2, 3))
        assert val % 6 == 0
        return val // 6

    sq = {c: S3_CHARACTERS["std"][c] ** 2 for c in (1, 2, 3)}
    prods = {name: inner(sq, chi) for name, chi in S3_CHARACTERS.items()}
    assert prods == {"triv": 1, "sign": 1, "std": 1}
    got = None
    for (la, lb), counts in tab.items():
        if la[0] == 2 and lb[0] == 2:
            got = sorted(d for (d, i), c in counts.items() for _ in range(c))
    assert got == [1, 1, 2]


def test_antipode_inverse_identities(suq2):
    rep = verify_antipode_identities(suq2.fundamental, suq2.algebra)
    assert rep.ok
    one = trivial_corep(suq2.algebra)
    assert verify_antipode_identities(one, suq2.algebra).ok


def test_gauge_certificates_are_exact(cs3_registry):
    for e in cs3_registry.entries:
        if e.gauge is not None:
            ok, _ = is_gauge_unitary(e.corep, e.gauge)
            assert ok
            assert e.gauge[0][0] == ONE  # normalized
        else:
            assert is_unitary(e.corep)[0]


def test_tensor_and_sum_reverify_across_presets():
    for name in ["c_z2", "alg_z2", "c_z4"]:
        p = presets.load_preset(name)
        u = p.fundamental
        t = tensor(u, u)
        assert t.n <= 16 and is_corep(t)[0] and is_unitary(t)[0]
        s = direct_sum(u, u)
        assert is_corep(s)[0] and is_unitary(s)[0]


D4_CHARACTERS = {
    # classes: e, r^2, {r, r^3}, {s, r^2 s}, {r s, r^3 s}; sizes 1,1,2,2,2
    "triv": [1, 1, 1, 1, 1],
    "rot":  [1, 1, 1, -1, -1],
    "refl": [1, 1, -1, 1, -1],
    "diag": [1, 1, -1, -1, 1],
    "std":  [2, -2, 0, 0, 0],
}


def test_fusion_cd4_matches_character_oracle():
    p = presets.load_preset("c_d4")
    reg = IrrepRegistry(p.algebra)
    decompose(p.fundamental, reg, tensor_degree=1)
    assert sorted(e.dim for e in reg.entries) == [1, 1, 1, 1, 2]
    tab = fusion_table(reg, 2)
    sizes = [1, 1, 2, 2, 2]

    def inner(c1, c2):
        val = sum(s * a * b for s, a, b in zip(sizes, c1, c2))
        assert val % 8 == 0
        return val // 8

    # oracle: std (x) std decomposes into all four 1-dim characters
    sq = [a * a for a in D4_CHARACTERS["std"]]
    mult = {k: inner(sq, chi) for k, chi in D4_CHARACTERS.items()}
    assert mult == {"triv": 1, "rot": 1, "refl": 1, "diag": 1, "std": 0}
    two = [e.label for e in reg.entries if e.dim == 2][0]
    got = sorted(d for (d, i), c in tab[(two, two)].items() for _ in range(c))
    assert got == [1, 1, 1, 1]


def test_registry_registration_is_thread_safe(suq2):
    import threading
    reg = IrrepRegistry(suq2.algebra)
    decompose(suq2.fundamental, reg, tensor_degree=1)
    uu = tensor(suq2.fundamental, suq2.fundamental)
    errors = []

    def work():
        try:
            res = decompose(uu, reg, tensor_degree=2)
            assert res.multiset() == {(1, 0): 1, (3, 0): 1}
        except Exception as e:  # surfaced below
            errors.append(e)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    # no duplicate labels were handed out and entries stay inequivalent
    labels = [e.label for e in reg.entries]
    assert len(labels) == len(set(labels))
    assert sorted(labels) == [(1, 0), (2, 0), (3, 0)]


def test_adjoint_inverse_witness(suq2):
    # kappa applied to the adjoint matrix inverts it exactly where the
    # rewriting system is strong enough (su_q_2 and the universal unitary
    # algebra); the generic su_q_n route records the witness without a
    # reduction certificate and says so
    bar = adjoint(suq2.fundamental, check=False)
    bar.verified_corep = True
    assert verify_antipode_identities(bar, suq2.algebra).ok
    pa = presets.load_preset("a_u_2")
    bar_a = adjoint(pa.fundamental, check=False)
    bar_a.verified_corep = True
    assert verify_antipode_identities(bar_a, pa.algebra).ok
    p2 = presets.su_q_n(2)
    assert any("adjoint inverse witness" in w for w in p2.warnings)
