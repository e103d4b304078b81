import pytest

from cqgkit import presets
from cqgkit.corep import IrrepRegistry, decompose, intertwiners
from cqgkit.regrep import (FiniteAlgebra, FiniteAlgebraError, check_implements,
                           check_pentagon, gns, regular_unitary)
from cqgkit.scalar import ONE, ZERO, rational


def test_gns_gram_cz2(cz2):
    g = gns(cz2.finite)
    n = cz2.finite.dim
    for i in range(n):
        for j in range(n):
            want = rational(1, 2) if i == j else ZERO
            assert g.gram[i][j] == want


def test_gns_gram_cs3(cs3):
    g = gns(cs3.finite)
    for i in range(6):
        for j in range(6):
            want = rational(1, 6) if i == j else ZERO
            assert g.gram[i][j] == want


def test_gns_gram_group_algebra():
    p = presets.load_preset("alg_z2")
    g = gns(p.finite)
    # <g, h> = h(h^-1 g) = delta_gh in the group basis
    assert g.gram == [[ONE, ZERO], [ZERO, ONE]]


def test_regular_unitary_cz2_group_law(cz2):
    rep = regular_unitary(cz2.finite)
    n = 2
    group = cz2.group
    # oracle by enumeration: u(d_a (x) d_b) = d_{a b^-1} (x) d_b
    for a in group.elements:
        for b in group.elements:
            col = group.index[a] * n + group.index[b]
            want_row = group.index[group.mul(a, group.inv[b])] * n + group.index[b]
            col_entries = {r: row[col] for r, row in rep.u.items() if col in row}
            assert col_entries == {want_row: ONE}


def test_regular_unitary_group_algebra_action():
    # C[Z2]: u(g xi0 (x) eta) = g (x) g eta
    p = presets.load_preset("alg_z2")
    rep = regular_unitary(p.finite)
    fa = p.finite
    n = 2
    for i in range(n):      # group element g_i
        for j in range(n):
            col = i * n + j
            prod = fa.vec_mul({i: ONE}, {j: ONE})
            k = next(iter(prod))
            col_entries = {r: row[col] for r, row in rep.u.items() if col in row}
            assert col_entries == {i * n + k: ONE}


def test_pentagon(cz2, cz4, cs3):
    for p in (cz2, cz4, cs3):
        rep = regular_unitary(p.finite)
        assert check_pentagon(rep).ok


def test_pentagon_trivial_group():
    p = presets.c_of_group(presets.cyclic_group(1), name="c_triv")
    rep = regular_unitary(p.finite)
    assert check_pentagon(rep).ok
    assert check_implements(rep).ok


def test_implements_and_slices(cz2, cz4, cs3):
    for p in (cz2, cz4, cs3):
        rep = regular_unitary(p.finite)
        report = check_implements(rep)
        assert report.ok
        assert report.slice_rank == p.finite.dim


def test_left_regular_flag(cz4):
    rep = regular_unitary(cz4.finite, opposite=True)
    assert rep.is_unitary()


def test_every_irrep_embeds_in_regular(cz4, cs3):
    # Thm-6.5-style finite check: Mor(u^alpha, u_regular) != 0 for all alpha
    for p in (cz4, cs3):
        reg = IrrepRegistry(p.algebra)
        decompose(p.fundamental, reg)
        u_reg = p.fundamental       # the regular permutation corepresentation
        for e in reg.entries:
            basis = intertwiners(e.corep, u_reg)
            assert len(basis) >= 1
            # multiplicity in the regular representation equals the dimension
            assert len(basis) == e.dim


def test_load_checks_catch_bad_structure(cz2):
    fa = cz2.finite
    bad_delta = [dict(d) for d in fa.delta]
    bad_delta[1] = {(0, 0): ONE}
    with pytest.raises(FiniteAlgebraError):
        FiniteAlgebra(fa.names, fa.mult, fa.star_img, bad_delta, fa.unit, fa.haar)
    with pytest.raises(FiniteAlgebraError):
        FiniteAlgebra(fa.names, fa.mult, fa.star_img, fa.delta, fa.unit,
                      [ONE, ONE])  # not invariant / normalized


def test_group_checks():
    with pytest.raises(ValueError):
        presets.Group(["e", "x"], {("e", "e"): "e", ("e", "x"): "x",
                                   ("x", "e"): "x", ("x", "x"): "x"})
    g = presets.Group.from_cayley_csv(
        ",e,x\ne,e,x\nx,x,e\n")
    assert g.order == 2 and g.identity == "e" and g.inv["x"] == "x"
