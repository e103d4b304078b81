from fractions import Fraction

import pytest

from cqgkit.corep import IrrepRegistry, decompose
from cqgkit.haar import (HaarError, HaarTable, compute_haar,
                         f_matrix, gram_positivity, haar_eval,
                         haar_peter_weyl_check)
from cqgkit.ncalg import NcPoly
from cqgkit.regrep import NotAState, cesaro_haar
from cqgkit.scalar import ONE, ZERO, Q, rational


def test_haar_values_su_q_2(suq2, suq2_haar6):
    pres = suq2.algebra.pres
    t = suq2_haar6

    def nc(*names):
        return NcPoly.word(pres, list(names))

    assert t.eval_poly(NcPoly.one(pres)) == ONE
    assert t.eval_poly(nc("a")) == ZERO
    assert t.eval_poly(nc("g")) == ZERO
    # h(g* g) = 1/(1 + q^2): from the degree-2 invariance system; also the
    # Dijkhuizen-Koornwinder route below (Peter-Weyl vanishing) cross-checks
    assert t.eval_poly(nc("g*", "g")) == ONE / (ONE + Q * Q)
    assert t.eval_poly(nc("a*", "a")) == (Q * Q) / (ONE + Q * Q)


def test_haar_uniqueness_certificate(suq2, suq2_haar6):
    assert suq2_haar6.nullity == 1
    t2 = compute_haar(suq2.algebra, 2)
    assert t2.nullity == 1


def test_haar_invariance_residuals(suq2, suq2_haar6):
    # left AND right invariance exactly on all table monomials
    alg = suq2.algebra
    for m in alg.monomials(4):
        d = alg.delta_word(m)
        hm = suq2_haar6.eval_word(m)
        left = d.apply_scalar_leg(1, suq2_haar6.eval_word)
        right = d.apply_scalar_leg(0, suq2_haar6.eval_word)
        assert left == alg.one().scale(hm)
        assert right == alg.one().scale(hm)


def test_haar_eval_examples(suq2, suq2_haar6):
    pres = suq2.algebra.pres
    x = NcPoly.one(pres) + NcPoly.word(pres, ["g*", "g"])
    assert haar_eval(x, suq2_haar6) == ONE + ONE / (ONE + Q * Q)
    assert haar_eval(NcPoly.zero(pres), suq2_haar6) == ZERO
    y = NcPoly.word(pres, ["a"]).scale(ZERO) + NcPoly.one(pres).scale(rational(2))
    assert haar_eval(y, suq2_haar6) == rational(2)
    with pytest.raises(HaarError):
        deg7 = NcPoly.word(pres, ["g"] * 7)
        haar_eval(deg7, suq2_haar6)


def test_haar_cz2(cz2):
    t = compute_haar(cz2.algebra, 2)
    group = cz2.group
    for g in group.elements:
        assert t.eval_poly(cz2.bridge[group.index[g]]) == rational(1, 2)


def test_haar_cs3_uniform(cs3, cs3_haar):
    group = cs3.group
    for g in group.elements:
        assert cs3_haar.eval_poly(cs3.bridge[group.index[g]]) == rational(1, 6)


def test_peter_weyl_vanishing(suq2, suq2_haar6, suq2_registry):
    assert haar_peter_weyl_check(suq2_registry, suq2_haar6).ok


def test_peter_weyl_cs3(cs3_registry, cs3_haar):
    assert haar_peter_weyl_check(cs3_registry, cs3_haar).ok


def test_f_matrix_su_q_2(suq2, suq2_haar6, suq2_registry):
    f = f_matrix(suq2_registry.by_label((2, 0)), suq2_haar6,
                 q_samples=(Fraction(1, 3), Fraction(1, 2), Fraction(9, 10)))
    denom = ONE + Q * Q
    assert f.matrix[0][0] == (Q * Q) / denom
    assert f.matrix[1][1] == ONE / denom
    assert f.matrix[0][1].is_zero() and f.matrix[1][0].is_zero()


def test_f_matrix_trivial(suq2, suq2_haar6, suq2_registry):
    f = f_matrix(suq2_registry.by_label((1, 0)), suq2_haar6)
    assert f.matrix == [[ONE]]


def test_f_matrix_c_of_group_is_identity_over_n(cz4):
    # oracle: classical Schur orthogonality brute-forced over the group:
    # h(chi_a* chi_b) = delta_ab / 1 for characters, so F = I/n with n = 1
    reg = IrrepRegistry(cz4.algebra)
    decompose(cz4.fundamental, reg)
    t = compute_haar(cz4.algebra, 2)
    for e in reg.entries:
        f = f_matrix(e, t)
        n = e.dim
        for i in range(n):
            for j in range(n):
                want = rational(1, n) if i == j else ZERO
                assert f.matrix[i][j] == want


def test_orthogonality_across_blocks(suq2_registry, suq2_haar6):
    # h((u^beta_ip)* u^alpha_jq) = 0 for beta != alpha
    a = suq2_registry.by_label((1, 0)).corep
    b = suq2_registry.by_label((2, 0)).corep
    for i in range(b.n):
        for j in range(b.n):
            assert suq2_haar6.eval_poly(
                b.entries[i][0].star() * a.entries[0][0]).is_zero()


def test_gram_positivity(suq2, suq2_haar6):
    rep = gram_positivity(suq2.algebra, suq2_haar6, 2,
                          q_samples=(Fraction(1, 2),))
    assert rep.ok
    rep0 = gram_positivity(suq2.algebra, suq2_haar6, 0)
    assert rep0.ok and rep0.size == 1


def test_gram_cs3_delta_basis(cs3, cs3_haar):
    # G = (1/6) I in the delta basis: h(d_g* d_h) = delta_gh / 6
    group = cs3.group
    for g in group.elements:
        for h in group.elements:
            val = cs3_haar.eval_poly(
                cs3.bridge[group.index[g]].star() * cs3.bridge[group.index[h]])
            assert val == (rational(1, 6) if g == h else ZERO)


def test_table_json_round_trip(suq2, suq2_haar6):
    data = suq2_haar6.as_json()
    back = HaarTable.from_json(suq2.algebra, data, suq2_haar6.degree)
    assert back.values == suq2_haar6.values


def test_cesaro_cz2(cz2):
    res = cesaro_haar(cz2.finite, [0.9, 0.1], steps=4000)
    for n, drift, _ in res.log:
        assert drift <= 2.0 / n + 1e-12
    # omega_n drifts toward (0.5, 0.5); the accelerated tail average reaches
    # the Haar state within tolerance
    dists = [d for _, _, d in res.log]
    assert dists[-1] < dists[0]
    assert res.accelerated is not None and res.accelerated[1] <= 1e-6


def test_cesaro_fixed_point(cz2):
    # omega = h is a fixed point at every n
    res = cesaro_haar(cz2.finite, [0.5, 0.5], steps=300)
    for n, drift, dist in res.log:
        assert drift <= 1e-14 and dist <= 1e-14


def test_cesaro_rejects_non_state(cz2):
    with pytest.raises(NotAState):
        cesaro_haar(cz2.finite, [0.7, 0.7], steps=10)
    with pytest.raises(NotAState):
        cesaro_haar(cz2.finite, [1.5, -0.5], steps=10)


def test_haar_nonunique_detected():
    # a presentation with too few relations: free pair x, y = x* with only
    # x y = 1 has no invariant state at degree 1 with a 1-dim solution space
    from cqgkit.hopf import CqgAlgebra
    from cqgkit.ncalg import Presentation, TensorPoly
    pres = Presentation(["x", "y"], [1, 0], [((0, 1), {(): ONE}),
                                             ((1, 0), {(): ONE})])
    x = NcPoly.generator(pres, 0)
    y = NcPoly.generator(pres, 1)
    alg = CqgAlgebra(pres,
                     {0: TensorPoly.of(x, x), 1: TensorPoly.of(y, y)},
                     {0: ONE, 1: ONE},
                     {0: y, 1: x}, name="torus")
    t = compute_haar(alg, 2)
    # this is C(U(1)) presented as the group algebra of Z: fine and unique
    assert t.nullity == 1 and t.eval_poly(x).is_zero()


def test_haar_moment_closed_form(suq2, suq2_haar6):
    # independent oracle: the geometric-series closed form for the moments,
    # h((g g*)^k) = (1 - q^2)/(1 - q^(2k+2)); check every table entry
    pres = suq2.algebra.pres
    for k in range(4):
        word = ["g"] * k + ["g*"] * k
        got = suq2_haar6.eval_poly(NcPoly.word(pres, word))
        want = (ONE - Q * Q) / (ONE - Q ** (2 * k + 2)) if k else ONE
        assert got == want
    # and these are the only nonzero values at degree 6
    assert len(suq2_haar6.values) == 4
