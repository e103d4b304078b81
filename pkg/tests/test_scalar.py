import pytest

from cqgkit.scalar import (
    I, ONE, Q, ZERO, LinearSystem, PoleError, parse_scalar, qpow,
    rational, scalar_to_text, solve_exact,
)


def test_gcd_identity_cancels():
    # (1 - q^2) / (1 - q^4) = 1/(1 + q^2)
    a = (ONE - Q * Q) / (ONE - qpow(4))
    b = ONE / (ONE + Q * Q)
    assert a == b


def test_conjugation_fixes_q():
    x = I * Q
    assert x.conj() == -(I * Q)
    assert (Q + rational(2, 3)).conj() == Q + rational(2, 3)


def test_common_denominator_sum():
    a = Q / (ONE + Q)
    b = ONE / (ONE + Q)
    assert a + b == ONE


def test_field_axioms_randomized():
    import random
    rng = random.Random(7)
    vals = [ONE, Q, I, ONE + Q, ONE / (ONE + Q * Q), qpow(-2), rational(3, 5) * Q - I]
    for _ in range(120):
        a, b, c = (rng.choice(vals) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
    for v in vals:
        assert v.conj().conj() == v
        if not v.is_zero():
            assert v * v.inv() == ONE
    for a in vals:
        for b in vals:
            assert (a * b).conj() == a.conj() * b.conj()
            assert (a + b).conj() == a.conj() + b.conj()


def test_eval():
    x = ONE / (ONE + Q * Q)
    assert abs(x.eval(0.5) - 0.8) < 1e-12
    assert abs(Q.eval(0.3) - 0.3) < 1e-12
    with pytest.raises(PoleError):
        (ONE / (ONE - Q)).eval(1.0)


def test_laurent_and_powers():
    assert qpow(-1) * Q == ONE
    assert (Q ** -3) * qpow(3) == ONE
    assert qpow(2) == Q * Q


def test_text_round_trip():
    vals = [
        ZERO, ONE, -ONE, Q, qpow(-1), I, -I * Q,
        (ONE - Q * Q) / (ONE - qpow(4)),
        rational(1, 2) * Q + rational(3, 4),
        (Q + I) / (Q * Q + ONE + Q),
        qpow(-2) / (ONE + Q),
    ]
    for v in vals:
        assert parse_scalar(scalar_to_text(v)) == v


def test_parse_examples():
    assert parse_scalar("(1 - q^2)/(1 - q^4)") == ONE / (ONE + Q * Q)
    assert parse_scalar("q^-1") == qpow(-1)
    assert parse_scalar("-3/2 * i") == rational(-3, 2) * I
    assert parse_scalar("2 + 3*i") == rational(2) + rational(3) * I


def test_solve_identity():
    a, b = Q, ONE + Q
    res = solve_exact(LinearSystem([[ONE, ZERO], [ZERO, ONE]], [a, b]))
    assert res.consistent and res.particular == [a, b] and res.nullspace == []


def test_solve_underdetermined():
    # 0*x = 0 in one variable: particular 0, null-space dim 1
    res = solve_exact(LinearSystem([[ZERO]], [ZERO]))
    assert res.consistent and res.particular == [ZERO]
    assert len(res.nullspace) == 1 and res.nullspace[0] == [ONE]


def test_solve_nullspace_hand_elimination():
    # [[1,q],[q,q^2]] x = 0 has null space spanned by (-q, 1): by hand,
    # row2 = q*row1, so the single equation is x0 + q*x1 = 0.
    res = solve_exact(LinearSystem([[ONE, Q], [Q, Q * Q]], [ZERO, ZERO]))
    assert res.consistent and len(res.nullspace) == 1
    assert res.nullspace[0] == [-Q, ONE]


def test_solve_inconsistent():
    res = solve_exact(LinearSystem([[ONE], [ONE]], [ONE, ONE + Q]))
    assert not res.consistent


def test_solve_residual_is_zero():
    import random
    rng = random.Random(3)
    vals = [ONE, Q, I, ONE + Q, ONE / (ONE + Q), ZERO, qpow(-1)]
    for _ in range(10):
        m = [[rng.choice(vals) for _ in range(4)] for _ in range(3)]
        x = [rng.choice(vals) for _ in range(4)]
        rhs = [sum((m[i][j] * x[j] for j in range(4)), ZERO) for i in range(3)]
        res = solve_exact(LinearSystem(m, rhs))
        assert res.consistent
        for i in range(3):
            acc = ZERO
            for j in range(4):
                acc = acc + m[i][j] * res.particular[j]
            assert acc == rhs[i]
        for vec in res.nullspace:
            for i in range(3):
                acc = ZERO
                for j in range(4):
                    acc = acc + m[i][j] * vec[j]
                assert acc == ZERO


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_scalar_arith_dispatcher():
    from cqgkit.scalar import scalar_arith
    assert scalar_arith(ONE - Q * Q, ONE - qpow(4), "div") == ONE / (ONE + Q * Q)
    assert scalar_arith(I * Q, None, "conj") == -(I * Q)
    assert scalar_arith(Q / (ONE + Q), ONE / (ONE + Q), "add") == ONE
    assert scalar_arith(Q, Q, "mul") == qpow(2)
    with pytest.raises(ZeroDivisionError):
        scalar_arith(ONE, ZERO, "div")
    with pytest.raises(ValueError):
        scalar_arith(ONE, ONE, "sub?")
