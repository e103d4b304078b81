"""Exact Hermitian-square extraction over Q(i)(q).

A conjugation-fixed scalar d (d = conj(d), positive on (0,1)) is a Hermitian
square when d = f * conj(f) for some f in Q(i)(q).  Writing d as a quotient
of polynomials over Q(i)[q], this holds iff every conjugation-stable
irreducible factor appears to an even power, every other factor pairs up
with its coefficient-conjugate, and the remaining positive rational constant
is a sum of two rational squares.  Used to regauge corepresentations to
exactly unitary form whenever the field permits it.
"""

from __future__ import annotations

from fractions import Fraction

import sympy
from gmpy2 import mpq

from .scalar import CONE, Scalar


class NotHermitianSquare(ValueError):
    pass


_q = sympy.Symbol("q")


def _poly_to_sympy(p):
    expr = sympy.Integer(0)
    for e, (re, im) in p.items():
        c = sympy.Rational(re.numerator, re.denominator) \
            + sympy.I * sympy.Rational(im.numerator, im.denominator)
        expr += c * _q ** e
    return sympy.expand(expr)


def _sympy_poly_to_dict(poly):
    out = {}
    for (e,), c in sympy.Poly(poly, _q, domain="QQ_I").terms():
        c = sympy.nsimplify(c) if False else c
        re, im = c.as_real_imag() if hasattr(c, "as_real_imag") else (c, 0)
        re = sympy.Rational(re)
        im = sympy.Rational(im)
        out[int(e)] = (mpq(re.p, re.q), mpq(im.p, im.q))
    return out


def _conj_sympy(expr):
    return expr.subs(sympy.I, -sympy.I)


def two_squares(c: Fraction):
    """c = x^2 + y^2 with rational x, y, or raise NotHermitianSquare.
    Solved via Gaussian-integer factorization of numerator and denominator."""
    if c < 0:
        raise NotHermitianSquare(f"{c} is negative")
    if c == 0:
        return Fraction(0), Fraction(0)
    num, den = c.numerator, c.denominator
    zx, zy = _two_squares_int(num * den)  # c = (x^2+y^2)/den^2
    return Fraction(zx, den), Fraction(zy, den)


def _two_squares_int(n: int):
    """n = x^2 + y^2 over the integers, via Gaussian factorization."""
    x, y = 1, 0  # gaussian integer accumulator x + y*i
    for p, e in sympy.factorint(n).items():
        if p == 2:
            for _ in range(e):
                x, y = x - y, x + y  # multiply by (1 + i)
        elif p % 4 == 1:
            a, b = _gaussian_split(p)
            for _ in range(e):
                x, y = x * a - y * b, x * b + y * a
        else:  # p % 4 == 3: needs an even exponent
            if e % 2:
                raise NotHermitianSquare(
                    f"prime {p} = 3 mod 4 appears to an odd power in {n}")
            x, y = x * p ** (e // 2), y * p ** (e // 2)
    assert x * x + y * y == n
    return abs(x), abs(y)


def _gaussian_split(p: int):
    """a, b with a^2 + b^2 = p for a prime p = 1 mod 4."""
    # find a square root of -1 mod p, then gcd(p, r + i) in Z[i]
    r = None
    for a in range(2, p):
        t = pow(a, (p - 1) // 4, p)
        if (t * t) % p == p - 1:
            r = t
            break
    assert r is not None
    # Gaussian gcd(p, r + i) by Euclid
    a0, b0 = p, 0
    a1, b1 = r, 1
    while a1 or b1:
        n1 = a1 * a1 + b1 * b1
        # nearest-integer quotient of (a0 + b0 i)/(a1 + b1 i)
        qr = round((a0 * a1 + b0 * b1) / n1)
        qi = round((b0 * a1 - a0 * b1) / n1)
        ra = a0 - (qr * a1 - qi * b1)
        rb = b0 - (qr * b1 + qi * a1)
        a0, b0, a1, b1 = a1, b1, ra, rb
    return abs(a0), abs(b0)


def hermitian_square_root(d: Scalar) -> Scalar:
    """f with f * conj(f) == d, or raise NotHermitianSquare."""
    if d.is_zero():
        raise NotHermitianSquare("zero")
    if d.conj() != d:
        raise NotHermitianSquare("not conjugation-fixed")
    shift = min(d.num)
    fnum = _factor_half(_poly_to_sympy({e - shift: c for e, c in d.num.items()}))
    fden = _factor_half(_poly_to_sympy(d.den))
    if shift % 2:
        raise NotHermitianSquare("odd power of q")
    f_expr = fnum / fden * _q ** (shift // 2)
    f = _sympy_fraction_to_scalar(f_expr)
    if f * f.conj() != d:
        # the halves of the two factorizations may differ by a sign/phase; fix up
        ratio = d / (f * f.conj())
        # ratio is a positive rational constant if anything
        if ratio.den == {0: CONE} and len(ratio.num) == 1 and 0 in ratio.num:
            re, im = ratio.num[0]
            if not im and re > 0:
                x, y = two_squares(Fraction(re.numerator, re.denominator))
                f = f * Scalar.gauss(x, y)
    if f * f.conj() != d:
        raise NotHermitianSquare("factor pairing failed")
    return f


def _factor_half(expr):
    """Given a conjugation-fixed polynomial (as sympy expr), return g with
    g * conj(g) = expr, up to a positive rational constant that is itself a
    sum of two squares (folded in)."""
    if expr.is_zero:
        raise NotHermitianSquare("zero")
    content, factors = sympy.factor_list(expr, _q, gaussian=True)
    half = sympy.Integer(1)
    seen = {}
    for base, exp in factors:
        seen[sympy.expand(base)] = exp
    used = set()
    for base, exp in list(seen.items()):
        if base in used:
            continue
        conj = sympy.expand(_conj_sympy(base))
        if conj == base:
            if exp % 2:
                raise NotHermitianSquare(f"self-conjugate factor {base} odd power")
            half *= base ** (exp // 2)
            used.add(base)
            continue
        # try to pair with the conjugate factor, allowing a constant multiple
        partner = None
        for other in seen:
            if other in used or other == base:
                continue
            quot = sympy.cancel(other / conj)
            if quot.is_number:
                partner = other
                break
        if partner is None or seen[partner] != exp:
            raise NotHermitianSquare(f"unpaired factor {base}")
        half *= base ** exp
        used.add(base)
        used.add(partner)
    # remaining constant: content / (half * conj(half) evaluated constant)
    rest = sympy.cancel(expr / sympy.expand(half * _conj_sympy(half)))
    if not rest.is_number:
        raise NotHermitianSquare("non-constant remainder")
    rest = sympy.nsimplify(rest)
    if not rest.is_rational or rest <= 0:
        raise NotHermitianSquare(f"remainder {rest} not a positive rational")
    x, y = two_squares(Fraction(int(sympy.numer(rest)), int(sympy.denom(rest))))
    return sympy.expand(half * (sympy.Rational(x.numerator, x.denominator)
                                + sympy.I * sympy.Rational(y.numerator, y.denominator)))


def _sympy_fraction_to_scalar(expr) -> Scalar:
    expr = sympy.cancel(sympy.together(expr))
    num, den = sympy.fraction(expr)
    return Scalar(_sympy_poly_to_dict(sympy.expand(num)),
                  _sympy_poly_to_dict(sympy.expand(den)))
