"""Exact scalar field Q(i)(q): rational functions in a formal parameter q
over the Gaussian rationals.

Scalars are stored in reduced canonical form (numerator a Laurent polynomial,
denominator a monic polynomial with nonzero constant term, gcd removed), so
equality is structural.  Conjugation maps i -> -i and fixes q (the deformation
parameter is real).  This module also carries the exact linear solver used by
the Haar-state and intertwiner computations.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

# ---------------------------------------------------------------------------
# Gaussian rational coefficients: pairs (re, im) of mpq.

_QZERO = mpq(0)
_QONE = mpq(1)

CZERO = (_QZERO, _QZERO)
CONE = (_QONE, _QZERO)


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def _cneg(a):
    return (-a[0], -a[1])


def _cconj(a):
    return (a[0], -a[1])


def _ciszero(a):
    return not a[0] and not a[1]


# ---------------------------------------------------------------------------
# Sparse polynomials in q: dict {exponent: coefficient}.  Negative exponents
# (Laurent terms) are allowed in numerators only.

_PONE = {0: CONE}


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = _cadd(out[e], c) if e in out else c
        if _ciszero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out


def _pneg(a):
    return {e: _cneg(c) for e, c in a.items()}


def _pmul(a, b):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            p = _cmul(ca, cb)
            s = _cadd(out[e], p) if e in out else p
            if _ciszero(s):
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _pscale(a, c):
    if _ciszero(c):
        return {}
    return {e: _cmul(v, c) for e, v in a.items()}


def _pshift(a, k):
    if k == 0:
        return dict(a)
    return {e + k: c for e, c in a.items()}


def _pdeg(a):
    return max(a) if a else -1


def _pdivmod(a, b):
    """Euclidean division of ordinary polynomials (b nonzero, min exp 0)."""
    r = dict(a)
    qout = {}
    db = _pdeg(b)
    lb = b[db]
    while r and _pdeg(r) >= db:
        dr = _pdeg(r)
        c = _cdiv(r[dr], lb)
        qout[dr - db] = c
        for e, v in b.items():
            ee = dr - db + e
            s = _csub(r.get(ee, CZERO), _cmul(c, v))
            if _ciszero(s):
                r.pop(ee, None)
            else:
                r[ee] = s
    return qout, r


def _pmonic(a):
    """Scale to leading coefficient 1; returns (monic, former leading coeff)."""
    d = _pdeg(a)
    lc = a[d]
    if lc == CONE:
        return dict(a), CONE
    inv = _cdiv(CONE, lc)
    return {e: _cmul(c, inv) for e, c in a.items()}, lc


def _pgcd(a, b):
    """Monic gcd of ordinary polynomials (min exponents 0)."""
    if not a:
        return _pmonic(b)[0] if b else {}
    if not b:
        return _pmonic(a)[0]
    # constants are units
    if _pdeg(a) == 0 or _pdeg(b) == 0:
        return dict(_PONE)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
        if a and _pdeg(a) == 0:
            return dict(_PONE)
    return _pmonic(a)[0]


class Scalar:
    """An element of Q(i)(q) in canonical form; immutable value semantics."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, _canonical=False):
        if _canonical:
            self.num = num
            self.den = den
            return
        if not num:
            self.num = {}
            self.den = dict(_PONE)
            return
        # move all q-powers of the denominator into the (Laurent) numerator
        vd = min(den)
        if vd:
            den = _pshift(den, -vd)
            num = _pshift(num, -vd)
        # cancel the polynomial content of the numerator against den
        vn = min(num)
        if _pdeg(den) > 0:
            g = _pgcd(_pshift(num, -vn) if vn else num, den)
            if _pdeg(g) > 0:
                den, _ = _pdivmod(den, g)
                num, _ = _pdivmod(_pshift(num, -vn), g)
                num = _pshift(num, vn)
        # monic denominator
        den, lc = _pmonic(den)
        if lc != CONE:
            inv = _cdiv(CONE, lc)
            num = {e: _cmul(c, inv) for e, c in num.items()}
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_fraction(x) -> "Scalar":
        v = mpq(x.numerator, x.denominator) if isinstance(x, Fraction) else mpq(x)
        if not v:
            return ZERO
        return Scalar({0: (v, _QZERO)}, dict(_PONE), _canonical=True)

    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar.from_fraction(n)

    @staticmethod
    def q_power(k: int) -> "Scalar":
        return Scalar({k: CONE}, dict(_PONE), _canonical=True)

    @staticmethod
    def gauss(re, im) -> "Scalar":
        c = (mpq(re.numerator, re.denominator) if isinstance(re, Fraction) else mpq(re),
             mpq(im.numerator, im.denominator) if isinstance(im, Fraction) else mpq(im))
        if _ciszero(c):
            return ZERO
        return Scalar({0: c}, dict(_PONE), _canonical=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == _PONE and self.den == _PONE

    def is_real(self) -> bool:
        return all(not c[1] for c in self.num.values()) and \
            all(not c[1] for c in self.den.values())

    def __bool__(self):
        return bool(self.num)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            s = _padd(self.num, other.num)
            if not s:
                return ZERO
            if self.den == _PONE:
                return Scalar(s, dict(_PONE), _canonical=True)
            return Scalar(s, dict(self.den))
        return Scalar(_padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
                      _pmul(self.den, other.den))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Scalar(_pneg(self.num), dict(self.den), _canonical=True)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == _PONE and other.den == _PONE:
            return Scalar(_pmul(self.num, other.num), dict(_PONE), _canonical=True)
        return Scalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("scalar division by zero")
        if not self.num:
            return ZERO
        return Scalar(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def inv(self) -> "Scalar":
        return ONE / self

    def __pow__(self, k: int):
        if k == 0:
            return ONE
        b = self if k > 0 else self.inv()
        out = b
        for _ in range(abs(k) - 1):
            out = out * b
        return out

    def conj(self) -> "Scalar":
        return Scalar({e: _cconj(c) for e, c in self.num.items()},
                      {e: _cconj(c) for e, c in self.den.items()})

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    # -- evaluation ----------------------------------------------------------

    def eval(self, q0) -> complex:
        """Floating evaluation at q = q0; raises PoleError on a denominator zero."""
        q0 = complex(q0)
        den = _peval(self.den, q0)
        if abs(den) == 0.0:
            raise PoleError(f"pole at q0 = {q0}")
        return _peval(self.num, q0) / den

    # -- text ----------------------------------------------------------------

    def __repr__(self):
        return f"Scalar({scalar_to_text(self)})"

    def __str__(self):
        return scalar_to_text(self)


class PoleError(ArithmeticError):
    pass


def _peval(p, q0):
    out = 0j
    for e, c in p.items():
        out += complex(float(c[0].numerator) / float(c[0].denominator),
                       float(c[1].numerator) / float(c[1].denominator)) * q0 ** e
    return out


ZERO = Scalar({}, dict(_PONE), _canonical=True)
ONE = Scalar({0: CONE}, dict(_PONE), _canonical=True)
I = Scalar({0: (_QZERO, _QONE)}, dict(_PONE), _canonical=True)
Q = Scalar({1: CONE}, dict(_PONE), _canonical=True)
MINUS_ONE = Scalar({0: (-_QONE, _QZERO)}, dict(_PONE), _canonical=True)


def qpow(k: int) -> Scalar:
    return Scalar.q_power(k)


def rational(p, q=1) -> Scalar:
    return Scalar.from_fraction(Fraction(p, q))


# ---------------------------------------------------------------------------
# Canonical text form: integer-coefficient polynomial fraction.

def _coef_text(c, with_sign=False):
    re, im = c
    if not im:
        body = str(abs(re))
        neg = re < 0
    elif not re:
        body = "i" if abs(im) == 1 else f"{abs(im)}*i"
        neg = im < 0
    else:
        return ("+ " if with_sign else "") + f"({re} + {im}*i)".replace("+ -", "- ")
    if with_sign:
        return ("- " if neg else "+ ") + body
    return ("-" if neg else "") + body


def _poly_text(p):
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        ctext = _coef_text(c, with_sign=bool(parts))
        if e == 0:
            term = ctext
        else:
            qpart = "q" if e == 1 else f"q^{e}"
            if ctext.endswith(" 1") or ctext == "1":
                term = ctext[:-1] + qpart if ctext.endswith(" 1") else qpart
            elif ctext.endswith(" -1") or ctext == "-1":
                term = ctext[:-2] + qpart if ctext.endswith(" -1") else "-" + qpart
            else:
                term = ctext + "*" + qpart
        parts.append(term)
    return " ".join(parts)


def scalar_to_text(x: Scalar) -> str:
    """Canonical text: numerator/denominator with integer Gaussian coefficients."""
    if x.is_zero():
        return "0"
    num, den = x.num, x.den
    shift = -min(0, min(num))
    if shift:
        num = _pshift(num, shift)
        den = _pshift(den, shift)
    # clear coefficient denominators
    lcm = 1
    for p in (num, den):
        for c in p.values():
            for part in c:
                d = part.denominator
                lcm = lcm * d // _gcd_int(lcm, d)
    if lcm != 1:
        f = (mpq(lcm), _QZERO)
        num = _pscale(num, f)
        den = _pscale(den, f)
    if den == _PONE:
        return _poly_text(num)
    nt, dt = _poly_text(num), _poly_text(den)
    if len(num) > 1 or min(num) != max(num):
        nt = f"({nt})"
    if len(den) == 1 and 0 in den and not den[0][1] and den[0][0] > 0:
        return f"{nt}/{dt}"       # plain positive integer denominator
    return f"{nt}/({dt})"


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return int(a)


# ---------------------------------------------------------------------------
# Parser for the canonical fraction syntax, e.g. "(1 - q^2)/(1 - q^4)".

class ScalarParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} (at offset {pos})")
        self.pos = pos


def parse_scalar(text: str) -> Scalar:
    toks = _tokenize(text)
    val, idx = _parse_expr(toks, 0)
    if idx != len(toks):
        raise ScalarParseError(f"unexpected token {toks[idx][0]!r}", toks[idx][1])
    return val


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append((text[i:j], i))
            i = j
        elif ch in "+-*/^()qi":
            toks.append((ch, i))
            i += 1
        else:
            raise ScalarParseError(f"bad character {ch!r}", i)
    return toks


def _parse_expr(toks, idx):
    sign = 1
    while idx < len(toks) and toks[idx][0] in "+-":
        if toks[idx][0] == "-":
            sign = -sign
        idx += 1
    val, idx = _parse_term(toks, idx)
    if sign < 0:
        val = -val
    while idx < len(toks) and toks[idx][0] in "+-":
        op = toks[idx][0]
        t, idx = _parse_term(toks, idx + 1)
        val = val + t if op == "+" else val - t
    return val, idx


def _parse_term(toks, idx):
    val, idx = _parse_factor(toks, idx)
    while idx < len(toks) and toks[idx][0] in "*/":
        op = toks[idx][0]
        f, idx = _parse_factor(toks, idx + 1)
        if op == "*":
            val = val * f
        else:
            if f.is_zero():
                raise ScalarParseError("division by zero", toks[idx - 1][1])
            val = val / f
    return val, idx


def _parse_factor(toks, idx):
    sign = 1
    while idx < len(toks) and toks[idx][0] in "+-":
        if toks[idx][0] == "-":
            sign = -sign
        idx += 1
    if idx >= len(toks):
        raise ScalarParseError("unexpected end of input", toks[-1][1] if toks else 0)
    tok, pos = toks[idx]
    if tok == "(":
        val, idx = _parse_expr(toks, idx + 1)
        if idx >= len(toks) or toks[idx][0] != ")":
            raise ScalarParseError("missing ')'", pos)
        idx += 1
    elif tok == "q":
        val = Q
        idx += 1
    elif tok == "i":
        val = I
        idx += 1
    elif tok.isdigit():
        val = Scalar.from_int(int(tok))
        idx += 1
    else:
        raise ScalarParseError(f"unexpected token {tok!r}", pos)
    if idx < len(toks) and toks[idx][0] == "^":
        idx += 1
        esign = 1
        while idx < len(toks) and toks[idx][0] in "+-":
            if toks[idx][0] == "-":
                esign = -esign
            idx += 1
        if idx >= len(toks) or not toks[idx][0].isdigit():
            raise ScalarParseError("bad exponent", pos)
        val = val ** (esign * int(toks[idx][0]))
        idx += 1
    if sign < 0:
        val = -val
    return val, idx


# ---------------------------------------------------------------------------
# Exact linear solving.

class LinearSystem:
    """A x = b over Scalar, with optional variable labels."""

    def __init__(self, matrix, rhs, labels=None):
        self.matrix = matrix
        self.rhs = rhs
        self.labels = labels
        n = len(matrix[0]) if matrix else 0
        assert all(len(row) == n for row in matrix), "ragged coefficient matrix"
        assert len(rhs) == len(matrix), "rhs length mismatch"


class SolveResult:
    def __init__(self, consistent, particular, nullspace, rank, pivot_cols):
        self.consistent = consistent
        self.particular = particular
        self.nullspace = nullspace
        self.rank = rank
        self.pivot_cols = pivot_cols


def solve_exact(sys: LinearSystem) -> SolveResult:
    """Exact Gaussian elimination with deterministic pivoting (first nonzero
    by row-major scan).  Returns a particular solution plus a null-space basis,
    or consistent=False for an inconsistent system."""
    rows = [dict((j, c) for j, c in enumerate(r) if not c.is_zero())
            for r in sys.matrix]
    rhs = list(sys.rhs)
    ncols = len(sys.matrix[0]) if sys.matrix else 0
    return _solve_sparse(rows, rhs, ncols)


def _solve_sparse(rows, rhs, ncols):
    """Shared sparse core: rows are dicts {col: Scalar}."""
    pivots = {}  # col -> (rowdict, rhs) with leading col `col`, normalized
    inconsistent = False
    order = []
    for r, b in zip(rows, rhs):
        r = {j: c for j, c in r.items() if not c.is_zero()}
        # reduce against existing pivots, in pivot-column order
        changed = True
        while changed:
            changed = False
            for c in sorted(r):
                if c in pivots:
                    coef = r.pop(c)
                    prow, prhs = pivots[c]
                    for j, v in prow.items():
                        if j == c:
                            continue
                        s = r.get(j, ZERO) - coef * v
                        if s.is_zero():
                            r.pop(j, None)
                        else:
                            r[j] = s
                    b = b - coef * prhs
                    changed = True
                    break
        if not r:
            if not b.is_zero():
                inconsistent = True
            continue
        c = min(r)  # first nonzero column of the reduced row
        lead = r.pop(c)
        row = {c: ONE}
        for j, v in r.items():
            row[j] = v / lead
        pivots[c] = (row, b / lead)
        order.append(c)
    # back-substitute to reduced echelon form; processing columns in
    # descending order guarantees each pivot row holds only its own pivot
    # plus free columns once its turn comes
    for c in sorted(pivots, reverse=True):
        prow, prhs = pivots[c]
        for c2 in sorted(pivots):
            if c2 == c:
                continue
            row2, rhs2 = pivots[c2]
            if c in row2:
                coef = row2.pop(c)
                for j, v in prow.items():
                    if j == c:
                        continue
                    s = row2.get(j, ZERO) - coef * v
                    if s.is_zero():
                        row2.pop(j, None)
                    else:
                        row2[j] = s
                pivots[c2] = (row2, rhs2 - coef * prhs)
    rank = len(pivots)
    free_cols = [j for j in range(ncols) if j not in pivots]
    if inconsistent:
        return SolveResult(False, None, [], rank, sorted(pivots))
    particular = [ZERO] * ncols
    for c, (_, b) in pivots.items():
        particular[c] = b
    nullspace = []
    for f in free_cols:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for c, (row, _) in pivots.items():
            if f in row:
                vec[c] = -row[f]
        nullspace.append(vec)
    return SolveResult(True, particular, nullspace, rank, sorted(pivots))


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Dispatcher form of the field operations: op in {add, mul, div, conj}
    (conj ignores b)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown op {op!r}")
