"""Text format for user-defined presentations, Hopf tables and
corepresentation matrices.

Line-oriented grammar (# starts a comment, blank lines ignored):

    gen NAME [star NAME]        declare a generator and its star partner
                                (omitting `star` makes it self-adjoint)
    weight NAME INT             monomial-order weight (default 1)
    rule WORD -> POLY           oriented rewrite rule; the left word must be
                                strictly greater than every right monomial
    comult NAME |-> TPOLY       generator image of the comultiplication
                                (star generators derived when omitted)
    counit NAME -> SCALAR       (star generators derived when omitted)
    antipode NAME -> POLY       required for the generator AND its star
    corep NAME DIM              followed by DIM lines of DIM comma-separated
                                polynomial entries

POLY is a +/- combination of terms `scalar? word`; words are space separated
generator names with postfix `*` attached to the name (no space).  Tensor
legs are separated by `(x)`.  `q` and `i` are reserved scalar atoms; scalars
use the canonical fraction syntax.
"""

from __future__ import annotations

from .hopf import CqgAlgebra
from .ncalg import NcPoly, OrientationError, Presentation, TensorPoly
from .scalar import I, ONE, Q, Scalar


class DslError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f" (line {line}" + (f", col {col})" if col is not None else ")") \
            if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Tokenizer.

def _tokenize(text, line_no):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            break
        if text.startswith("(x)", i):
            toks.append(("TENSOR", "(x)", i))
            i += 3
            continue
        if text.startswith("|->", i):
            toks.append(("MAPSTO", "|->", i))
            i += 3
            continue
        if text.startswith("->", i):
            toks.append(("ARROW", "->", i))
            i += 2
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("NUM", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            if j < n and text[j] == "*":       # postfix star binds tightly
                name += "*"
                j += 1
            toks.append(("NAME", name, i))
            i = j
            continue
        if ch in "+-*/^(),":
            toks.append((ch, ch, i))
            i += 1
            continue
        raise DslError(f"bad character {ch!r}", line_no, i + 1)
    return toks


# ---------------------------------------------------------------------------
# Expression parsing into NcPoly / TensorPoly.

class _ExprParser:
    """Terms are implicit products of scalar atoms and generator letters;
    `(x)` closes a tensor leg."""

    def __init__(self, pres, toks, line_no):
        self.pres = pres
        self.toks = toks
        self.i = 0
        self.line = line_no

    def _err(self, msg):
        col = self.toks[self.i][2] + 1 if self.i < len(self.toks) else None
        raise DslError(msg, self.line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def parse_poly(self, arity=1):
        """Sum of terms; each term is a list of `arity` legs."""
        legsum = None
        sign = ONE
        first = True
        while self.i < len(self.toks):
            kind, val, _ = self.peek()
            if kind in ("+", "-"):
                sign = ONE if kind == "+" else -ONE
                self.i += 1
            elif not first:
                self._err(f"expected + or - before {val!r}")
            coeff, legs = self.parse_term(arity)
            term = self._make(coeff * sign, legs, arity)
            legsum = term if legsum is None else legsum + term
            sign = ONE
            first = False
        if legsum is None:
            self._err("empty expression")
        return legsum

    def _make(self, coeff, legs, arity):
        if arity == 1:
            return NcPoly(self.pres, {tuple(legs[0]): coeff})
        key = tuple(tuple(l) for l in legs)
        return TensorPoly(self.pres, arity, {key: coeff})

    def parse_term(self, arity):
        coeff = ONE
        legs = [[]]
        start = self.i
        if start >= len(self.toks):
            self._err("expected a term")
        while self.i < len(self.toks):
            kind, val, pos = self.peek()
            if kind in ("+", "-"):
                break
            if kind == ",":
                break
            if kind == "TENSOR":
                legs.append([])
                self.i += 1
                continue
            if kind == "*":
                self.i += 1
                continue
            if kind == "/":
                self.i += 1
                c2, w2 = self.parse_factor()
                if w2:
                    self._err("cannot divide by a generator word")
                if c2.is_zero():
                    self._err("division by zero")
                coeff = coeff / c2
                continue
            c, word = self.parse_factor()
            coeff = coeff * c
            legs[-1].extend(word)
        if self.i == start:
            self._err("expected a term")
        if len(legs) != arity:
            self._err(f"expected {arity} tensor leg(s), found {len(legs)}")
        return coeff, legs

    def parse_factor(self):
        """One factor: returns (scalar, word letters)."""
        kind, val, pos = self.peek()
        if kind is None:
            self._err("unexpected end of expression")
        if kind == "NUM":
            self.i += 1
            base = Scalar.from_int(int(val))
            return self._maybe_power_scalar(base), []
        if kind == "NAME":
            if val == "q":
                self.i += 1
                return self._maybe_power_scalar(Q), []
            if val == "i":
                self.i += 1
                return self._maybe_power_scalar(I), []
            if val not in self.pres.name_index:
                self._err(f"undeclared generator {val!r}")
            self.i += 1
            g = self.pres.name_index[val]
            if self.peek()[0] == "^":
                self.i += 1
                k = self._int_exponent()
                if k < 0:
                    self._err("negative powers of generators are not allowed")
                return ONE, [g] * k
            return ONE, [g]
        if kind == "(":
            self.i += 1
            # scalar subexpression (no generators inside parentheses)
            c = self._parse_scalar_expr()
            if self.peek()[0] != ")":
                self._err("missing ')'")
            self.i += 1
            return self._maybe_power_scalar(c), []
        self._err(f"unexpected token {val!r}")

    def _maybe_power_scalar(self, base):
        if self.peek()[0] == "^":
            self.i += 1
            return base ** self._int_exponent()
        return base

    def _int_exponent(self):
        sign = 1
        while self.peek()[0] in ("+", "-"):
            if self.peek()[0] == "-":
                sign = -sign
            self.i += 1
        kind, val, _ = self.peek()
        if kind != "NUM":
            self._err("expected integer exponent")
        self.i += 1
        return sign * int(val)

    def _parse_scalar_expr(self):
        val = self._parse_scalar_term()
        while self.peek()[0] in ("+", "-"):
            op = self.peek()[0]
            self.i += 1
            t = self._parse_scalar_term()
            val = val + t if op == "+" else val - t
        return val

    def _parse_scalar_term(self):
        val = self._parse_scalar_atom()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.i += 1
                val = val * self._parse_scalar_atom()
            elif kind == "/":
                self.i += 1
                d = self._parse_scalar_atom()
                if d.is_zero():
                    self._err("division by zero")
                val = val / d
            elif kind in ("NUM", "NAME", "("):
                nxt = self.peek()[1]
                if kind == "NAME" and nxt not in ("q", "i"):
                    self._err(f"generator {nxt!r} not allowed inside a scalar")
                val = val * self._parse_scalar_atom()
            else:
                return val

    def _parse_scalar_atom(self):
        sign = ONE
        while self.peek()[0] in ("+", "-"):
            if self.peek()[0] == "-":
                sign = -sign
            self.i += 1
        kind, val, _ = self.peek()
        if kind == "NUM":
            self.i += 1
            out = Scalar.from_int(int(val))
        elif kind == "NAME" and val == "q":
            self.i += 1
            out = Q
        elif kind == "NAME" and val == "i":
            self.i += 1
            out = I
        elif kind == "(":
            self.i += 1
            out = self._parse_scalar_expr()
            if self.peek()[0] != ")":
                self._err("missing ')'")
            self.i += 1
        else:
            self._err(f"unexpected token {val!r} in scalar")
        return self._maybe_power_scalar(out) * sign


def parse_word(pres, text, line_no=0):
    toks = _tokenize(text, line_no)
    if len(toks) == 1 and toks[0][0] == "NUM" and toks[0][1] == "1":
        return ()  # the empty word prints as 1
    letters = []
    for kind, val, pos in toks:
        if kind != "NAME" or val in ("q", "i"):
            raise DslError(f"expected generator name, got {val!r}", line_no, pos + 1)
        if val not in pres.name_index:
            raise DslError(f"undeclared generator {val!r}", line_no, pos + 1)
        letters.append(pres.name_index[val])
    return tuple(letters)


def parse_poly(pres, text, line_no=0) -> NcPoly:
    return _ExprParser(pres, _tokenize(text, line_no), line_no).parse_poly(1)


# ---------------------------------------------------------------------------
# Document parsing.

class CqgDocument:
    def __init__(self):
        self.gen_pairs = []        # (name, starname)
        self.weights = {}
        self.rules = []            # (lhs text, rhs text, line)
        self.comult = {}
        self.counit = {}
        self.antipode = {}
        self.coreps = []           # (name, dim, [[entry text]])


def parse(text: str) -> "tuple[CqgAlgebra, dict]":
    """Parse a .cqg document into a CqgAlgebra plus named coreps; all
    load-time checks from the Hopf module run."""
    doc = _parse_document(text)
    if not doc.gen_pairs:
        raise DslError("no generators declared", 1)
    names = []
    star = {}
    for a, b in doc.gen_pairs:
        if a in names or (b != a and b in names):
            raise DslError(f"generator {a!r} declared twice", 1)
        names.append(a)
        if b != a:
            names.append(b)
        star[a] = b
        star[b] = a
    index = {nm: k for k, nm in enumerate(names)}
    star_idx = [index[star[nm]] for nm in names]
    weights = [doc.weights.get(nm, doc.weights.get(star[nm], 1)) for nm in names]
    pres = Presentation(names, star_idx, [], weights=weights)
    for lhs_text, rhs_text, ln in doc.rules:
        lhs = parse_word(pres, lhs_text, ln)
        rhs = _ExprParser(pres, _tokenize(rhs_text, ln), ln).parse_poly(1)
        try:
            pres._add_rule(lhs, dict(rhs.terms))
        except OrientationError as e:
            raise DslError(f"relation orientation violation: {e}", ln) from None
    # rebuild so rule right-hand sides are normal w.r.t. the final system
    rules2 = [(lhs, dict(NcPoly(pres, rhs).terms))
              for lhs, rhs in pres.rules.items()]
    pres = Presentation(names, star_idx, rules2, weights=weights)

    delta = {}
    eps = {}
    kappa = {}
    for nm, (textval, ln) in doc.comult.items():
        g = index[nm]
        delta[g] = _ExprParser(pres, _tokenize(textval, ln), ln).parse_poly(2)
    for nm, (textval, ln) in doc.counit.items():
        g = index[nm]
        p = _ExprParser(pres, _tokenize(textval, ln), ln).parse_poly(1)
        if set(p.terms) - {()}:
            raise DslError("counit value must be scalar", ln)
        eps[g] = p.constant_term()
    for nm, (textval, ln) in doc.antipode.items():
        g = index[nm]
        kappa[g] = _ExprParser(pres, _tokenize(textval, ln), ln).parse_poly(1)
    # derive star images of delta / counit where omitted
    for g in range(len(names)):
        gs = star_idx[g]
        if g not in delta and gs in delta:
            delta[g] = delta[gs].star()
        if g not in eps and gs in eps:
            eps[g] = eps[gs].conj()
    missing = [names[g] for g in range(len(names)) if g not in delta]
    if missing:
        raise DslError(f"incomplete comultiplication table: missing {missing}", 1)
    missing = [names[g] for g in range(len(names)) if g not in eps]
    if missing:
        raise DslError(f"incomplete counit table: missing {missing}", 1)
    missing = [names[g] for g in range(len(names)) if g not in kappa]
    if missing:
        raise DslError(f"incomplete antipode table: missing {missing}", 1)
    alg = CqgAlgebra(pres, delta, eps, kappa, name="document")
    coreps = {}
    from .corep import Corep
    for cname, dim, entries, ln in doc.coreps:
        mat = [[_ExprParser(pres, _tokenize(cell, ln), ln).parse_poly(1)
                for cell in row] for row in entries]
        coreps[cname] = Corep(alg, mat)
    return alg, coreps


def _parse_document(text: str) -> CqgDocument:
    doc = CqgDocument()
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        ln = i + 1
        raw = lines[i].strip()
        i += 1
        if not raw or raw.startswith("#"):
            continue
        head, _, rest = raw.partition(" ")
        rest = rest.strip()
        if head == "gen":
            parts = rest.split()
            if len(parts) == 1:
                doc.gen_pairs.append((parts[0], parts[0]))
            elif len(parts) == 3 and parts[1] == "star":
                doc.gen_pairs.append((parts[0], parts[2]))
            else:
                raise DslError("expected `gen NAME [star NAME]`", ln)
        elif head == "weight":
            parts = rest.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise DslError("expected `weight NAME INT`", ln)
            doc.weights[parts[0]] = int(parts[1])
        elif head == "rule":
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise DslError("expected `rule WORD -> POLY`", ln)
            doc.rules.append((lhs.strip(), rhs.strip(), ln))
        elif head == "comult":
            nm, arrow, rhs = rest.partition("|->")
            if not arrow:
                raise DslError("expected `comult NAME |-> TPOLY`", ln)
            doc.comult[nm.strip()] = (rhs.strip(), ln)
        elif head == "counit":
            nm, arrow, rhs = rest.partition("->")
            if not arrow:
                raise DslError("expected `counit NAME -> SCALAR`", ln)
            doc.counit[nm.strip()] = (rhs.strip(), ln)
        elif head == "antipode":
            nm, arrow, rhs = rest.partition("->")
            if not arrow:
                raise DslError("expected `antipode NAME -> POLY`", ln)
            doc.antipode[nm.strip()] = (rhs.strip(), ln)
        elif head == "corep":
            parts = rest.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise DslError("expected `corep NAME DIM`", ln)
            dim = int(parts[1])
            entries = []
            for r in range(dim):
                if i >= len(lines):
                    raise DslError("corep matrix ends early", ln)
                row = [c.strip() for c in lines[i].split(",")]
                if len(row) != dim:
                    raise DslError(f"expected {dim} entries", i + 1)
                entries.append(row)
                i += 1
            doc.coreps.append((parts[0], dim, entries, ln))
        else:
            raise DslError(f"unknown directive {head!r}", ln)
    return doc


# ---------------------------------------------------------------------------
# Serialization (canonical ordering: round-trips to a structurally equal
# algebra and identical canonical text).

def serialize(alg: CqgAlgebra, coreps=None) -> str:
    pres = alg.pres
    out = []
    seen = set()
    for g, nm in enumerate(pres.names):
        if g in seen:
            continue
        gs = pres.star[g]
        seen.add(g)
        seen.add(gs)
        if gs == g:
            out.append(f"gen {nm}")
        else:
            out.append(f"gen {nm} star {pres.names[gs]}")
    for g, nm in enumerate(pres.names):
        if pres.weights[g] != 1 and (pres.star[g] >= g):
            out.append(f"weight {nm} {pres.weights[g]}")
    for lhs in sorted(pres.rules, key=pres.order_key):
        rhs = NcPoly(pres, pres.rules[lhs], _normal=True)
        out.append(f"rule {pres.word_str(lhs)} -> {rhs}")
    seen = set()
    for g, nm in enumerate(pres.names):
        if g in seen:
            continue
        seen.add(g)
        seen.add(pres.star[g])
        out.append(f"comult {nm} |-> {alg.delta_table[g]!r}")
    for g, nm in enumerate(pres.names):
        if pres.star[g] >= g:
            from .scalar import scalar_to_text
            out.append(f"counit {nm} -> {scalar_to_text(alg.eps_table[g])}")
    for g, nm in enumerate(pres.names):
        out.append(f"antipode {nm} -> {alg.kappa_table[g]}")
    for cname, corep in (coreps or {}).items():
        out.append(f"corep {cname} {corep.n}")
        for row in corep.entries:
            out.append("  " + " , ".join(str(e) for e in row))
    return "\n".join(out) + "\n"
