"""Free *-algebra on involutive generator pairs, reduced to unique normal
forms by an oriented rewriting system.

Words are tuples of generator indices.  The monomial order is weighted
degree-lex: words are compared by total generator weight, ties broken
lexicographically by generator index (all weights 1 gives plain deg-lex).
Every rewrite rule strictly decreases this order, so rewriting terminates;
uniqueness of normal forms is certified up to a weight bound by resolving
all rule-overlap ambiguities (diamond lemma, bounded form).  A reduction to
literal zero is sound evidence that an element vanishes regardless of any
confluence certificate; only nonzero normal forms need the certificate.
"""

from __future__ import annotations

import itertools

from .scalar import ONE, ZERO, Scalar

Word = tuple


class PresentationError(ValueError):
    pass


class OrientationError(PresentationError):
    """A rewrite rule fails to strictly decrease the monomial order."""


class Presentation:
    """Generators with star pairing, weights, and oriented rewrite rules."""

    def __init__(self, names, star, rules, weights=None):
        self.names = list(names)
        n = len(self.names)
        self.star = list(star)
        assert len(self.star) == n and all(self.star[self.star[g]] == g for g in range(n)), \
            "star pairing must be an involution"
        self.weights = list(weights) if weights is not None else [1] * n
        assert all(w >= 1 for w in self.weights)
        assert all(self.weights[g] == self.weights[self.star[g]] for g in range(n)), \
            "star partners must share a weight"
        self.name_index = {nm: g for g, nm in enumerate(self.names)}
        if len(self.name_index) != n:
            raise PresentationError("duplicate generator names")
        self.rules = {}
        self._rules_by_first = {}
        self._nf_cache = {}
        self._max_weight = max(self.weights) if self.weights else 1
        for lhs, rhs in rules:
            self._add_rule(tuple(lhs), dict(rhs))

    # -- order ---------------------------------------------------------------

    def weight(self, word: Word) -> int:
        return sum(self.weights[g] for g in word)

    def order_key(self, word: Word):
        return (self.weight(word), word)

    def word_gt(self, a: Word, b: Word) -> bool:
        return self.order_key(a) > self.order_key(b)

    # -- rules ----------------------------------------------------------------

    def _add_rule(self, lhs: Word, rhs: dict):
        key = self.order_key(lhs)
        for w in rhs:
            if self.order_key(w) >= key:
                raise OrientationError(
                    f"rule {self.word_str(lhs)} -> ... does not decrease the "
                    f"order at monomial {self.word_str(w)}")
        if lhs in self.rules:
            raise PresentationError(f"duplicate rule for {self.word_str(lhs)}")
        self.rules[lhs] = rhs
        self._rules_by_first.setdefault(lhs[0], []).append(lhs)
        self._rules_by_first[lhs[0]].sort()
        self._nf_cache.clear()

    # -- rewriting -------------------------------------------------------------

    def _find_redex(self, word: Word):
        """Leftmost redex: (position, lhs) or None."""
        by_first = self._rules_by_first
        n = len(word)
        for i in range(n):
            cands = by_first.get(word[i])
            if not cands:
                continue
            for lhs in cands:
                if word[i:i + len(lhs)] == lhs:
                    return i, lhs
        return None

    def reduce_word(self, word: Word) -> dict:
        """Normal form of a single word as {word: Scalar}; memoized."""
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        redex = self._find_redex(word)
        if redex is None:
            out = {word: ONE}
            self._nf_cache[word] = out
            return out
        i, lhs = redex
        head, tail = word[:i], word[i + len(lhs):]
        acc = {}
        for rword, rc in self.rules[lhs].items():
            sub = self.reduce_word(head + rword + tail)
            for w, c in sub.items():
                s = acc.get(w, ZERO) + c * rc
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        self._nf_cache[word] = acc
        return acc

    def star_word(self, word: Word) -> Word:
        return tuple(self.star[g] for g in reversed(word))

    def word_str(self, word: Word) -> str:
        return " ".join(self.names[g] for g in word) if word else "1"


class NcPoly:
    """Normal-form noncommutative *-polynomial: {word: nonzero Scalar}."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: Presentation, terms: dict, _normal=False):
        self.pres = pres
        if _normal:
            self.terms = terms
            return
        acc = {}
        for word, coeff in terms.items():
            if coeff.is_zero():
                continue
            for w, c in pres.reduce_word(tuple(word)).items():
                s = acc.get(w, ZERO) + c * coeff
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        self.terms = acc

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero(pres):
        return NcPoly(pres, {}, _normal=True)

    @staticmethod
    def one(pres):
        return NcPoly(pres, {(): ONE}, _normal=True)

    @staticmethod
    def scalar(pres, c: Scalar):
        return NcPoly(pres, {(): c} if not c.is_zero() else {}, _normal=True)

    @staticmethod
    def generator(pres, g) -> "NcPoly":
        if isinstance(g, str):
            if g not in pres.name_index:
                raise PresentationError(f"unknown generator {g!r}")
            g = pres.name_index[g]
        return NcPoly(pres, {(g,): ONE})

    @staticmethod
    def word(pres, letters) -> "NcPoly":
        idx = []
        for nm in letters:
            if isinstance(nm, str):
                if nm not in pres.name_index:
                    raise PresentationError(f"unknown generator {nm!r}")
                idx.append(pres.name_index[nm])
            else:
                idx.append(nm)
        return NcPoly(pres, {tuple(idx): ONE})

    # -- algebra -----------------------------------------------------------------

    def _check(self, other):
        if self.pres is not other.pres:
            raise PresentationError("presentation mismatch")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            s = acc.get(w, ZERO) + c
            if s.is_zero():
                acc.pop(w, None)
            else:
                acc[w] = s
        return NcPoly(self.pres, acc, _normal=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return NcPoly(self.pres, {w: -c for w, c in self.terms.items()}, _normal=True)

    def scale(self, c: Scalar) -> "NcPoly":
        if c.is_zero():
            return NcPoly.zero(self.pres)
        return NcPoly(self.pres, {w: v * c for w, v in self.terms.items()}, _normal=True)

    def __mul__(self, other):
        self._check(other)
        pres = self.pres
        acc = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                coeff = c1 * c2
                for w, c in pres.reduce_word(w1 + w2).items():
                    s = acc.get(w, ZERO) + c * coeff
                    if s.is_zero():
                        acc.pop(w, None)
                    else:
                        acc[w] = s
        return NcPoly(pres, acc, _normal=True)

    def star(self) -> "NcPoly":
        pres = self.pres
        acc = {}
        for w, c in self.terms.items():
            cc = c.conj()
            for w2, c2 in pres.reduce_word(pres.star_word(w)).items():
                s = acc.get(w2, ZERO) + c2 * cc
                if s.is_zero():
                    acc.pop(w2, None)
                else:
                    acc[w2] = s
        return NcPoly(pres, acc, _normal=True)

    # -- queries --------------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def coefficient(self, word) -> Scalar:
        return self.terms.get(tuple(word), ZERO)

    def constant_term(self) -> Scalar:
        return self.terms.get((), ZERO)

    def __eq__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((w, hash(c)) for w, c in self.terms.items()))

    def __repr__(self):
        return f"NcPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=self.pres.order_key):
            c = self.terms[w]
            ctext = _compact_scalar(c)
            if not w:
                parts.append(ctext)
            elif c == ONE:
                parts.append(self.pres.word_str(w))
            else:
                parts.append(f"{ctext} * {self.pres.word_str(w)}")
        return " + ".join(parts).replace("+ -", "- ")


def _compact_scalar(c: Scalar) -> str:
    from .scalar import _coef_text, scalar_to_text
    if len(c.num) == 1 and len(c.den) == 1 and 0 in c.den:
        # Laurent monomial: print q^k inline, e.g. q^-1 or -2*q^3
        (k, coef), = c.num.items()
        ctext = _coef_text(coef)
        if k == 0:
            return ctext if "/" not in ctext else f"({ctext})"
        qpart = "q" if k == 1 else f"q^{k}"
        if ctext == "1":
            return qpart
        if ctext == "-1":
            return "-" + qpart
        if "/" in ctext or "+" in ctext or " " in ctext:
            ctext = f"({ctext})"
        return f"{ctext}*{qpart}"
    text = scalar_to_text(c)
    return f"({text})" if not text.startswith("(") else text


class TensorPoly:
    """Element of A0 (x) A0 (or triple tensor): {(w1, w2[, w3]): Scalar}."""

    __slots__ = ("pres", "arity", "terms")

    def __init__(self, pres, arity, terms, _normal=False):
        self.pres = pres
        self.arity = arity
        if _normal:
            self.terms = terms
            return
        acc = {}
        for key, coeff in terms.items():
            if coeff.is_zero():
                continue
            _accumulate_normalized(pres, acc, tuple(tuple(w) for w in key), coeff)
        self.terms = acc

    @staticmethod
    def zero(pres, arity=2):
        return TensorPoly(pres, arity, {}, _normal=True)

    @staticmethod
    def one(pres, arity=2):
        return TensorPoly(pres, arity, {((),) * arity: ONE}, _normal=True)

    @staticmethod
    def of(*factors: NcPoly) -> "TensorPoly":
        pres = factors[0].pres
        arity = len(factors)
        out = TensorPoly.zero(pres, arity)
        acc = {}
        for combo in itertools.product(*(f.terms.items() for f in factors)):
            words = tuple(wc[0] for wc in combo)
            coeff = ONE
            for wc in combo:
                coeff = coeff * wc[1]
            s = acc.get(words, ZERO) + coeff
            if s.is_zero():
                acc.pop(words, None)
            else:
                acc[words] = s
        out.terms = acc
        return out

    def _check(self, other):
        if self.pres is not other.pres or self.arity != other.arity:
            raise PresentationError("tensor mismatch")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            s = acc.get(k, ZERO) + c
            if s.is_zero():
                acc.pop(k, None)
            else:
                acc[k] = s
        return TensorPoly(self.pres, self.arity, acc, _normal=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorPoly(self.pres, self.arity,
                          {k: -c for k, c in self.terms.items()}, _normal=True)

    def scale(self, c: Scalar):
        if c.is_zero():
            return TensorPoly.zero(self.pres, self.arity)
        return TensorPoly(self.pres, self.arity,
                          {k: v * c for k, v in self.terms.items()}, _normal=True)

    def __mul__(self, other):
        """Leg-wise product with re-normalization of each leg."""
        self._check(other)
        pres = self.pres
        acc = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                _accumulate_normalized(pres, acc, key, c1 * c2)
        return TensorPoly(pres, self.arity, acc, _normal=True)

    def star(self) -> "TensorPoly":
        pres = self.pres
        acc = {}
        for k, c in self.terms.items():
            key = tuple(pres.star_word(w) for w in k)
            _accumulate_normalized(pres, acc, key, c.conj())
        return TensorPoly(pres, self.arity, acc, _normal=True)

    def expand_leg(self, leg: int, fn) -> "TensorPoly":
        """Replace leg `leg` via fn(word) -> NcPoly or TensorPoly, splicing
        the result in place (raises the arity when fn returns a tensor)."""
        pres = self.pres
        acc = {}
        arity_out = None
        for k, c in self.terms.items():
            image = fn(k[leg])
            if isinstance(image, NcPoly):
                for w, cw in image.terms.items():
                    key = k[:leg] + (w,) + k[leg + 1:]
                    s = acc.get(key, ZERO) + c * cw
                    if s.is_zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = s
                arity_out = self.arity
            else:
                for ws, cw in image.terms.items():
                    key = k[:leg] + ws + k[leg + 1:]
                    s = acc.get(key, ZERO) + c * cw
                    if s.is_zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = s
                arity_out = self.arity + image.arity - 1
        if arity_out is None:
            arity_out = self.arity
        return TensorPoly(pres, arity_out, acc, _normal=True)

    def apply_scalar_leg(self, leg: int, fn) -> "NcPoly | TensorPoly":
        """Contract leg `leg` with a scalar-valued functional fn(word) -> Scalar."""
        pres = self.pres
        if self.arity == 2:
            acc = {}
            for k, c in self.terms.items():
                v = fn(k[leg]) * c
                if v.is_zero():
                    continue
                w = k[1 - leg]
                s = acc.get(w, ZERO) + v
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
            return NcPoly(pres, acc, _normal=True)
        acc = {}
        for k, c in self.terms.items():
            v = fn(k[leg]) * c
            if v.is_zero():
                continue
            key = k[:leg] + k[leg + 1:]
            s = acc.get(key, ZERO) + v
            if s.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = s
        return TensorPoly(pres, self.arity - 1, acc, _normal=True)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return (self.pres is other.pres and self.arity == other.arity
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda key: tuple(self.pres.order_key(w) for w in key)):
            c = self.terms[k]
            legs = " (x) ".join(self.pres.word_str(w) for w in k)
            parts.append(f"{_compact_scalar(c)} * {legs}" if c != ONE else legs)
        return " + ".join(parts).replace("+ -", "- ")


def _accumulate_normalized(pres, acc, key, coeff):
    """acc += coeff * (normal form of each leg of key), expanding products."""
    reduced = [pres.reduce_word(w) for w in key]
    for combo in itertools.product(*(r.items() for r in reduced)):
        words = tuple(wc[0] for wc in combo)
        c = coeff
        for wc in combo:
            c = c * wc[1]
        s = acc.get(words, ZERO) + c
        if s.is_zero():
            acc.pop(words, None)
        else:
            acc[words] = s


# ---------------------------------------------------------------------------
# Normal-form enumeration and expression helpers.

def normal_words(pres: Presentation, degree: int, exact=False):
    """All normal-form words of length <= degree (or == degree if exact),
    ordered by the monomial order."""
    out = []
    frontier = [()]
    if not exact:
        out.append(())
    for _ in range(degree):
        nxt = []
        for w in frontier:
            for g in range(len(pres.names)):
                w2 = w + (g,)
                if pres._find_redex(w2) is None:
                    nxt.append(w2)
        frontier = nxt
        if not exact:
            out.extend(frontier)
    if exact:
        out = frontier
    out.sort(key=pres.order_key)
    return out


def build_from_relations(names, star, relations, weights=None):
    """Presentation from a list of relation polynomials ({word: Scalar},
    meaning the element is 0).  Each relation is oriented by its leading
    monomial; the rule set is inter-reduced until auto-reduced, so linear
    combinations of the defining relations always rewrite to literal zero.
    No overlap completion is performed."""
    pres = Presentation(names, star, [], weights=weights)
    queue = [dict(r) for r in relations]
    while queue:
        rel = queue.pop(0)
        nf = NcPoly(pres, rel)
        if nf.is_zero():
            continue
        lead = max(nf.terms, key=pres.order_key)
        lc = nf.terms[lead]
        rhs = {w: -(c / lc) for w, c in nf.terms.items() if w != lead}
        # retire any existing rules this new rule can touch, requeue them
        def contains(w):
            return any(w[i:i + len(lead)] == lead
                       for i in range(len(w) - len(lead) + 1))
        stale = [lhs for lhs, old_rhs in pres.rules.items()
                 if contains(lhs) or any(contains(w) for w in old_rhs)]
        for lhs in stale:
            old_rhs = pres.rules.pop(lhs)
            pres._rules_by_first[lhs[0]].remove(lhs)
            queue.append({lhs: ONE, **{w: -c for w, c in old_rhs.items()}})
        pres._nf_cache.clear()
        pres._add_rule(lead, rhs)
    return pres


# ---------------------------------------------------------------------------
# Bounded confluence certification (diamond lemma, overlap resolution).

class ConfluenceReport:
    def __init__(self, bound, weight_bound, failures, checked):
        self.bound = bound
        self.weight_bound = weight_bound
        self.failures = failures          # list of dicts
        self.checked = checked            # number of ambiguities resolved

    @property
    def ok(self):
        return not self.failures

    def as_json(self):
        return {"degree_bound": self.bound, "weight_bound": self.weight_bound,
                "ambiguities_checked": self.checked, "ok": self.ok,
                "failures": self.failures}


def check_confluence(pres: Presentation, degree_bound: int) -> ConfluenceReport:
    """Resolve all rule-overlap and inclusion ambiguities whose overlap word
    has weight <= degree_bound * max generator weight, both ways; also check
    the rule set is closed under star up to the bound."""
    maxd = max((len(l) for l in pres.rules), default=1)
    assert degree_bound >= 2 * maxd, "bound must cover overlapping rule pairs"
    wbound = degree_bound * pres._max_weight
    failures = []
    checked = 0
    rules = sorted(pres.rules, key=pres.order_key)

    def reduce_dict(d):
        return NcPoly(pres, d)

    for l1 in rules:
        r1 = pres.rules[l1]
        for l2 in rules:
            r2 = pres.rules[l2]
            # proper overlaps: suffix of l1 == prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - k:] != l2[:k]:
                    continue
                word = l1 + l2[k:]
                if pres.weight(word) > wbound:
                    continue
                checked += 1
                a = reduce_dict({r + l2[k:]: c for r, c in r1.items()})
                b = reduce_dict({l1[:len(l1) - k] + r: c for r, c in r2.items()})
                if a != b:
                    failures.append({"kind": "overlap", "word": pres.word_str(word),
                                     "difference": str(a - b)})
            # inclusions: l2 strictly inside l1
            if len(l2) < len(l1):
                for i in range(len(l1) - len(l2) + 1):
                    if l1[i:i + len(l2)] != l2:
                        continue
                    if pres.weight(l1) > wbound:
                        continue
                    checked += 1
                    a = reduce_dict(dict(r1))
                    b = reduce_dict({l1[:i] + r + l1[i + len(l2):]: c
                                     for r, c in r2.items()})
                    if a != b:
                        failures.append({"kind": "inclusion", "word": pres.word_str(l1),
                                         "difference": str(a - b)})
    # star closure: the starred rule must be a consequence of the rules
    for l1 in rules:
        if pres.weight(l1) > wbound:
            continue
        checked += 1
        lhs_star = reduce_dict({pres.star_word(l1): ONE})
        rhs_star = reduce_dict({pres.star_word(w): c.conj()
                                for w, c in pres.rules[l1].items()})
        if lhs_star != rhs_star:
            failures.append({"kind": "star", "word": pres.word_str(l1),
                             "difference": str(lhs_star - rhs_star)})
    return ConfluenceReport(degree_bound, wbound, failures, checked)
