"""Sparse multivariate polynomials over exact rationals.

Variables are opaque hashable ids carried in an ordered signature; terms map
exponent tuples to nonzero Fraction coefficients.  Two term orders are
supported: graded reverse lexicographic (the default) and lexicographic
(for elimination).  All arithmetic is exact; there is no floating point
anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

GREVLEX = "grevlex"
LEX = "lex"


class SignatureMismatchError(ValueError):
    """Binary operation on polynomials with different variable signatures."""


class InexactDivisionError(ArithmeticError):
    """exact_div called on a non-divisible pair; never a silent remainder."""


def order_key(order):
    """Return a sort key on exponent tuples for the given term order tag."""
    if order == GREVLEX:
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    if order == LEX:
        return lambda e: e
    raise ValueError(f"unknown term order {order!r}")


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be exact rational, got {type(c).__name__}")


class MultiPoly:
    __slots__ = ("vars", "terms", "order")

    def __init__(self, vars, terms=None, order=GREVLEX):
        self.vars = tuple(vars)
        self.order = order
        clean = {}
        if terms:
            nv = len(self.vars)
            for expo, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if len(expo) != nv:
                    raise ValueError("exponent vector length does not match signature")
                if coeff:
                    expo = tuple(expo)
                    acc = clean.get(expo)
                    if acc is None:
                        clean[expo] = coeff
                    else:
                        acc += coeff
                        if acc:
                            clean[expo] = acc
                        else:
                            del clean[expo]
        self.terms = clean

    # ---------- constructors ----------

    @classmethod
    def zero(cls, vars, order=GREVLEX):
        return cls(vars, {}, order)

    @classmethod
    def const(cls, vars, c, order=GREVLEX):
        c = _as_fraction(c)
        vars = tuple(vars)
        if not c:
            return cls(vars, {}, order)
        return cls(vars, {(0,) * len(vars): c}, order)

    @classmethod
    def gen(cls, vars, index, order=GREVLEX):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[index] = 1
        return cls(vars, {tuple(e): Fraction(1)}, order)

    @classmethod
    def var(cls, vars, v, order=GREVLEX):
        vars = tuple(vars)
        return cls.gen(vars, vars.index(v), order)

    @classmethod
    def monomial(cls, vars, expo, coeff=1, order=GREVLEX):
        return cls(vars, {tuple(expo): _as_fraction(coeff)}, order)

    # ---------- predicates & accessors ----------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        ((e, c),) = self.terms.items()
        if any(e):
            raise ValueError("not a constant polynomial")
        return c

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def support_indices(self):
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(i)
        return used

    def leading(self, order=None):
        """(exponent, coefficient) of the leading term under the active order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order_key(order or self.order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def sorted_terms(self, order=None, reverse=True):
        key = order_key(order or self.order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def with_order(self, order):
        if order == self.order:
            return self
        return MultiPoly(self.vars, self.terms, order)

    # ---------- equality (order tag excluded) ----------

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # ---------- arithmetic ----------

    def _check(self, other):
        if self.vars != other.vars:
            raise SignatureMismatchError(
                f"signature mismatch: {self.vars!r} vs {other.vars!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other, self.order)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = terms.get(e)
            if acc is None:
                terms[e] = c
            else:
                acc += c
                if acc:
                    terms[e] = acc
                else:
                    del terms[e]
        out = MultiPoly.zero(self.vars, self.order)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MultiPoly.zero(self.vars, self.order)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.vars, self.order)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        terms = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                acc = terms.get(e)
                if acc is None:
                    terms[e] = c
                else:
                    acc += c
                    if acc:
                        terms[e] = acc
                    else:
                        del terms[e]
        out = MultiPoly.zero(self.vars, self.order)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def scale(self, c):
        c = _as_fraction(c)
        out = MultiPoly.zero(self.vars, self.order)
        if c:
            out.terms = {e: c * k for e, k in self.terms.items()}
        return out

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(self.vars, 1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_monomial(self, expo, coeff=1):
        coeff = _as_fraction(coeff)
        out = MultiPoly.zero(self.vars, self.order)
        if coeff:
            out.terms = {
                tuple(x + y for x, y in zip(e, expo)): c * coeff
                for e, c in self.terms.items()
            }
        return out

    def exact_div(self, other):
        """Exact quotient; raises InexactDivisionError when other does not divide."""
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other, self.order)
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        key = order_key(self.order)
        le, lc = other.leading()
        q = MultiPoly.zero(self.vars, self.order)
        r = self
        while r.terms:
            re = max(r.terms, key=key)
            diff = tuple(x - y for x, y in zip(re, le))
            if any(d < 0 for d in diff):
                raise InexactDivisionError("polynomial division leaves a remainder")
            c = r.terms[re] / lc
            q = q + MultiPoly.monomial(self.vars, diff, c, self.order)
            r = r - other.mul_monomial(diff, c)
        return q

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except InexactDivisionError:
            return False

    # ---------- calculus & substitution ----------

    def partial(self, i):
        """Formal partial derivative with respect to variable index i."""
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        out = MultiPoly.zero(self.vars, self.order)
        out.terms = terms
        return out

    def substitute(self, values):
        """Substitute polynomials/Fractions for variables (by id).

        `values` maps variable ids to MultiPoly (over this signature) or
        exact rationals.  Unmapped variables stay untouched.
        """
        idx = {}
        for v, val in values.items():
            i = self.vars.index(v)
            if isinstance(val, (int, Fraction)):
                val = MultiPoly.const(self.vars, val, self.order)
            idx[i] = val
        result = MultiPoly.zero(self.vars, self.order)
        pow_cache = {}
        for e, c in self.terms.items():
            factor = MultiPoly.const(self.vars, c, self.order)
            rest = list(e)
            for i, val in idx.items():
                if e[i]:
                    key = (i, e[i])
                    p = pow_cache.get(key)
                    if p is None:
                        p = val ** e[i]
                        pow_cache[key] = p
                    factor = factor * p
                    rest[i] = 0
            factor = factor.mul_monomial(tuple(rest))
            result = result + factor
        return result

    def evaluate(self, point):
        """Evaluate at a full point given as {var id: Fraction}."""
        total = Fraction(0)
        vals = [point.get(v) for v in self.vars]
        for e, c in self.terms.items():
            acc = c
            for x, val in zip(e, vals):
                if x:
                    if val is None:
                        raise ValueError("evaluation point misses a used variable")
                    acc *= val ** x
            total += acc
        return total

    def restrict(self, vars):
        """Reindex onto a (super- or sub-)signature; dropped vars must be unused."""
        vars = tuple(vars)
        pos = {v: i for i, v in enumerate(vars)}
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, x in enumerate(e):
                if x:
                    j = pos.get(self.vars[i])
                    if j is None:
                        raise ValueError(f"variable {self.vars[i]!r} in use, cannot drop")
                    ne[j] = x
            terms[tuple(ne)] = c
        return MultiPoly(vars, terms, self.order)

    # ---------- normal forms ----------

    def content(self):
        """Rational content: gcd of numerators over lcm of denominators, sign of lead."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, abs(c.numerator))
            den = den * c.denominator // int_gcd(den, c.denominator)
        cont = Fraction(num, den)
        _, lc = self.leading()
        return cont if lc > 0 else -cont

    def primitive(self):
        """Integer-primitive form with positive leading coefficient."""
        cont = self.content()
        if not cont:
            return self
        return self.scale(1 / cont)

    def monic(self, order=None):
        if not self.terms:
            return self
        _, lc = self.leading(order)
        return self.scale(1 / lc)

    # ---------- printing ----------

    def to_str(self, names=None):
        if not self.terms:
            return "0"
        names = names or [str(v) for v in self.vars]
        pieces = []
        for e, c in self.sorted_terms():
            factors = []
            for name, x in zip(names, e):
                if x == 1:
                    factors.append(name)
                elif x > 1:
                    factors.append(f"{name}^{x}")
            body = "*".join(factors)
            if not body:
                chunk = str(abs(c))
            elif abs(c) == 1:
                chunk = body
            else:
                chunk = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, chunk))
        first_sign, first_chunk = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_chunk
        for sign, chunk in pieces[1:]:
            out += f" {sign} {chunk}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.to_str()})"


# ---------- gcd machinery ----------


def _univariate_gcd(a, b, i):
    """Monic gcd of polynomials effectively univariate in variable index i."""
    def coeffs(p):
        d = p.degree_in(i)
        out = [Fraction(0)] * (d + 1)
        for e, c in p.terms.items():
            out[e[i]] += c
        return out

    fa, fb = coeffs(a), coeffs(b)

    def strip(f):
        while f and not f[-1]:
            f.pop()
        return f

    def dense_mod(f, g):
        f = f[:]
        while True:
            strip(f)
            if len(f) < len(g):
                return f
            q = f[-1] / g[-1]
            shift = len(f) - len(g)
            for k in range(len(g)):
                f[shift + k] -= q * g[k]
            f.pop()

    fa, fb = strip(fa), strip(fb)
    while fb:
        fa, fb = fb, dense_mod(fa, fb)
    lead = fa[-1]
    terms = {}
    base = [0] * len(a.vars)
    for k, c in enumerate(fa):
        if c:
            e = base[:]
            e[i] = k
            terms[tuple(e)] = c / lead
    return MultiPoly(a.vars, terms, a.order)


def _to_univariate(p, i):
    """View p as {exp in var i: coefficient MultiPoly free of var i}."""
    buckets = {}
    for e, c in p.terms.items():
        k = e[i]
        ne = list(e)
        ne[i] = 0
        buckets.setdefault(k, {})[tuple(ne)] = c
    return {
        k: MultiPoly(p.vars, terms, p.order) for k, terms in buckets.items()
    }


def _from_univariate(coeffs, i, vars, order):
    total = MultiPoly.zero(vars, order)
    for k, poly in coeffs.items():
        e = [0] * len(vars)
        e[i] = k
        total = total + poly.mul_monomial(tuple(e))
    return total


def _pseudo_rem(a, b, i):
    """Pseudo-remainder of a by b with respect to variable index i."""
    da, db = a.degree_in(i), b.degree_in(i)
    bu = _to_univariate(b, i)
    lb = bu[db]
    r = a
    while r.terms and r.degree_in(i) >= db:
        dr = r.degree_in(i)
        ru = _to_univariate(r, i)
        lr = ru[dr]
        shift = [0] * len(a.vars)
        shift[i] = dr - db
        r = r * lb - b * lr.mul_monomial(tuple(shift))
    return r


def poly_gcd(a, b):
    """Monic gcd of two polynomials over Q (recursive primitive remainder sequence)."""
    if a.vars != b.vars:
        raise SignatureMismatchError("gcd needs a common signature")
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    support = a.support_indices() | b.support_indices()
    if not support:
        return MultiPoly.const(a.vars, 1, a.order)
    sa, sb = a.support_indices(), b.support_indices()
    if not (sa & sb):
        return MultiPoly.const(a.vars, 1, a.order)
    # effectively univariate: dense Euclid is much faster
    if len(support) == 1:
        (i,) = support
        return _univariate_gcd(a, b, i)
    i = min(support)

    def content_pp(p):
        cu = _to_univariate(p, i)
        cont = None
        for poly in cu.values():
            cont = poly.monic() if cont is None else poly_gcd(cont, poly)
            if cont.is_constant():
                cont = MultiPoly.const(p.vars, 1, p.order)
                break
        pp = p if cont.is_constant() and cont.constant_value() == 1 else p.exact_div(cont)
        return cont, pp

    ca, pa = content_pp(a)
    cb, pb = content_pp(b)
    cont = poly_gcd(ca, cb)
    # primitive remainder sequence in the main variable
    f, g = pa, pb
    if f.degree_in(i) < g.degree_in(i):
        f, g = g, f
    while True:
        r = _pseudo_rem(f, g, i)
        if not r.terms:
            break
        _, r = content_pp(r)
        f, g = g, r
    return (cont * content_pp(g)[1]).monic()


def poly_lcm(a, b):
    if not a.terms or not b.terms:
        return MultiPoly.zero(a.vars, a.order)
    return (a * b).exact_div(poly_gcd(a, b)).monic()
