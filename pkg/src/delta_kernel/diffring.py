"""Differential polynomial rings with m commuting derivations.

A differential polynomial is an ordinary polynomial in algebraic
indeterminates: symbols carrying a derivative multi-index (e1..em) and a
dependent-variable index j.  The canonical ranking compares
(order, variable index, em, ..., e1) lexicographically.  On top of the
ranking sit leaders, separants, initials, autoreduced sets, and partial
reduction with exact certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .multipoly import MultiPoly, SignatureMismatchError


@dataclass(frozen=True)
class AlgIndet:
    """The algebraic indeterminate with derivative exponents theta = (e1..em)
    applied to dependent variable u_var."""

    theta: tuple
    var: int

    @property
    def order(self):
        return sum(self.theta)

    def rank_key(self):
        return (self.order, self.var, *reversed(self.theta))

    def derive(self, k):
        """The indeterminate one derivation step further in direction k (1-based)."""
        e = list(self.theta)
        e[k - 1] += 1
        return AlgIndet(tuple(e), self.var)

    def is_proper_derivative_of(self, other):
        if self.var != other.var or self.theta == other.theta:
            return False
        return all(a >= b for a, b in zip(self.theta, other.theta))

    def is_derivative_of(self, other):
        return self.var == other.var and all(
            a >= b for a, b in zip(self.theta, other.theta)
        )

    def __repr__(self):
        return indet_name(self)


def indet_name(v):
    parts = []
    for k, e in enumerate(v.theta, start=1):
        if e == 1:
            parts.append(f"d{k}")
        elif e > 1:
            parts.append(f"d{k}^{e}")
    parts.append(f"u{v.var}")
    return "*".join(parts)


@dataclass(frozen=True)
class CoeffGen:
    """A coefficient-field generator t_index (transcendental over Q)."""

    index: int

    def __repr__(self):
        return f"t{self.index}"


def rank_compare(v, w):
    """-1, 0, or 1 per the canonical ranking on algebraic indeterminates."""
    if len(v.theta) != len(w.theta):
        raise SignatureMismatchError("indeterminates from different derivation counts")
    a, b = v.rank_key(), w.rank_key()
    return (a > b) - (a < b)


def _var_sort_key(v):
    # signatures list highest rank first; coefficient generators come last,
    # so the term order treats them as the smallest variables
    if isinstance(v, CoeffGen):
        return (1, (), v.index)
    return (0, tuple(-x for x in v.rank_key()), 0)


class DiffContext:
    """Signature of a differential polynomial ring.

    m derivations, n dependent variables, and an optional coefficient field
    Q(t1..ts) whose generators carry a declared polynomial action of each
    derivation (zero action means a constant coefficient field).
    """

    __slots__ = ("m", "n", "coeff_gens", "actions")

    def __init__(self, m, n, coeff_gens=0, actions=None):
        if m < 1 or n < 1:
            raise ValueError("need at least one derivation and one variable")
        self.m = m
        self.n = n
        self.coeff_gens = tuple(CoeffGen(i) for i in range(1, coeff_gens + 1))
        base_sig = self.coeff_gens
        self.actions = {}  # (k, i) -> MultiPoly over the t-generators
        for (k, i), poly in (actions or {}).items():
            if not (1 <= k <= m) or not (1 <= i <= coeff_gens):
                raise ValueError(f"action index ({k},{i}) out of range")
            if not isinstance(poly, MultiPoly):
                raise TypeError("actions must be MultiPoly over the t-generators")
            self.actions[(k, i)] = poly.restrict(base_sig)

    def is_constant_field(self):
        return all(p.is_zero() for p in self.actions.values())

    def action(self, k, gen):
        poly = self.actions.get((k, gen.index))
        return poly

    def __eq__(self, other):
        if not isinstance(other, DiffContext):
            return NotImplemented
        return (
            self.m == other.m
            and self.n == other.n
            and self.coeff_gens == other.coeff_gens
            and self.actions == other.actions
        )

    def __repr__(self):
        return f"DiffContext(m={self.m}, n={self.n}, s={len(self.coeff_gens)})"

    # ---------- element constructors ----------

    def indet(self, theta, var):
        theta = tuple(theta)
        if len(theta) != self.m:
            raise ValueError("derivative index length must equal m")
        if any(e < 0 for e in theta):
            raise ValueError("derivative exponents must be nonnegative")
        if not (1 <= var <= self.n):
            raise ValueError(f"variable index {var} outside 1..{self.n}")
        v = AlgIndet(theta, var)
        body = MultiPoly.var(self._signature((v,)), v)
        return DiffPoly(self, body)

    def u(self, var=1):
        return self.indet((0,) * self.m, var)

    def d(self, k, f, times=1):
        for _ in range(times):
            f = apply_derivation(f, k)
        return f

    def const(self, c):
        sig = self._signature(())
        return DiffPoly(self, MultiPoly.const(sig, c))

    def t(self, index=1):
        gen = CoeffGen(index)
        if gen not in self.coeff_gens:
            raise ValueError(f"coefficient generator t{index} not declared")
        return DiffPoly(self, MultiPoly.var(self._signature(()), gen))

    def _signature(self, indets):
        vars = sorted(set(indets), key=_var_sort_key) + list(self.coeff_gens)
        seen = []
        for v in vars:
            if v not in seen:
                seen.append(v)
        return tuple(seen)


class DiffPoly:
    """A differential polynomial in canonical form.

    The body is a MultiPoly whose signature lists the context's coefficient
    generators followed by exactly the occurring algebraic indeterminates in
    increasing rank.
    """

    __slots__ = ("ctx", "body")

    def __init__(self, ctx, body):
        self.ctx = ctx
        self.body = _canonical_body(ctx, body)

    # ---------- structure ----------

    def indets(self):
        used = self.body.support_indices()
        return [
            v
            for i, v in enumerate(self.body.vars)
            if i in used and isinstance(v, AlgIndet)
        ]

    def is_in_coeff_field(self):
        return not self.indets()

    def is_zero(self):
        return self.body.is_zero()

    def leader(self):
        vs = self.indets()
        if not vs:
            raise ValueError("element of the coefficient field has no leader")
        return max(vs, key=lambda v: v.rank_key())

    def order(self):
        return self.leader().order

    def leading_degree(self):
        u = self.leader()
        return self.body.degree_in(self.body.vars.index(u))

    def rank(self):
        u = self.leader()
        return (u.rank_key(), self.leading_degree())

    def separant(self):
        u = self.leader()
        i = self.body.vars.index(u)
        return DiffPoly(self.ctx, self.body.partial(i))

    def initial(self):
        u = self.leader()
        i = self.body.vars.index(u)
        d = self.body.degree_in(i)
        terms = {}
        for e, c in self.body.terms.items():
            if e[i] == d:
                ne = list(e)
                ne[i] = 0
                terms[tuple(ne)] = c
        return DiffPoly(self.ctx, MultiPoly(self.body.vars, terms, self.body.order))

    def degree_in(self, v):
        if v not in self.body.vars:
            return 0
        return max(0, self.body.degree_in(self.body.vars.index(v)))

    def contains(self, v):
        return self.degree_in(v) > 0

    def coeff_of_power(self, v, d):
        """Coefficient of v**d, as a DiffPoly free of v."""
        if v not in self.body.vars:
            return self if d == 0 else self.ctx.const(0)
        i = self.body.vars.index(v)
        terms = {}
        for e, c in self.body.terms.items():
            if e[i] == d:
                ne = list(e)
                ne[i] = 0
                terms[tuple(ne)] = c
        return DiffPoly(self.ctx, MultiPoly(self.body.vars, terms, self.body.order))

    # ---------- arithmetic ----------

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if self.ctx != other.ctx:
            raise SignatureMismatchError("differential polynomials from different rings")
        if self.body.vars == other.body.vars:
            return self.body, other.body
        merged = self.ctx._signature(
            tuple(v for v in self.body.vars + other.body.vars if isinstance(v, AlgIndet))
        )
        return self.body.restrict(merged), other.body.restrict(merged)

    def __add__(self, other):
        a, b = self._pair(other)
        return DiffPoly(self.ctx, a + b)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly(self.ctx, -self.body)

    def __sub__(self, other):
        a, b = self._pair(other)
        return DiffPoly(self.ctx, a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        return DiffPoly(self.ctx, a * b)

    __rmul__ = __mul__

    def __pow__(self, n):
        return DiffPoly(self.ctx, self.body ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.body == other.body

    def __hash__(self):
        return hash(self.body)

    def __repr__(self):
        return f"DiffPoly({self.to_str()})"

    def to_str(self):
        from .printer import print_diffpoly

        return print_diffpoly(self)


def _canonical_body(ctx, body):
    indets = [v for v in body.vars if isinstance(v, AlgIndet)]
    for v in indets:
        if len(v.theta) != ctx.m or not (1 <= v.var <= ctx.n):
            raise ValueError(f"indeterminate {v!r} outside the ring signature")
    used = body.support_indices()
    keep = tuple(
        v
        for i, v in enumerate(body.vars)
        if isinstance(v, CoeffGen) or i in used
    )
    sig = ctx._signature(tuple(v for v in keep if isinstance(v, AlgIndet)))
    if body.vars == sig:
        return body
    return body.restrict(sig)


def apply_derivation(f, k):
    """Formal total derivative of f in direction k (1-based).

    Acts on coefficient generators through the declared action, on each
    algebraic indeterminate by raising its k-th derivative exponent, and
    extends by the Leibniz rule.
    """
    ctx = f.ctx
    if not (1 <= k <= ctx.m):
        raise ValueError(f"derivation index {k} outside 1..{ctx.m}")
    body = f.body
    vars = body.vars
    # target signature: existing indets plus their k-derivatives
    new_indets = [v for v in vars if isinstance(v, AlgIndet)]
    new_indets += [v.derive(k) for v in new_indets]
    sig = ctx._signature(tuple(new_indets))
    src = body.restrict(sig)
    out = MultiPoly.zero(sig, src.order)
    for e, c in src.terms.items():
        for i, exp in enumerate(e):
            if not exp:
                continue
            v = sig[i]
            if isinstance(v, CoeffGen):
                act = ctx.action(k, v)
                if act is None or act.is_zero():
                    continue
                dv = act.restrict(sig)
            else:
                dv = MultiPoly.var(sig, v.derive(k), src.order)
            ne = list(e)
            ne[i] -= 1
            out = out + dv.mul_monomial(tuple(ne), c * exp)
    return DiffPoly(ctx, out)


def poly_rank_compare(f, g):
    """-1, 0, 1 on the rank (leader, leading degree); coefficient-field
    elements rank below everything else."""
    cf, cg = f.is_in_coeff_field(), g.is_in_coeff_field()
    if cf and cg:
        return 0
    if cf:
        return -1
    if cg:
        return 1
    a, b = f.rank(), g.rank()
    return (a > b) - (a < b)


def set_rank_compare(A, B):
    """Ranking on finite sets of differential polynomials.

    Written in nondecreasing rank, A < B when some prefix agrees in rank and
    A's next element ranks lower, or when A properly extends a rank-equal
    prefix of the whole of B (longer is lower in that case).
    """
    a = sorted(_elements(A), key=_rank_sort_key)
    b = sorted(_elements(B), key=_rank_sort_key)
    for fa, fb in zip(a, b):
        c = poly_rank_compare(fa, fb)
        if c:
            return c
    if len(a) == len(b):
        return 0
    return -1 if len(a) > len(b) else 1


def _elements(s):
    return s.elements if isinstance(s, AutoreducedSet) else tuple(s)


def _rank_sort_key(f):
    if f.is_in_coeff_field():
        return (0, (), 0)
    return (1, f.leader().rank_key(), f.leading_degree())


def is_autoreduced(polys):
    """Pairwise autoreducedness check with a violation witness.

    Returns (True, None) or (False, (i, j, reason)): reason says whether a
    proper derivative of the leader of element i occurs in element j, or the
    leader itself occurs in j with too high a degree.
    """
    polys = list(_elements(polys))
    for f in polys:
        if f.is_in_coeff_field():
            return False, (polys.index(f), polys.index(f), "element lies in the coefficient field")
    for i, f in enumerate(polys):
        uf, df = f.leader(), f.leading_degree()
        for j, g in enumerate(polys):
            if i == j:
                continue
            for v in g.indets():
                if v.is_proper_derivative_of(uf):
                    return False, (i, j, f"proper derivative {v!r} of leader {uf!r} occurs")
            dg = g.degree_in(uf)
            if dg >= df:
                return False, (i, j, f"leader {uf!r} occurs with degree {dg} >= {df}")
    return True, None


class AutoreducedSet:
    """A finite autoreduced set, stored in increasing rank."""

    __slots__ = ("elements",)

    def __init__(self, polys):
        polys = sorted(polys, key=_rank_sort_key)
        ok, witness = is_autoreduced(polys)
        if not ok:
            raise ValueError(f"not autoreduced: {witness[2]} (elements {witness[0]}, {witness[1]})")
        if not polys:
            raise ValueError("autoreduced set must be nonempty")
        self.elements = tuple(polys)

    @property
    def ctx(self):
        return self.elements[0].ctx

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def max_order(self):
        return max(f.order() for f in self.elements)

    def leaders(self):
        return [f.leader() for f in self.elements]

    def __repr__(self):
        return f"AutoreducedSet({list(self.elements)!r})"


# ---------- Ritt-Kolchin reduction ----------


@dataclass
class ReductionStep:
    element: int  # index into the autoreduced set
    theta: tuple  # derivative applied to that element (all zeros = none)
    quotient: DiffPoly


@dataclass
class ReductionResult:
    """remainder plus the exact certificate

        (prod_i S_i^sep[i] * I_i^init[i]) * g  =  sum_nu q_nu * theta_nu f_nu + remainder

    which re-expands symbolically via verify().
    """

    input: DiffPoly
    aset: AutoreducedSet
    remainder: DiffPoly
    sep_powers: dict
    init_powers: dict
    steps: list

    def multiplier(self):
        ctx = self.input.ctx
        total = ctx.const(1)
        for i, e in self.sep_powers.items():
            total = total * self.aset.elements[i].separant() ** e
        for i, e in self.init_powers.items():
            total = total * self.aset.elements[i].initial() ** e
        return total

    def verify(self):
        lhs = self.multiplier() * self.input
        rhs = self.remainder
        for step in self.steps:
            f = self.aset.elements[step.element]
            for k, times in enumerate(step.theta, start=1):
                f = self.input.ctx.d(k, f, times)
            rhs = rhs + step.quotient * f
        return lhs == rhs


def _pseudo_reduce_once(r, h, v, ctx):
    """One full pseudo-division of r by h in the indeterminate v.

    h must have positive degree d in v; returns (e, q, rem) with
    lc^e * r == q*h + rem and deg_v(rem) < d, where lc is the coefficient
    of v**d in h.
    """
    d = h.degree_in(v)
    lc = h.coeff_of_power(v, d)
    q = ctx.const(0)
    e = 0
    while True:
        dr = r.degree_in(v)
        if dr < d:
            return e, q, r
        cr = r.coeff_of_power(v, dr)
        vpow = ctx.indet(v.theta, v.var) ** (dr - d)
        q = lc * q + cr * vpow
        r = lc * r - cr * vpow * h
        e += 1


def ritt_reduce(g, aset):
    """Ritt-Kolchin reduction of g with respect to an autoreduced set.

    The remainder contains no proper derivative of any leader and carries
    each leader with degree below its leading degree; the returned
    certificate is an exact identity.  When several elements apply, the
    lowest-ranked applicable element is used first.
    """
    if isinstance(aset, (list, tuple)):
        aset = AutoreducedSet(aset)
    ctx = g.ctx
    if ctx != aset.ctx:
        raise SignatureMismatchError("reduction across different rings")
    leaders = aset.leaders()
    result = ReductionResult(
        input=g,
        aset=aset,
        remainder=g,
        sep_powers={},
        init_powers={},
        steps=[],
    )

    def absorb(mult_index, e, q, theta, kind):
        book = result.sep_powers if kind == "sep" else result.init_powers
        if e:
            book[mult_index] = book.get(mult_index, 0) + e
            base = (
                aset.elements[mult_index].separant()
                if kind == "sep"
                else aset.elements[mult_index].initial()
            )
            scale = base ** e
            for step in result.steps:
                step.quotient = step.quotient * scale
        if not q.is_zero():
            result.steps.append(ReductionStep(mult_index, theta, q))

    while True:
        r = result.remainder
        if r.is_in_coeff_field():
            break
        # highest-ranking indeterminate that is a proper derivative of a leader
        target = None
        for v in sorted(r.indets(), key=lambda w: w.rank_key(), reverse=True):
            hits = [
                i
                for i, u in enumerate(leaders)
                if v.is_proper_derivative_of(u)
            ]
            if hits:
                target = (v, min(hits, key=lambda i: _rank_sort_key(aset.elements[i])))
                break
        if target is not None:
            v, i = target
            f = aset.elements[i]
            theta = tuple(a - b for a, b in zip(v.theta, leaders[i].theta))
            h = f
            for k, times in enumerate(theta, start=1):
                h = ctx.d(k, h, times)
            e, q, rem = _pseudo_reduce_once(r, h, v, ctx)
            result.remainder = rem
            absorb(i, e, q, theta, "sep")
            continue
        # algebraic step: a leader occurring with degree >= its leading degree
        target = None
        for v in sorted(r.indets(), key=lambda w: w.rank_key(), reverse=True):
            for i, u in enumerate(leaders):
                if v == u and r.degree_in(v) >= aset.elements[i].leading_degree():
                    target = (v, i)
                    break
            if target:
                break
        if target is None:
            break
        v, i = target
        e, q, rem = _pseudo_reduce_once(r, aset.elements[i], v, ctx)
        result.remainder = rem
        absorb(i, e, q, (0,) * ctx.m, "init")
    return result


def is_partially_reduced(g, aset):
    """No proper derivative of any leader occurs and every leader occurs
    with degree below its leading degree."""
    leaders = [(f.leader(), f.leading_degree()) for f in _elements(aset)]
    for v in g.indets():
        for u, d in leaders:
            if v.is_proper_derivative_of(u):
                return False
            if v == u and g.degree_in(v) >= d:
                return False
    return True
