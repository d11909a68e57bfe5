"""Prolongation of differential systems into directed towers of algebraic
varieties, the affine solve for top-order coordinates, and extraction of the
variety-with-affine-subbundle data at the computed level bound.

Frames list every algebraic indeterminate up to a given order in canonical
rank order.  Prolonged ideals collect all derivatives of the defining
polynomials that fit inside a frame; their honest geometric counterpart is
the saturation by the separants, realized through a single Rabinowitsch
variable.  At levels above every defining order, each non-basis top-order
coordinate is a degree-one consequence of exactly one derived polynomial,
which yields the affine fiber model and, at level bound + 1, the fiberwise
affine subbundle of the tangent spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diffring import AlgIndet, AutoreducedSet
from .groebner import GREVLEX, buchberger, dimension_of, normal_form, saturate
from .initialsets import ExpPoint, leaders_to_exponents, prolongation_bound, _simplex
from .multipoly import MultiPoly
from .ratfunc import RatFunc


def nabla_frame(m, n, t):
    """Algebraic indeterminates of order <= t in increasing canonical rank."""
    if t < 0:
        raise ValueError("negative prolongation level")
    frame = [
        AlgIndet(r, j) for j in range(1, n + 1) for r in _simplex(m, t)
    ]
    frame.sort(key=lambda v: v.rank_key())
    return tuple(frame)


def _frame_sig(frame):
    """Polynomial signature for a frame: highest rank first, so leading terms
    of derived polynomials sit on their leaders."""
    return tuple(sorted(frame, key=lambda v: v.rank_key(), reverse=True))


def _require_constant_field(ctx):
    if ctx.coeff_gens and not ctx.is_constant_field():
        raise ValueError(
            "prolongation requires a constant coefficient field "
            "(all derivation actions on the t-generators must be zero)"
        )


def _as_frame_poly(f, frame):
    """Body of a differential polynomial over the frame signature."""
    used = f.body.support_indices()
    for i in used:
        if not isinstance(f.body.vars[i], AlgIndet):
            raise ValueError(
                "prolongation works over rational constants; a coefficient "
                "generator occurs in the system"
            )
    return f.body.restrict(_frame_sig(frame))


@dataclass
class ProlongedIdeal:
    """Level-t generators theta(f), ord(theta f) <= t, over the frame ring.

    The geometric object is the saturation by the separant set; dimension()
    computes the staircase dimension of that saturation.
    """

    level: int
    frame: tuple
    generators: list
    provenance: list  # (element index, theta) per generator
    separants: list  # nonconstant separants over the frame
    _sat_cache: list = field(default=None, repr=False)

    def saturated_generators(self):
        # one Rabinowitsch elimination against the product of the separants
        if self._sat_cache is None:
            gens = self.generators
            if self.separants:
                product = self.separants[0]
                for h in self.separants[1:]:
                    product = product * h
                gens = saturate(gens, product.primitive())
            self._sat_cache = gens
        return self._sat_cache

    def groebner_basis(self, order=GREVLEX):
        return buchberger(self.saturated_generators() or
                          [MultiPoly.zero(_frame_sig(self.frame))], order)

    def dimension(self):
        return dimension_of(self.saturated_generators(), len(self.frame))


def prolong_generators(polys, t):
    """Frame polynomials theta(f) with ord(theta f) <= t for arbitrary
    generator lists (no autoreducedness required)."""
    polys = list(polys)
    ctx = polys[0].ctx
    _require_constant_field(ctx)
    frame = nabla_frame(ctx.m, ctx.n, t)
    gens, provenance = [], []
    for idx, f in enumerate(polys):
        room = t - f.order()
        if room < 0:
            continue
        for theta in _simplex(ctx.m, room):
            g = f
            for k, times in enumerate(theta, start=1):
                g = ctx.d(k, g, times)
            gens.append(_as_frame_poly(g, frame))
            provenance.append((idx, theta))
    return frame, gens, provenance


def prolong_ideal(aset, t):
    """The level-t prolongation of an autoreduced system."""
    if not isinstance(aset, AutoreducedSet):
        aset = AutoreducedSet(aset)
    if t < aset.max_order():
        raise ValueError(
            f"prolongation level {t} below the maximum defining order {aset.max_order()}"
        )
    frame, gens, provenance = prolong_generators(aset.elements, t)
    separants = []
    for f in aset.elements:
        s = f.separant()
        if not s.is_in_coeff_field():
            sp = _as_frame_poly(s, frame).primitive()
            if sp not in separants:
                separants.append(sp)
    return ProlongedIdeal(
        level=t,
        frame=frame,
        generators=gens,
        provenance=provenance,
        separants=separants,
    )


class AffineExpr:
    """Affine-linear expression c0 + sum(c_b * b) over order-t basis
    coordinates b, with rational-function coefficients in the lower frame."""

    __slots__ = ("const", "linear")

    def __init__(self, const, linear=None):
        self.const = const
        self.linear = dict(linear or {})

    def scaled(self, c):
        return AffineExpr(self.const * c, {b: v * c for b, v in self.linear.items()})

    def plus(self, other):
        linear = dict(self.linear)
        for b, v in other.linear.items():
            cur = linear.get(b)
            linear[b] = v if cur is None else cur + v
        return AffineExpr(self.const + other.const, {b: v for b, v in linear.items() if v})

    def free_coordinates(self):
        return [b for b, v in self.linear.items() if v]

    def to_str(self):
        bits = []
        if self.const:
            bits.append(self.const.to_str())
        for b in sorted(self.linear, key=lambda v: v.rank_key()):
            v = self.linear[b]
            if v:
                bits.append(f"({v.to_str()})*{b!r}")
        return " + ".join(bits) if bits else "0"

    def __repr__(self):
        return f"AffineExpr({self.to_str()})"


@dataclass
class AffineFiberModel:
    """Order-t coordinates over the level-(t-1) function field.

    Every non-basis order-t coordinate carries exactly one affine expression
    in the order-t basis coordinates; the denominators that appear are
    separant products (recorded per expression before cancellation).
    """

    level: int
    frame_low: tuple  # coordinates of order <= t-1
    basis_coords: tuple  # order-t coordinates inside B
    expressions: dict  # non-basis order-t AlgIndet -> AffineExpr
    separants_used: dict  # same keys -> tuple of element indices inverted

    def fiber_dimension(self):
        return len(self.basis_coords)


def affine_fiber(aset, t):
    """Solve every non-basis order-t coordinate affinely over level t-1.

    Walks the order-t coordinates in increasing rank, mirroring the degree
    one structure of derived polynomials: the coordinate is the leader of
    theta(f) with coefficient the separant of f, everything else has lower
    rank and is already solved or basic.
    """
    if not isinstance(aset, AutoreducedSet):
        aset = AutoreducedSet(aset)
    ctx = aset.ctx
    _require_constant_field(ctx)
    if t <= aset.max_order():
        raise ValueError(
            f"affine solve needs a level strictly above the maximum order {aset.max_order()}"
        )
    rep = leaders_to_exponents(aset)
    frame_low = nabla_frame(ctx.m, ctx.n, t - 1)
    low_sig = _frame_sig(frame_low)
    order_t = [v for v in nabla_frame(ctx.m, ctx.n, t) if v.order == t]
    order_t.sort(key=lambda v: v.rank_key())
    basis = tuple(v for v in order_t if rep.contains(ExpPoint(v.theta, v.var)))
    leaders = aset.leaders()

    def low_ratfunc(poly_body):
        return RatFunc(poly_body.restrict(low_sig))

    frame_t = _frame_sig(nabla_frame(ctx.m, ctx.n, t))
    expressions = {}
    separants_used = {}
    for v in order_t:
        if v in basis:
            continue
        candidates = [
            i
            for i, u in enumerate(leaders)
            if v.is_derivative_of(u)
        ]
        if not candidates:
            raise ValueError(f"coordinate {v!r} is neither basic nor reducible")
        i = min(candidates, key=lambda idx: aset.elements[idx].rank())
        f = aset.elements[i]
        u = leaders[i]
        theta = tuple(a - b for a, b in zip(v.theta, u.theta))
        g = f
        for k, times in enumerate(theta, start=1):
            g = ctx.d(k, g, times)
        sep = f.separant()
        if sep.is_zero():
            raise ZeroDivisionError("identically zero separant: degenerate system")
        sep_rf = low_ratfunc(sep.body)
        # split g = sep*v + (linear part in other order-t coords) + constant
        expr = AffineExpr(RatFunc(MultiPoly.zero(low_sig)))
        used = [i]
        gb = g.body.restrict(frame_t)
        top = [w for w in gb.vars if isinstance(w, AlgIndet) and w.order == t]
        const_terms = {}
        coeff_terms = {w: {} for w in top}
        for e, c in gb.terms.items():
            hits = [
                (idx, w)
                for idx, w in enumerate(gb.vars)
                if w in coeff_terms and e[idx]
            ]
            if not hits:
                const_terms[e] = c
                continue
            if len(hits) > 1 or e[hits[0][0]] > 1:
                raise AssertionError("derived polynomial is not degree one at top order")
            idx, w = hits[0]
            ne = list(e)
            ne[idx] = 0
            coeff_terms[w][tuple(ne)] = c
        def low(poly_terms):
            return low_ratfunc(MultiPoly(gb.vars, poly_terms, gb.order))

        expr = expr.plus(AffineExpr((-low(const_terms)) / sep_rf))
        for w in top:
            if w == v:
                continue
            cw = coeff_terms[w]
            if not cw:
                continue
            coef = (-low(cw)) / sep_rf
            if w in basis:
                expr = expr.plus(AffineExpr(RatFunc(MultiPoly.zero(low_sig)), {w: coef}))
            else:
                sub = expressions[w]
                expr = expr.plus(sub.scaled(coef))
                used.extend(separants_used[w])
        expressions[v] = expr
        separants_used[v] = tuple(sorted(set(used)))
    return AffineFiberModel(
        level=t,
        frame_low=frame_low,
        basis_coords=basis,
        expressions=expressions,
        separants_used=separants_used,
    )


def fiber_residuals(aset, model, ideal_low=None):
    """Exact check of the affine solve against the prolonged ideal.

    Substitutes the fiber expressions into every level-t generator and
    reduces modulo the saturated level-(t-1) ideal; returns the list of
    normal forms (all zero when the model is consistent).
    """
    if not isinstance(aset, AutoreducedSet):
        aset = AutoreducedSet(aset)
    t = model.level
    ctx = aset.ctx
    pid = prolong_ideal(aset, t)
    if ideal_low is None:
        ideal_low = prolong_ideal(aset, t - 1)
    gb_low = ideal_low.groebner_basis()
    ext = _frame_sig(nabla_frame(ctx.m, ctx.n, t))
    residuals = []
    for gen in pid.generators:
        top = [
            v
            for i, v in enumerate(gen.vars)
            if isinstance(v, AlgIndet) and v.order == t and gen.degree_in(i) > 0
        ]
        if not top:
            continue
        # clear denominators: multiply by the product of expression denominators
        total = RatFunc(MultiPoly.zero(ext))
        for e, c in gen.terms.items():
            factor = RatFunc.from_const(ext, c)
            for i, x in enumerate(e):
                if not x:
                    continue
                v = gen.vars[i]
                if isinstance(v, AlgIndet) and v.order == t and v not in model.basis_coords:
                    sub = model.expressions[v]
                    val = _expr_as_ratfunc(sub, ext)
                else:
                    val = RatFunc.var(ext, v)
                factor = factor * val ** x
            total = total + factor
        lifted = [g.restrict(ext) for g in gb_low.generators]
        residuals.append(normal_form(total.num, lifted, GREVLEX) if lifted else total.num)
    return residuals


def _expr_as_ratfunc(expr, ext):
    total = RatFunc(MultiPoly.zero(ext))
    if expr.const:
        total = total + RatFunc(expr.const.num.restrict(ext), expr.const.den.restrict(ext))
    for b, coef in expr.linear.items():
        if coef:
            total = total + RatFunc(coef.num.restrict(ext), coef.den.restrict(ext)) * RatFunc.var(ext, b)
    return total


@dataclass
class DVarietyData:
    """Algebraic variety at the level bound plus the affine subbundle of the
    m-fold tangent bundle read off from the next level."""

    level: int
    variety: ProlongedIdeal
    fibers: AffineFiberModel
    fiber_dim: int
    bound: object  # LevelBound breakdown

    def tangent_section(self):
        """Affine expression of each tangent coordinate (coordinate, k).

        For a frame coordinate x of order <= level and a derivation k the
        tangent value is the coordinate one step further: a known frame
        coordinate, a free fiber parameter, or a solved fiber expression.
        """
        ext = _frame_sig(self.fibers.frame_low)
        out = {}
        for x in self.variety.frame:
            for k in range(1, len(x.theta) + 1):
                target = x.derive(k)
                if target.order <= self.level:
                    out[(x, k)] = AffineExpr(RatFunc.var(ext, target))
                elif target in self.fibers.basis_coords:
                    out[(x, k)] = AffineExpr(
                        RatFunc(MultiPoly.zero(ext)),
                        {target: RatFunc.from_const(ext, 1)},
                    )
                else:
                    out[(x, k)] = self.fibers.expressions[target]
        return out


def extract_dvariety(aset, check_oracle=True):
    """Variety and affine fiber data at the computed level bound.

    The fiber dimension from initial-set counts must match the Groebner
    oracle's dimension jump; a mismatch signals that the input was not a
    characteristic set and raises.
    """
    if not isinstance(aset, AutoreducedSet):
        aset = AutoreducedSet(aset)
    bound = prolongation_bound(aset)
    level = bound.level
    rep = leaders_to_exponents(aset)
    variety = prolong_ideal(aset, level)
    fibers = affine_fiber(aset, level + 1)
    r_counts = rep.count_up_to(level + 1) - rep.count_up_to(level)
    if r_counts != fibers.fiber_dimension():
        raise ValueError(
            f"fiber rank mismatch: counts give {r_counts}, model has {fibers.fiber_dimension()}"
        )
    if check_oracle:
        upper = prolong_ideal(aset, level + 1)
        jump = upper.dimension() - variety.dimension()
        if jump != r_counts:
            raise ValueError(
                f"non-characteristic input: oracle dimension jump {jump} != {r_counts}"
            )
    return DVarietyData(
        level=level,
        variety=variety,
        fibers=fibers,
        fiber_dim=r_counts,
        bound=bound,
    )
