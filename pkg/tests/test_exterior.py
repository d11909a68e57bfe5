from fractions import Fraction

import pytest

from delta_kernel.exterior import (
    ExtVector,
    factorization_implication_check,
    k_dimension,
    q_dimension,
    span_probe,
    wedge,
    wedge_all,
)
from delta_kernel.multipoly import MultiPoly
from delta_kernel.ratfunc import RatFunc


def random_one_form(rng, dim, span=3):
    coeffs = {}
    for i in range(1, dim + 1):
        c = rng.randint(-span, span)
        if c:
            coeffs[(i,)] = Fraction(c)
    return ExtVector(dim, 1, coeffs)


class TestWedge:
    def test_antisymmetry(self):
        e1, e2 = ExtVector.basis(4, (1,)), ExtVector.basis(4, (2,))
        assert wedge(e1, e2) == ExtVector.basis(4, (1, 2))
        assert wedge(e2, e1) == ExtVector.basis(4, (1, 2), Fraction(-1))

    def test_square_of_grade_one_vanishes(self):
        v = ExtVector(4, 1, {(1,): Fraction(2), (3,): Fraction(-1)})
        assert wedge(v, v).is_zero()

    def test_bilinear_expansion(self):
        e1, e2 = ExtVector.basis(4, (1,)), ExtVector.basis(4, (2,))
        assert wedge(e1 + e2, e1 - e2) == ExtVector.basis(4, (1, 2), Fraction(-2))

    def test_ambient_mismatch(self):
        with pytest.raises(ValueError):
            wedge(ExtVector.basis(3, (1,)), ExtVector.basis(4, (1,)))

    def test_axioms_random(self, rng):
        for _ in range(200):
            dim = rng.randint(2, 6)
            a = random_one_form(rng, dim)
            b = random_one_form(rng, dim)
            c = random_one_form(rng, dim)
            assert wedge(a, b + c) == wedge(a, b) + wedge(a, c)
            assert wedge(a, a).is_zero()
            ab = wedge(a, b)
            # graded commutation for (1,1) and (1,2)
            assert wedge(b, a) == ab.scaled(Fraction(-1))
            assert wedge(ab, c) == wedge(c, ab)  # grades 2*1: sign +1
            assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


class TestImplication:
    def test_confirmed_instance(self):
        e1, e2 = ExtVector.basis(4, (1,)), ExtVector.basis(4, (2,))
        omega = wedge(e1, e2)
        v = factorization_implication_check([e1, e2], omega, e1 + e2)
        assert v.status == "confirmed" and v.holds

    def test_vacuous_instance(self):
        e1, e2, e3 = (ExtVector.basis(4, (i,)) for i in (1, 2, 3))
        omega = wedge(e1, e2)
        v = factorization_implication_check([e1, e2], omega, e3)
        assert v.status == "vacuous"

    def test_zero_omega_trivial(self):
        e1, e2 = ExtVector.basis(4, (1,)), ExtVector.basis(4, (2,))
        v = factorization_implication_check([e1, e2], ExtVector.zero(4, 2), e1)
        assert v.status == "trivial"

    def test_dependent_alphas_flagged(self):
        e1 = ExtVector.basis(4, (1,))
        v = factorization_implication_check([e1, e1.scaled(Fraction(2))], e1, e1)
        assert v.status == "precondition_failed"

    def test_never_refuted_random(self, rng):
        confirmed = 0
        for _ in range(200):
            dim = rng.randint(2, 6)
            ell = rng.randint(1, dim - 1)
            alphas = [random_one_form(rng, dim) for _ in range(ell)]
            parts = []
            for _ in range(rng.randint(1, ell)):
                v = ExtVector.zero(dim, 1)
                for a in alphas:
                    v = v + a.scaled(Fraction(rng.randint(-2, 2)))
                parts.append(v)
            omega = wedge_all(parts)
            beta = ExtVector.zero(dim, 1)
            for a in alphas:
                beta = beta + a.scaled(Fraction(rng.randint(-2, 2)))
            verdict = factorization_implication_check(alphas, omega, beta)
            assert verdict.status != "refuted"
            if verdict.status == "confirmed":
                confirmed += 1
        assert confirmed > 20


class TestSpanProbe:
    def test_pairs_span(self):
        e1, e2 = ExtVector.basis(4, (1,)), ExtVector.basis(4, (2,))
        rep = span_probe([e1, e2], 2)
        assert rep.dim_q_wedges == 1
        assert rep.wedge_count == 1

    def test_tower_dimensions_differ(self):
        tsig = ("t",)
        t = RatFunc(MultiPoly.var(tsig, "t"))
        one = RatFunc.from_const(tsig, 1)
        u1 = ExtVector(3, 1, {(1,): one})
        u2 = ExtVector(3, 1, {(1,): t})
        rep = span_probe([u1, u2], 1)
        assert rep.dim_q_sample == 2
        assert rep.dim_k_sample == 1

    def test_zero_space(self):
        rep = span_probe([ExtVector.zero(3, 1)], 1)
        assert rep.dim_q_wedges == 0 and rep.dim_k_sample == 0

    def test_ell_zero_rejected(self):
        with pytest.raises(ValueError):
            span_probe([ExtVector.basis(3, (1,))], 0)

    def test_coefficients_confined(self):
        # dependent triple: u3 = t*u1 + u2 lies in span_K{u1, u2}
        tsig = ("t",)
        t = RatFunc(MultiPoly.var(tsig, "t"))
        one = RatFunc.from_const(tsig, 1)
        u1 = ExtVector(3, 1, {(1,): one})
        u2 = ExtVector(3, 1, {(2,): one})
        u3 = ExtVector(3, 1, {(1,): t, (2,): one})
        rep = span_probe([u1, u2, u3], 3)
        assert rep.dim_q_wedges == 0  # all triples are dependent
        rep2 = span_probe([u1, u2, u3], 2)
        assert rep2.dim_q_wedges >= 1
        in_span = [entry for entry in rep2.membership_checks if entry[1]]
        assert in_span
        assert rep2.all_coefficients_confined

    def test_q_and_k_dimensions(self):
        e1 = ExtVector.basis(2, (1,))
        assert q_dimension([e1, e1.scaled(Fraction(2))]) == 1
        assert k_dimension([e1, e1.scaled(Fraction(2))]) == 1
