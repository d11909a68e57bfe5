from fractions import Fraction

from delta_kernel.heights import (
    OdePoly,
    height_axioms_check,
    height_ratfunc,
    rational_solution_search,
    verify_ode_solution,
)
from delta_kernel.multipoly import MultiPoly
from delta_kernel.ratfunc import RatFunc

TSIG = ("t",)
T = MultiPoly.var(TSIG, "t")
SIG = ("t", "x", "y")
X = MultiPoly.var(SIG, "x")
Y = MultiPoly.var(SIG, "y")


def random_ratfunc(rng, max_deg=6):
    def poly():
        terms = {}
        for _ in range(rng.randint(1, 4)):
            e = (rng.randint(0, max_deg),)
            c = Fraction(rng.randint(-5, 5))
            if c:
                terms[e] = c
        return MultiPoly(TSIG, terms)

    num = poly()
    den = poly()
    while den.is_zero():
        den = poly()
    return RatFunc(num, den)


class TestHeight:
    def test_examples(self):
        assert height_ratfunc(RatFunc(T * T + 1, T - 1)) == 2
        assert height_ratfunc(RatFunc.from_const(TSIG, 9)) == 0
        assert height_ratfunc(RatFunc(MultiPoly.const(TSIG, 1), T - 3)) == 1

    def test_zero_iff_constant(self, rng):
        for _ in range(100):
            g = random_ratfunc(rng)
            assert (height_ratfunc(g) == 0) == g.is_constant()


class TestVerify:
    def test_pole_solution(self):
        ode = OdePoly(Y + X * X)
        assert verify_ode_solution(ode, RatFunc(MultiPoly.const(TSIG, 1), T - 3))

    def test_non_solution(self):
        ode = OdePoly(Y - X)
        assert not verify_ode_solution(ode, RatFunc(T))

    def test_zero_solution(self):
        ode = OdePoly(Y + X * X)
        assert verify_ode_solution(ode, RatFunc(MultiPoly.zero(TSIG)))


class TestSearch:
    def test_riccati_families(self):
        ode = OdePoly(Y + X * X)
        rep = rational_solution_search(ode, 2)
        texts = {g.to_str() for g, _ in rep.solutions}
        assert "0" in texts
        assert "1/t" in texts and "1/(t - 1)" in texts
        assert rep.observed_bound == 1
        assert (0, 0) in rep.families and (0, 1) in rep.families

    def test_exponential_has_only_zero(self):
        ode = OdePoly(Y - X)
        rep = rational_solution_search(ode, 3)
        assert len(rep.solutions) == 1
        assert rep.solutions[0][0].is_zero()

    def test_direct_integration(self):
        ode = OdePoly(Y - 1)
        rep = rational_solution_search(ode, 2)
        assert rep.observed_bound == 1
        assert all(h == 1 for _, h in rep.solutions)
        assert {g.to_str() for g, _ in rep.solutions} >= {"t", "t + 1", "t - 1"}

    def test_monotone_in_bound(self):
        ode = OdePoly(Y + X * X)
        r1 = rational_solution_search(ode, 1)
        r2 = rational_solution_search(ode, 2)
        assert r1.solution_set() <= r2.solution_set()

    def test_everything_reverified(self):
        ode = OdePoly(Y + X * X)
        rep = rational_solution_search(ode, 2)
        for g, h in rep.solutions:
            assert verify_ode_solution(ode, g)
            assert height_ratfunc(g) == h
        assert not any("failed" in n for n in rep.notes)

    def test_experimental_partial_case(self):
        # x = t1 + t2 solves y1 - 1 = 0 and y2 - 1 = 0 jointly via P = y1 - y2
        tvars = ("t1", "t2")
        sig = tvars + ("x", "y1", "y2")
        y1 = MultiPoly.var(sig, "y1")
        y2 = MultiPoly.var(sig, "y2")
        ode = OdePoly(y1 - y2, tvars=tvars)
        assert ode.experimental
        t1 = MultiPoly.var(tvars, "t1")
        t2 = MultiPoly.var(tvars, "t2")
        assert verify_ode_solution(ode, RatFunc(t1 + t2))
        assert not verify_ode_solution(ode, RatFunc(t1 + 2 * t2))
        rep = rational_solution_search(ode, 1)
        texts = {g.to_str() for g, _ in rep.solutions}
        assert "t1 + t2" in texts
        assert rep.experimental


class TestAxioms:
    def test_power_preserves_coprimality(self):
        g = RatFunc(T - 1, T + 1)
        assert height_ratfunc(g ** 3) == 3

    def test_inverse(self):
        assert height_ratfunc(RatFunc(T * T).inverse()) == 2

    def test_cancellation_bound(self):
        f, g = RatFunc(T), RatFunc(-T)
        assert height_ratfunc(f + g) == 0 <= 2

    def test_random_samples(self, rng):
        samples = [(random_ratfunc(rng), random_ratfunc(rng)) for _ in range(100)]
        chk = height_axioms_check(samples, powers=(2, 3))
        assert chk.ok
        assert chk.checked == 100
