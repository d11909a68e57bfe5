"""Exterior algebra over an exact field, with executable instances of the
two linear-algebra lemmas behind the finiteness arguments.

Vectors are sparse maps from strictly increasing index subsets of {1..N} to
field elements (Fraction or RatFunc); signs come from inversion counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .linalg import ExactMatrix, rank
from .multipoly import MultiPoly
from .ratfunc import RatFunc


def _merge_sign(a, b):
    """Merged sorted tuple and the permutation parity; None on collision."""
    out = []
    i = j = 0
    inversions = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None, 0
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            inversions += len(a) - i
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), (-1) ** inversions


class ExtVector:
    """Homogeneous element of an exterior power of an N-dimensional space."""

    __slots__ = ("dim", "grade", "coeffs")

    def __init__(self, dim, grade, coeffs=None):
        self.dim = dim
        self.grade = grade
        clean = {}
        for subset, c in (coeffs or {}).items():
            subset = tuple(subset)
            if len(subset) != grade or list(subset) != sorted(set(subset)):
                raise ValueError(f"index subset {subset} is not strictly increasing of size {grade}")
            if subset and (subset[0] < 1 or subset[-1] > dim):
                raise ValueError(f"index subset {subset} outside 1..{dim}")
            if _nonzero(c):
                clean[subset] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, dim, grade=1):
        return cls(dim, grade, {})

    @classmethod
    def basis(cls, dim, indices, coeff=Fraction(1)):
        indices = tuple(indices)
        return cls(dim, len(indices), {indices: coeff})

    @classmethod
    def from_components(cls, dim, components):
        """Grade-1 vector from a length-N component list."""
        coeffs = {}
        for i, c in enumerate(components, start=1):
            if _nonzero(c):
                coeffs[(i,)] = c
        return cls(dim, 1, coeffs)

    def is_zero(self):
        return not self.coeffs

    def scaled(self, c):
        return ExtVector(
            self.dim, self.grade, {s: v * c for s, v in self.coeffs.items()}
        )

    def __add__(self, other):
        if self.dim != other.dim or self.grade != other.grade:
            raise ValueError("grade or ambient mismatch in addition")
        coeffs = dict(self.coeffs)
        for s, c in other.coeffs.items():
            cur = coeffs.get(s)
            total = c if cur is None else cur + c
            if _nonzero(total):
                coeffs[s] = total
            elif s in coeffs:
                del coeffs[s]
        return ExtVector(self.dim, self.grade, coeffs)

    def __neg__(self):
        return self.scaled(Fraction(-1))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ExtVector):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.grade == other.grade
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return f"ExtVector(0; grade {self.grade})"
        bits = []
        for s in sorted(self.coeffs):
            name = "^".join(f"e{i}" for i in s) if s else "1"
            bits.append(f"({self.coeffs[s]!r})*{name}")
        return "ExtVector(" + " + ".join(bits) + ")"


def _nonzero(c):
    if isinstance(c, RatFunc):
        return not c.is_zero()
    return bool(c)


def wedge(a, b):
    """Graded-anticommutative product with exact permutation signs."""
    if a.dim != b.dim:
        raise ValueError("ambient dimension mismatch in wedge")
    grade = a.grade + b.grade
    out = {}
    for sa, ca in a.coeffs.items():
        for sb, cb in b.coeffs.items():
            merged, sign = _merge_sign(sa, sb)
            if merged is None:
                continue
            c = ca * cb * sign
            cur = out.get(merged)
            total = c if cur is None else cur + c
            if _nonzero(total):
                out[merged] = total
            elif merged in out:
                del out[merged]
    return ExtVector(a.dim, grade, out)


def wedge_all(vectors):
    if not vectors:
        raise ValueError("empty wedge")
    acc = vectors[0]
    for v in vectors[1:]:
        acc = wedge(acc, v)
    return acc


@dataclass
class LemmaVerdict:
    status: str  # confirmed | vacuous | trivial | precondition_failed
    detail: str
    gamma_nonzero: bool = None
    omega_annihilates: bool = None
    beta_gamma_zero: bool = None
    beta_omega_zero: bool = None

    @property
    def holds(self):
        return self.status in ("confirmed", "trivial", "vacuous")


def factorization_implication_check(alphas, omega, beta):
    """Instance check of the factorization lemma for decomposable forms.

    With gamma the wedge of the alphas nonzero and omega annihilated by each
    alpha, beta wedge gamma = 0 must force beta wedge omega = 0.  Failed
    preconditions are reported as verdicts, not faults.
    """
    if omega.is_zero():
        return LemmaVerdict("trivial", "omega = 0, nothing to check", True, True)
    gamma = wedge_all(alphas)
    if gamma.is_zero():
        return LemmaVerdict(
            "precondition_failed",
            "the alphas are linearly dependent (gamma = 0)",
            gamma_nonzero=False,
        )
    for i, a in enumerate(alphas):
        if not wedge(omega, a).is_zero():
            return LemmaVerdict(
                "precondition_failed",
                f"omega ^ alpha_{i + 1} != 0",
                gamma_nonzero=True,
                omega_annihilates=False,
            )
    bg = wedge(beta, gamma)
    if not bg.is_zero():
        return LemmaVerdict(
            "vacuous",
            "beta ^ gamma != 0: hypothesis fails, implication vacuously true",
            True,
            True,
            beta_gamma_zero=False,
        )
    bo = wedge(beta, omega)
    if bo.is_zero():
        return LemmaVerdict(
            "confirmed",
            "beta ^ gamma = 0 and beta ^ omega = 0",
            True,
            True,
            beta_gamma_zero=True,
            beta_omega_zero=True,
        )
    return LemmaVerdict(
        "refuted",
        "beta ^ gamma = 0 but beta ^ omega != 0",
        True,
        True,
        beta_gamma_zero=True,
        beta_omega_zero=False,
    )


# ---------- finite-dimensionality probe over a field tower ----------


def _flatten_over_q(vectors):
    """Q-coordinates of exterior vectors with Q(t)-entries.

    All coordinates are brought over one global polynomial denominator so
    that scaling is Q-linear; each vector becomes a row of rationals indexed
    by (index subset, power of t).
    """
    from .multipoly import poly_lcm

    tsig = _entry_signature(vectors)
    common = MultiPoly.const(tsig, 1)
    for v in vectors:
        for c in v.coeffs.values():
            d = _as_ratfunc(c, tsig).den
            if not d.is_constant():
                common = poly_lcm(common, d)
    columns = {}
    rows = []
    for v in vectors:
        entries = {}
        for s, c in v.coeffs.items():
            c = _as_ratfunc(c, tsig)
            cleared = c.num * common.exact_div(c.den)
            for e, coeff in cleared.terms.items():
                key = (s, e)
                columns.setdefault(key, len(columns))
                entries[key] = coeff
        rows.append(entries)
    mat = [[Fraction(0)] * max(len(columns), 1) for _ in rows]
    for r, entries in enumerate(rows):
        for key, coeff in entries.items():
            mat[r][columns[key]] = coeff
    return mat


def _as_ratfunc(c, tsig):
    if isinstance(c, RatFunc):
        return c
    sig = tsig or ("t",)
    return RatFunc.from_const(sig, c)


def q_dimension(vectors):
    """Dimension over Q of the Q-span of exterior vectors with Q(t) entries."""
    vectors = [v for v in vectors if not v.is_zero()]
    if not vectors:
        return 0
    mat = _flatten_over_q(vectors)
    return rank(ExactMatrix(mat))


def k_dimension(vectors):
    """Dimension over Q(t) of the span (grade-1 vectors)."""
    vectors = [v for v in vectors if not v.is_zero()]
    if not vectors:
        return 0
    dim = vectors[0].dim
    tsig = _entry_signature(vectors)
    one = RatFunc.from_const(tsig, 1)
    rows = []
    for v in vectors:
        rows.append(
            [_as_ratfunc(v.coeffs.get((i,), Fraction(0)), tsig) for i in range(1, dim + 1)]
        )
    return rank(ExactMatrix(rows, one=one))


def _entry_signature(vectors):
    for v in vectors:
        for c in v.coeffs.values():
            if isinstance(c, RatFunc):
                return c.num.vars
    return ("t",)


def k_solve(targets, vector, tsig):
    """Coefficients expressing vector in span_K(targets), or None."""
    if not targets:
        return None if not vector.is_zero() else []
    dim = vector.dim
    one = RatFunc.from_const(tsig, 1)
    rows = []
    for i in range(1, dim + 1):
        row = [_as_ratfunc(t.coeffs.get((i,), Fraction(0)), tsig) for t in targets]
        row.append(_as_ratfunc(vector.coeffs.get((i,), Fraction(0)), tsig))
        rows.append(row)
    from .linalg import rref

    red, pivots = rref(ExactMatrix(rows, one=one))
    ncols = len(targets) + 1
    if ncols - 1 in pivots:
        return None  # inconsistent: vector outside the span
    coeffs = [one - one] * len(targets)
    for r, p in enumerate(pivots):
        coeffs[p] = red.entries[r][ncols - 1]
    return coeffs


@dataclass
class SpanProbeReport:
    wedge_count: int
    dim_q_wedges: int
    dim_k_sample: int
    dim_q_sample: int
    beta_indices: tuple
    membership_checks: list  # (vector index, in_span, coeffs_in_coefficient_space)

    @property
    def all_coefficients_confined(self):
        return all(ok for _, in_span, ok in self.membership_checks if in_span)


def span_probe(sample, ell):
    """Finite-dimensionality probe over the tower Q inside Q(t).

    Computes the Q-span of all ell-fold wedges of the sample, picks the
    first nonzero wedge as the reference beta, and checks that every sample
    vector lying K-linearly inside the first ell-1 wedge factors has its
    coefficients a with a*beta back inside the computed wedge span.
    """
    if ell < 1:
        raise ValueError("the wedge length must be at least 1")
    sample = list(sample)
    tsig = _entry_signature(sample)
    wedges = []
    beta_indices = ()
    beta = None
    for combo in combinations(range(len(sample)), ell):
        w = wedge_all([sample[i] for i in combo])
        wedges.append(w)
        if beta is None and not w.is_zero():
            beta = w
            beta_indices = combo
    dim_b = q_dimension(wedges)
    report = SpanProbeReport(
        wedge_count=len(wedges),
        dim_q_wedges=dim_b,
        dim_k_sample=k_dimension(sample),
        dim_q_sample=q_dimension(sample),
        beta_indices=tuple(i + 1 for i in beta_indices),
        membership_checks=[],
    )
    if beta is None:
        return report
    span_targets = [sample[i] for i in beta_indices[:-1]]
    nonzero_wedges = [w for w in wedges if not w.is_zero()]
    for idx, v in enumerate(sample):
        coeffs = k_solve(span_targets, v, tsig)
        if coeffs is None:
            report.membership_checks.append((idx + 1, False, None))
            continue
        confined = all(
            q_dimension(nonzero_wedges + [beta.scaled(a)]) == dim_b for a in coeffs
        )
        report.membership_checks.append((idx + 1, True, confined))
    return report
