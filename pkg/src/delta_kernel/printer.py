"""Canonical text forms for the expression grammar.

parse(print(x)) == x for every value the printer accepts; the printers sort
terms by the descending term order of the body, so output is stable.
"""

from __future__ import annotations

from .diffring import CoeffGen


def _frac_str(c):
    return str(c)


def _indet_factor(v, exp):
    base_parts = []
    for k, e in enumerate(v.theta, start=1):
        if e == 1:
            base_parts.append(f"d{k}")
        elif e > 1:
            base_parts.append(f"d{k}^{e}")
    base_parts.append(f"u{v.var}")
    base = "*".join(base_parts)
    if exp == 1:
        return base
    if len(base_parts) > 1:
        return f"({base})^{exp}"
    return f"{base}^{exp}"


def _coeff_factor(v, exp):
    return f"t{v.index}" if exp == 1 else f"t{v.index}^{exp}"


def print_diffpoly(f):
    body = f.body
    if body.is_zero():
        return "0"
    pieces = []
    for e, c in body.sorted_terms():
        factors = []
        # low-rank factors first, coefficient generators in front
        for i in range(len(body.vars) - 1, -1, -1):
            exp = e[i]
            if not exp:
                continue
            v = body.vars[i]
            if isinstance(v, CoeffGen):
                factors.append(_coeff_factor(v, exp))
            else:
                factors.append(_indet_factor(v, exp))
        mono = "*".join(factors)
        if not mono:
            chunk = _frac_str(abs(c))
        elif abs(c) == 1:
            chunk = mono
        else:
            chunk = f"{_frac_str(abs(c))}*{mono}"
        pieces.append(("-" if c < 0 else "+", chunk))
    sign, chunk = pieces[0]
    out = ("-" if sign == "-" else "") + chunk
    for sign, chunk in pieces[1:]:
        out += f" {sign} {chunk}"
    return out


def print_named_poly(p, rename=None):
    """Polynomial over plain string variable ids (ambient or ODE rings)."""
    names = [rename.get(v, str(v)) if rename else str(v) for v in p.vars]
    return p.to_str(names)


def print_ratfunc(r, rename=None):
    if r.den.is_constant() and r.den.constant_value() == 1:
        return print_named_poly(r.num, rename)
    ns = print_named_poly(r.num, rename)
    ds = print_named_poly(r.den, rename)
    if len(r.num.terms) > 1 or _needs_parens(ns):
        ns = f"({ns})"
    if len(r.den.terms) > 1 or "*" in ds or "^" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


def _needs_parens(s):
    return "+" in s or " - " in s or s.startswith("-") or "*" in s or "/" in s
