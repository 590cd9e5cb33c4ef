"""Sparse multivariate polynomials with exact coefficients.

Coefficients are Fractions (or QuadraticNumbers); exponent vectors are keyed
to a fixed, ordered tuple of variable names.  Term order for printing is
graded lexicographic in the declared variable order.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import fraction_str, is_zero, rat, scalar_json


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                if not is_zero(c):
                    self.terms[tuple(exps)] = c

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, variables, c):
        if isinstance(c, int):
            c = rat(c)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name, power=1):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = power
        return cls(variables, {tuple(e): Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError("polynomials over different variable tuples")
            return other
        return MultiPoly.const(self.vars, other)

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            s = t.get(e, 0) + c
            if is_zero(s):
                t.pop(e, None)
            else:
                t[e] = s
        return MultiPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, 0) + c1 * c2
                if is_zero(s):
                    t.pop(e, None)
                else:
                    t[e] = s
        return MultiPoly(self.vars, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        # scalar division only
        return MultiPoly(self.vars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        out = MultiPoly.const(self.vars, Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        return self.terms == self._coerce(other).terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- queries ---------------------------------------------------------------
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, names) -> int:
        idx = [self.vars.index(n) for n in names]
        if not self.terms:
            return -1
        return max(sum(e[i] for i in idx) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def coefficient(self, name, power=1):
        """Polynomial coefficient of name**power (other variables retained)."""
        i = self.vars.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i] == power:
                e2 = list(e)
                e2[i] = 0
                t[tuple(e2)] = c
        return MultiPoly(self.vars, t)

    # -- calculus / substitution ------------------------------------------------
    def diff(self, name):
        i = self.vars.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return MultiPoly(self.vars, t)

    def subs(self, mapping):
        """Substitute variables by scalars or polynomials (same ring)."""
        out = MultiPoly(self.vars)
        for e, c in self.terms.items():
            term = MultiPoly.const(self.vars, c)
            for i, p in enumerate(e):
                if p == 0:
                    continue
                name = self.vars[i]
                if name in mapping:
                    val = mapping[name]
                    if not isinstance(val, MultiPoly):
                        val = MultiPoly.const(self.vars, val)
                    term = term * val ** p
                else:
                    term = term * MultiPoly.var(self.vars, name, p)
            out = out + term
        return out

    def eval(self, values: dict):
        """Evaluate fully; every variable with nonzero exponent must be given."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for i, p in enumerate(e):
                if p:
                    v = v * values[self.vars[i]] ** p
            total = total + v
        return total

    def rename(self, variables):
        """Re-home into a superset variable tuple."""
        variables = tuple(variables)
        pos = [variables.index(n) for n in self.vars]
        t = {}
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for i, p in enumerate(e):
                e2[pos[i]] = p
            t[tuple(e2)] = c
        return MultiPoly(variables, t)

    # -- printing / serialization ------------------------------------------------
    def sorted_terms(self):
        # graded lexicographic in the declared variable order
        return sorted(self.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-x for x in ec[0])))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                "%s^%d" % (v, p) if p > 1 else v
                for v, p in zip(self.vars, e)
                if p
            )
            if mono:
                parts.append("%s*%s" % (c, mono))
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {
            "vars": list(self.vars),
            "terms": [
                {"exps": list(e), "coeff": scalar_json(c)} for e, c in self.sorted_terms()
            ],
        }


def poly_ring(names):
    """Return (variable tuple, dict name -> generator, constant builder)."""
    names = tuple(names)
    gens = {n: MultiPoly.var(names, n) for n in names}
    return names, gens, lambda c: MultiPoly.const(names, c)


def poly_diff(p: MultiPoly, name) -> MultiPoly:
    return p.diff(name)


def split_linear(p: MultiPoly, unknowns):
    """Write p = sum_u c_u * u + r with all c_u constant and r free of unknowns.

    Raises ValueError if p is not linear in the unknowns or a coefficient is
    not constant (that signals a transcription bug upstream).
    """
    if p.degree_in(unknowns) > 1:
        raise ValueError("residual not linear in unknowns %s: %s" % (unknowns, p))
    coeffs = {}
    rest = p
    for u in unknowns:
        c = p.coefficient(u)
        if c.is_zero():
            continue
        if not c.is_constant():
            raise ValueError("coefficient of %s is not constant: %s" % (u, c))
        coeffs[u] = c.constant_term()
        rest = rest - c * MultiPoly.var(p.vars, u)
    if rest.degree_in(unknowns) >= 1:
        raise ValueError("mixed unknown terms remain in %s" % p)
    return coeffs, rest
