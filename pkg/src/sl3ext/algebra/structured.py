"""Functions of the form sum_i P_i(x,y) * (xy+1)^e_i * exp(m_i*z).

This class is closed under d/dx, d/dy, d/dz and multiplication, which is all
the PDE verification needs.  Canonical form keeps one term per exponential
frequency m, with the (xy+1) power pulled out maximally.
"""

from __future__ import annotations

from fractions import Fraction

from .multipoly import MultiPoly
from .scalars import is_zero

XY_VARS = ("x", "y")


def xy_poly(terms=None) -> MultiPoly:
    return MultiPoly(XY_VARS, terms or {})


def xy_const(c) -> MultiPoly:
    return MultiPoly.const(XY_VARS, c)


X = MultiPoly.var(XY_VARS, "x")
Y = MultiPoly.var(XY_VARS, "y")
XY1 = X * Y + xy_const(1)  # the irreducible factor xy + 1


def divide_by_xy1(p: MultiPoly):
    """Exact quotient p / (xy+1), or None when not divisible.

    Writing p = sum c_k(x) y^k, the quotient satisfies q_k = c_k - x*q_{k-1};
    divisibility means the top recursion term closes to zero.
    """
    if p.is_zero():
        return p
    ix, iy = 0, 1
    K = max(e[iy] for e in p.terms)
    cs = []
    for k in range(K + 1):
        cs.append({(e[ix],): c for e, c in p.terms.items() if e[iy] == k})
    x_polys = [MultiPoly(("x",), t) for t in cs]
    q = []
    prev = MultiPoly(("x",))
    for k in range(K + 1):
        qk = x_polys[k] - MultiPoly.var(("x",), "x") * prev
        q.append(qk)
        prev = qk
    if not q[K].is_zero():
        return None
    t = {}
    for k in range(K):
        for e, c in q[k].terms.items():
            t[(e[0], k)] = c
    return MultiPoly(XY_VARS, t)


class StructuredFunction:
    """Finite sum of P(x,y)*(xy+1)^e*exp(m z) terms in canonical form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict (e, m) -> MultiPoly in (x, y)
        merged = {}
        if terms:
            for (e, m), p in terms.items():
                if p.is_zero():
                    continue
                key = (e, m)
                merged[key] = merged[key] + p if key in merged else p
        self.terms = self._canonicalize(merged)

    @staticmethod
    def _canonicalize(terms):
        # one term per frequency m: lower everything to the minimal e, then
        # strip (xy+1) factors back out so the representation is unique
        by_m = {}
        for (e, m), p in terms.items():
            by_m.setdefault(m, []).append((e, p))
        out = {}
        for m, parts in by_m.items():
            e_min = min(e for e, _ in parts)
            total = xy_poly()
            for e, p in parts:
                total = total + p * XY1 ** (e - e_min)
            if total.is_zero():
                continue
            while True:
                q = divide_by_xy1(total)
                if q is None:
                    break
                total = q
                e_min += 1
            out[(e_min, m)] = total
        return out

    @classmethod
    def from_poly(cls, p: MultiPoly):
        return cls({(0, 0): p})

    @classmethod
    def term(cls, p: MultiPoly, e: int, m: int):
        return cls({(e, m): p})

    @classmethod
    def const(cls, c):
        return cls({(0, 0): xy_const(c)})

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = other if isinstance(other, StructuredFunction) else StructuredFunction.const(other)
        t = {}
        for k, p in self.terms.items():
            t[k] = p
        for k, p in o.terms.items():
            t[k] = t[k] + p if k in t else p
        return StructuredFunction(t)

    __radd__ = __add__

    def __neg__(self):
        return StructuredFunction({k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        o = other if isinstance(other, StructuredFunction) else StructuredFunction.const(other)
        return self + (-o)

    def __mul__(self, other):
        if not isinstance(other, StructuredFunction):
            return StructuredFunction({k: p * other for k, p in self.terms.items()})
        t = {}
        for (e1, m1), p1 in self.terms.items():
            for (e2, m2), p2 in other.terms.items():
                k = (e1 + e2, m1 + m2)
                q = p1 * p2
                t[k] = t[k] + q if k in t else q
        return StructuredFunction(t)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        o = other if isinstance(other, StructuredFunction) else StructuredFunction.const(other)
        return (self - o).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    # -- calculus ---------------------------------------------------------------
    def diff(self, var: str):
        t = {}

        def acc(key, p):
            if p.is_zero():
                return
            t[key] = t[key] + p if key in t else p

        for (e, m), p in self.terms.items():
            if var == "x":
                acc((e, m), p.diff("x"))
                if e:
                    acc((e - 1, m), Y * p * Fraction(e))
            elif var == "y":
                acc((e, m), p.diff("y"))
                if e:
                    acc((e - 1, m), X * p * Fraction(e))
            elif var == "z":
                if m:
                    acc((e, m), p * Fraction(m))
            else:
                raise ValueError("unknown variable %r" % var)
        return StructuredFunction(t)

    def eval(self, x, y, z_is_zero=True):
        """Exact value at (x, y, 0); exp factors collapse to 1."""
        if not z_is_zero:
            raise NotImplementedError("only z = 0 evaluation is exact")
        total = 0
        for (e, m), p in self.terms.items():
            base = x * y + 1
            if is_zero(base) and e < 0:
                raise ZeroDivisionError("(xy+1) vanishes at the sample point")
            factor = base ** e if e >= 0 else 1 / (base ** (-e))
            total = total + p.eval({"x": x, "y": y}) * factor
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (e, m), p in sorted(self.terms.items()):
            s = "(%s)" % p
            if e:
                s += "*(xy+1)^%d" % e
            if m:
                s += "*exp(%dz)" % m
        # keep repr short: summary only
            bits.append(s)
        return " + ".join(bits)

    def to_json(self):
        return [
            {"poly": p.to_json(), "e": e, "m": m}
            for (e, m), p in sorted(self.terms.items())
        ]


def sf_diff(f: StructuredFunction, var: str) -> StructuredFunction:
    return f.diff(var)


def sf_coordinates(funcs):
    """Coordinatize a family of StructuredFunctions in a common basis.

    Returns (list of coordinate vectors, basis key list).  Per frequency m the
    minimal e over the whole family is used, so linear relations among the
    functions are exactly linear relations among the vectors.
    """
    e_floor = {}
    for f in funcs:
        for (e, m), _ in f.terms.items():
            e_floor[m] = min(e_floor.get(m, e), e)
    monomials = set()
    expanded = []
    for f in funcs:
        terms = {}
        for (e, m), p in f.terms.items():
            q = p * XY1 ** (e - e_floor[m])
            terms[m] = terms[m] + q if m in terms else q
        expanded.append(terms)
        for m, q in terms.items():
            for exp in q.terms:
                monomials.add((m, exp))
    keys = sorted(monomials)
    vecs = []
    for terms in expanded:
        v = []
        for m, exp in keys:
            q = terms.get(m)
            v.append(q.terms.get(exp, Fraction(0)) if q is not None else Fraction(0))
        vecs.append(v)
    return vecs, keys
