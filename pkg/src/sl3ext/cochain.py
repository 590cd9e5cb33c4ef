"""Cochain complex C^k(g_-, W) for the 3-dim Heisenberg algebra g_-.

W is any sl3-submodule of gl(8).  The differential d is the standard Lie
algebra cohomology differential; the codifferential d* is its exact adjoint
for the positive-definite pairing <A,B> = tr(Btheta^-1 A^T Btheta B), which
pairs each e_i with its transpose partner check_e_i.  Concretely

    (d* phi)(.) picks up rho(check_e_i) where d used rho(e_i),

and that normalization reproduces the two closed-form d*psi expansions used
to pin the gauge in the transitive analysis (see tests).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import Matrix, from_columns, is_zero, mat_kernel
from .sl3 import (
    CHECK_E0,
    CHECK_E1,
    CHECK_E2,
    E0,
    E1,
    E2,
    H1,
    H2,
    Sl3,
    build_sl3,
    decompose,
    flatten,
)

# g_- bookkeeping: slot index 0,1,2 means e0,e1,e2
GMINUS_IDX = (E0, E1, E2)
GPLUS_IDX = (CHECK_E0, CHECK_E1, CHECK_E2)
GMINUS_DEG = (-2, -1, -1)

WEDGES = {
    0: ((),),
    1: ((0,), (1,), (2,)),
    2: ((0, 1), (0, 2), (1, 2)),
    3: ((0, 1, 2),),
}


class SpanSolver:
    """Exact coordinates within the span of a list of 8x8 matrices."""

    def __init__(self, mats):
        self.mats = list(mats)
        self.dim = len(self.mats)
        cols = [flatten(m) for m in self.mats]
        aug = Matrix([list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(64)]
                      for i, r in enumerate(zip(*cols))])
        self._rref, self._pivots = aug.rref()
        if len([p for p in self._pivots if p < self.dim]) != self.dim:
            raise ValueError("basis matrices are linearly dependent")

    def coords(self, M: Matrix):
        v = flatten(M)
        y = [
            sum((c * x for c, x in zip(row[self.dim:], v) if c and x), Fraction(0))
            for row in self._rref.data
        ]
        out = [Fraction(0)] * self.dim
        for r, c in enumerate(self._pivots):
            if c < self.dim:
                out[c] = y[r]
        recon = [Fraction(0)] * 64
        for j, xj in enumerate(out):
            if xj:
                col = flatten(self.mats[j])
                for k in range(64):
                    recon[k] += xj * col[k]
        if recon != v:
            raise ValueError("matrix not in span")
        return out


class GModule:
    """An sl3-stable subspace W of gl(8) with exact action data."""

    def __init__(self, name, basis):
        g = build_sl3()
        self.name = name
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.solver = SpanSolver(self.basis)
        # action of each A_i on W by M -> [ad A_i, M]
        self.act = []
        for i in range(8):
            adm = g.ad[i]
            cols = [self.solver.coords(adm * b - b * adm) for b in self.basis]
            self.act.append(from_columns(cols))
        grading = g.grading_element()
        act_gr = sum_act(self, grading)
        self.degrees = []
        for j, b in enumerate(self.basis):
            col = act_gr.col(j)
            d = None
            for k, v in enumerate(col):
                if v:
                    if k != j:
                        raise ValueError("basis of %s is not graded" % name)
                    d = v
            self.degrees.append(int(d) if d is not None else 0)

    def matrix_of(self, coeffs):
        out = Matrix.zero(8, 8)
        for b, c in zip(self.basis, coeffs):
            if not is_zero(c):
                out = out + b.scale(c)
        return out


def sum_act(mod: GModule, x_coords):
    m = Matrix.zero(mod.dim, mod.dim)
    for i, c in enumerate(x_coords):
        if c:
            m = m + mod.act[i].scale(c)
    return m


@lru_cache(maxsize=None)
def module(name: str) -> GModule:
    """Named coefficient modules: ad, R, S, gperp, so, triv, second11, g22."""
    g = build_sl3()
    if name == "ad":
        return GModule("ad", g.so_basis[:8])
    if name == "R":
        return GModule("R", g.so_basis[8:18])
    if name == "S":
        return GModule("S", g.so_basis[18:28])
    if name == "gperp":
        return GModule("gperp", g.so_basis[8:28])
    if name == "so":
        return GModule("so", g.so_basis)
    if name in ("triv", "second11", "g22"):
        dec = decompose("gl8")
        key = {"triv": "triv", "second11": "second11", "g22": "22"}[name]
        return GModule(name, dec.pieces[key])
    raise ValueError("unknown module %r" % name)


class Cochain:
    """Element of C^k(g_-, W); coefficients Fraction or MultiPoly."""

    __slots__ = ("k", "mod", "data")

    def __init__(self, k: int, mod: GModule, data=None):
        self.k = k
        self.mod = mod
        self.data = {}
        if data:
            for wedge, vec in data.items():
                for idx, c in vec.items():
                    if not is_zero(c):
                        self.data.setdefault(tuple(wedge), {})[idx] = c

    def get(self, wedge, idx):
        return self.data.get(tuple(wedge), {}).get(idx, Fraction(0))

    def set_entry(self, wedge, idx, c):
        wedge = tuple(wedge)
        if is_zero(c):
            vec = self.data.get(wedge)
            if vec is not None:
                vec.pop(idx, None)
                if not vec:
                    del self.data[wedge]
        else:
            self.data.setdefault(wedge, {})[idx] = c

    def add_entry(self, wedge, idx, c):
        self.set_entry(wedge, idx, self.get(wedge, idx) + c)

    def value(self, wedge):
        """Dense coefficient vector on an increasing wedge tuple."""
        vec = self.data.get(tuple(wedge), {})
        return [vec.get(i, Fraction(0)) for i in range(self.mod.dim)]

    def __add__(self, other):
        if other.k != self.k or other.mod is not self.mod:
            raise ValueError("cochain mismatch")
        out = Cochain(self.k, self.mod, self.data)
        for wedge, vec in other.data.items():
            for idx, c in vec.items():
                out.add_entry(wedge, idx, c)
        return out

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        out = Cochain(self.k, self.mod)
        for wedge, vec in self.data.items():
            for idx, v in vec.items():
                out.set_entry(wedge, idx, c * v)
        return out

    def is_zero(self) -> bool:
        return not self.data

    def map_coeffs(self, f):
        out = Cochain(self.k, self.mod)
        for wedge, vec in self.data.items():
            for idx, v in vec.items():
                out.set_entry(wedge, idx, f(v))
        return out

    def entries(self):
        for wedge, vec in sorted(self.data.items()):
            for idx, v in sorted(vec.items()):
                yield wedge, idx, v

    def degree_piece(self, r: int):
        out = Cochain(self.k, self.mod)
        for wedge, idx, v in self.entries():
            if component_degree(self.mod, wedge, idx) == r:
                out.set_entry(wedge, idx, v)
        return out

    def degrees_present(self):
        return sorted({component_degree(self.mod, w, i) for w, i, _ in self.entries()})

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.k == other.k
            and self.mod is other.mod
            and (self - other).is_zero()
        )

    def __repr__(self):
        bits = []
        for wedge, idx, v in self.entries():
            bits.append("%s@%s:%s" % (self.mod.name, (wedge, idx), v))
        return "Cochain(" + "; ".join(bits) + ")" if bits else "Cochain(0)"


def component_degree(mod: GModule, wedge, idx) -> int:
    return mod.degrees[idx] - sum(GMINUS_DEG[i] for i in wedge)


def basis_cochain(k, mod, wedge, idx, c=Fraction(1)):
    out = Cochain(k, mod)
    out.set_entry(wedge, idx, c)
    return out


def _act_vec(mod: GModule, gen_idx: int, vec):
    """Apply the action matrix of A_{gen_idx} to a sparse coefficient dict."""
    m = mod.act[gen_idx]
    out = {}
    for j, c in vec.items():
        if is_zero(c):
            continue
        for i in range(mod.dim):
            a = m.data[i][j]
            if a:
                out[i] = out.get(i, Fraction(0)) + a * c
    return {i: c for i, c in out.items() if not is_zero(c)}


GM_BRACKET = {(1, 2): (0, Fraction(-1)), (2, 1): (0, Fraction(1))}
# [e1, e2] = -e0 in g_-; all brackets with e0 vanish


def _phi_eval(c: Cochain, slots):
    """Evaluate on a tuple of g_- basis indices (not necessarily sorted)."""
    seen = sorted(range(len(slots)), key=lambda t: slots[t])
    ordered = tuple(slots[t] for t in seen)
    if len(set(ordered)) != len(ordered):
        return {}
    sign = perm_sign([slots[t] for t in seen], list(slots))
    vec = c.data.get(ordered, {})
    if sign == 1:
        return dict(vec)
    return {i: -v for i, v in vec.items()}


def perm_sign(sorted_slots, slots):
    # sign of the permutation carrying slots to sorted order
    s = 1
    work = list(slots)
    for i in range(len(work)):
        m = min(range(i, len(work)), key=lambda t: work[t])
        if m != i:
            work[i], work[m] = work[m], work[i]
            s = -s
    return s


def ce_d(c: Cochain) -> Cochain:
    """Chevalley-Eilenberg differential C^k -> C^{k+1}."""
    if c.k >= 3:
        raise ValueError("no C^4 here")
    out = Cochain(c.k + 1, c.mod)
    for wedge in WEDGES[c.k + 1]:
        acc = {}

        def add(vec, sgn=1):
            for i, v in vec.items():
                key = i
                acc[key] = acc.get(key, Fraction(0)) + (v if sgn == 1 else -v)

        for t, i in enumerate(wedge):
            rest = wedge[:t] + wedge[t + 1:]
            vec = _act_vec(c.mod, GMINUS_IDX[i], _phi_eval(c, rest))
            add(vec, 1 if t % 2 == 0 else -1)
        for t1 in range(len(wedge)):
            for t2 in range(t1 + 1, len(wedge)):
                br = GM_BRACKET.get((wedge[t1], wedge[t2]))
                if br is None:
                    continue
                tgt, coef = br
                rest = tuple(
                    x for s, x in enumerate(wedge) if s not in (t1, t2)
                )
                vec = _phi_eval(c, (tgt,) + rest)
                sgn = (-1) ** (t1 + t2)
                for i, v in vec.items():
                    acc[i] = acc.get(i, Fraction(0)) + sgn * coef * v
        for i, v in acc.items():
            out.add_entry(wedge, i, v)
    return out


def ce_dstar(c: Cochain) -> Cochain:
    """Adjoint of ce_d for the calibrated inner product (C^k -> C^{k-1})."""
    if c.k == 0:
        raise ValueError("d* undefined on C^0")
    out = Cochain(c.k - 1, c.mod)
    if c.k == 1:
        acc = {}
        for i in range(3):
            vec = _act_vec(c.mod, GPLUS_IDX[i], c.data.get((i,), {}))
            for j, v in vec.items():
                acc[j] = acc.get(j, Fraction(0)) + v
        for j, v in acc.items():
            out.add_entry((), j, v)
        return out
    if c.k == 2:
        for m in range(3):
            acc = {}
            for i in range(3):
                if i == m:
                    continue
                vec = _act_vec(c.mod, GPLUS_IDX[i], _phi_eval(c, (i, m)))
                for j, v in vec.items():
                    acc[j] = acc.get(j, Fraction(0)) + v
            if m == 0:
                for j, v in c.data.get((1, 2), {}).items():
                    acc[j] = acc.get(j, Fraction(0)) + v
            for j, v in acc.items():
                out.add_entry((m,), j, v)
        return out
    # k == 3
    phi = c.data.get((0, 1, 2), {})
    for m_pair, gen, sgn in (
        ((1, 2), CHECK_E0, 1),
        ((0, 2), CHECK_E1, -1),
        ((0, 1), CHECK_E2, 1),
    ):
        vec = _act_vec(c.mod, gen, phi)
        for j, v in vec.items():
            out.add_entry(m_pair, j, sgn * v)
    return out


def rho(x_coords, c: Cochain) -> Cochain:
    """Natural action of x in sl3 on Hom(Lambda^k g_-, W).

    (rho(x) phi)(u...) = [ad x, phi(u...)] - sum_t phi(..., pr_{g_-}[x, u_t], ...).
    For x in g_0 this is the honest module action; for positive-degree x the
    g_- projection makes it the weight-raising operator used by the chi
    recursion closed forms.
    """
    g = build_sl3()
    out = Cochain(c.k, c.mod)
    for wedge, vec in c.data.items():
        acted = {}
        for i, cf in enumerate(x_coords):
            if is_zero(cf):
                continue
            for j, v in _act_vec(c.mod, i, vec).items():
                acted[j] = acted.get(j, Fraction(0)) + cf * v
        for j, v in acted.items():
            out.add_entry(wedge, j, v)
    for wedge in WEDGES[c.k]:
        for t, u in enumerate(wedge):
            br = g.bracket_g(list(x_coords), basis_vec8(GMINUS_IDX[u]))
            for slot, gm_idx in enumerate(GMINUS_IDX):
                coef = br[gm_idx]
                if is_zero(coef):
                    continue
                slots = wedge[:t] + (slot,) + wedge[t + 1:]
                vec = _phi_eval(c, slots)
                for j, v in vec.items():
                    out.add_entry(wedge, j, -coef * v)
    return out


def basis_vec8(i, c=Fraction(1)):
    v = [Fraction(0)] * 8
    v[i] = c
    return v


def rho_g0(lam1, lam2, c: Cochain) -> Cochain:
    """rho of lam1*H1 + lam2*H2 (coefficients may be symbolic)."""
    x = [Fraction(0)] * 8
    x[H1], x[H2] = lam1, lam2
    return rho(x, c)


# ---------------------------------------------------------------------------
# harmonic spaces
# ---------------------------------------------------------------------------

class HarmonicSpace:
    def __init__(self, k, mod, degree, basis, quotient_dim):
        self.k = k
        self.mod = mod
        self.degree = degree
        self.basis = basis           # list of Cochain, ker d  /\  ker d*
        self.quotient_dim = quotient_dim  # dim ker d / im d at the same degree

    @property
    def dim(self):
        return len(self.basis)


def _degree_basis(k, mod, r):
    out = []
    for wedge in WEDGES[k]:
        for idx in range(mod.dim):
            if component_degree(mod, wedge, idx) == r:
                out.append((wedge, idx))
    return out


def operator_matrix(op, k_from, mod, r):
    """Matrix of op restricted to the degree-r piece of C^{k_from}."""
    dom = _degree_basis(k_from, mod, r)
    k_to = k_from + 1 if op is ce_d else k_from - 1
    cod = _degree_basis(k_to, mod, r)
    cod_index = {key: t for t, key in enumerate(cod)}
    cols = []
    for wedge, idx in dom:
        img = op(basis_cochain(k_from, mod, wedge, idx))
        col = [Fraction(0)] * len(cod)
        for w2, i2, v in img.entries():
            col[cod_index[(w2, i2)]] = v
        cols.append(col)
    if not dom:
        return Matrix.zero(max(len(cod), 1), 0), dom, cod
    if not cod:
        return Matrix.zero(1, len(dom)), dom, cod
    return from_columns(cols), dom, cod


def harmonic_h1(mod_name: str, degrees=None):
    """Harmonic H^1_r(g_-, W) for positive degrees r, one HarmonicSpace per r.

    Each space also carries the independently computed quotient dimension
    dim(ker d / im d); Hodge consistency means the two dimensions agree.
    """
    mod = module(mod_name)
    if degrees is None:
        degrees = range(1, 6)
    out = []
    for r in degrees:
        dom = _degree_basis(1, mod, r)
        if not dom:
            out.append(HarmonicSpace(1, mod, r, [], 0))
            continue
        d_mat, _, _ = operator_matrix(ce_d, 1, mod, r)
        ds_mat, _, _ = operator_matrix(ce_dstar, 1, mod, r)
        stacked = Matrix(d_mat.data + ds_mat.data)
        basis = []
        for v in mat_kernel(stacked):
            c = Cochain(1, mod)
            for (wedge, idx), coef in zip(dom, v):
                c.set_entry(wedge, idx, coef)
            basis.append(c)
        d0_mat, _, _ = operator_matrix(ce_d, 0, mod, r)
        ker_dim = len(dom) - d_mat.rank()
        quotient = ker_dim - d0_mat.rank()
        out.append(HarmonicSpace(1, mod, r, basis, quotient))
    return out


def hodge_dims_k1(mod_name: str, r: int):
    """(dim C^1_r, dim im d0, dim im d* from C^2, harmonic dim)."""
    mod = module(mod_name)
    dom = _degree_basis(1, mod, r)
    d0, _, _ = operator_matrix(ce_d, 0, mod, r)
    d2s, _, _ = operator_matrix(ce_dstar, 2, mod, r)
    spaces = harmonic_h1(mod_name, [r])
    return len(dom), d0.rank(), d2s.rank(), spaces[0].dim


def xi1R() -> Cochain:
    """R_{-1,1} (x) e2*, the degree-1 harmonic generator on the R side."""
    mod = module("R")
    from .sl3 import R_LABELS

    return basis_cochain(1, mod, (2,), R_LABELS.index((-1, 1)))


def xi1S() -> Cochain:
    mod = module("S")
    from .sl3 import S_LABELS

    return basis_cochain(1, mod, (1,), S_LABELS.index((1, -1)))


def export_operators_json(mod_name: str):
    """d and d* matrices per (k, degree) for external audit."""
    mod = module(mod_name)
    out = {"module": mod_name, "operators": []}
    for k in (0, 1, 2, 3):
        for r in range(-5, 7):
            if not _degree_basis(k, mod, r):
                continue
            entry = {"k": k, "degree": r}
            if k < 3:
                m, dom, cod = operator_matrix(ce_d, k, mod, r)
                entry["d"] = m.to_json()
            if k > 0:
                m, dom, cod = operator_matrix(ce_dstar, k, mod, r)
                entry["dstar"] = m.to_json()
            out["operators"].append(entry)
    return out
