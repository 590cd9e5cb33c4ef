"""sl(3,R) with its contact grading, acting on V = R^8 by ad.

Basis (index 0..7):  A1=E13, A2=E12, A3=E23, A4=H1, A5=H2, A6=E32, A7=E21,
A8=E31, with degrees (2,1,1,0,0,-1,-1,-2).  Aliases: e0=A8, e1=A7, e2=A6 and
check_e0=A1, check_e1=A2, check_e2=A3.

On top of that: the Killing form kappa, the orthogonal algebra so(V,kappa)
of signature (5,3), the two 10-dimensional weight-vector families R_{i,j}
(highest weight 3*w1) and S_{i,j} (highest weight 3*w2), module
decompositions of gl(8) and so(5,3), and exact projections.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import Matrix, from_columns, mat_kernel, solve_linear, sym_signature

DIM = 8

# A-basis positions (0-based)
CHECK_E0, CHECK_E1, CHECK_E2, H1, H2, E2, E1, E0 = range(8)
DEGREES = (2, 1, 1, 0, 0, -1, -1, -2)

# g_- basis order used by every cochain: (e0, e1, e2) -> A-basis indices
GMINUS = (E0, E1, E2)
GPLUS = (CHECK_E0, CHECK_E1, CHECK_E2)

R_LABELS = (
    (2, 1), (1, 1), (1, 0), (0, 1), (0, 0),
    (0, -1), (-1, 1), (-1, 0), (-1, -1), (-1, -2),
)
S_LABELS = (
    (1, 2), (1, 1), (0, 1), (1, 0), (0, 0),
    (-1, 0), (1, -1), (0, -1), (-1, -1), (-2, -1),
)


def _unit(i, j):
    m = [[Fraction(0)] * 3 for _ in range(3)]
    m[i][j] = Fraction(1)
    return m


def _mat3(pairs):
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for (i, j), c in pairs:
        m[i][j] += c
    return m


BASIS3 = [
    _unit(0, 2),                                    # A1 = E13
    _unit(0, 1),                                    # A2 = E12
    _unit(1, 2),                                    # A3 = E23
    _mat3([((0, 0), Fraction(1)), ((1, 1), Fraction(-1))]),  # A4 = H1
    _mat3([((1, 1), Fraction(1)), ((2, 2), Fraction(-1))]),  # A5 = H2
    _unit(2, 1),                                    # A6 = E32
    _unit(1, 0),                                    # A7 = E21
    _unit(2, 0),                                    # A8 = E31
]


def _mul3(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]


def _comm3(a, b):
    ab, ba = _mul3(a, b), _mul3(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(3)] for i in range(3)]


def _coords3(m):
    """Coordinates of a traceless 3x3 matrix in the A-basis."""
    return [
        m[0][2], m[0][1], m[1][2],
        m[0][0], -m[2][2],
        m[2][1], m[1][0], m[2][0],
    ]


def bracket3(i, j):
    """Structure coordinates of [A_i, A_j] in sl(3)."""
    return _coords3(_comm3(BASIS3[i], BASIS3[j]))


class Sl3:
    """Immutable container for the graded algebra and everything built on it."""

    def __init__(self):
        self.degrees = DEGREES
        # structure constants c[i][j] = coords of [A_i, A_j]
        self.c = [[bracket3(i, j) for j in range(8)] for i in range(8)]
        # adjoint matrices: column j of ad(A_i) = [A_i, A_j]
        self.ad = [from_columns([self.c[i][j] for j in range(8)]) for i in range(8)]
        self.kappa = Matrix(
            [[(self.ad[i] * self.ad[j]).trace() for j in range(8)] for i in range(8)]
        )
        self._build_families()
        self._build_so_basis()

    # -- sl3 brackets on coordinate vectors ----------------------------------
    def bracket_g(self, x, y):
        """Bracket of two sl3 coordinate vectors (duck-typed coefficients)."""
        out = [Fraction(0)] * 8
        for i in range(8):
            xi = x[i]
            if not xi:
                continue
            for j in range(8):
                yj = y[j]
                if not yj:
                    continue
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] = out[k] + ck * xi * yj
        return out

    def grading_element(self):
        """The H in span{H1,H2} with [H, A_j] = deg(A_j) A_j for all j."""
        # two unknowns a, b; use the e1, e2 eigen-equations
        rows, rhs = [], []
        for j in (E1, E2):
            col_h1 = self.c[H1][j][j]
            col_h2 = self.c[H2][j][j]
            rows.append([col_h1, col_h2])
            rhs.append(Fraction(self.degrees[j]))
        sol = solve_linear(Matrix(rows), rhs)
        vec = [Fraction(0)] * 8
        vec[H1], vec[H2] = sol
        for j in range(8):
            br = self.bracket_g(vec, self._basis_vec(j))
            expect = [Fraction(self.degrees[j]) * v for v in self._basis_vec(j)]
            if br != expect:
                raise AssertionError("grading element failed on basis %d" % j)
        return vec

    @staticmethod
    def _basis_vec(j):
        v = [Fraction(0)] * 8
        v[j] = Fraction(1)
        return v

    # -- star-of-David families ------------------------------------------------
    def _build_families(self):
        def comm(a, b):
            return a * b - b * a

        ade1, ade2 = self.ad[E1], self.ad[E2]
        R = {}
        R[(2, 1)] = _rank2(CHECK_E0, E1, CHECK_E1, E0)  # A1 (x) A7* - A2 (x) A8*
        R[(1, 1)] = comm(ade1, R[(2, 1)])
        R[(1, 0)] = comm(ade2, R[(1, 1)])
        R[(0, 1)] = comm(ade1, R[(1, 1)])
        R[(0, 0)] = comm(ade2, R[(0, 1)])
        R[(0, -1)] = comm(ade2, R[(0, 0)])
        R[(-1, 1)] = comm(ade1, R[(0, 1)])
        R[(-1, 0)] = comm(ade2, R[(-1, 1)])
        R[(-1, -1)] = comm(ade2, R[(-1, 0)])
        R[(-1, -2)] = comm(ade2, R[(-1, -1)])

        S = {}
        S[(1, 2)] = _rank2(CHECK_E0, E2, CHECK_E2, E0)  # A1 (x) A6* - A3 (x) A8*
        S[(1, 1)] = comm(ade2, S[(1, 2)])
        S[(0, 1)] = comm(ade1, S[(1, 1)])
        S[(1, 0)] = comm(ade2, S[(1, 1)])
        S[(0, 0)] = comm(ade1, S[(1, 0)])
        S[(-1, 0)] = comm(ade1, S[(0, 0)])
        S[(1, -1)] = comm(ade2, S[(1, 0)])
        S[(0, -1)] = comm(ade1, S[(1, -1)])
        S[(-1, -1)] = comm(ade1, S[(0, -1)])
        S[(-2, -1)] = comm(ade1, S[(-1, -1)])

        for fam, name in ((R, "R"), (S, "S")):
            for lbl, m in fam.items():
                if m.is_zero():
                    raise AssertionError("recursion produced zero at %s_%s" % (name, lbl))
        self.R, self.S = R, S

    # -- so(V, kappa) -------------------------------------------------------------
    def is_in_so(self, M: Matrix) -> bool:
        return (M.transpose() * self.kappa + self.kappa * M).is_zero()

    def _build_so_basis(self):
        # ordered basis of so(V,kappa): 8 ad's, 10 R's, 10 S's
        self.so_basis = (
            [self.ad[i] for i in range(8)]
            + [self.R[l] for l in R_LABELS]
            + [self.S[l] for l in S_LABELS]
        )
        self.so_degrees = (
            list(DEGREES)
            + [i + j for (i, j) in R_LABELS]
            + [i + j for (i, j) in S_LABELS]
        )
        cols = [flatten(m) for m in self.so_basis]
        A = from_columns(cols)
        # precompute an exact coordinate solver for span(so_basis)
        R_, pivots = Matrix(
            [row + eye_row(i, 64) for i, row in enumerate(A.data)]
        ).rref()
        self._so_pivots = pivots
        self._so_solver = R_
        # kappa-dual basis of sl3 for the Casimir
        kinv_cols = []
        for j in range(8):
            b = [Fraction(1) if i == j else Fraction(0) for i in range(8)]
            kinv_cols.append(solve_linear(self.kappa, b))
        self.kappa_dual = kinv_cols  # column j = coords of the dual vector A^j

    def so_coords(self, M: Matrix):
        """Coordinates of M in the 28-element so-basis; None if outside."""
        v = flatten(M)
        # apply the recorded row reduction to [A | I] to solve A x = v
        n = 64
        y = [sum_row(self._so_solver.data[r][28:], v) for r in range(n)]
        x = [Fraction(0)] * 28
        for r, c in enumerate(self._so_pivots):
            if c < 28:
                x[c] = y[r]
        # consistency check
        recon = [Fraction(0)] * 64
        for j, xj in enumerate(x):
            if xj:
                col = flatten(self.so_basis[j])
                for k in range(64):
                    recon[k] += xj * col[k]
        if recon != v:
            return None
        return x

    def project(self, M: Matrix):
        """Split M in so(V,kappa) into (g-part, R-part, S-part) matrices."""
        x = self.so_coords(M)
        if x is None:
            raise ValueError("matrix is not in so(V,kappa)")
        g = sum_scaled(self.so_basis[:8], x[:8])
        r = sum_scaled(self.so_basis[8:18], x[8:18])
        s = sum_scaled(self.so_basis[18:28], x[18:28])
        return g, r, s

    @lru_cache(maxsize=None)
    def so_structure(self):
        """c[i][j] = 28-coords of [B_i, B_j] for the so-basis."""
        out = []
        for i in range(28):
            row = []
            for j in range(28):
                br = self.so_basis[i] * self.so_basis[j] - self.so_basis[j] * self.so_basis[i]
                coords = self.so_coords(br)
                if coords is None:
                    raise AssertionError("so bracket left the space at (%d,%d)" % (i, j))
                row.append(coords)
            out.append(row)
        return out

    # -- inner product used by the codifferential ---------------------------------
    @lru_cache(maxsize=None)
    def btheta(self):
        """Gram matrix of the A-basis of V for B(x,y) = -kappa(x, theta y)."""
        theta_coords = []
        for j in range(8):
            t = [[-BASIS3[j][c][r] for c in range(3)] for r in range(3)]
            theta_coords.append(_coords3(t))
        out = Matrix.zero(8, 8)
        for i in range(8):
            for j in range(8):
                acc = Fraction(0)
                for k, c in enumerate(theta_coords[j]):
                    if c:
                        acc += -c * self.kappa.data[i][k]
                out.data[i][j] = acc
        return out

    def gram_gl(self, A: Matrix, Bm: Matrix):
        """<A,B> = tr(Binv * A^T * B * Bm) -- positive definite on gl(8)."""
        B = self.btheta()
        Binv = self._btheta_inv()
        return (Binv * A.transpose() * B * Bm).trace()

    @lru_cache(maxsize=None)
    def _btheta_inv(self):
        B = self.btheta()
        cols = []
        for j in range(8):
            e = [Fraction(1) if i == j else Fraction(0) for i in range(8)]
            cols.append(solve_linear(B, e))
        return from_columns(cols)


def _rank2(i1, j1, i2, j2):
    """A_{i1} (x) A_{j1}* - A_{i2} (x) A_{j2}* as an 8x8 matrix."""
    m = Matrix.zero(8, 8)
    m.data[i1][j1] = Fraction(1)
    m.data[i2][j2] = Fraction(-1)
    return m


def flatten(M: Matrix):
    return [a for row in M.data for a in row]


def eye_row(i, n):
    return [Fraction(1) if j == i else Fraction(0) for j in range(n)]


def sum_row(coeffs, v):
    return sum((c * x for c, x in zip(coeffs, v) if c and x), Fraction(0))


def sum_scaled(mats, coeffs):
    out = Matrix.zero(8, 8)
    for m, c in zip(mats, coeffs):
        if c:
            out = out + m.scale(c)
    return out


@lru_cache(maxsize=1)
def build_sl3() -> Sl3:
    return Sl3()


def killing_form() -> Matrix:
    return build_sl3().kappa


def is_in_so(M: Matrix) -> bool:
    return build_sl3().is_in_so(M)


def build_star_of_david():
    g = build_sl3()
    return g.R, g.S


def killing_signature():
    return sym_signature(killing_form())


# ---------------------------------------------------------------------------
# module decompositions
# ---------------------------------------------------------------------------

def _gl_action_matrices(g: Sl3):
    """64x64 matrices of M -> [ad A_i, M] on gl(8), for i = 0..7."""
    acts = []
    for i in range(8):
        adm = g.ad[i]
        cols = []
        for r in range(8):
            for c in range(8):
                unit = Matrix.zero(8, 8)
                unit.data[r][c] = Fraction(1)
                cols.append(flatten(adm * unit - unit * adm))
        acts.append(from_columns(cols))
    return acts


@lru_cache(maxsize=1)
def casimir_gl8() -> Matrix:
    """Casimir of the sl3-action on gl(8), Killing-normalized."""
    g = build_sl3()
    acts = _gl_action_matrices(g)
    dual_acts = []
    for j in range(8):
        m = Matrix.zero(64, 64)
        for i in range(8):
            cij = g.kappa_dual[j][i]
            if cij:
                m = m + acts[i].scale(cij)
        dual_acts.append(m)
    cas = Matrix.zero(64, 64)
    for i in range(8):
        cas = cas + acts[i] * dual_acts[i]
    return cas


def casimir_apply(M: Matrix) -> Matrix:
    v = casimir_gl8().apply(flatten(M))
    return Matrix([v[8 * i : 8 * i + 8] for i in range(8)])


def casimir_eigenvalue_on(M: Matrix):
    """Exact eigenvalue of the Casimir on the line through M (must be an eigenvector)."""
    CM = casimir_apply(M)
    lam = None
    for i in range(8):
        for j in range(8):
            if M.data[i][j]:
                cand = CM.data[i][j] / M.data[i][j]
                if lam is None:
                    lam = cand
                elif lam != cand:
                    raise ValueError("not a Casimir eigenvector")
    if lam is None:
        raise ValueError("zero matrix")
    check = CM - M.scale(lam)
    if not check.is_zero():
        raise ValueError("not a Casimir eigenvector")
    return lam


class ModuleDecomposition:
    """Bases for the isotypic pieces of gl(8) (or so(5,3)) as sl3-modules."""

    def __init__(self, ambient, pieces):
        self.ambient = ambient
        self.pieces = pieces  # name -> list of Matrix

    def dims(self):
        return {name: len(basis) for name, basis in self.pieces.items()}


def _kernel_matrices(M64: Matrix):
    return [Matrix([v[8 * i : 8 * i + 8] for i in range(8)]) for v in mat_kernel(M64)]


def _kappa_symmetric(M: Matrix, kappa: Matrix) -> bool:
    return (M.transpose() * kappa - kappa * M).is_zero()


def decompose(ambient: str) -> ModuleDecomposition:
    """Isotypic decomposition. ambient is 'so53' or 'gl8'."""
    g = build_sl3()
    if ambient == "so53":
        # verify ad(g) + R + S spans exactly {M : M^T kappa + kappa M = 0}
        so_dim = Matrix(
            [flatten(m) for m in g.so_basis]
        ).rank()
        if so_dim != 28:
            raise AssertionError("so-basis dependent: rank %d" % so_dim)
        # kernel of M -> M^T kappa + kappa M on gl(8)
        rows = []
        for r in range(8):
            for c in range(8):
                unit = Matrix.zero(8, 8)
                unit.data[r][c] = Fraction(1)
                rows.append(flatten(unit.transpose() * g.kappa + g.kappa * unit))
        cond = from_columns(rows)
        kernel_dim = 64 - cond.rank()
        if kernel_dim != 28:
            raise AssertionError(
                "so(V,kappa) has dim %d, expected 28" % kernel_dim
            )
        for m in g.so_basis:
            if not g.is_in_so(m):
                raise AssertionError("basis element escapes so(V,kappa)")
        return ModuleDecomposition(
            "so53",
            {
                "ad": list(g.so_basis[:8]),
                "R": list(g.so_basis[8:18]),
                "S": list(g.so_basis[18:28]),
            },
        )
    if ambient == "gl8":
        cas = casimir_gl8()
        lam_ad = casimir_eigenvalue_on(g.ad[E0])
        lam_r = casimir_eigenvalue_on(g.R[(2, 1)])
        lam_s = casimir_eigenvalue_on(g.S[(1, 2)])
        if lam_r != lam_s:
            raise AssertionError("R and S Casimir eigenvalues differ")
        top = Matrix.zero(8, 8)
        top.data[CHECK_E0][E0] = Fraction(1)  # weight (2,2) vector in gl(8)
        lam_22 = casimir_eigenvalue_on(top)
        n = 64
        eye = Matrix.identity(n)
        spaces = {}
        for name, lam in (("0", Fraction(0)), ("11", lam_ad), ("RS", lam_r), ("22", lam_22)):
            spaces[name] = _kernel_matrices(cas - eye.scale(lam))
        dims = {k: len(v) for k, v in spaces.items()}
        if (dims["0"], dims["11"], dims["RS"], dims["22"]) != (1, 16, 20, 27):
            raise AssertionError("unexpected isotypic dims: %s" % dims)
        # split the 16-dim eigenvalue-1 isotypic space: ad(g) is kappa-skew,
        # the second copy is kappa-symmetric
        second = [m for m in spaces["11"] if _kappa_symmetric(m, g.kappa)]
        ad_part = [m for m in spaces["11"] if g.is_in_so(m)]
        if len(second) + len(ad_part) != 16:
            # basis vectors from the kernel may mix; resplit by projection
            second, ad_part = _split_isotypic(spaces["11"], g)
        return ModuleDecomposition(
            "gl8",
            {
                "triv": spaces["0"],
                "ad": ad_part,
                "second11": second,
                "R": list(g.so_basis[8:18]),
                "S": list(g.so_basis[18:28]),
                "22": spaces["22"],
            },
        )
    raise ValueError("ambient must be 'so53' or 'gl8'")


def _split_isotypic(mats, g: Sl3):
    sym, skew = [], []
    for m in mats:
        a = (m + _kappa_transpose(m, g)).scale(Fraction(1, 2))
        b = (m - _kappa_transpose(m, g)).scale(Fraction(1, 2))
        if not a.is_zero():
            sym.append(a)
        if not b.is_zero():
            skew.append(b)
    return _independent(sym), _independent(skew)


def _kappa_transpose(M: Matrix, g: Sl3) -> Matrix:
    kinv = from_columns(
        [solve_linear(g.kappa, eye_row(j, 8)) for j in range(8)]
    )
    return kinv * M.transpose() * g.kappa


def _independent(mats):
    rows, keep = [], []
    for m in mats:
        cand = rows + [flatten(m)]
        if Matrix(cand).rank() == len(cand):
            rows.append(flatten(m))
            keep.append(m)
    return keep


def bracket_inclusions():
    """Check [R,R] in S, [S,S] in R, [R,S] in ad(g) for all basis pairs."""
    g = build_sl3()
    c = g.so_structure()
    failures = []
    rng_ad, rng_r, rng_s = range(0, 8), range(8, 18), range(18, 28)

    def off_support(coords, allowed):
        return [k for k, v in enumerate(coords) if v and k not in allowed]

    for i in rng_r:
        for j in rng_r:
            bad = off_support(c[i][j], set(rng_s))
            if bad:
                failures.append(("R,R", i, j, bad))
    for i in rng_s:
        for j in rng_s:
            bad = off_support(c[i][j], set(rng_r))
            if bad:
                failures.append(("S,S", i, j, bad))
    for i in rng_r:
        for j in rng_s:
            bad = off_support(c[i][j], set(rng_ad))
            if bad:
                failures.append(("R,S", i, j, bad))
    return failures


def so_basis_index(kind: str, label=None) -> int:
    """Index into the 28-element so-basis. kind in {'ad','R','S'}."""
    if kind == "ad":
        return label
    if kind == "R":
        return 8 + R_LABELS.index(label)
    if kind == "S":
        return 18 + S_LABELS.index(label)
    raise ValueError(kind)


def dump_so_basis_json():
    """All 28 so-basis matrices plus kappa, exact entries."""
    g = build_sl3()
    names = (
        ["ad_A%d" % (i + 1) for i in range(8)]
        + ["R_%d_%d" % l for l in R_LABELS]
        + ["S_%d_%d" % l for l in S_LABELS]
    )
    return {
        "kappa": g.kappa.to_json(),
        "basis": {name: m.to_json() for name, m in zip(names, g.so_basis)},
        "degrees": {name: d for name, d in zip(names, g.so_degrees)},
    }
