"""Dense exact matrices over a field (Fraction or QuadraticNumber entries).

Everything is Gaussian elimination with exact division; no floating point
anywhere.  Characteristic polynomials use Faddeev-LeVerrier so only division
by integers is needed.
"""

from __future__ import annotations

from fractions import Fraction

from .multipoly import MultiPoly
from .scalars import is_zero, rat


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        self.data = [list(row) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def zero(cls, rows, cols, zero=Fraction(0)):
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n, one=Fraction(1), zero=Fraction(0)):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def __setitem__(self, ij, v):
        self.data[ij[0]][ij[1]] = v

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def copy(self):
        return Matrix(self.data)

    def __add__(self, other):
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        )

    def __sub__(self, other):
        return Matrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        )

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.data])

    def scale(self, c):
        return Matrix([[c * a for a in r] for r in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ot = list(zip(*other.data))  # columns of other
            out = []
            for r in self.data:
                out.append(
                    [sum_products(r, c) for c in ot]
                )
            return Matrix(out)
        return self.scale(other)

    __rmul__ = scale

    def apply(self, vec):
        """Matrix-vector product on a plain list."""
        return [sum_products(r, vec) for r in self.data]

    def transpose(self):
        return Matrix([list(c) for c in zip(*self.data)])

    def trace(self):
        return sum_products([1] * self.rows, [self.data[i][i] for i in range(self.rows)])

    def is_zero(self):
        return all(is_zero(a) for r in self.data for a in r)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and (self - other).is_zero()
        )

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __repr__(self):
        return "Matrix(%d x %d)" % (self.rows, self.cols)

    def to_json(self):
        from .scalars import scalar_json

        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[scalar_json(a) for a in r] for r in self.data],
        }

    # -- elimination ------------------------------------------------------------
    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        m = [list(r) for r in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pr = None
            for i in range(r, self.rows):
                if not is_zero(m[i][c]):
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = m[r][c]
            m[r] = [a / inv for a in m[r]]
            for i in range(self.rows):
                if i != r and not is_zero(m[i][c]):
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(m), pivots

    def rank(self):
        return len(self.rref()[1])


def sum_products(xs, ys):
    total = None
    for x, y in zip(xs, ys):
        if is_zero(x) or is_zero(y):
            continue
        p = x * y
        total = p if total is None else total + p
    return total if total is not None else Fraction(0)


def mat_kernel(M: Matrix):
    """Basis of ker M as a list of column vectors (lists)."""
    R, pivots = M.rref()
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R.data[r][f]
        basis.append(v)
    return basis


def solve_linear(M: Matrix, b):
    """One exact solution of M x = b, or None if inconsistent."""
    aug = Matrix([row + [bv] for row, bv in zip(M.data, b)])
    R, pivots = aug.rref()
    if M.cols in pivots:
        return None
    x = [Fraction(0)] * M.cols
    for r, c in enumerate(pivots):
        x[c] = R.data[r][M.cols]
    return x


def from_columns(cols):
    return Matrix([list(r) for r in zip(*cols)])


def char_poly(M: Matrix, var="t") -> MultiPoly:
    """Monic characteristic polynomial det(t*I - M) via Faddeev-LeVerrier."""
    if M.rows != M.cols:
        raise ValueError("char_poly needs a square matrix")
    n = M.rows
    coeffs = [Fraction(1)]  # c_n = 1 for t^n
    Mk = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = M * Mk
        ck = -(Mk.trace() / k)
        coeffs.append(ck)
        for i in range(n):
            Mk.data[i][i] = Mk.data[i][i] + ck
    terms = {}
    for k, c in enumerate(coeffs):
        if not is_zero(c):
            terms[(n - k,)] = c
    return MultiPoly((var,), terms)


def eval_poly_at_matrix(p: MultiPoly, M: Matrix) -> Matrix:
    """Evaluate a univariate polynomial at a square matrix."""
    n = M.rows
    out = Matrix.zero(n, n)
    for e, c in p.terms.items():
        P = Matrix.identity(n)
        for _ in range(e[0]):
            P = P * M
        out = out + P.scale(c)
    return out


def sym_signature(K: Matrix):
    """Signature (n_plus, n_minus, n_zero) of an exact symmetric matrix.

    Sylvester's law via rational congruence reduction.
    """
    n = K.rows
    m = [list(r) for r in K.data]
    plus = minus = zero = 0
    idx = list(range(n))

    def congruence_step(a):
        nonlocal plus, minus
        # a = current diagonal block start
        # find nonzero diagonal entry
        p = None
        for i in range(a, n):
            if m[i][i] != 0:
                p = i
                break
        if p is None:
            # look for off-diagonal nonzero and symmetrize: x -> x + y trick
            for i in range(a, n):
                for j in range(i + 1, n):
                    if m[i][j] != 0:
                        for k in range(n):
                            m[i][k] += m[j][k]
                        for k in range(n):
                            m[k][i] += m[k][j]
                        return congruence_step(a)
            return None
        if p != a:
            m[a], m[p] = m[p], m[a]
            for k in range(n):
                m[k][a], m[k][p] = m[k][p], m[k][a]
        d = m[a][a]
        if d > 0:
            plus += 1
        else:
            minus += 1
        for i in range(a + 1, n):
            if m[i][a] != 0:
                f = m[i][a] / d
                for k in range(n):
                    m[i][k] -= f * m[a][k]
                for k in range(n):
                    m[k][i] -= f * m[k][a]
        return a + 1

    a = 0
    while a is not None and a < n:
        a = congruence_step(a)
    zero = n - plus - minus
    return plus, minus, zero
