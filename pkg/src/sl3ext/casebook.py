"""The case catalog: symmetry algebras, so(5,3) embeddings, verification.

Each catalogued case stores the verbatim published embedding next to the one
derived from the solved structure tables.  The three checks (so-membership,
flatness [phi(Zi),phi(Zj)] = phi(gamma(Zi,Zj)), symbol condition) are the
ground truth; whenever the two transcriptions disagree the checks decide and
the report records the discrepancy instead of silently correcting anything.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Matrix, MultiPoly, char_poly, from_columns, is_zero, mat_kernel, solve_linear, sym_signature
from .cochain import module
from .sl3 import (
    CHECK_E0,
    CHECK_E1,
    CHECK_E2,
    E0,
    E1,
    E2,
    H1,
    H2,
    R_LABELS,
    S_LABELS,
    build_sl3,
    so_basis_index,
)
from .structeq import (
    PARAMS,
    K,
    P,
    TransitiveData,
    reduce_mod_product,
    solve_degrees,
)

CASE_IDS = ("O", "I0", "I1", "I2", "I2prime", "II0", "II1", "II2")


def _sym(name):
    return P(name)


def _const(c):
    return K(c)


class CaseSpec:
    def __init__(self, case_id, symmetry_name, branch, subcase, case_subs,
                 defaults, constraints, nonzero, pde, printed, excluded=False,
                 product_relation=None):
        self.case_id = case_id
        self.symmetry_name = symmetry_name
        self.branch = branch            # None for the flat case
        self.subcase = subcase
        self.case_subs = case_subs      # extra substitutions (e.g. Q21 = P1^2)
        self.defaults = defaults        # name -> Fraction
        self.constraints = constraints  # polys that must vanish at params
        self.nonzero = nonzero          # params that must not vanish
        self.pde = pde                  # two annihilator operators
        self.printed = printed          # verbatim published embedding
        self.excluded = excluded        # admits extra symmetry, dropped from the list
        self.product_relation = product_relation  # value of P1*P2, if constrained

    def check_params(self, params):
        vals = dict(self.defaults)
        vals.update(params)
        for c in self.constraints:
            if c.eval({k: vals.get(k, Fraction(0)) for k in PARAMS}) != 0:
                return False, "constraint %s violated" % c
        for n in self.nonzero:
            if vals.get(n, Fraction(0)) == 0:
                return False, "parameter %s must be nonzero" % n
        if self.case_id == "I1" and not (vals.get("P2") or vals.get("Q12")):
            return False, "P2 and Q12 must not both vanish"
        return True, ""


# ---------------------------------------------------------------------------
# embeddings from the solved tables
# ---------------------------------------------------------------------------

def _phi_coords(branch, subcase, case_subs):
    """28-coordinate vectors (polynomials) of phi(Z0), phi(Z1), phi(Z2)."""
    if branch is None:  # flat case
        coords = []
        for gm in (E0, E1, E2):
            v = [MultiPoly(PARAMS)] * 28
            v = list(v)
            v[gm] = K(1)
            coords.append(v)
        return coords
    data, _ = solve_degrees(branch, subcase)
    subs = dict(data.subs)
    subs.update(case_subs)
    # re-reduce after the case relations
    for k in list(subs):
        if isinstance(subs[k], MultiPoly):
            subs[k] = subs[k].subs(case_subs)
    out = []
    for slot, gm in ((0, E0), (1, E1), (2, E2)):
        v = [MultiPoly(PARAMS) for _ in range(28)]
        v[gm] = K(1)
        full = data.psi + data.chi
        for idx, coeff in full.data.get((slot,), {}).items():
            v[idx] = v[idx] + coeff.subs(subs)
        out.append(v)
    return out


def coords_to_matrix(coords, values=None, mod_product=None):
    """Turn a 28-coordinate polynomial vector into an 8x8 matrix.

    values: map param -> Fraction for full evaluation; otherwise entries stay
    polynomial (optionally reduced modulo P1*P2 = mod_product).
    """
    g = build_sl3()
    if values is not None:
        total = Matrix.zero(8, 8)
        env = {k: values.get(k, Fraction(0)) for k in PARAMS}
        for j, c in enumerate(coords):
            val = c.eval(env) if isinstance(c, MultiPoly) else c
            if val:
                total = total + g.so_basis[j].scale(val)
        return total
    rows = [[MultiPoly(PARAMS) for _ in range(8)] for _ in range(8)]
    for j, c in enumerate(coords):
        if isinstance(c, MultiPoly) and c.is_zero():
            continue
        if mod_product is not None:
            c = reduce_mod_product(c, mod_product)
        b = g.so_basis[j]
        for r in range(8):
            for s in range(8):
                if b.data[r][s]:
                    rows[r][s] = rows[r][s] + c * b.data[r][s]
    return Matrix(rows)


def case_catalog():
    """All eight catalogued cases, verbatim transcriptions included."""
    return [case_spec(cid) for cid in CASE_IDS]


def case_spec(case_id: str) -> CaseSpec:
    p1, p2, q12 = _sym("P1"), _sym("P2"), _sym("Q12")
    one = Fraction(1)
    if case_id == "O":
        return CaseSpec(
            "O", "sl(3,R)", None, None, {}, {}, [], [],
            pde=((("Z1", "Z1"),), (("Z2", "Z2"),)),
            printed={"Z0": {("ad", E0): K(1)},
                     "Z1": {("ad", E1): K(1)},
                     "Z2": {("ad", E2): K(1)}},
        )
    if case_id == "I0":
        printed = {
            "Z0": {("ad", E0): K(1)},
            "Z1": {("ad", E1): K(1)},
            "Z2": {("ad", E2): K(1), ("R", (-1, 1)): K(1)},
            "H": {("ad", H1): K(Fraction(5, 3)), ("ad", H2): K(Fraction(4, 3))},
        }
        return CaseSpec(
            "I0", "4-dim solvable", "R_only", "P1=P2=0",
            {"Q12": MultiPoly(PARAMS)}, {}, [], [],
            pde=_annihilators("I0"),
            printed=printed,
        )
    if case_id == "I1":
        return CaseSpec(
            "I1", "3-dim solvable", "R_only", "P1=0", {},
            {"P2": Fraction(5), "Q12": Fraction(0)},
            [], [],  # P2, Q12 not both zero is checked separately
            pde=_annihilators("I1"),
            printed={
                "Z0": {("ad", E0): K(1)},
                "Z1": {("ad", E1): K(1)},
                "Z2": {("ad", E2): K(1), ("ad", H1): Fraction(2, 3) * p2,
                       ("ad", H2): Fraction(1, 3) * p2,
                       ("ad", CHECK_E2): -q12, ("R", (-1, 1)): K(1)},
            },
        )
    if case_id == "I2":
        return CaseSpec(
            "I2", "3-dim solvable", "R_only", "P2=0",
            {"Q21": P("P1") ** 2},
            {"P1": Fraction(1)}, [], ["P1"],
            pde=_annihilators("I2"),
            printed={
                "Z0": {("ad", E0): K(1), ("R", (-1, 1)): -p1 / 2,
                       ("R", (1, 1)): 3 * p1 ** 3, ("R", (2, 1)): -6 * p1 ** 4},
                "Z1": {("ad", E1): K(1), ("ad", H1): p1 / 3, ("ad", H2): Fraction(2, 3) * p1,
                       ("ad", CHECK_E1): p1 ** 2},
                "Z2": {("ad", E2): K(1), ("R", (-1, 1)): K(1),
                       ("R", (0, 1)): Fraction(-3, 2) * p1, ("R", (2, 1)): 3 * p1 ** 3},
            },
        )
    if case_id == "I2prime":
        return CaseSpec(
            "I2prime", "3-dim solvable (always extends)", "R_only", "P2=0",
            {"Q21": Fraction(1, 4) * P("P1") ** 2},
            {"P1": Fraction(1)}, [], ["P1"],
            pde=_annihilators("I2prime"),
            printed={
                "Z0": {("ad", E0): K(1), ("R", (-1, 1)): -p1 / 2,
                       ("R", (0, 1)): Fraction(3, 4) * p1 ** 2,
                       ("R", (1, 1)): Fraction(-3, 4) * p1 ** 3,
                       ("R", (2, 1)): Fraction(3, 8) * p1 ** 4},
                "Z1": {("ad", E1): K(1), ("ad", H1): p1 / 3, ("ad", H2): Fraction(2, 3) * p1,
                       ("ad", CHECK_E1): p1 ** 2 / 4},
                "Z2": {("ad", E2): K(1), ("R", (-1, 1)): K(1),
                       ("R", (0, 1)): Fraction(-3, 2) * p1,
                       ("R", (1, 1)): Fraction(3, 2) * p1 ** 2,
                       ("R", (2, 1)): Fraction(-3, 4) * p1 ** 3},
            },
            excluded=True,
        )
    if case_id == "II0":
        return CaseSpec(
            "II0", "sl(2,R)", "both_nonzero", None,
            {"P1": MultiPoly(PARAMS), "P2": MultiPoly(PARAMS),
             "Q12": MultiPoly(PARAMS), "Q21": MultiPoly(PARAMS)},
            {}, [], [],
            pde=_annihilators("II0"),
            printed={
                # section-7 transcription; the S1 companion display writes
                # check_e1 in phi(Z2) instead -- the checks adjudicate
                "Z0": {("ad", E0): K(1), ("ad", H1): K(Fraction(6, 5)),
                       ("ad", H2): K(Fraction(-6, 5)), ("ad", CHECK_E0): K(Fraction(2916, 25))},
                "Z1": {("ad", E1): K(1), ("S", (1, -1)): K(1),
                       ("ad", CHECK_E2): K(Fraction(-54, 5))},
                "Z2": {("ad", E2): K(1), ("R", (-1, 1)): K(1),
                       ("ad", CHECK_E2): K(Fraction(-54, 5))},
            },
        )
    if case_id == "II1":
        return CaseSpec(
            "II1", "3-dim solvable", "both_nonzero", None,
            {"Q21": P("P1") ** 2, "Q12": -P("P2") ** 2},
            {"P1": Fraction(1), "P2": Fraction(-9)},
            [P("P1") * P("P2") + 9], ["P1", "P2"],
            pde=_annihilators("II1"),
            printed=_printed_II1(),
            product_relation=Fraction(-9),
        )
    if case_id == "II2":
        return CaseSpec(
            "II2", "3-dim solvable", "both_nonzero", None,
            {"Q21": Fraction(1, 4) * P("P1") ** 2, "Q12": Fraction(-1, 4) * P("P2") ** 2},
            {"P1": Fraction(12), "P2": Fraction(-12)},
            [P("P1") * P("P2") + 144], ["P1", "P2"],
            pde=_annihilators("II2"),
            printed=_printed_II2(),
            product_relation=Fraction(-144),
        )
    raise ValueError("unknown case %r" % case_id)


def _printed_II1():
    p1, p2 = _sym("P1"), _sym("P2")
    return {
        "Z0": {("ad", E0): K(1),
               ("R", (-1, 1)): -p1 / 2, ("S", (1, -1)): p2 / 2,
               ("R", (1, 1)): 3 * p1 ** 3, ("S", (1, 1)): -3 * p2 ** 3,
               ("R", (2, 1)): -6 * p1 ** 4, ("S", (1, 2)): 6 * p2 ** 4,
               ("ad", H1): K(Fraction(3, 2)), ("ad", H2): K(Fraction(-3, 2)),
               ("ad", CHECK_E1): 9 * p1, ("ad", CHECK_E2): -9 * p2,
               ("ad", CHECK_E0): K(Fraction(-567, 4))},
        "Z1": {("ad", E1): K(1), ("S", (1, -1)): K(1),
               ("S", (1, 0)): Fraction(-3, 2) * p2, ("S", (1, 2)): -3 * p2 ** 3,
               ("ad", H1): p1 / 3, ("ad", H2): Fraction(2, 3) * p1,
               ("ad", CHECK_E1): p1 ** 2, ("ad", CHECK_E2): K(Fraction(-27, 2)),
               ("ad", CHECK_E0): Fraction(9, 2) * p1},
        # verbatim: the generator is printed as e1 (expected e2); R-coefficient
        # of R_{2,1} is printed with exponent 2 (expected 3)
        "Z2": {("ad", E1): K(1), ("R", (-1, 1)): K(1),
               ("R", (0, 1)): Fraction(-3, 2) * p1, ("R", (2, 1)): 3 * p1 ** 2,
               ("ad", H1): Fraction(2, 3) * p2, ("ad", H2): p2 / 3,
               ("ad", CHECK_E1): K(Fraction(-27, 2)), ("ad", CHECK_E2): p2 ** 2,
               ("ad", CHECK_E0): Fraction(-9, 2) * p2},
    }


def _printed_II2():
    p1, p2 = _sym("P1"), _sym("P2")
    return {
        "Z0": {("ad", E0): K(1),
               ("R", (-1, 1)): -p1 / 2, ("S", (1, -1)): p2 / 2,
               ("R", (0, 1)): Fraction(3, 4) * p1 ** 2, ("S", (1, 0)): Fraction(-3, 4) * p2 ** 2,
               ("R", (1, 1)): Fraction(3, 4) * p1 ** 3, ("S", (1, 1)): Fraction(-3, 4) * p2 ** 3,
               ("R", (2, 1)): Fraction(3, 8) * p1 ** 4, ("S", (1, 2)): Fraction(-3, 8) * p2 ** 4,
               ("ad", H1): K(6), ("ad", H2): K(-6), ("ad", CHECK_E0): K(324)},
        "Z1": {("ad", E1): K(1), ("S", (1, -1)): K(1),
               ("S", (1, 0)): Fraction(-3, 2) * p2, ("S", (1, 1)): Fraction(3, 2) * p2 ** 2,
               ("S", (1, 2)): Fraction(-3, 4) * p2 ** 3,
               ("ad", H1): p1 / 3, ("ad", H2): Fraction(2, 3) * p1,
               ("ad", CHECK_E1): p1 ** 2 / 4, ("ad", CHECK_E2): K(-54)},
        "Z2": {("ad", E1): K(1), ("R", (-1, 1)): K(1),
               ("R", (0, 1)): Fraction(-3, 2) * p1, ("R", (1, 1)): Fraction(3, 2) * p1 ** 2,
               ("R", (2, 1)): Fraction(-3, 4) * p1 ** 3,
               ("ad", H1): Fraction(2, 3) * p2, ("ad", H2): p2 / 3,
               ("ad", CHECK_E1): K(-54), ("ad", CHECK_E2): p2 ** 2 / 4},
    }


def _annihilators(case_id):
    """The two equations in annihilator form: lists of (coeff, word)."""
    p1, p2, q12 = _sym("P1"), _sym("P2"), _sym("Q12")
    one = K(1)
    if case_id == "O":
        return ([(one, ("Z1", "Z1"))], [(one, ("Z2", "Z2"))])
    if case_id == "I0":
        return ([(one, ("Z1", "Z1"))],
                [(one, ("Z2", "Z2")), (K(-6), ("Z1",))])
    if case_id == "I1":
        return ([(one, ("Z1", "Z1"))],
                [(one, ("Z2", "Z2")), (K(-6), ("Z1",)), (-2 * p2, ("Z2",)),
                 (q12 + p2 ** 2, ())])
    if case_id == "I2":
        return ([(one, ("Z1", "Z1")), (-2 * p1, ("Z1",))],
                [(one, ("Z2", "Z2")), (K(-6), ("Z1",)), (9 * p1, ())])
    if case_id == "I2prime":
        return ([(K(4), ("Z1", "Z1")), (-8 * p1, ("Z1",)), (3 * p1 ** 2, ())],
                [(one, ("Z2", "Z2")), (K(-6), ("Z1",)), (9 * p1, ())])
    if case_id == "II0":
        return ([(one, ("Z1", "Z1")), (K(6), ("Z2",))],
                [(one, ("Z2", "Z2")), (K(-6), ("Z1",))])
    if case_id == "II1":
        # (Z1-P1)^2 + 6(Z2-P2) - (P1^2+3P2) expands to Z1^2 - 2P1 Z1 + 6Z2 - 9P2
        return (
            [(one, ("Z1", "Z1")), (-2 * p1, ("Z1",)), (K(6), ("Z2",)),
             (-9 * p2, ())],
            [(one, ("Z2", "Z2")), (-2 * p2, ("Z2",)), (K(-6), ("Z1",)),
             (9 * p1, ())],
        )
    if case_id == "II2":
        return (
            [(one, ("Z1", "Z1")), (-2 * p1, ("Z1",)), (K(6), ("Z2",)),
             (Fraction(3, 4) * p1 ** 2 - 9 * p2, ())],
            [(one, ("Z2", "Z2")), (-2 * p2, ("Z2",)), (K(-6), ("Z1",)),
             (Fraction(3, 4) * p2 ** 2 + 9 * p1, ())],
        )
    raise ValueError(case_id)


def bracket_table(spec: CaseSpec, values=None):
    """gamma brackets on (Z0, Z1, Z2): list over pairs (0,1), (0,2), (1,2)."""
    if spec.branch is None:
        table = {(0, 1): [K(0)] * 3, (0, 2): [K(0)] * 3, (1, 2): [K(-1), K(0), K(0)]}
    else:
        data, _ = solve_degrees(spec.branch, spec.subcase)
        subs = dict(data.subs)
        subs.update(spec.case_subs)
        table = {}
        for wedge, vec in data.gamma.items():
            table[wedge] = [c.subs(subs).subs(spec.case_subs) for c in vec]
    if values is not None:
        env = {k: values.get(k, Fraction(0)) for k in PARAMS}
        table = {w: [c.eval(env) for c in vec] for w, vec in table.items()}
    return table


def embedding_coords(case_id: str):
    """Derived 28-coordinate polynomial vectors for phi(Z0..Z2)."""
    spec = case_spec(case_id)
    if spec.branch is None:
        return _phi_coords(None, None, {})
    return _phi_coords(spec.branch, spec.subcase, spec.case_subs)


def embedding(case_id: str, values=None):
    """Derived embedding matrices at given parameter values (or defaults)."""
    spec = case_spec(case_id)
    vals = dict(spec.defaults)
    if values:
        vals.update(values)
    ok, msg = spec.check_params(vals)
    if not ok:
        raise ValueError(msg)
    coords = embedding_coords(case_id)
    return [coords_to_matrix(c, vals) for c in coords]


def printed_embedding(case_id: str, values=None):
    spec = case_spec(case_id)
    vals = dict(spec.defaults)
    if values:
        vals.update(values)
    out = []
    env = {k: vals.get(k, Fraction(0)) for k in PARAMS}
    g = build_sl3()
    for zname in ("Z0", "Z1", "Z2"):
        total = Matrix.zero(8, 8)
        for (kind, label), coeff in spec.printed[zname].items():
            val = coeff.eval(env) if isinstance(coeff, MultiPoly) else coeff
            if val:
                total = total + g.so_basis[so_basis_index(kind, label)].scale(val)
        out.append(total)
    return out


def vanishing_embedding(P1v, P2v, Q12v, Q21v):
    """R_only-branch embedding at explicit rational parameter values."""
    coords = _phi_coords("R_only", None, {})
    vals = {"P1": P1v, "P2": P2v, "Q12": Q12v, "Q21": Q21v}
    return [coords_to_matrix(c, vals) for c in coords]


# ---------------------------------------------------------------------------
# the three checks
# ---------------------------------------------------------------------------

def check_so_membership(mats):
    g = build_sl3()
    return [g.is_in_so(m) for m in mats]


def check_flatness(mats, table):
    """[phi(Zi), phi(Zj)] - phi(gamma(Zi,Zj)) for all pairs; returns residuals."""
    out = {}
    for (i, j), vec in table.items():
        br = mats[i] * mats[j] - mats[j] * mats[i]
        rhs = Matrix.zero(8, 8)
        for m, c in enumerate(vec):
            if c:
                rhs = rhs + mats[m].scale(c)
        out[(i, j)] = br - rhs
    return out


def check_flatness_symbolic(case_id: str):
    """Flatness with symbolic parameters, reduced mod the product relation."""
    spec = case_spec(case_id)
    coords = embedding_coords(case_id)
    mats = [coords_to_matrix(c, None, mod_product=spec.product_relation) for c in coords]
    table = bracket_table(spec)
    ok = True
    for (i, j), vec in table.items():
        br = mats[i] * mats[j] - mats[j] * mats[i]
        rhs = Matrix([[MultiPoly(PARAMS) for _ in range(8)] for _ in range(8)])
        for m, c in enumerate(vec):
            if isinstance(c, MultiPoly) and c.is_zero():
                continue
            rhs = rhs + mats[m].scale(c)
        diff = br - rhs
        for r in range(8):
            for s in range(8):
                e = diff.data[r][s]
                if spec.product_relation is not None:
                    e = reduce_mod_product(e, spec.product_relation)
                if not e.is_zero():
                    ok = False
    return ok


def check_symbol_condition(case_id: str, mats):
    """Negative part is ad(e_i); chi part has positive degree with the
    branch's harmonic leading term."""
    g = build_sl3()
    spec = case_spec(case_id)
    h1S = 1 if spec.branch == "both_nonzero" else 0
    problems = []
    slot_deg = (-2, -1, -1)
    gm = (E0, E1, E2)
    for i, m in enumerate(mats):
        coords = g.so_coords(m)
        if coords is None:
            problems.append((i, "not in so(V,kappa)"))
            continue
        for j in (E0, E1, E2):
            want = Fraction(1) if j == gm[i] else Fraction(0)
            if coords[j] != want:
                problems.append((i, "g-minus part wrong at index %d" % j))
        for k in range(8, 28):
            d = g.so_degrees[k] - slot_deg[i]
            c = coords[k]
            if c == 0:
                continue
            if d < 1:
                problems.append((i, "chi component of degree %d" % d))
        # the degree-1 chi part must be exactly the branch's harmonic term
        for k in range(8, 28):
            d = g.so_degrees[k] - slot_deg[i]
            if d != 1:
                continue
            want = Fraction(0)
            if spec.branch is not None:
                if i == 2 and k == so_basis_index("R", (-1, 1)):
                    want = Fraction(1)
                if i == 1 and k == so_basis_index("S", (1, -1)):
                    want = Fraction(h1S)
            if coords[k] != want:
                problems.append((i, "chi_1 component at so index %d is %s" % (k, coords[k])))
    return problems


def compare_with_printed(case_id: str, values=None):
    """Coordinate-level diff between derived and verbatim embeddings."""
    g = build_sl3()
    derived = embedding(case_id, values)
    printed = printed_embedding(case_id, values)
    diffs = []
    for zi, (dm, pm) in enumerate(zip(derived, printed)):
        delta = pm - dm
        if delta.is_zero():
            continue
        coords = g.so_coords(delta)
        diffs.append({
            "generator": "Z%d" % zi,
            "so_coordinates_of_difference":
                [(k, str(c)) for k, c in enumerate(coords) if c] if coords else "outside so",
        })
    return diffs


class CaseReport:
    def __init__(self, case_id, values):
        self.case_id = case_id
        self.values = values
        self.so_ok = None
        self.flat_ok = None
        self.symbol_ok = None
        self.printed_flat_ok = None
        self.printed_diffs = None
        self.jacobi_ok = None

    def passed(self):
        return bool(self.so_ok and self.flat_ok and self.symbol_ok and self.jacobi_ok)


def verify_case(case_id: str, values=None) -> CaseReport:
    spec = case_spec(case_id)
    vals = dict(spec.defaults)
    if values:
        vals.update(values)
    rep = CaseReport(case_id, vals)
    mats = embedding(case_id, vals)
    rep.so_ok = all(check_so_membership(mats))
    table = bracket_table(spec, vals)
    residuals = check_flatness(mats, table)
    rep.flat_ok = all(m.is_zero() for m in residuals.values())
    rep.symbol_ok = not check_symbol_condition(case_id, mats)
    rep.jacobi_ok = jacobi_holds(table)
    printed = printed_embedding(case_id, vals)
    rep.printed_diffs = compare_with_printed(case_id, vals)
    printed_res = check_flatness(printed, table)
    rep.printed_flat_ok = all(m.is_zero() for m in printed_res.values())
    return rep


# ---------------------------------------------------------------------------
# abstract symmetry algebra invariants
# ---------------------------------------------------------------------------

def structure_constants_from_table(table):
    """c[i][j] vectors over (Z0,Z1,Z2) from the three bracket values."""
    n = 3
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), vec in table.items():
        for k, v in enumerate(vec):
            c[i][j][k] = v
            c[j][i][k] = -v
    return c


def jacobi_holds(table):
    c = structure_constants_from_table(table)
    n = 3

    def br(x, y):
        out = [Fraction(0)] * n
        for i in range(n):
            for j in range(n):
                if x[i] and y[j]:
                    for k in range(n):
                        out[k] += c[i][j][k] * x[i] * y[j]
        return out

    basis = [[Fraction(1) if t == s else Fraction(0) for t in range(n)] for s in range(n)]
    for a in range(n):
        for b in range(n):
            for d in range(n):
                lhs = br(basis[a], br(basis[b], basis[d]))
                m1 = br(br(basis[a], basis[b]), basis[d])
                m2 = br(basis[b], br(basis[a], basis[d]))
                if any(l - x - y for l, x, y in zip(lhs, m1, m2)):
                    return False
    return True


class SymmetryAlgebra:
    def __init__(self, case_id, values, table):
        self.case_id = case_id
        self.values = values
        self.table = table
        c = structure_constants_from_table(table)
        self.c = c
        n = 3
        ad = []
        for i in range(n):
            ad.append(Matrix([[c[i][j][k] for j in range(n)] for k in range(n)]))
        kil = Matrix([[(ad[i] * ad[j]).trace() for j in range(n)] for i in range(n)])
        self.killing = kil
        self.killing_rank = kil.rank()
        self.killing_signature = sym_signature(kil)
        der_vectors = []
        for (i, j), vec in table.items():
            der_vectors.append(list(vec))
        self.derived_dim = Matrix(der_vectors).rank() if der_vectors else 0
        self.derived_abelian = self._derived_abelian(der_vectors, c)
        self.jacobi_ok = jacobi_holds(table)

    @staticmethod
    def _derived_abelian(vectors, c):
        n = 3
        for x in vectors:
            for y in vectors:
                out = [Fraction(0)] * n
                for i in range(n):
                    for j in range(n):
                        if x[i] and y[j]:
                            for k in range(n):
                                out[k] += c[i][j][k] * x[i] * y[j]
                if any(out):
                    return False
        return True


def symmetry_algebra(case_id: str, values=None) -> SymmetryAlgebra:
    spec = case_spec(case_id)
    vals = dict(spec.defaults)
    if values:
        vals.update(values)
    ok, msg = spec.check_params(vals)
    if not ok:
        raise ValueError(msg)
    return SymmetryAlgebra(case_id, vals, bracket_table(spec, vals))


# ---------------------------------------------------------------------------
# stabilizer extensions
# ---------------------------------------------------------------------------

def stabilizer_extension(case_id: str, values=None):
    """Extension element ad(5H1+4H2+a1*che1+a2*che2+a0*che0), or None.

    Existence means span{phi(Z0..Z2), phi(H)} closes under the so(5,3)
    bracket; solved exactly by linearizing the d_i * a_k products and then
    re-verifying on the candidate.
    """
    spec = case_spec(case_id)
    vals = dict(spec.defaults)
    if values:
        vals.update(values)
    mats = embedding(case_id, vals)
    g = build_sl3()
    H0 = g.ad[H1].scale(Fraction(5)) + g.ad[H2].scale(Fraction(4))
    E = [g.ad[CHECK_E0], g.ad[CHECK_E1], g.ad[CHECK_E2]]
    # unknowns: a0,a1,a2 | c_ij (9) | d_i (3) | m_ik (9)
    nunk = 3 + 9 + 3 + 9
    rows, rhs = [], []
    for i in range(3):
        base = _comm(H0, mats[i])
        acoef = [_comm(E[k], mats[i]) for k in range(3)]
        for r in range(8):
            for s in range(8):
                row = [Fraction(0)] * nunk
                for k in range(3):
                    row[k] = acoef[k].data[r][s]
                for j in range(3):
                    row[3 + 3 * i + j] = -mats[j].data[r][s]
                row[12 + i] = -H0.data[r][s]
                for k in range(3):
                    row[15 + 3 * i + k] = -E[k].data[r][s]
                if any(row) or base.data[r][s]:
                    rows.append(row)
                    rhs.append(-base.data[r][s])
    sol = solve_linear(Matrix(rows), rhs)
    if sol is None:
        return None
    kern = mat_kernel(Matrix(rows))
    if any(any(v[t] for t in (0, 1, 2, 12, 13, 14)) for v in kern):
        raise RuntimeError("stabilizer solve underdetermined in (a, d)")
    a = sol[:3]
    # re-verify with the bilinear products in place
    Hm = H0 + sum((E[k].scale(a[k]) for k in range(3)), Matrix.zero(8, 8))
    span = mats + [Hm]
    for i in range(3):
        if not _in_span(_comm(Hm, mats[i]), span):
            return None
    return {"a0": a[0], "a1": a[1], "a2": a[2], "matrix": Hm}


def _comm(A, B):
    return A * B - B * A


def _in_span(M, mats):
    cols = [[m.data[r][s] for r in range(8) for s in range(8)] for m in mats]
    target = [M.data[r][s] for r in range(8) for s in range(8)]
    return solve_linear(from_columns(cols), target) is not None


def extension_locus_scan(grid=None):
    """Existence of the fourth symmetry across an (P2, Q12) grid for the
    one-parameter family with vanishing chi^S and P1 = 0."""
    if grid is None:
        grid = []
        for p2 in (Fraction(-10), Fraction(-5), Fraction(-1), Fraction(1),
                   Fraction(2), Fraction(5), Fraction(10)):
            grid.append((p2, -p2 ** 2 / 25))        # on the locus
            grid.append((p2, Fraction(1)))          # off the locus
            grid.append((p2, -p2 ** 2 / 25 + 1))    # off by one
    results = []
    for p2, q12 in grid:
        if p2 == 0 and q12 == 0:
            continue
        ext = stabilizer_extension("I1", {"P2": p2, "Q12": q12})
        on_locus = (q12 + p2 ** 2 / 25) == 0
        results.append(((p2, q12), ext is not None, on_locus))
    return results


# ---------------------------------------------------------------------------
# contact Cayley model
# ---------------------------------------------------------------------------

def cayley_model_checks():
    """Closure of the 4-dim model algebra plus the weight-scan uniqueness."""
    g = build_sl3()
    out = {}
    Hm = g.ad[H1].scale(Fraction(5)) + g.ad[H2].scale(Fraction(4))
    span = [g.ad[E0], g.ad[E1], g.ad[E2] + g.R[(-1, 1)], Hm]
    closed = True
    for i in range(4):
        for j in range(i + 1, 4):
            if not _in_span(_comm(span[i], span[j]), span):
                closed = False
    out["subalgebra_closed"] = closed
    from .cochain import rho_g0, xi1R, xi1S

    out["xi1R_annihilated"] = rho_g0(Fraction(5), Fraction(4), xi1R()).is_zero()
    # weight scan: on Hom(g_-, g-perp) the zero eigenspace of rho(5H1+4H2)
    # is exactly the line through xi1R; on Hom_+(g_-, g) it is trivial
    zR = _zero_eigenspace("gperp")
    out["gperp_zero_eigenspace_dim"] = len(zR)
    out["gperp_zero_eigenspace_is_xi1R"] = (
        len(zR) == 1 and _is_multiple_of_xi1R(zR[0])
    )
    zg = _zero_eigenspace("ad", positive_only=True)
    out["g_positive_zero_eigenspace_dim"] = len(zg)
    zS = _zero_eigenspace("S")
    out["homS_zero_eigenspace_dim"] = len(zS)
    return out


def _zero_eigenspace(mod_name, positive_only=False):
    from .cochain import WEDGES, basis_cochain, component_degree, rho_g0

    mod = module(mod_name)
    basis = []
    for wedge in WEDGES[1]:
        for idx in range(mod.dim):
            if positive_only and component_degree(mod, wedge, idx) < 1:
                continue
            basis.append((wedge, idx))
    cols = []
    for wedge, idx in basis:
        img = rho_g0(Fraction(5), Fraction(4), basis_cochain(1, mod, wedge, idx))
        col = [Fraction(0)] * len(basis)
        for w2, i2, v in img.entries():
            if (w2, i2) in basis:
                col[basis.index((w2, i2))] = v
            elif v:
                raise AssertionError("action left the filtered subspace")
        cols.append(col)
    vecs = mat_kernel(from_columns(cols))
    out = []
    for v in vecs:
        c = {}
        for (wedge, idx), coef in zip(basis, v):
            if coef:
                c[(wedge, idx)] = coef
        out.append(c)
    return out


def _is_multiple_of_xi1R(entry_dict):
    want = {((2,), so_basis_index("R", (-1, 1)) - 8)}
    return set(entry_dict) == want


# ---------------------------------------------------------------------------
# Tanaka prolongation
# ---------------------------------------------------------------------------

def cartan_span(pairs):
    """Degree-0 derivations of g_- from (l1, l2) -> l1 H1 + l2 H2."""
    g = build_sl3()
    out = []
    for l1, l2 in pairs:
        h = [Fraction(0)] * 8
        h[H1], h[H2] = Fraction(l1), Fraction(l2)
        m = [[Fraction(0)] * 3 for _ in range(3)]
        for s, gm in enumerate((E0, E1, E2)):
            br = g.bracket_g(h, _unit8(gm))
            for t, gm2 in enumerate((E0, E1, E2)):
                m[t][s] = br[gm2]
        out.append(Matrix(m))
    return out


def _unit8(i):
    v = [Fraction(0)] * 8
    v[i] = Fraction(1)
    return v


def tanaka_prolongation(g0_matrices, max_degree=8):
    """Graded components of degree >= 1 of the prolongation of g_- + g0.

    g0_matrices: list of 3x3 matrices acting on g_- in the basis (e0,e1,e2),
    each respecting the grading (e0 -> e0, span(e1,e2) -> itself).
    Returns the list of dimensions [dim g_1, dim g_2, ...] up to the first
    zero component.
    """
    dims = {-2: 1, -1: 2, 0: len(g0_matrices)}
    # level-k elements for k >= 1 are coordinate vectors
    # (u(e1) | u(e2) | u(e0)) of length 2*dims[k-1] + dims[k-2]

    def lower_bracket(level, coords, slot):
        """[u, e_slot] as coords in level-2 (slot 0) or level-1 (slot 1,2)."""
        if level == -2:
            return [Fraction(0)] * (2 if slot else 0)
        if level == -1:
            # u = c1 e1 + c2 e2; [u, e0] = 0, [u, e1] = c2 e0, [u, e2] = -c1 e0
            if slot == 0:
                return []
            return [coords[1]] if slot == 1 else [-coords[0]]
        if level == 0:
            m = Matrix.zero(3, 3)
            for c, mat in zip(coords, g0_matrices):
                if c:
                    m = m + mat.scale(c)
            col = [m.data[t][slot] for t in range(3)]
            if slot == 0:
                if col[1] or col[2]:
                    raise AssertionError("g0 element does not respect the grading")
                return [col[0]]
            if col[0]:
                raise AssertionError("g0 element does not respect the grading")
            return [col[1], col[2]]
        d1, d2 = dims[level - 1], dims[level - 2]
        if slot == 0:
            return list(coords[2 * d1: 2 * d1 + d2])
        base = (slot - 1) * d1
        return list(coords[base: base + d1])

    degree_dims = []
    k = 1
    while k <= max_degree:
        d1, d2 = dims[k - 1], dims[k - 2]
        d3 = dims.get(k - 3, 0)
        nunk = 2 * d1 + d2
        # conditions per unknown basis vector:
        #   (i)  u([e1,e2]) = [u(e1),e2] + [e1,u(e2)]  ->  level k-2
        #   (ii) 0 = [u(e_i),e0] + [e_i,u(e0)], i=1,2  ->  level k-3
        cols = []
        for unk in range(nunk):
            vec = [Fraction(0)] * nunk
            vec[unk] = Fraction(1)
            u_e1, u_e2 = vec[:d1], vec[d1:2 * d1]
            u_e0 = vec[2 * d1:]
            row_i = [
                -u_e0[t]
                - lower_bracket(k - 1, u_e1, 2)[t]
                + lower_bracket(k - 1, u_e2, 1)[t]
                for t in range(d2)
            ]
            rows_ii = []
            for i, u_ei in ((1, u_e1), (2, u_e2)):
                br1 = lower_bracket(k - 1, u_ei, 0)
                br2 = lower_bracket(k - 2, u_e0, i)
                rows_ii.extend(br1[t] - br2[t] for t in range(d3))
            cols.append(row_i + rows_ii)
        total = Matrix(cols).transpose() if cols else Matrix.zero(1, 0)
        if total.rows == 0 or total.cols == 0:
            kern = [[Fraction(1) if s == t else Fraction(0) for s in range(nunk)]
                    for t in range(nunk)]
        else:
            kern = mat_kernel(total)
        dim_k = len(kern)
        if dim_k == 0:
            break
        degree_dims.append(dim_k)
        dims[k] = dim_k
        k += 1
    else:
        raise RuntimeError("prolongation did not terminate by degree %d" % max_degree)
    return degree_dims


# ---------------------------------------------------------------------------
# spectra and filtrations
# ---------------------------------------------------------------------------

II0_EIGENVALUES = (
    Fraction(108, 5), Fraction(72, 5), Fraction(36, 5), Fraction(0),
    Fraction(0), Fraction(-36, 5), Fraction(-72, 5), Fraction(-108, 5),
)


def ii0_spectrum():
    """char poly of phi(Z0) for the sl(2) case factors over the stated values."""
    mats = embedding("II0")
    cp = char_poly(mats[0])
    t = MultiPoly.var(("t",), "t")
    expect = MultiPoly.const(("t",), Fraction(1))
    for r in II0_EIGENVALUES:
        expect = expect * (t - r)
    trace_sq = (mats[0] * mats[0]).trace()
    return {
        "char_poly_matches": cp == expect,
        "trace_zero": mats[0].trace() == 0,
        "sum_of_squares": trace_sq == sum(r * r for r in II0_EIGENVALUES),
    }


def osculating_filtration(case_id: str, values=None):
    """Dimension growth of U_{k+1} = U_k + phi(Z1) U_k + phi(Z2) U_k."""
    mats = embedding(case_id, values)
    vecs = [_unit8(0)]  # A1 spans the top filtrand
    dims = [1]
    while True:
        new = list(vecs)
        for v in vecs:
            new.append(mats[1].apply(v))
            new.append(mats[2].apply(v))
        basis = []
        for v in new:
            cand = basis + [v]
            if Matrix(cand).rank() == len(cand):
                basis.append(v)
        if len(basis) == dims[-1]:
            break
        vecs = basis
        dims.append(len(basis))
        if dims[-1] == 8:
            break
    return dims


def i0_bracket_rederivation():
    """Structure constants of the 4-dim model algebra from its matrices."""
    g = build_sl3()
    mats = embedding("I0") + [
        g.ad[H1].scale(Fraction(5, 3)) + g.ad[H2].scale(Fraction(4, 3))
    ]
    names = ("Z0", "Z1", "Z2", "H")
    cols = [[m.data[r][s] for r in range(8) for s in range(8)] for m in mats]
    A = from_columns(cols)
    table = {}
    for i in range(4):
        for j in range(i + 1, 4):
            br = _comm(mats[i], mats[j])
            target = [br.data[r][s] for r in range(8) for s in range(8)]
            x = solve_linear(A, target)
            if x is None:
                raise AssertionError("model algebra is not closed")
            table[(names[i], names[j])] = x
    return table


def case_dossier(case_id: str, values=None):
    """Everything about one case, JSON-ready."""
    from .algebra import fraction_str

    spec = case_spec(case_id)
    vals = dict(spec.defaults)
    if values:
        vals.update(values)
    rep = verify_case(case_id, vals)
    sym = symmetry_algebra(case_id, vals) if case_id != "O" else None
    mats = embedding(case_id, vals)
    out = {
        "case": case_id,
        "symmetry": spec.symmetry_name,
        "excluded": spec.excluded,
        "parameters": {k: fraction_str(v) for k, v in vals.items()
                       if isinstance(v, Fraction)},
        "checks": {
            "so_membership": rep.so_ok,
            "flatness": rep.flat_ok,
            "symbol_condition": rep.symbol_ok,
            "jacobi": rep.jacobi_ok,
            "printed_transcription_flat": rep.printed_flat_ok,
        },
        "printed_vs_derived_diffs": rep.printed_diffs,
        "osculating_dims": osculating_filtration(case_id, vals),
        "embedding": [m.to_json() for m in mats],
    }
    if sym is not None:
        out["invariants"] = {
            "killing_rank": sym.killing_rank,
            "killing_signature": list(sym.killing_signature),
            "derived_dim": sym.derived_dim,
            "derived_abelian": sym.derived_abelian,
        }
    return out
