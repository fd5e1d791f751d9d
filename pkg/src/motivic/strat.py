"""Stratification engines: class computations for the supported families.

Each engine takes defining polynomials, produces a ClassExpr, and logs a
Trace whose steps carry point-count identities.  Over a finite field every
identity is checkable by brute force, and the master invariant holds:
count_measure(result.class_expr, q) equals count_points of the input variety.

Families covered:
  * quadrics in any ambient dimension (full recursion, degenerate included),
  * unions of hyperplanes, with an independent inclusion-exclusion oracle,
  * cones over an arbitrary base,
  * cubics with a rational singular point (ambient >= 3),
  * unions of two quadrics with smooth Q1 (ambient >= 4, finite fields).

Engines raise ValueError on precondition violations and DefectError when an
internal cross-check fails (which would indicate a bug, never bad input).
"""

from __future__ import annotations

from .count import CountQuery, count_points, enumerate_points
from .fields import FieldSpec
from .kclass import (
    ClassExpr,
    CountTerm,
    EtaleAtom,
    Identity,
    StratResult,
    TraceStep,
    VarietyAtom,
    projective_space_class,
)
from .linalg import Matrix, extend_to_basis
from .poly import HomogPoly
from .points import projective_reps, rational_reps
from .quadform import (
    QuadForm,
    diagonalize,
    find_projective_point,
    hyperbolic_normalize,
)


class DefectError(RuntimeError):
    """An internal consistency check failed."""


def _staircase(k):
    """CountTerms summing to #P^k = 1 + q + ... + q^k (empty when k < 0)."""
    return [CountTerm(1, j) for j in range(k + 1)]


def _point_str(pt):
    return "(" + ":".join(str(c) for c in pt) + ")"


# ---------------------------------------------------------------------------
# quadrics


def class_of_quadric(f: HomogPoly, height: int = 10) -> StratResult:
    """Class of the degree-2 hypersurface V(f) in P^(nvars-1).

    Recursion: split off the radical of a degenerate form (cone structure),
    then repeatedly split hyperbolic planes at rational isotropic points.
    Base cases: one variable (empty), nondegenerate binary (two points or a
    conjugate pair).  Over a finite field the result is fully resolved; over
    Q a pointless nondegenerate form of rank >= 3 within the search height
    stays an unresolved atom.
    """
    if f.degree != 2:
        raise ValueError("expected a quadratic form, got degree %d" % f.degree)
    if f.is_zero():
        raise ValueError("zero polynomial")
    qf = QuadForm.from_poly(f)
    steps = []
    hyps = [("nondegenerate", qf.rank() == qf.nvars)]
    expr = _quadric_expr(qf, height, steps, hyps)
    return StratResult(expr, steps, expr.residue_mod_L(), hyps)


def _quadric_query(qf: QuadForm) -> CountQuery:
    return CountQuery(qf.spec, qf.nvars - 1, [qf.poly()])


def _quadric_expr(qf: QuadForm, height, steps, hyps) -> ClassExpr:
    spec = qf.spec
    nvars = qf.nvars
    n = nvars - 1
    finite = spec.is_finite
    rank = qf.rank()

    if rank == 0:
        # defensive: the zero form cuts out everything
        if finite:
            ident = Identity(
                [CountTerm(1, 0, CountQuery(spec, n))], _staircase(n)
            )
        else:
            ident = None
        steps.append(TraceStep(
            "zero-form",
            "the zero form in %d variables cuts out all of P^%d" % (nvars, n),
            ident,
        ))
        return projective_space_class(n)

    if rank < nvars:
        # degenerate: V(q) is a cone over the nondegenerate part with vertex
        # the projectivized radical P^(n-rank)
        M, diag = diagonalize(qf)
        order = [i for i, d in enumerate(diag) if not d.is_zero()]
        order += [i for i, d in enumerate(diag) if d.is_zero()]
        cols = M.columns()
        M2 = Matrix.from_columns(spec, [cols[i] for i in order])
        entries = [diag[i] for i in order[:rank]]
        sub = QuadForm.diagonal(spec, entries)
        vertex_dim = n - rank
        shift = n - rank + 1
        ident = None
        if finite:
            ident = Identity(
                [CountTerm(1, 0, _quadric_query(qf))],
                _staircase(vertex_dim)
                + [CountTerm(1, shift, _quadric_query(sub))],
            )
        steps.append(TraceStep(
            "radical-split",
            "rank %d form in %d variables: cone with vertex P^%d over the "
            "diagonalized nondegenerate part in P^%d" % (rank, nvars, vertex_dim, rank - 1),
            ident,
            check={"diagonal": [str(d) for d in entries],
                   "substitution": [[str(v) for v in col] for col in M2.columns()]},
        ))
        child = _quadric_expr(sub, height, steps, hyps)
        return projective_space_class(vertex_dim) + child.lshift(shift)

    # nondegenerate from here on
    if nvars == 1:
        ident = Identity([CountTerm(1, 0, _quadric_query(qf))], []) if finite else None
        steps.append(TraceStep(
            "empty-in-one-variable",
            "a nonzero form in one variable has no projective zeros",
            ident,
        ))
        return ClassExpr()

    if nvars == 2:
        g = qf.gram
        det = g.rows[0][0] * g.rows[1][1] - g.rows[0][1] * g.rows[1][0]
        split = (-det).is_square()
        if split:
            ident = Identity(
                [CountTerm(1, 0, _quadric_query(qf))], [CountTerm(2)]
            ) if finite else None
            steps.append(TraceStep(
                "binary-split",
                "nondegenerate binary form with square -det: two rational zeros",
                ident,
                check={"neg_det": str(-det), "square": True},
            ))
            return ClassExpr.from_int(2)
        ident = Identity([CountTerm(1, 0, _quadric_query(qf))], []) if finite else None
        steps.append(TraceStep(
            "binary-conjugate-pair",
            "nondegenerate binary form with nonsquare -det: a conjugate point "
            "pair over the quadratic extension",
            ident,
            check={"neg_det": str(-det), "square": False},
        ))
        return ClassExpr.from_atom(EtaleAtom((2,)))

    pt = find_projective_point(qf, height)
    if pt is None:
        if finite:
            raise DefectError(
                "no isotropic point on a nondegenerate form over a finite field"
            )
        hyps.append(("rational_point_found", False))
        steps.append(TraceStep(
            "unresolved-pointless-form",
            "no rational zero up to height %d; the form stays an unresolved "
            "atom" % height,
            None,
        ))
        atom = VarietyAtom(spec, n, [qf.poly()], resolved=False)
        return ClassExpr.from_atom(atom)

    M, sub = hyperbolic_normalize(qf, pt)
    ident = None
    if finite:
        ident = Identity(
            [CountTerm(1, 0, _quadric_query(qf))],
            [CountTerm(1), CountTerm(1, 1, _quadric_query(sub)),
             CountTerm(1, n - 1)],
        )
    steps.append(TraceStep(
        "hyperbolic-split",
        "isotropic point %s: coordinates with x0*x1 + q'(x2..x%d); the x1-"
        "chart is an affine cell A^%d, its complement a cone over V(q')"
        % (_point_str(pt), n, n - 1),
        ident,
        check={"point": [str(c) for c in pt]},
    ))
    child = _quadric_expr(sub, height, steps, hyps)
    return ClassExpr({0: 1, n - 1: 1}) + child.lshift(1)


# ---------------------------------------------------------------------------
# hyperplane arrangements


def _normalize_forms(forms):
    """Scale each linear form so its first nonzero coefficient is 1, dedupe."""
    seen = set()
    out = []
    for h in forms:
        if h.degree != 1:
            raise ValueError("expected a linear form, got degree %d" % h.degree)
        if h.is_zero():
            raise ValueError("zero form")
        lead = None
        for i in range(h.nvars):
            c = h.coefficient_of(tuple(1 if j == i else 0 for j in range(h.nvars)))
            if not c.is_zero():
                lead = c
                break
        g = h.scale(lead.inverse())
        key = g.canonical_key()
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def _coeff_rows(forms):
    nvars = forms[0].nvars
    rows = []
    for h in forms:
        rows.append([
            h.coefficient_of(tuple(1 if j == i else 0 for j in range(nvars)))
            for i in range(nvars)
        ])
    return rows


def arrangement_inclusion_exclusion(forms) -> ClassExpr:
    """Scissor-relation oracle: alternating sum over subsets of hyperplanes.

    [union H_i] = sum over nonempty S of (-1)^(|S|+1) [P^(n - rank S)],
    with [P^m] = 0 for m < 0.  Exponential in the number of distinct forms.
    """
    forms = _normalize_forms(forms)
    d = len(forms)
    if d > 16:
        raise ValueError("too many hyperplanes for subset enumeration")
    spec = forms[0].spec
    n = forms[0].nvars - 1
    rows = _coeff_rows(forms)
    expr = ClassExpr()
    for mask in range(1, 1 << d):
        sub = [rows[i] for i in range(d) if mask >> i & 1]
        k = n - Matrix(spec, sub).rank()
        if k < 0:
            continue
        term = projective_space_class(k)
        expr = expr + term if bin(mask).count("1") % 2 else expr - term
    return expr


def class_of_arrangement(forms) -> StratResult:
    """Class of a union of hyperplanes V(h_1 * ... * h_d) in P^n.

    The span of the forms is rotated onto the first r coordinates, exposing
    the union as a cone with vertex P^(n-r) over the essential arrangement
    Z in P^(r-1), which inclusion-exclusion then resolves completely.
    """
    forms = list(forms)
    if not forms:
        raise ValueError("empty arrangement")
    given = len(forms)
    forms = _normalize_forms(forms)
    spec = forms[0].spec
    nvars = forms[0].nvars
    n = nvars - 1
    if any(h.nvars != nvars or h.spec != spec for h in forms):
        raise ValueError("forms live in different spaces")
    d = len(forms)
    finite = spec.is_finite

    A = Matrix(spec, _coeff_rows(forms))
    r = A.rank()
    radical = A.nullspace()
    ext = extend_to_basis(spec, radical, nvars)
    cols = ext.columns()
    M = Matrix.from_columns(spec, cols[len(radical):] + cols[:len(radical)])
    rotated = []
    for h in forms:
        g = h.linear_substitute(M)
        for i in range(r, nvars):
            if g.uses_variable(i):
                raise DefectError("rotation left a coefficient outside the span")
        rotated.append(g.remap_variables({i: i for i in range(r)}, r))

    steps = [TraceStep(
        "scalar-normalize",
        "%d forms given, %d distinct hyperplanes after scaling each leading "
        "coefficient to 1" % (given, d),
        None,
        check={"forms": [str(h) for h in forms]},
    )]

    product = forms[0]
    for h in forms[1:]:
        product = product * h
    rotated_product = rotated[0]
    for g in rotated[1:]:
        rotated_product = rotated_product * g

    ident = None
    if finite:
        ident = Identity(
            [CountTerm(1, 0, CountQuery(spec, n, [product]))],
            _staircase(n - r)
            + [CountTerm(1, n - r + 1, CountQuery(spec, r - 1, [rotated_product]))],
        )
    steps.append(TraceStep(
        "cone-fibration",
        "span has rank %d: the union is a cone with vertex P^%d over the "
        "essential arrangement Z in P^%d" % (r, n - r, r - 1),
        ident,
    ))

    z_expr = arrangement_inclusion_exclusion(rotated)
    ie_terms = []
    if finite:
        rows = _coeff_rows(rotated)
        for mask in range(1, 1 << d):
            sub = [rows[i] for i in range(d) if mask >> i & 1]
            k = (r - 1) - Matrix(spec, sub).rank()
            if k < 0:
                continue
            sign = 1 if bin(mask).count("1") % 2 else -1
            ie_terms.extend(CountTerm(sign, j) for j in range(k + 1))
        ident = Identity(
            [CountTerm(1, 0, CountQuery(spec, r - 1, [rotated_product]))],
            ie_terms,
        )
    else:
        ident = None
    steps.append(TraceStep(
        "inclusion-exclusion",
        "Z resolved by the alternating sum over the %d nonempty subsets of "
        "the %d hyperplanes" % ((1 << d) - 1, d),
        ident,
    ))

    expr = projective_space_class(n - r) + z_expr.lshift(n - r + 1)
    residue = expr.residue_mod_L()
    if d <= n and residue != 1:
        raise DefectError("arrangement residue is not 1 despite d <= n")
    hyps = [("d_le_n", d <= n)]
    return StratResult(expr, steps, residue, hyps)


# ---------------------------------------------------------------------------
# cones


def class_of_cone(generators) -> StratResult:
    """Class of the cone in P^n with apex [0:...:0:1] over Z in P^(n-1).

    The generators are given in the first n coordinates.  Lines through the
    apex give [X] = 1 + L*[Z].  Z stays an atom except in the one decidable
    case: all generators linear of full rank, hence Z empty and [X] = 1.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("empty generator list")
    spec = gens[0].spec
    nvars = gens[0].nvars  # Z lives in P^(nvars-1), the cone in P^nvars
    if any(g.spec != spec or g.nvars != nvars for g in gens):
        raise ValueError("generators live in different spaces")
    n = nvars
    finite = spec.is_finite

    live = [g for g in gens if not g.is_zero()]
    embedded = [g.insert_variable(nvars) for g in live]
    base_empty = False
    if live and all(g.degree == 1 for g in live):
        if Matrix(spec, _coeff_rows(live)).rank() == nvars:
            base_empty = True

    x_query = CountQuery(spec, n, embedded) if finite else None
    if base_empty:
        ident = Identity([CountTerm(1, 0, x_query)], [CountTerm(1)]) if finite else None
        steps = [TraceStep(
            "cone-over-empty",
            "the generators are linear of full rank, so the base is empty "
            "and the cone is the apex alone",
            ident,
        )]
        return StratResult(ClassExpr.from_int(1), steps, 1,
                           [("base_detected_empty", True)])

    atom = VarietyAtom(spec, nvars - 1, live)
    ident = None
    if finite:
        ident = Identity(
            [CountTerm(1, 0, x_query)],
            [CountTerm(1), CountTerm(1, 1, atom.query())],
        )
    steps = [TraceStep(
        "cone-split",
        "away from the apex, projection to P^%d is an A^1-fibration over Z"
        % (nvars - 1),
        ident,
    )]
    expr = ClassExpr.from_int(1) + ClassExpr.from_atom(atom, shift=1)
    return StratResult(expr, steps, 1, [("base_detected_empty", False)])


# ---------------------------------------------------------------------------
# singular cubics


def _is_singular_at(f: HomogPoly, pt) -> bool:
    if not f.evaluate(pt).is_zero():
        return False
    return all(
        f.partial_derivative(i).evaluate(pt).is_zero() for i in range(f.nvars)
    )


def find_singular_rational_point(f: HomogPoly, height: int = 10):
    """First point in canonical order where f and all partials vanish."""
    n = f.nvars - 1
    pts = (
        projective_reps(f.spec, n) if f.spec.is_finite else rational_reps(n, height)
    )
    for pt in pts:
        if _is_singular_at(f, pt):
            return pt
    return None


def class_of_singular_cubic(f: HomogPoly, x=None, height: int = 10) -> StratResult:
    """Class of a cubic hypersurface with a rational singular point, n >= 3.

    Coordinates move the singular point to [0:...:0:1]; there the cubic reads
    x_n*f2 + f3 with f2 quadratic and f3 cubic in the remaining variables.
    Lines through the point stratify X into the point, a section over the
    complement of V(f2), and an A^1-bundle over V(f2, f3).  When f2 = 0 the
    cubic is itself a cone and is delegated to class_of_cone.
    """
    if f.degree != 3:
        raise ValueError("expected a cubic, got degree %d" % f.degree)
    if f.is_zero():
        raise ValueError("zero polynomial")
    spec = f.spec
    nvars = f.nvars
    n = nvars - 1
    if n < 3:
        raise ValueError("ambient dimension must be at least 3")
    finite = spec.is_finite

    if x is None:
        x = find_singular_rational_point(f, height)
        if x is None:
            raise ValueError(
                "no singular rational point found"
                + ("" if finite else " up to height %d" % height)
            )
    else:
        x = tuple(spec.elem(v) for v in x)
        if all(v.is_zero() for v in x):
            raise ValueError("zero vector is not a projective point")
        if not _is_singular_at(f, x):
            raise ValueError("point not singular")

    ext = extend_to_basis(spec, [list(x)], nvars)
    cols = ext.columns()
    M = Matrix.from_columns(spec, cols[1:] + cols[:1])  # x becomes e_n
    g = f.linear_substitute(M)
    split = g.split_by_variable(n)
    if not split[3].is_zero() or not split[2].is_zero():
        raise DefectError("singular normalization failed")
    f2 = split[1].drop_variable(n)
    f3 = split[0].drop_variable(n)

    steps = []
    hyps = [("singular_point_found", True), ("f1_forced_zero", True)]
    ident = None
    if finite:
        ident = Identity(
            [CountTerm(1, 0, CountQuery(spec, n, [f]))],
            [CountTerm(1, 0, CountQuery(spec, n, [g]))],
        )
    steps.append(TraceStep(
        "singular-point-normalization",
        "singular point %s moved to [0:...:0:1]; the cubic splits as "
        "x%d*f2 + f3" % (_point_str(x), n),
        ident,
        check={"point": [str(c) for c in x]},
    ))

    if f2.is_zero():
        hyps.append(("f2_zero_cone_route", True))
        inner = class_of_cone([f3])
        steps.append(TraceStep(
            "cubic-is-cone",
            "f2 = 0: the cubic is free of x%d, a cone over V(f3)" % n,
            None,
        ))
        steps.extend(inner.trace)
        hyps.extend(inner.hypotheses)
        return StratResult(inner.class_expr, steps, inner.residue, hyps)

    hyps.append(("f2_zero_cone_route", False))
    quad = class_of_quadric(f2, height=height)
    atom = VarietyAtom(spec, n - 1, [f2, f3])
    ident = None
    if finite:
        ident = Identity(
            [CountTerm(1, 0, CountQuery(spec, n, [g]))],
            [CountTerm(1)]
            + _staircase(n - 1)
            + [CountTerm(-1, 0, CountQuery(spec, n - 1, [f2])),
               CountTerm(1, 1, CountQuery(spec, n - 1, [f2, f3]))],
        )
    steps.append(TraceStep(
        "three-strata",
        "lines through the singular point: the point itself, one residual "
        "intersection over P^%d minus V(f2), and an A^1-bundle over "
        "V(f2, f3)" % (n - 1),
        ident,
    ))
    steps.extend(quad.trace)

    expr = (
        ClassExpr.from_int(1)
        + (projective_space_class(n - 1) - quad.class_expr)
        + ClassExpr.from_atom(atom, shift=1)
    )
    return StratResult(expr, steps, expr.residue_mod_L(), hyps)


# ---------------------------------------------------------------------------
# union of two quadrics


def _proportional(g1: Matrix, g2: Matrix):
    """The scalar lam with g2 = lam * g1, or None."""
    lam = None
    n = g1.nrows
    for i in range(n):
        for j in range(n):
            a, b = g1.rows[i][j], g2.rows[i][j]
            if a.is_zero() != b.is_zero():
                return None
            if not a.is_zero():
                ratio = b / a
                if lam is None:
                    lam = ratio
                elif ratio != lam:
                    return None
    return lam


def class_of_two_quadric_union(f1: HomogPoly, f2: HomogPoly,
                               height: int = 10) -> StratResult:
    """Class of V(f1 * f2) for quadrics with V(f1) smooth, in P^n, n >= 4.

    Only finite fields: every derivation step is certified by counting, and
    the cubic hypersurface Y that appears stays an unresolved atom.  After
    hyperbolic coordinates for f1 at a point of the intersection, f1 = x0*x1
    - h and f2 = x1*L1 + x0*L0 + R; the intersection is traded chart by
    chart for loci in lower-dimensional projective spaces.
    """
    spec = f1.spec
    if not spec.is_finite:
        raise ValueError("two-quadric unions need a finite field of odd "
                         "characteristic")
    if f1.degree != 2 or f2.degree != 2:
        raise ValueError("both inputs must be quadratic forms")
    if f1.is_zero() or f2.is_zero():
        raise ValueError("zero polynomial")
    if f2.spec != spec or f2.nvars != f1.nvars:
        raise ValueError("forms live in different spaces")
    nvars = f1.nvars
    n = nvars - 1
    if n < 4:
        raise ValueError("ambient dimension must be at least 4")
    q1 = QuadForm.from_poly(f1)
    if not q1.is_nondegenerate():
        raise ValueError("Q1 not smooth")
    q2 = QuadForm.from_poly(f2)

    lam = _proportional(q1.gram, q2.gram)
    if lam is not None:
        inner = class_of_quadric(f1, height=height)
        ident = Identity(
            [CountTerm(1, 0, CountQuery(spec, n, [f1 * f2]))],
            [CountTerm(1, 0, CountQuery(spec, n, [f1]))],
        )
        steps = [TraceStep(
            "identical-quadrics",
            "f2 is a scalar multiple of f1; the union is V(f1) itself",
            ident,
        )]
        steps.extend(inner.trace)
        return StratResult(
            inner.class_expr, steps, inner.residue,
            [("q2_proportional_to_q1", True)] + inner.hypotheses,
        )

    x = None
    for pt in enumerate_points(CountQuery(spec, n, [f1, f2])):
        x = pt
        break
    if x is None:
        raise ValueError("no rational point on Q1 and Q2")

    M, _ = hyperbolic_normalize(q1, x)
    g1 = f1.linear_substitute(M)
    g2 = f2.linear_substitute(M)
    v0 = HomogPoly.variable(spec, nvars, 0)
    v1 = HomogPoly.variable(spec, nvars, 1)
    h = v0 * v1 - g1
    if h.uses_variable(0) or h.uses_variable(1):
        raise DefectError("hyperbolic normalization left x0/x1 in h")

    s = g2.split_by_variable(1)
    if not s[2].is_zero():
        raise DefectError("transformed f2 has an x1^2 term")
    L1 = s[1]
    w = s[0].split_by_variable(0)
    L0 = w[2] * v0 + w[1]
    R = w[0]
    if L1.is_zero():
        raise ValueError("unsupported configuration: L1 = 0")

    # P^(n-1) frame: z0 receives the x0 slot (it doubles as homogenizer of
    # the x0 != 0 chart), z(i-1) receives x_i for i >= 2; x1 is eliminated
    down = {0: 0}
    down.update({i: i - 1 for i in range(2, nvars)})
    hh = h.remap_variables(down, nvars - 1)
    LL1 = L1.remap_variables(down, nvars - 1)
    LL0 = L0.remap_variables(down, nvars - 1)
    RR = R.remap_variables(down, nvars - 1)
    z0 = HomogPoly.variable(spec, nvars - 1, 0)
    gbar = hh * LL1 + z0 * RR + z0 * z0 * LL0

    # P^(n-2) frame for the x0 = 0 chart: drop x0 and x1
    L1bar = L1.split_by_variable(0)[0]
    down2 = {i: i - 2 for i in range(2, nvars)}
    h2 = h.remap_variables(down2, nvars - 2)
    L1bar2 = L1bar.remap_variables(down2, nvars - 2)
    R2 = R.remap_variables(down2, nvars - 2)
    l1_survives = not L1bar2.is_zero()

    q_union = CountQuery(spec, n, [f1 * f2])
    q_q1 = CountQuery(spec, n, [f1])
    q_q2 = CountQuery(spec, n, [f2])
    q_meet = CountQuery(spec, n, [f1, f2])
    q_nz = CountQuery(spec, n, [g1, g2], [(0, "nonzero")])
    q_z = CountQuery(spec, n, [g1, g2], [(0, "zero")])
    q_y = CountQuery(spec, n - 1, [gbar])
    q_yy1 = CountQuery(spec, n - 1, [gbar, z0])
    q_hy1 = CountQuery(spec, n - 1, [hh, z0])
    q_l1y1 = CountQuery(spec, n - 1, [LL1, z0])
    q_hl1y1 = CountQuery(spec, n - 1, [hh, LL1, z0])
    q_h2 = CountQuery(spec, n - 2, [h2])
    q_hl2 = CountQuery(spec, n - 2, [h2, L1bar2])
    q_hlr2 = CountQuery(spec, n - 2, [h2, L1bar2, R2])

    steps = [TraceStep(
        "intersection-point-normalization",
        "point %s of Q1 and Q2 moved to [0:1:0:...:0]; f1 becomes x0*x1 - h "
        "and f2 splits as x1*L1 + x0*L0 + R" % _point_str(x),
        None,
        check={"point": [str(c) for c in x], "L1": str(L1), "L0": str(L0),
               "R": str(R), "h": str(h)},
    )]
    steps.append(TraceStep(
        "union-scissor",
        "(A) the union is counted by #Q1 + #Q2 - #(Q1 and Q2)",
        Identity([CountTerm(1, 0, q_union)],
                 [CountTerm(1, 0, q_q1), CountTerm(1, 0, q_q2),
                  CountTerm(-1, 0, q_meet)]),
    ))
    steps.append(TraceStep(
        "chart-split",
        "(B) the intersection splits over the charts x0 != 0 and x0 = 0 "
        "(in the new coordinates)",
        Identity([CountTerm(1, 0, q_meet)],
                 [CountTerm(1, 0, q_nz), CountTerm(1, 0, q_z)]),
    ))
    steps.append(TraceStep(
        "open-chart-cubic",
        "(C) on x0 != 0 the intersection is the affine part of the cubic "
        "Y = V(gbar) in P^%d, with y1 = z0 the hyperplane at infinity" % (n - 1),
        Identity([CountTerm(1, 0, q_nz)],
                 [CountTerm(1, 0, q_y), CountTerm(-1, 0, q_yy1)]),
    ))
    steps.append(TraceStep(
        "infinity-hyperplane",
        "(D) Y at infinity is V(h*L1), the union of a quadric and a "
        "hyperplane section",
        Identity([CountTerm(1, 0, q_yy1)],
                 [CountTerm(1, 0, q_hy1), CountTerm(1, 0, q_l1y1),
                  CountTerm(-1, 0, q_hl1y1)]),
    ))
    steps.append(TraceStep(
        "closed-chart-fibration",
        "(E) on x0 = 0: one section over V(h) minus V(L1), an A^1-bundle "
        "over V(h, L1, R), and the point [0:1:0:...:0], all in P^%d" % (n - 2),
        Identity([CountTerm(1, 0, q_z)],
                 [CountTerm(1, 0, q_h2), CountTerm(-1, 0, q_hl2),
                  CountTerm(1, 1, q_hlr2), CountTerm(1)]),
    ))

    sing_pts = 0
    all_singular = True
    grads = [gbar.partial_derivative(i) for i in range(nvars - 1)]
    for pt in enumerate_points(CountQuery(spec, n - 1, [z0, hh, LL1, RR])):
        sing_pts += 1
        if not all(dg.evaluate(pt).is_zero() for dg in grads):
            all_singular = False
    if not all_singular:
        raise DefectError("a point of S is not singular on Y")
    steps.append(TraceStep(
        "singular-containment",
        "(F) S = V(y1, h, L1, R) lies inside the singular locus of Y "
        "(%d points checked)" % sing_pts,
        None,
        check={"points": sing_pts, "all_singular": True},
    ))

    c1 = class_of_quadric(f1, height=height)
    c2 = class_of_quadric(f2, height=height)
    y_atom = VarietyAtom(spec, n - 1, [gbar], name="Y")
    fiber_atom = VarietyAtom(spec, n - 2, [h2, L1bar2, R2])
    infty = projective_space_class(n - 3 if l1_survives else n - 2)
    meet_expr = (
        ClassExpr.from_atom(y_atom)
        - infty
        + ClassExpr.from_atom(fiber_atom, shift=1)
        + ClassExpr.from_int(1)
    )
    expr = c1.class_expr + c2.class_expr - meet_expr
    hyps = [
        ("q1_nondegenerate", True),
        ("q2_distinct", True),
        ("intersection_point_found", True),
        ("no_x1_square_term", True),
        ("L1_nonzero", True),
        ("L1_survives_x0_chart", l1_survives),
    ]
    steps.extend(c1.trace)
    steps.extend(c2.trace)
    return StratResult(expr, steps, expr.residue_mod_L(), hyps)
