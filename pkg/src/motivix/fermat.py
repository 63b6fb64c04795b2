"""The explicit genus-10 instance: plane curves, morphisms into CM
elliptic targets, symbolic pullbacks of the invariant differential,
permutation-representation membership of the resulting coefficients, a
finite-field degree oracle, and assembly of the axiomatic model that
feeds the decision procedure.

Conventions.  All curves live in the z = 1 affine chart; the canonical
form on a curve monic of degree m in y is dx/y^(m-1).  Homogenization
to degree 3 happens only inside rep_membership.
"""

import random
from fractions import Fraction as Rat

from .cmlat import AXIOMATIC, build_model
from .corr import build_grids
from .errors import InvalidInput, OracleError, ReductionError
from .exact import solve_field
from .motcalc import product_of_curves
from .polyring import (
    KNOWN_GENS,
    BiPoly,
    MultiNf,
    RatFunc,
    _BadPrime,
    _as_ratfunc,
    fp2_deg_x,
    fp2_deg_y,
    fp2_eval_x,
    fp2_scale,
    fp2_shear,
    fp2_sub,
    fp_distinct_root_count,
    fp_interp,
    fp_resultant,
    join_specs,
)

V111 = "V111"
V210 = "V210"
V300 = "V300"
NONE = "NONE"

_CLASS_OF_TRIPLE = {(3, 0, 0): V300, (2, 1, 0): V210, (1, 1, 1): V111}


class PlaneCurve:
    """Affine plane curve F(x, y) = 0, normalized monic in y."""

    __slots__ = ("F", "name")

    def __init__(self, F, name=""):
        if not isinstance(F, BiPoly) or F.deg_y < 1:
            raise InvalidInput("a plane curve needs positive y-degree")
        lead = F.x_slice(F.deg_y)
        if lead.deg_x > 0:
            raise InvalidInput("leading y-coefficient must be constant")
        lc = lead.coeff(0, 0)
        if lc != 1:
            F = F * lc.inverse()
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "name", str(name))

    def __setattr__(self, name, value):
        raise AttributeError("PlaneCurve is immutable")

    @property
    def deg_y(self):
        return self.F.deg_y

    @property
    def deg_x(self):
        return self.F.deg_x

    def reduce(self, poly):
        return poly.y_reduce(self.F)

    def __eq__(self, other):
        if not isinstance(other, PlaneCurve):
            return NotImplemented
        return self.F == other.F

    __hash__ = None

    def __repr__(self):
        return "PlaneCurve(%s, %r)" % (self.F, self.name)


def fermat_sextic():
    x, y = BiPoly.var_x(), BiPoly.var_y()
    return PlaneCurve(x**6 + y**6 + 1, "fermat-sextic")


def cm_elliptic():
    x, y = BiPoly.var_x(), BiPoly.var_y()
    return PlaneCurve(y**2 - x**3 + 1, "cm-elliptic")


def fermat_cubic():
    x, y = BiPoly.var_x(), BiPoly.var_y()
    return PlaneCurve(x**3 + y**3 + 1, "fermat-cubic")


class CurveMorphism:
    """Map between plane curves given by component functions u(x, y),
    v(x, y); checked against the target equation at construction."""

    __slots__ = ("source", "target", "u", "v")

    def __init__(self, source, target, u, v):
        if not isinstance(source, PlaneCurve) or not isinstance(target, PlaneCurve):
            raise InvalidInput("CurveMorphism needs PlaneCurve endpoints")
        u = _as_ratfunc(u)
        v = _as_ratfunc(v)
        for comp in (u, v):
            if comp.den.y_reduce(source.F).is_zero():
                raise InvalidInput(
                    "component denominator vanishes on the source curve"
                )
        image = target.F.subst(u, v)
        if not image.num.y_reduce(source.F).is_zero():
            raise InvalidInput("target equation does not vanish on the image")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("CurveMorphism is immutable")

    def __repr__(self):
        return "CurveMorphism(%s -> %s, u=%s, v=%s)" % (
            self.source.name or "?",
            self.target.name or "?",
            self.u,
            self.v,
        )


class DiffForm:
    """P du + Q dv with rational-function coefficients in the target
    coordinates (x, y standing for u, v)."""

    __slots__ = ("P", "Q")

    def __init__(self, P, Q):
        object.__setattr__(self, "P", _as_ratfunc(P))
        object.__setattr__(self, "Q", _as_ratfunc(Q))

    def __setattr__(self, name, value):
        raise AttributeError("DiffForm is immutable")


def canonical_form(curve):
    """du/v^(m-1) for a curve monic of y-degree m: du/v on the elliptic
    targets, du/v^2 on the cubic, dx/y^5 on the sextic itself."""
    m = curve.deg_y
    return DiffForm(RatFunc(BiPoly.const(1), BiPoly.monomial(0, m - 1)), 0)


class OmegaCoefficient:
    """A differential written as f times the canonical form of its
    curve, with f reduced to y-degree below deg_y(F)."""

    __slots__ = ("poly", "curve")

    def __init__(self, poly, curve):
        if not isinstance(poly, BiPoly) or not isinstance(curve, PlaneCurve):
            raise InvalidInput("OmegaCoefficient takes a BiPoly and a PlaneCurve")
        assert poly.deg_y < curve.deg_y or poly.is_zero()
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "curve", curve)

    def __setattr__(self, name, value):
        raise AttributeError("OmegaCoefficient is immutable")

    def __eq__(self, other):
        if isinstance(other, OmegaCoefficient):
            return self.poly == other.poly and self.curve == other.curve
        if isinstance(other, BiPoly):
            return self.poly == other
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return "(%s) * omega" % (self.poly,)


# x-degree sizes tried for the reduced pullback coefficient
_PULLBACK_XDEG_STEPS = (2, 6, 12, 20, 32)


def pullback(phi, form):
    """Pull a differential P du + Q dv on the target back along phi and
    express it as f times the canonical form of the source."""
    if not isinstance(phi, CurveMorphism) or not isinstance(form, DiffForm):
        raise InvalidInput("pullback takes a CurveMorphism and a DiffForm")
    src = phi.source
    F = src.F
    yprime = RatFunc(-F.diff_x(), F.diff_y())
    try:
        P = form.P.subst(phi.u, phi.v)
        Q = form.Q.subst(phi.u, phi.v)
        dU = phi.u.dx() + phi.u.dy() * yprime
        dV = phi.v.dx() + phi.v.dy() * yprime
        pulled = P * dU + Q * dV
    except InvalidInput as exc:
        raise ReductionError(str(exc)) from None
    m = src.deg_y
    f_rat = pulled * RatFunc(BiPoly.monomial(0, m - 1), BiPoly.const(1))
    spec = join_specs(join_specs(f_rat.num.spec, f_rat.den.spec), F.spec)
    A = f_rat.num.lift(spec).y_reduce(F)
    B = f_rat.den.lift(spec).y_reduce(F)
    if B.is_zero():
        raise ReductionError("denominator vanishes on the curve")
    if A.is_zero():
        return OmegaCoefficient(BiPoly.zero(spec), src)
    # find f with f*B = A modulo F; unique in the reduced window
    shifted = [B.y_reduce(F)]
    for j in range(1, m):
        shifted.append((shifted[-1] * BiPoly.var_y()).y_reduce(F))
    for dxb in _PULLBACK_XDEG_STEPS:
        cols = []
        for i in range(dxb + 1):
            for j in range(m):
                cols.append(
                    {(a + i, b): v for (a, b), v in shifted[j].c.items()}
                )
        keys = sorted(set(A.c) | {k for col in cols for k in col})
        zero = MultiNf.zero(spec)
        rows = [
            [col.get(k, zero).lift(spec) for col in cols] for k in keys
        ]
        rhs = [A.c.get(k, zero) for k in keys]
        sol = solve_field(rows, rhs)
        if sol is None:
            continue
        terms = {}
        pos = 0
        for i in range(dxb + 1):
            for j in range(m):
                terms[(i, j)] = sol[pos]
                pos += 1
        f = BiPoly(terms, spec=spec)
        assert ((f * B - A).y_reduce(F)).is_zero()
        return OmegaCoefficient(f, src)
    raise ReductionError(
        "no reduced representative up to x-degree %d" % _PULLBACK_XDEG_STEPS[-1]
    )


def rep_membership(f):
    """Which degree-3 monomial span the homogenized coefficient lies
    in: V300 = {x^3, y^3, z^3}, V210 = the six mixed-square monomials,
    V111 = {xyz}; NONE if mixed, inhomogeneous, or of degree > 3."""
    poly = f.poly if isinstance(f, OmegaCoefficient) else f
    if not isinstance(poly, BiPoly):
        raise InvalidInput("rep_membership takes an OmegaCoefficient or BiPoly")
    if poly.is_zero():
        return NONE
    degs = {i + j for (i, j) in poly.c}
    if len(degs) != 1:
        return NONE
    d = degs.pop()
    if d > 3:
        return NONE
    classes = set()
    for (i, j) in poly.c:
        classes.add(_CLASS_OF_TRIPLE[tuple(sorted((i, j, 3 - d), reverse=True))])
    if len(classes) != 1:
        return NONE
    return classes.pop()


# ---------------------------------------------------------------------------
# coordinate permutations of the Fermat curves

G1_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))
# identity, swap(x,y), swap(y,z): these three give independent images
G2_PERMS = ((0, 1, 2), (1, 0, 2), (0, 2, 1))


def perm_morphism(curve, pi):
    """The automorphism permuting the projective coordinates (x, y, z)
    of a Fermat-type curve by pi, written in the z = 1 chart."""
    pi = tuple(pi)
    if sorted(pi) != [0, 1, 2]:
        raise InvalidInput("pi must be a permutation of (0, 1, 2)")
    coords = (RatFunc.var_x(), RatFunc.var_y(), RatFunc.const(1))
    u = coords[pi[0]] / coords[pi[2]]
    v = coords[pi[1]] / coords[pi[2]]
    return CurveMorphism(curve, curve, u, v)


def compose_with_perm(phi, pi):
    """phi composed after the coordinate permutation pi of its source."""
    sigma = perm_morphism(phi.source, pi)
    return CurveMorphism(
        phi.source,
        phi.target,
        phi.u.subst(sigma.u, sigma.v),
        phi.v.subst(sigma.u, sigma.v),
    )


def _rank(rows):
    """Rank of a matrix over a field; entries need ==, /, *, -."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / lead[col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], lead)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def span_rank(forms):
    """Dimension of the span of coefficient polynomials."""
    polys = []
    for f in forms:
        polys.append(f.poly if isinstance(f, OmegaCoefficient) else f)
    spec = ()
    for p in polys:
        spec = join_specs(spec, p.spec)
    keys = sorted({k for p in polys for k in p.c})
    if not keys:
        return 0
    rows = [[p.lift(spec).coeff(i, j) for (i, j) in keys] for p in polys]
    return _rank(rows)


# ---------------------------------------------------------------------------
# finite-field degree oracle

_PRIME_FLOOR = 300
_GEN_MINPOLY = {name: poly for name, poly in KNOWN_GENS}


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _oracle_primes():
    p = _PRIME_FLOOR + 1
    while True:
        if p % 6 == 1 and _is_prime(p):
            yield p
        p += 2


def _gen_assignment(spec, p):
    """Roots mod p for every named constant in spec, or _BadPrime."""
    assign = {}
    for name in spec:
        poly = _GEN_MINPOLY[name]
        coeffs = [int(c) for c in poly]
        root = None
        for t in range(p):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * t + c) % p
            if acc == 0:
                root = t
                break
        if root is None:
            raise _BadPrime("no root of the minimal polynomial of %s" % name)
        assign[name] = root
    return assign


def _route_count(F_fp, A_fp, B_fp, p, rng, trials):
    """Largest generic fiber size of the map A/B : curve -> line mod p,
    counted over the algebraic closure by eliminating y with resultants
    after a random shear (the shear separates x-coordinates and feeds
    y-dependence into pure-x components)."""
    dy = fp2_deg_y(F_fp)
    sheared = []
    for _ in range(8):
        lam = rng.randrange(1, p)
        Ft = fp2_shear(F_fp, lam, p)
        dyt = fp2_deg_y(Ft)
        # interpolation needs a leading y-coefficient constant in x
        if any(i > 0 for (i, j) in Ft if j == dyt):
            continue
        lc = Ft.get((0, dyt), 0)
        if not lc:
            continue
        Ft = fp2_scale(Ft, pow(lc, p - 2, p), p)
        At = fp2_shear(A_fp, lam, p)
        Bt = fp2_shear(B_fp, lam, p)
        sheared.append((Ft, At, Bt))
        if len(sheared) == 2:
            break
    if not sheared:
        raise _BadPrime("no usable shear")
    best = 0
    for Ft, At, Bt in sheared:
        dxF, dyF = fp2_deg_x(Ft), fp2_deg_y(Ft)
        for _ in range(trials):
            u0 = rng.randrange(1, p)
            Gt = fp2_sub(At, fp2_scale(Bt, u0, p), p)
            if not Gt:
                continue
            dxG, dyG = fp2_deg_x(Gt), fp2_deg_y(Gt)
            if dyG < 1:
                continue
            bound = dxF * dyG + dxG * dyF
            xs = list(range(bound + 1))
            vals = [
                fp_resultant(fp2_eval_x(Ft, x0, p), fp2_eval_x(Gt, x0, p), p)
                for x0 in xs
            ]
            if not any(vals):
                continue
            R = fp_interp(xs, vals, p)
            best = max(best, fp_distinct_root_count(R, p))
    if best == 0:
        raise _BadPrime("no informative fiber sample")
    return best


def degree(phi, primes=None, trials=6, seed=0, attempts=25):
    """Degree of the function-field extension induced by phi,
    by generic-fiber counting modulo several good primes.

    Each coordinate route (u then v) counts the fibers of the composite
    curve -> line map and divides by the coordinate degree on the
    target; the routes must agree, and the result must repeat over
    three good primes in a row.  Assumes the component numerators and
    denominators have no common zero on the source curve.
    """
    if not isinstance(phi, CurveMorphism):
        raise InvalidInput("degree takes a CurveMorphism")
    rng = random.Random(seed)
    spec = ()
    parts = (
        phi.source.F,
        phi.target.F,
        phi.u.num,
        phi.u.den,
        phi.v.num,
        phi.v.den,
    )
    for part in parts:
        spec = join_specs(spec, part.spec)
    routes = (
        (phi.u, phi.target.F.deg_y),
        (phi.v, phi.target.F.deg_x),
    )
    prime_source = iter(primes) if primes is not None else _oracle_primes()
    agreed = []
    for _ in range(attempts):
        p = next(prime_source, None)
        if p is None:
            break
        try:
            assign = _gen_assignment(spec, p)
            F_fp = phi.source.F.lift(spec).map_fp(p, assign)
            vals = []
            for comp, target_deg in routes:
                assert target_deg > 0
                A_fp = comp.num.lift(spec).map_fp(p, assign)
                B_fp = comp.den.lift(spec).map_fp(p, assign)
                if not B_fp or not A_fp:
                    raise _BadPrime("component degenerates mod %d" % p)
                count = _route_count(F_fp, A_fp, B_fp, p, rng, trials)
                if count % target_deg:
                    raise _BadPrime("fiber count %d not divisible" % count)
                vals.append(count // target_deg)
            if vals[0] != vals[1]:
                raise _BadPrime("coordinate routes disagree")
            agreed.append(vals[0])
        except _BadPrime:
            continue
        if len(agreed) >= 3 and agreed[-1] == agreed[-2] == agreed[-3]:
            return agreed[-1]
    raise OracleError("degree did not stabilize over three good primes")


# ---------------------------------------------------------------------------
# the genus-10 instance

DECLARED_EXPONENTS = (6, 6, 6, 6, 6, 6, 24, 24, 24, 4)


class C6Instance:
    """The assembled model of the sextic-square surface: ten morphisms
    to CM elliptic targets, their pullback forms, and the axiomatic
    endomorphism model ready for the decision procedure."""

    __slots__ = ("model", "grids", "morphisms", "forms", "report")

    def __init__(self, model, grids, morphisms, forms, report):
        self.model = model
        self.grids = grids
        self.morphisms = tuple(morphisms)
        self.forms = tuple(forms)
        self.report = report

    @property
    def g(self):
        return self.model.g


def c6_generator_morphisms():
    """The three generating morphisms out of the Fermat sextic."""
    W6 = fermat_sextic()
    E1 = cm_elliptic()
    F3 = fermat_cubic()
    x = RatFunc.var_x()
    y = RatFunc.var_y()
    alpha = RatFunc.const(MultiNf.gen("cbrt4"))
    phi1 = CurveMorphism(W6, E1, -(x**2), y**3)
    phi2 = CurveMorphism(
        W6, E1, y**4 / (alpha * x**2), (x**6 - 1) / (2 * x**3)
    )
    phi3 = CurveMorphism(W6, F3, x**2, y**2)
    return phi1, phi2, phi3


def build_c6_instance(check_degrees=True):
    """Build the genus-10 model: six twists of the square-cube morphism,
    three twists of the quartic-ratio morphism, and the coordinatewise
    square to the cubic; pull back the invariant differentials, verify
    the representation pattern and ranks, and assemble the axiomatic
    endomorphism model with the declared exponents.

    With check_degrees the oracle recomputes every generator degree and
    the report records any disagreement with the declared exponents
    instead of masking it.
    """
    phi1, phi2, phi3 = c6_generator_morphisms()
    morphisms = [compose_with_perm(phi1, s) for s in G1_PERMS]
    morphisms += [compose_with_perm(phi2, s) for s in G2_PERMS]
    morphisms.append(phi3)
    forms = [pullback(mor, canonical_form(mor.target)) for mor in morphisms]
    classes = [rep_membership(f) for f in forms]
    assert classes == [V210] * 6 + [V300] * 3 + [V111]
    r1 = span_rank(forms[:6])
    r2 = span_rank(forms[6:9])
    rtot = span_rank(forms)
    assert (r1, r2, rtot) == (6, 3, 10)
    computed = None
    mismatch = None
    if check_degrees:
        d1 = degree(phi1)
        d2 = degree(phi2)
        d3 = degree(phi3)
        computed = [d1] * 6 + [d2] * 3 + [d3]
        mismatch = computed != list(DECLARED_EXPONENTS)
    model = build_model(
        3,
        10,
        mode=AXIOMATIC,
        exponents=DECLARED_EXPONENTS,
        assume_proper_ge4=True,
    )
    grids = build_grids(model)
    report = {
        "g": 10,
        "d": 3,
        "declared_exponents": list(DECLARED_EXPONENTS),
        "computed_degrees": computed,
        "degree_exponent_mismatch": mismatch,
        "dim_m2_tr": product_of_curves(10, elliptically_split=True)[1]["m2_tr"],
        "form_classes": classes,
        "form_ranks": {"g1": r1, "g2": r2, "total": rtot},
    }
    return C6Instance(model, grids, morphisms, forms, report)


__all__ = [
    "V111",
    "V210",
    "V300",
    "NONE",
    "PlaneCurve",
    "CurveMorphism",
    "DiffForm",
    "OmegaCoefficient",
    "fermat_sextic",
    "cm_elliptic",
    "fermat_cubic",
    "canonical_form",
    "pullback",
    "rep_membership",
    "perm_morphism",
    "compose_with_perm",
    "G1_PERMS",
    "G2_PERMS",
    "span_rank",
    "degree",
    "DECLARED_EXPONENTS",
    "C6Instance",
    "c6_generator_morphisms",
    "build_c6_instance",
]
