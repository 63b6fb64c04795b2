"""Plane-curve pullbacks, representation membership, the degree
oracle, and the assembled genus-10 instance."""

from fractions import Fraction as F

import pytest

from motivix.decomp import INDECOMPOSABLE, PROOFTRACE, decide
from motivix.errors import InvalidInput, OracleError, ReductionError
from motivix.fermat import (
    G1_PERMS,
    G2_PERMS,
    NONE,
    V111,
    V210,
    V300,
    CurveMorphism,
    DiffForm,
    OmegaCoefficient,
    PlaneCurve,
    build_c6_instance,
    c6_generator_morphisms,
    canonical_form,
    cm_elliptic,
    compose_with_perm,
    degree,
    fermat_cubic,
    fermat_sextic,
    perm_morphism,
    pullback,
    rep_membership,
    span_rank,
)
from motivix.polyring import (
    BiPoly,
    MultiNf,
    RatFunc,
    parse_ratfunc,
)

X = BiPoly.var_x()
Y = BiPoly.var_y()
ALPHA = MultiNf.gen("cbrt4")


def test_constant_tower():
    eps = MultiNf.gen("eps")
    i = MultiNf.gen("i")
    assert eps**2 == eps - 1
    assert eps**3 == -1
    assert eps**6 == 1
    assert ALPHA**3 == 4
    assert i * i == -1
    assert 1 / ALPHA == ALPHA**2 / 4
    # mixed-generator values unify and divide exactly
    v = (2 + 3 * eps) * ALPHA / (1 - i)
    assert v * (1 - i) / ALPHA == 2 + 3 * eps
    assert MultiNf.from_fraction(F(3, 7)) + F(4, 7) == 1


def test_bipoly_division_and_calculus():
    sextic = X**6 + Y**6 + 1
    g = (X * Y**2 - 3) * (X + Y) + Y**7
    q, r = g.y_divmod(sextic)
    assert q * sextic + r == g
    assert r.deg_y < 6
    h = (RatFunc.var_x() ** 2 - 1) / (RatFunc.var_x() + RatFunc.var_y())
    u, v = RatFunc.var_x(), RatFunc.var_y()
    assert h.dx() == ((2 * u) * (u + v) - (u**2 - 1)) / (u + v) ** 2
    assert h.subst(RatFunc.const(2), RatFunc.const(1)) == 1


def test_parse_ratfunc():
    u, v = RatFunc.var_x(), RatFunc.var_y()
    assert parse_ratfunc("-x^2") == -(u**2)
    assert parse_ratfunc("(y^4)/(cbrt4*x^2)") == v**4 / (
        RatFunc.const(ALPHA) * u**2
    )
    assert parse_ratfunc("(x^6 - 1)/(2*x^3)") == (u**6 - 1) / (2 * u**3)
    assert parse_ratfunc("eps*i + 1") == RatFunc.const(
        MultiNf.gen("eps") * MultiNf.gen("i") + 1
    )
    for junk in ("", "z + 1", "x**y", "1.5*x", "__import__('os')", "x +"):
        with pytest.raises(InvalidInput):
            parse_ratfunc(junk)


def test_curve_normalization_and_validation():
    c = PlaneCurve(3 * Y**2 - 3 * X**3 + 3)
    assert c.F == cm_elliptic().F
    assert c.deg_y == 2 and c.deg_x == 3
    with pytest.raises(InvalidInput):
        PlaneCurve(X**4 + 1)  # no y at all
    with pytest.raises(InvalidInput):
        PlaneCurve(X * Y**2 + 1)  # leading y-coefficient not constant


def test_morphism_validation():
    w6, e1 = fermat_sextic(), cm_elliptic()
    x, y = RatFunc.var_x(), RatFunc.var_y()
    CurveMorphism(w6, e1, -(x**2), y**3)
    with pytest.raises(InvalidInput):
        CurveMorphism(w6, e1, -(x**2), y**2)  # image misses the target
    with pytest.raises(InvalidInput):
        # denominator is the curve equation itself
        CurveMorphism(w6, e1, -(x**2) / (x**6 + y**6 + 1), y**3)
    with pytest.raises(InvalidInput):
        perm_morphism(w6, (0, 0, 1))
    with pytest.raises(InvalidInput):
        perm_morphism(e1, (1, 0, 2))  # the elliptic model is not symmetric


def test_pullbacks_match_known_coefficients():
    phi1, phi2, phi3 = c6_generator_morphisms()
    f1 = pullback(phi1, canonical_form(phi1.target))
    f2 = pullback(phi2, canonical_form(phi2.target))
    f3 = pullback(phi3, canonical_form(phi3.target))
    assert f1 == -2 * X * Y**2
    assert f2 == BiPoly.const(-(ALPHA**2)) * Y**3
    assert f3 == 2 * X * Y
    assert isinstance(f1, OmegaCoefficient)
    assert f1.poly.deg_y < 6


def test_pullback_functoriality():
    # (phi o sigma)^* tau  ==  sigma^* (phi^* tau), as reduced polynomials
    phi1, _, phi3 = c6_generator_morphisms()
    w6 = phi1.source
    for phi in (phi1, phi3):
        tau = canonical_form(phi.target)
        inner = pullback(phi, tau)
        lifted = DiffForm(
            RatFunc(inner.poly, BiPoly.monomial(0, w6.deg_y - 1)), 0
        )
        for pi in G1_PERMS:
            left = pullback(compose_with_perm(phi, pi), tau)
            right = pullback(perm_morphism(w6, pi), lifted)
            assert left == right, pi


def test_rep_membership_rules():
    assert rep_membership(-2 * X * Y**2) == V210
    assert rep_membership(Y**3) == V300
    assert rep_membership(2 * X * Y) == V111
    assert rep_membership(X**2 + Y) == NONE
    assert rep_membership(BiPoly.zero()) == NONE
    assert rep_membership(X**4) == NONE
    assert rep_membership(BiPoly.const(ALPHA**2)) == V300  # z^3 after homogenizing
    assert rep_membership(X**3 + 2 * X * Y) == NONE
    assert rep_membership(X**2 * Y + 5 * X * Y**2) == V210


def test_rep_classes_are_permutation_stable():
    phi1, phi2, phi3 = c6_generator_morphisms()
    for phi in (phi1, phi2, phi3):
        tau = canonical_form(phi.target)
        base = rep_membership(pullback(phi, tau))
        assert base != NONE
        for pi in G1_PERMS:
            twisted = pullback(compose_with_perm(phi, pi), tau)
            assert rep_membership(twisted) == base


def test_form_ranks():
    phi1, phi2, phi3 = c6_generator_morphisms()
    g1 = [
        pullback(compose_with_perm(phi1, s), canonical_form(phi1.target))
        for s in G1_PERMS
    ]
    g2 = [
        pullback(compose_with_perm(phi2, s), canonical_form(phi2.target))
        for s in G2_PERMS
    ]
    f10 = pullback(phi3, canonical_form(phi3.target))
    assert span_rank(g1) == 6
    assert span_rank(g2) == 3
    assert span_rank(g1 + g2 + [f10]) == 10
    assert span_rank([]) == 0
    assert span_rank([g1[0], g1[0]]) == 1


def test_pullback_reduction_error():
    phi1, _, _ = c6_generator_morphisms()
    # this denominator is identically zero on the elliptic target
    bad = DiffForm(
        RatFunc(BiPoly.const(1), BiPoly.var_x() ** 3 - BiPoly.var_y() ** 2 - 1),
        0,
    )
    with pytest.raises(ReductionError):
        pullback(phi1, bad)


def test_degree_oracle():
    phi1, phi2, phi3 = c6_generator_morphisms()
    assert degree(phi1) == 6
    assert degree(phi2) == 12
    assert degree(phi3) == 4
    # a coordinate twist cannot change the degree
    assert degree(compose_with_perm(phi1, (1, 0, 2))) == 6
    # stable under an explicit, disjoint prime supply
    assert degree(phi1, primes=[433, 439, 457, 463, 487, 499]) == 6
    with pytest.raises(OracleError):
        degree(phi1, primes=[])


def test_degree_determinism():
    _, phi2, _ = c6_generator_morphisms()
    assert degree(phi2, seed=1) == degree(phi2, seed=2) == 12


def test_c6_instance():
    inst = build_c6_instance()
    assert inst.g == 10
    assert inst.model.d == 3
    assert inst.model.atom_exponents == (6, 6, 6, 6, 6, 6, 24, 24, 24, 4)
    rep = inst.report
    assert rep["declared_exponents"] == [6, 6, 6, 6, 6, 6, 24, 24, 24, 4]
    assert rep["computed_degrees"] == [6] * 6 + [12] * 3 + [4]
    assert rep["degree_exponent_mismatch"] is True
    assert rep["dim_m2_tr"] == 200
    assert rep["form_classes"] == [V210] * 6 + [V300] * 3 + [V111]
    assert rep["form_ranks"] == {"g1": 6, "g2": 3, "total": 10}
    assert len(inst.morphisms) == 10 and len(inst.forms) == 10
    verdict = decide(inst.model, PROOFTRACE)
    assert verdict.status == INDECOMPOSABLE


def test_c6_instance_without_degree_check():
    inst = build_c6_instance(check_degrees=False)
    assert inst.report["computed_degrees"] is None
    assert inst.report["degree_exponent_mismatch"] is None
    assert inst.report["form_ranks"]["total"] == 10
