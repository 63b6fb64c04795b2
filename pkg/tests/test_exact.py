"""Tests for the exact arithmetic foundation.

Expected values are frozen from independent oracles written here: a
brute-force lattice membership scan, a naive rational Gaussian determinant,
and a schoolbook polynomial-power reduction.
"""

import random
from fractions import Fraction

import pytest

from motivix.errors import InvalidInput, RankError, ShapeError
from motivix.exact import (
    ExactMatrix,
    NfElem,
    QuadInt,
    Rat,
    ZLattice,
    det_field,
    hnf,
    lattice_contains,
    nf_reduce,
    solve_field,
)


# --- independent oracles ---------------------------------------------------


def oracle_in_span(gens, v, bound=8):
    """Brute-force: is v an integer combination of gens with small coeffs?"""
    n = len(gens)

    def rec(i, acc):
        if i == n:
            return all(x == 0 for x in acc)
        for k in range(-bound, bound + 1):
            nxt = [a - k * g for a, g in zip(acc, gens[i])]
            if rec(i + 1, nxt):
                return True
        return False

    return rec(0, [Fraction(x) for x in v])


def oracle_det(rows):
    """Naive rational Gaussian elimination determinant."""
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows)
    sign = 1
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        det *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return sign * det


def oracle_power_mod(minpoly, k):
    """t^k mod minpoly by schoolbook multiply-and-reduce, one step at a time."""
    deg = len(minpoly) - 1
    acc = [Fraction(1)]
    for _ in range(k):
        acc = [Fraction(0)] + acc  # multiply by t
        while len(acc) > deg:
            lead = acc.pop()
            for j in range(deg):
                acc[len(acc) - deg + j] -= lead * minpoly[j]
    acc += [Fraction(0)] * (deg - len(acc))
    return acc


# --- QuadInt ---------------------------------------------------------------


def test_quadint_basic():
    w = QuadInt.sqrt_minus_d(5)
    assert w * w == QuadInt(-5, 0, 5)
    x = QuadInt(Rat(1, 2), Rat(3), 5)
    assert x.conj().conj() == x
    assert x.norm() == Rat(1, 4) + 5 * 9
    assert (x * x.inverse()) == QuadInt.one(5)


def test_quadint_rejects_bad_d():
    with pytest.raises(InvalidInput):
        QuadInt(1, 1, 4)
    with pytest.raises(InvalidInput):
        QuadInt(1, 1, -3)
    with pytest.raises(InvalidInput):
        QuadInt(1, 0, 1) + QuadInt(1, 0, 2)


def test_quadint_ring_properties_random():
    rng = random.Random(101)

    def rq():
        return QuadInt(
            Rat(rng.randint(-9, 9), rng.randint(1, 5)),
            Rat(rng.randint(-9, 9), rng.randint(1, 5)),
            3,
        )

    for _ in range(200):
        x, y, z = rq(), rq(), rq()
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x * y).conj() == x.conj() * y.conj()
        assert (x * y).norm() == x.norm() * y.norm()


# --- NfElem / nf_reduce ----------------------------------------------------


def test_nf_reduce_cube_root():
    # defining relation of cbrt(4)
    e = nf_reduce([0, 0, 0, 1], (-4, 0, 0, 1))
    assert e == 4


def test_nf_reduce_sixth_root():
    m = (1, -1, 1)  # t^2 - t + 1
    e2 = nf_reduce([0, 0, 1], m)
    assert e2 == NfElem(m, [-1, 1])  # t - 1
    # frozen from oracle_power_mod: eps^3 = -1 and eps^6 = +1
    assert oracle_power_mod(m, 3) == [Fraction(-1), Fraction(0)]
    assert oracle_power_mod(m, 6) == [Fraction(1), Fraction(0)]
    assert nf_reduce([0] * 3 + [1], m) == -1
    assert nf_reduce([0] * 6 + [1], m) == 1
    assert NfElem.gen(m) ** 6 == 1


def test_nf_reduce_of_minpoly_is_zero():
    for m in ((-4, 0, 0, 1), (1, -1, 1), (1, 0, 1)):
        assert nf_reduce(list(m), m).is_zero()


def test_nf_ring_axioms_random():
    m = (-4, 0, 0, 1)
    rng = random.Random(202)

    def re():
        return NfElem(m, [Rat(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3)])

    for _ in range(200):
        x, y, z = re(), re(), re()
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        if not x.is_zero():
            assert x * x.inverse() == 1


def test_nf_rejects_reducible():
    with pytest.raises(InvalidInput):
        nf_reduce([0, 1], (-1, 0, 1))  # t^2 - 1 has root 1
    with pytest.raises(InvalidInput):
        nf_reduce([0, 1], (0, 2, 1))  # root 0


# --- ExactMatrix -----------------------------------------------------------


def _rand_rat_matrix(rng, n):
    return ExactMatrix(
        [[Rat(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    )


def test_matrix_shape_errors():
    a = ExactMatrix([[Rat(1), Rat(2)]])
    b = ExactMatrix([[Rat(1)], [Rat(2)], [Rat(3)]])
    with pytest.raises(ShapeError):
        a + b
    with pytest.raises(ShapeError):
        a * a  # 1x2 times 1x2
    with pytest.raises(ShapeError):
        ExactMatrix([[Rat(1), Rat(2)], [Rat(3)]])


def test_matrix_algebra_random():
    rng = random.Random(303)
    for _ in range(50):
        a = _rand_rat_matrix(rng, 3)
        b = _rand_rat_matrix(rng, 3)
        c = _rand_rat_matrix(rng, 3)
        assert (a * b) * c == a * (b * c)
        assert (a + b) * c == a * c + b * c
        assert (a * b).transpose() == b.transpose() * a.transpose()
    ident = ExactMatrix.identity(3, Rat(1), Rat(0))
    assert ident * a == a * ident == a


def test_matrix_quadint_entries():
    d = 1
    i_unit = QuadInt.sqrt_minus_d(d)
    m = ExactMatrix([[i_unit, QuadInt.zero(d)], [QuadInt.zero(d), i_unit]])
    assert m * m == ExactMatrix.identity(2, QuadInt.one(d), QuadInt.zero(d)).scale(
        QuadInt(-1, 0, d)
    )


def test_solve_field():
    a = ExactMatrix([[Rat(2), Rat(1)], [Rat(1), Rat(3)]])
    x = solve_field(a, [Rat(5), Rat(10)])
    assert x == [Rat(1), Rat(3)]
    # inconsistent
    b = ExactMatrix([[Rat(1), Rat(1)], [Rat(2), Rat(2)]])
    assert solve_field(b, [Rat(1), Rat(3)]) is None
    # underdetermined still returns some solution
    x = solve_field(b, [Rat(1), Rat(2)])
    assert x is not None and x[0] + x[1] == Rat(1)


def test_det_field_matches_oracle():
    rng = random.Random(404)
    for _ in range(30):
        m = _rand_rat_matrix(rng, 4)
        assert det_field(m) == oracle_det([list(r) for r in m.entries])


# --- ZLattice / hnf / lattice_contains -------------------------------------


def test_hnf_identity_fixed():
    lat = hnf([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert lat.basis_rows() == tuple(
        tuple(Rat(1) if i == j else Rat(0) for j in range(4)) for i in range(4)
    )
    assert lat.det() == 1


def test_hnf_small_example():
    lat = hnf([[2, 0], [1, 1]])
    assert lat.basis_rows() == ((Rat(1), Rat(1)), (Rat(0), Rat(2)))
    # same membership as the generating set, brute force both ways
    gens = [[Fraction(2), Fraction(0)], [Fraction(1), Fraction(1)]]
    for x in range(-3, 4):
        for y in range(-3, 4):
            assert lat.contains([Rat(x), Rat(y)]) == oracle_in_span(gens, [x, y])


def test_hnf_rational_closure_det():
    lat = hnf([[Rat(1, 5), Rat(2, 5)], [1, 0], [0, 1]])
    assert lat.det() == Rat(1, 5)
    assert oracle_det(lat.basis_rows()) in (Rat(1, 5), Rat(-1, 5))


def test_hnf_idempotent():
    lat = hnf([[Rat(1, 5), Rat(2, 5)], [1, 0], [0, 1]])
    again = hnf(lat)
    assert lat == again and lat.hbasis == again.hbasis


def test_hnf_rank_deficient():
    with pytest.raises(RankError):
        hnf([[1, 2], [2, 4]])


def test_contains_examples():
    z2 = hnf([[1, 0], [0, 1]])
    assert lattice_contains(z2, [Rat(3), Rat(-7)])
    lat = hnf([[Rat(1, 5), Rat(2, 5)], [1, 0], [0, 1]])
    assert lattice_contains(lat, [Rat(1, 5), Rat(2, 5)])
    assert not lattice_contains(lat, [Rat(1, 5), Rat(0)])
    # brute-force oracle over k*(1/5,2/5) + Z^2 for |k| <= 5
    for v in ([Rat(1, 5), Rat(2, 5)], [Rat(1, 5), Rat(0)], [Rat(3, 5), Rat(1, 5)]):
        expect = any(
            (v[0] - k * Rat(1, 5)).denominator == 1
            and (v[1] - k * Rat(2, 5)).denominator == 1
            for k in range(-5, 6)
        )
        assert lattice_contains(lat, v) == expect


def test_contains_shape_error():
    z2 = hnf([[1, 0], [0, 1]])
    with pytest.raises(ShapeError):
        lattice_contains(z2, [Rat(1)])


def test_contains_unimodular_invariance():
    rng = random.Random(505)
    base = [[Rat(1, 6), Rat(1, 3), 0], [0, Rat(1, 2), 0], [0, 0, 1], [1, 0, 0], [0, 1, 0]]
    lat = hnf(base)
    rows = [list(r) for r in lat.basis_rows()]
    for _ in range(20):
        # random elementary row operations keep the lattice
        i, j = rng.sample(range(3), 2)
        k = rng.randint(-3, 3)
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
        assert hnf(rows) == lat
    for _ in range(50):
        v = [Rat(rng.randint(-6, 6), rng.choice([1, 2, 3, 6])) for _ in range(3)]
        assert hnf(rows).contains(v) == lat.contains(v)
