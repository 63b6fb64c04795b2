"""Exact arithmetic foundation.

Arbitrary-precision rationals (stdlib Fraction, re-exported as Rat),
imaginary-quadratic-field elements, generic number-field elements, dense
exact matrices over any of these, and integer-lattice linear algebra via
row Hermite normal form.

No floating point anywhere in this module.
"""

import math
from fractions import Fraction as Rat

from .errors import InvalidInput, RankError, ShapeError

__all__ = [
    "Rat",
    "QuadInt",
    "NfElem",
    "nf_reduce",
    "ExactMatrix",
    "solve_field",
    "det_field",
    "ZLattice",
    "hnf",
    "lattice_contains",
]


def _xgcd(a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g = gcd(a,b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _is_squarefree(n):
    assert n >= 1
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


class QuadInt:
    """Element a + b*sqrt(-d) of the imaginary quadratic field Q(sqrt(-d)).

    d is a positive squarefree integer fixed per element; mixing elements
    with different d raises InvalidInput.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        d = int(d)
        if d < 1 or not _is_squarefree(d):
            raise InvalidInput("d must be a positive squarefree integer, got %r" % (d,))
        object.__setattr__(self, "a", Rat(a))
        object.__setattr__(self, "b", Rat(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadInt is immutable")

    @classmethod
    def zero(cls, d):
        return cls(0, 0, d)

    @classmethod
    def one(cls, d):
        return cls(1, 0, d)

    @classmethod
    def sqrt_minus_d(cls, d):
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadInt):
            if other.d != self.d:
                raise InvalidInput(
                    "mixed quadratic fields: d=%d vs d=%d" % (self.d, other.d)
                )
            return other
        if isinstance(other, (int, Rat)):
            return QuadInt(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(o.a - self.a, o.b - self.b, self.d)

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a + b w)(a' + b' w) with w^2 = -d
        return QuadInt(
            self.a * o.a - self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(-%d))" % self.d)
        return QuadInt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = QuadInt.one(self.d)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self):
        return QuadInt(self.a, -self.b, self.d)

    def norm(self):
        # a^2 + d b^2, nonnegative, zero only at zero
        return self.a * self.a + self.d * self.b * self.b

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        if isinstance(other, (int, Rat)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadInt):
            return NotImplemented
        return self.d == other.d and self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return "QuadInt(%s, %s, d=%d)" % (self.a, self.b, self.d)


# ---------------------------------------------------------------------------
# polynomials over Rat, low degree first


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Rat(0)] * (len(p) + len(q) - 1)
    for i, c in enumerate(p):
        if c:
            for j, e in enumerate(q):
                out[i + j] += c * e
    return _poly_trim(out)


def _poly_divmod(p, m):
    """Division with remainder over Rat; m need not be monic but must be nonzero."""
    p = [Rat(c) for c in p]
    _poly_trim(p)
    dm = len(m) - 1
    lead = m[-1]
    q = [Rat(0)] * max(0, len(p) - dm)
    while len(p) - 1 >= dm and p:
        c = p[-1] / lead
        k = len(p) - 1 - dm
        q[k] = c
        for j in range(dm + 1):
            p[k + j] -= c * m[j]
        _poly_trim(p)
    return _poly_trim(q), p


def _reduce_mod_monic_int(p, m):
    """p mod m for monic integer m; returns coeff list of length deg(m)."""
    deg = len(m) - 1
    p = [Rat(c) for c in p]
    for i in range(len(p) - 1, deg - 1, -1):
        c = p[i]
        if c:
            for j in range(deg + 1):
                p[i - deg + j] -= c * m[j]
    out = p[:deg]
    out += [Rat(0)] * (deg - len(out))
    return out


def _poly_xgcd(p, q):
    """Extended gcd over Rat: (g, s, t) with s*p + t*q = g."""
    r0, r1 = [Rat(c) for c in p], [Rat(c) for c in q]
    _poly_trim(r0)
    _poly_trim(r1)
    s0, s1 = [Rat(1)], []
    t0, t1 = [], [Rat(1)]
    while r1:
        qq, rr = _poly_divmod(r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, _poly_trim([a - b for a, b in _zip_pad(s0, _poly_mul(qq, s1))])
        t0, t1 = t1, _poly_trim([a - b for a, b in _zip_pad(t0, _poly_mul(qq, t1))])
    return r0, s0, t0


def _zip_pad(p, q):
    n = max(len(p), len(q))
    p = p + [Rat(0)] * (n - len(p))
    q = q + [Rat(0)] * (n - len(q))
    return zip(p, q)


def _divisors(n):
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


_checked_minpolys = set()


def _check_minpoly(m):
    """Validate a monic integer minimal polynomial.

    Irreducibility is checked best-effort by a rational-root screen, which
    is decisive for degree <= 3; higher degrees only get the screen.
    """
    if len(m) < 2:
        raise InvalidInput("minpoly must have degree >= 1")
    if m[-1] != 1:
        raise InvalidInput("minpoly must be monic, got leading coefficient %r" % (m[-1],))
    if any(not isinstance(c, int) for c in m):
        raise InvalidInput("minpoly must have integer coefficients")
    if m in _checked_minpolys:
        return
    if m[0] == 0:
        raise InvalidInput("minpoly has root 0, reducible")
    # monic => any rational root is an integer dividing the constant term
    for r in _divisors(m[0]):
        for root in (r, -r):
            acc = 0
            for c in reversed(m):
                acc = acc * root + c
            if acc == 0:
                raise InvalidInput("minpoly has rational root %d, reducible" % root)
    _checked_minpolys.add(m)


class NfElem:
    """Residue class mod a monic integer polynomial m(t): an element of
    Q[t]/(m), i.e. of the number field when m is irreducible."""

    __slots__ = ("minpoly", "coeffs")

    def __init__(self, minpoly, coeffs):
        m = tuple(int(c) for c in minpoly)
        _check_minpoly(m)
        deg = len(m) - 1
        cs = [Rat(c) for c in coeffs]
        if len(cs) > deg:
            cs = _reduce_mod_monic_int(cs, m)
        cs += [Rat(0)] * (deg - len(cs))
        object.__setattr__(self, "minpoly", m)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("NfElem is immutable")

    @classmethod
    def constant(cls, minpoly, c):
        return cls(minpoly, [Rat(c)])

    @classmethod
    def gen(cls, minpoly):
        return cls(minpoly, [0, 1])

    def _coerce(self, other):
        if isinstance(other, NfElem):
            if other.minpoly != self.minpoly:
                raise InvalidInput("mixed number fields: %r vs %r" % (self.minpoly, other.minpoly))
            return other
        if isinstance(other, (int, Rat)):
            return NfElem.constant(self.minpoly, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NfElem(self.minpoly, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NfElem(self.minpoly, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return NfElem(self.minpoly, [-c for c in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = _poly_mul(list(self.coeffs), list(o.coeffs))
        return NfElem(self.minpoly, _reduce_mod_monic_int(prod, self.minpoly))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero mod %r" % (self.minpoly,))
        g, s, _t = _poly_xgcd(list(self.coeffs), [Rat(c) for c in self.minpoly])
        if len(g) != 1:
            # gcd nonconstant: the residue is a zero divisor, minpoly not irreducible
            raise InvalidInput("element not invertible mod %r" % (self.minpoly,))
        inv = [c / g[0] for c in s]
        return NfElem(self.minpoly, _reduce_mod_monic_int(inv, self.minpoly))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = NfElem.constant(self.minpoly, 1)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Rat)):
            return self.coeffs[0] == other and all(c == 0 for c in self.coeffs[1:])
        if not isinstance(other, NfElem):
            return NotImplemented
        return self.minpoly == other.minpoly and self.coeffs == other.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.minpoly, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("%s*t" % c)
            else:
                terms.append("%s*t^%d" % (c, i))
        body = " + ".join(terms) if terms else "0"
        return "NfElem(%s mod %s)" % (body, list(self.minpoly))


def nf_reduce(p, minpoly):
    """Reduce the polynomial p (coeff list, low degree first) mod minpoly."""
    m = tuple(int(c) for c in minpoly)
    _check_minpoly(m)
    return NfElem(m, _reduce_mod_monic_int([Rat(c) for c in p], m))


# ---------------------------------------------------------------------------
# dense exact matrices over a generic coefficient ring


def _ring_zero(x):
    return x - x


class ExactMatrix:
    """Dense matrix with exact entries (Rat, QuadInt, NfElem, or anything
    with ring operations and equality)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows_of_entries):
        ents = tuple(tuple(row) for row in rows_of_entries)
        if not ents or not ents[0]:
            raise ShapeError("matrix needs at least one row and column")
        ncols = len(ents[0])
        if any(len(r) != ncols for r in ents):
            raise ShapeError("ragged rows in matrix input")
        object.__setattr__(self, "rows", len(ents))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n, one, zero):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r, c, zero):
        return cls([[zero for _ in range(c)] for _ in range(r)])

    def entry(self, i, j):
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("add: %dx%d vs %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        return ExactMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("sub: %dx%d vs %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        return ExactMatrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self):
        return self.map_entries(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ShapeError(
                    "mul: %dx%d times %dx%d" % (self.rows, self.cols, other.rows, other.cols)
                )
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = self.entries[i][0] * other.entries[0][j]
                    for k in range(1, self.cols):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return ExactMatrix(out)
        return self.scale(other)

    def __rmul__(self, other):
        # scalar * matrix
        return self.scale(other)

    def scale(self, c):
        return self.map_entries(lambda x: c * x)

    def map_entries(self, fn):
        return ExactMatrix([[fn(x) for x in row] for row in self.entries])

    def transpose(self):
        return ExactMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def trace(self):
        if self.rows != self.cols:
            raise ShapeError("trace of non-square %dx%d" % (self.rows, self.cols))
        acc = self.entries[0][0]
        for i in range(1, self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self):
        return all(x == _ring_zero(x) for row in self.entries for x in row)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return "ExactMatrix(%r)" % ([list(r) for r in self.entries],)


def solve_field(mat, rhs):
    """Solve mat*x = rhs over a field by Gaussian elimination.

    mat: ExactMatrix or list of rows; rhs: list. Returns a solution list
    (free variables set to 0) or None if the system is inconsistent.
    """
    if isinstance(mat, ExactMatrix):
        rows = [list(r) for r in mat.entries]
    else:
        rows = [list(r) for r in mat]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if len(rhs) != m:
        raise ShapeError("rhs length %d vs %d rows" % (len(rhs), m))
    aug = [rows[i] + [rhs[i]] for i in range(m)]
    zero = _ring_zero(aug[0][0]) if m else None
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if not aug[i][c] == _ring_zero(aug[i][c]):
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv_p = aug[r][c]
        aug[r] = [x / inv_p for x in aug[r]]
        for i in range(m):
            if i != r:
                f = aug[i][c]
                if not f == _ring_zero(f):
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not aug[i][n] == _ring_zero(aug[i][n]):
            return None
    x = [zero] * n
    for k, c in enumerate(pivots):
        x[c] = aug[k][n]
    return x


def det_field(mat):
    """Determinant over a field by Gaussian elimination with division."""
    if isinstance(mat, ExactMatrix):
        rows = [list(r) for r in mat.entries]
    else:
        rows = [list(r) for r in mat]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("det of non-square matrix")
    sign = 1
    det = None
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not rows[i][c] == _ring_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            return _ring_zero(rows[0][0])
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        p = rows[c][c]
        det = p if det is None else det * p
        for i in range(c + 1, n):
            f = rows[i][c] / p
            if not f == _ring_zero(f):
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    if sign < 0:
        det = -det
    return det


# ---------------------------------------------------------------------------
# integer lattices


def _int_hnf(rows):
    """Row Hermite normal form of an integer matrix.

    Returns the nonzero rows in echelon order: positive pivots, entries
    above each pivot reduced into [0, pivot).
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, m):
            if rows[i][c]:
                a, b = rows[r][c], rows[i][c]
                g, s, t = _xgcd(a, b)
                u, v = a // g, b // g
                # unimodular: det [[s, t], [-v, u]] = s u + t v = 1
                rr = [s * rows[r][j] + t * rows[i][j] for j in range(n)]
                ri = [u * rows[i][j] - v * rows[r][j] for j in range(n)]
                rows[r], rows[i] = rr, ri
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        p = rows[r][c]
        for i in range(r):
            q = rows[i][c] // p
            if q:
                rows[i] = [rows[i][j] - q * rows[r][j] for j in range(n)]
        r += 1
    return rows[:r]


class ZLattice:
    """Full-rank lattice in Q^n, canonicalized as (1/den) times an integer
    matrix in row Hermite normal form.

    Membership testing is basis-independent because construction always
    canonicalizes.
    """

    __slots__ = ("ambient_rank", "den", "hbasis")

    def __init__(self, ambient_rank, den, hbasis):
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "hbasis", hbasis)

    def __setattr__(self, name, value):
        raise AttributeError("ZLattice is immutable")

    @classmethod
    def from_rows(cls, rows):
        """Build from a generating set of rational row vectors (need not be
        a basis; must span a full-rank lattice)."""
        rat_rows = [[Rat(x) for x in row] for row in rows]
        if not rat_rows:
            raise RankError("empty generating set")
        n = len(rat_rows[0])
        if any(len(r) != n for r in rat_rows):
            raise ShapeError("generating rows of unequal length")
        den = 1
        for row in rat_rows:
            for x in row:
                den = math.lcm(den, x.denominator)
        int_rows = [[int(x * den) for x in row] for row in rat_rows]
        h = _int_hnf(int_rows)
        if len(h) < n:
            raise RankError("lattice has rank %d < ambient rank %d" % (len(h), n))
        # strip any common factor shared by den and every entry
        g = den
        for row in h:
            for x in row:
                g = math.gcd(g, x)
        if g > 1:
            den //= g
            h = [[x // g for x in row] for row in h]
        return cls(n, den, tuple(tuple(row) for row in h))

    def basis_rows(self):
        """The canonical basis as rational row vectors."""
        return tuple(tuple(Rat(x, self.den) for x in row) for row in self.hbasis)

    def contains(self, v):
        if len(v) != self.ambient_rank:
            raise ShapeError(
                "vector length %d vs ambient rank %d" % (len(v), self.ambient_rank)
            )
        w = []
        for x in v:
            x = Rat(x) * self.den
            if x.denominator != 1:
                return False
            w.append(x.numerator)
        # back-substitute against the upper-triangular basis, left to right
        for i in range(self.ambient_rank):
            p = self.hbasis[i][i]
            if w[i] % p:
                return False
            q = w[i] // p
            if q:
                w = [a - q * b for a, b in zip(w, self.hbasis[i])]
        assert all(x == 0 for x in w)
        return True

    def det(self):
        """Covolume: absolute determinant of the basis matrix."""
        prod = 1
        for i in range(self.ambient_rank):
            prod *= self.hbasis[i][i]
        return Rat(prod, self.den ** self.ambient_rank)

    def __eq__(self, other):
        if not isinstance(other, ZLattice):
            return NotImplemented
        return (
            self.ambient_rank == other.ambient_rank
            and self.den == other.den
            and self.hbasis == other.hbasis
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.den, self.hbasis))

    def __repr__(self):
        return "ZLattice(rank=%d, den=%d, hbasis=%r)" % (
            self.ambient_rank,
            self.den,
            [list(r) for r in self.hbasis],
        )


def hnf(basis):
    """Canonical Hermite-normal-form basis of the lattice spanned by basis.

    Accepts a ZLattice or raw rational rows; idempotent by construction.
    """
    if isinstance(basis, ZLattice):
        return ZLattice.from_rows(basis.basis_rows())
    return ZLattice.from_rows(basis)


def lattice_contains(lat, v):
    """True iff v lies in the Z-span of the lattice basis."""
    return lat.contains(v)
