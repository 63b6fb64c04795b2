"""Bivariate polynomial and rational-function arithmetic over small
constant fields, plus the mod-p univariate toolkit behind the
finite-field degree oracle.

Scalars live in Q(eps, cbrt4, i), presented as a product of univariate
quotients (eps^2 = eps - 1, cbrt4^3 = 4, i^2 = -1).  Each value carries
the tuple of generators it actually uses and operations join those
tuples on the fly, so no primitive element is ever computed and plain
rational values stay one-dimensional.
"""

import ast
import itertools
from fractions import Fraction as Rat

from .errors import InvalidInput, ShapeError
from .exact import solve_field

# name -> monic minpoly, ascending coefficients
KNOWN_GENS = (
    ("eps", (Rat(1), Rat(-1), Rat(1))),
    ("cbrt4", (Rat(-4), Rat(0), Rat(0), Rat(1))),
    ("i", (Rat(1), Rat(0), Rat(1))),
)
_GEN_INDEX = {name: k for k, (name, _) in enumerate(KNOWN_GENS)}
_GEN_POLY = {name: poly for name, poly in KNOWN_GENS}


class _BadPrime(Exception):
    """Internal: the chosen prime cannot host this computation."""


def check_spec(spec):
    spec = tuple(spec)
    seen = set()
    for name in spec:
        if name not in _GEN_INDEX:
            raise InvalidInput("unknown constant %r" % (name,))
        if name in seen:
            raise InvalidInput("repeated constant %r" % (name,))
        seen.add(name)
    if list(spec) != sorted(spec, key=_GEN_INDEX.__getitem__):
        raise InvalidInput("constants out of canonical order: %r" % (spec,))
    return spec


def join_specs(a, b):
    names = set(a) | set(b)
    return tuple(n for n, _ in KNOWN_GENS if n in names)


class MultiNf:
    """Element of the product presentation Q[gens]/(minpolys)."""

    __slots__ = ("spec", "c")

    def __init__(self, spec, coeffs):
        spec = check_spec(spec)
        degs = tuple(len(_GEN_POLY[n]) - 1 for n in spec)
        clean = {}
        work = list(coeffs.items())
        while work:
            exps, q = work.pop()
            q = Rat(q)
            if q == 0:
                continue
            exps = tuple(exps)
            if len(exps) != len(spec):
                raise ShapeError("exponent tuple %r for spec %r" % (exps, spec))
            hot = None
            for k, e in enumerate(exps):
                if e >= degs[k]:
                    hot = k
                    break
            if hot is None:
                clean[exps] = clean.get(exps, Rat(0)) + q
                continue
            # rewrite gen^d via the minpoly, once, and requeue
            poly = _GEN_POLY[spec[hot]]
            d = degs[hot]
            base = list(exps)
            base[hot] -= d
            for k in range(d):
                if poly[k] == 0:
                    continue
                e2 = list(base)
                e2[hot] += k
                work.append((tuple(e2), -poly[k] * q))
        object.__setattr__(self, "spec", spec)
        object.__setattr__(
            self, "c", {e: v for e, v in clean.items() if v != 0}
        )

    def __setattr__(self, name, value):
        raise AttributeError("MultiNf is immutable")

    # -- constructors

    @classmethod
    def from_fraction(cls, q, spec=()):
        spec = check_spec(spec)
        return cls(spec, {(0,) * len(spec): Rat(q)})

    @classmethod
    def zero(cls, spec=()):
        return cls.from_fraction(0, spec)

    @classmethod
    def one(cls, spec=()):
        return cls.from_fraction(1, spec)

    @classmethod
    def gen(cls, name):
        spec = check_spec((name,))
        return cls(spec, {(1,): Rat(1)})

    # -- structure

    def lift(self, spec):
        spec = check_spec(spec)
        pos = []
        for n in self.spec:
            if n not in spec:
                raise ShapeError("cannot lift %r into spec %r" % (self.spec, spec))
            pos.append(spec.index(n))
        out = {}
        for exps, q in self.c.items():
            e2 = [0] * len(spec)
            for k, e in enumerate(exps):
                e2[pos[k]] = e
            out[tuple(e2)] = q
        return MultiNf(spec, out)

    def is_zero(self):
        return not self.c

    def is_rational(self):
        return all(all(e == 0 for e in exps) for exps in self.c)

    def as_fraction(self):
        if not self.is_rational():
            raise InvalidInput("value %s is not rational" % (self,))
        return self.c.get((0,) * len(self.spec), Rat(0))

    def _pair(self, other):
        if isinstance(other, MultiNf):
            spec = join_specs(self.spec, other.spec)
            return self.lift(spec), other.lift(spec)
        if isinstance(other, (int, Rat)):
            return self, MultiNf.from_fraction(other, self.spec)
        return None

    # -- arithmetic

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.c)
        for e, q in b.c.items():
            out[e] = out.get(e, Rat(0)) + q
        return MultiNf(a.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiNf(self.spec, {e: -q for e, q in self.c.items()})

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = {}
        for e1, q1 in a.c.items():
            for e2, q2 in b.c.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Rat(0)) + q1 * q2
        return MultiNf(a.spec, out)

    __rmul__ = __mul__

    def _basis(self):
        degs = [len(_GEN_POLY[n]) - 1 for n in self.spec]
        return list(itertools.product(*[range(d) for d in degs]))

    def inverse(self):
        if self.is_zero():
            raise InvalidInput("division by zero in the constant field")
        basis = self._basis()
        index = {e: k for k, e in enumerate(basis)}
        cols = []
        for e in basis:
            prod = self * MultiNf(self.spec, {e: Rat(1)})
            col = [Rat(0)] * len(basis)
            for e2, q in prod.c.items():
                col[index[e2]] = q
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
        rhs = [Rat(0)] * len(basis)
        rhs[index[(0,) * len(self.spec)]] = Rat(1)
        sol = solve_field(rows, rhs)
        assert sol is not None, "nonzero field element must be invertible"
        return MultiNf(self.spec, {basis[k]: sol[k] for k in range(len(basis))})

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = MultiNf.one(self.spec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.c == b.c

    def __hash__(self):
        lifted = self.lift(tuple(n for n, _ in KNOWN_GENS))
        return hash(frozenset(lifted.c.items()))

    # -- output / reduction

    def map_fp(self, p, assign):
        """Image in F_p sending each generator to assign[name]."""
        total = 0
        for exps, q in self.c.items():
            if q.denominator % p == 0:
                raise _BadPrime("denominator divisible by %d" % p)
            t = q.numerator * pow(q.denominator, p - 2, p)
            for name, e in zip(self.spec, exps):
                t = t * pow(assign[name], e, p)
            total += t
        return total % p

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for exps in sorted(self.c):
            q = self.c[exps]
            mono = "*".join(
                n if e == 1 else "%s^%d" % (n, e)
                for n, e in zip(self.spec, exps)
                if e
            )
            if mono:
                parts.append("%s*%s" % (q, mono) if q != 1 else mono)
            else:
                parts.append(str(q))
        return " + ".join(parts)


def _coerce_scalar(v, spec=()):
    if isinstance(v, MultiNf):
        return v
    if isinstance(v, (int, Rat)):
        return MultiNf.from_fraction(v, spec)
    raise InvalidInput("cannot use %r as a field scalar" % (v,))


class BiPoly:
    """Polynomial in x, y with MultiNf coefficients; immutable."""

    __slots__ = ("spec", "c")

    def __init__(self, coeffs, spec=None):
        items = []
        joined = tuple(spec) if spec is not None else ()
        for key, v in coeffs.items():
            v = _coerce_scalar(v)
            joined = join_specs(joined, v.spec)
            items.append((key, v))
        clean = {}
        for (i, j), v in items:
            if not (isinstance(i, int) and isinstance(j, int) and i >= 0 and j >= 0):
                raise InvalidInput("bad monomial (%r, %r)" % (i, j))
            v = v.lift(joined)
            if (i, j) in clean:
                v = clean[(i, j)] + v
            clean[(i, j)] = v
        object.__setattr__(self, "spec", joined)
        object.__setattr__(
            self, "c", {k: v for k, v in clean.items() if not v.is_zero()}
        )

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def const(cls, v, spec=()):
        return cls({(0, 0): _coerce_scalar(v, spec)}, spec=spec)

    @classmethod
    def zero(cls, spec=()):
        return cls({}, spec=spec)

    @classmethod
    def var_x(cls, spec=()):
        return cls({(1, 0): 1}, spec=spec)

    @classmethod
    def var_y(cls, spec=()):
        return cls({(0, 1): 1}, spec=spec)

    @classmethod
    def monomial(cls, i, j, v=1, spec=()):
        return cls({(i, j): _coerce_scalar(v, spec)}, spec=spec)

    def is_zero(self):
        return not self.c

    @property
    def deg_x(self):
        return max((i for (i, _) in self.c), default=-1)

    @property
    def deg_y(self):
        return max((j for (_, j) in self.c), default=-1)

    def coeff(self, i, j):
        return self.c.get((i, j), MultiNf.zero(self.spec))

    def lift(self, spec):
        return BiPoly({k: v.lift(spec) for k, v in self.c.items()}, spec=spec)

    def __add__(self, other):
        if isinstance(other, (int, Rat, MultiNf)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        spec = join_specs(self.spec, other.spec)
        out = {k: v for k, v in self.lift(spec).c.items()}
        for k, v in other.lift(spec).c.items():
            out[k] = out.get(k, MultiNf.zero(spec)) + v
        return BiPoly(out, spec=spec)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -v for k, v in self.c.items()}, spec=self.spec)

    def __sub__(self, other):
        if isinstance(other, (int, Rat, MultiNf)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Rat, MultiNf)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        spec = join_specs(self.spec, other.spec)
        a, b = self.lift(spec), other.lift(spec)
        out = {}
        for (i1, j1), v1 in a.c.items():
            for (i2, j2), v2 in b.c.items():
                k = (i1 + i2, j1 + j2)
                t = v1 * v2
                if k in out:
                    t = out[k] + t
                out[k] = t
        return BiPoly(out, spec=spec)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InvalidInput("polynomial powers take n >= 0")
        out = BiPoly.const(1, self.spec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Rat, MultiNf)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def diff_x(self):
        return BiPoly(
            {(i - 1, j): v * i for (i, j), v in self.c.items() if i},
            spec=self.spec,
        )

    def diff_y(self):
        return BiPoly(
            {(i, j - 1): v * j for (i, j), v in self.c.items() if j},
            spec=self.spec,
        )

    def x_slice(self, j):
        """The coefficient of y^j, as a polynomial in x alone."""
        return BiPoly(
            {(i, 0): v for (i, jj), v in self.c.items() if jj == j},
            spec=self.spec,
        )

    def y_divmod(self, f):
        """Long division by f in the variable y; f must be monic in y."""
        if not isinstance(f, BiPoly) or f.deg_y < 1:
            raise InvalidInput("y_divmod needs a divisor of positive y-degree")
        lead = f.x_slice(f.deg_y)
        if not (lead.deg_x == 0 and lead.coeff(0, 0) == 1):
            raise InvalidInput("y_divmod needs a divisor monic in y")
        d = f.deg_y
        q = BiPoly.zero(self.spec)
        r = self
        while r.deg_y >= d:
            dr = r.deg_y
            shift = r.x_slice(dr) * BiPoly.monomial(0, dr - d)
            q = q + shift
            r = r - shift * f
        return q, r

    def y_reduce(self, f):
        return self.y_divmod(f)[1]

    def subst(self, u, v):
        """Substitute rational functions for x and y; returns a RatFunc."""
        u = _as_ratfunc(u)
        v = _as_ratfunc(v)
        upow = {0: RatFunc.const(1)}
        vpow = {0: RatFunc.const(1)}
        out = RatFunc.const(0)
        for (i, j), cv in sorted(self.c.items()):
            for cache, base, k in ((upow, u, i), (vpow, v, j)):
                while max(cache) < k:
                    m = max(cache)
                    cache[m + 1] = cache[m] * base
            out = out + RatFunc.const(cv) * upow[i] * vpow[j]
        return out

    def map_fp(self, p, assign):
        out = {}
        for k, v in self.c.items():
            t = v.map_fp(p, assign)
            if t:
                out[k] = t
        return out

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for (i, j) in sorted(self.c):
            v = self.c[(i, j)]
            mono = "*".join(
                s
                for s in (
                    "x" if i == 1 else ("x^%d" % i if i else ""),
                    "y" if j == 1 else ("y^%d" % j if j else ""),
                )
                if s
            )
            vs = repr(v)
            if " + " in vs:
                vs = "(%s)" % vs
            parts.append("%s*%s" % (vs, mono) if mono and vs != "1" else (mono or vs))
        return " + ".join(parts)


def _as_ratfunc(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, BiPoly):
        return RatFunc(v, BiPoly.const(1))
    if isinstance(v, (int, Rat, MultiNf)):
        return RatFunc.const(v)
    raise InvalidInput("cannot use %r as a rational function" % (v,))


class RatFunc:
    """Formal quotient of two BiPoly values (no gcd normalization)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if not isinstance(num, BiPoly) or not isinstance(den, BiPoly):
            raise InvalidInput("RatFunc takes two BiPoly values")
        if den.is_zero():
            raise InvalidInput("zero denominator")
        if num.is_zero():
            den = BiPoly.const(1)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def const(cls, v, spec=()):
        return cls(BiPoly.const(v, spec), BiPoly.const(1))

    @classmethod
    def var_x(cls, spec=()):
        return cls(BiPoly.var_x(spec), BiPoly.const(1))

    @classmethod
    def var_y(cls, spec=()):
        return cls(BiPoly.var_y(spec), BiPoly.const(1))

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other.num.is_zero():
            raise InvalidInput("division by the zero function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfunc(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise InvalidInput("rational function powers take integers")
        if n < 0:
            if self.num.is_zero():
                raise InvalidInput("division by the zero function")
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other):
        other = _as_ratfunc(other)
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def dx(self):
        return RatFunc(
            self.num.diff_x() * self.den - self.num * self.den.diff_x(),
            self.den * self.den,
        )

    def dy(self):
        return RatFunc(
            self.num.diff_y() * self.den - self.num * self.den.diff_y(),
            self.den * self.den,
        )

    def subst(self, u, v):
        top = self.num.subst(u, v)
        bot = self.den.subst(u, v)
        if bot.num.is_zero():
            raise InvalidInput("substitution lands on a zero denominator")
        return top / bot

    def __repr__(self):
        if self.den == BiPoly.const(1):
            return repr(self.num)
        return "(%s)/(%s)" % (self.num, self.den)


# ---------------------------------------------------------------------------
# expression parsing for the CLI-facing morphism grammar


def parse_ratfunc(text):
    """Parse the morphism grammar: x, y, eps, cbrt4, i, integers, and
    + - * / ^ with parentheses."""
    if not isinstance(text, str) or not text.strip():
        raise InvalidInput("empty expression")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InvalidInput("cannot parse %r: %s" % (text, exc)) from None
    names = {
        "x": RatFunc.var_x(),
        "y": RatFunc.var_y(),
        "eps": RatFunc.const(MultiNf.gen("eps")),
        "cbrt4": RatFunc.const(MultiNf.gen("cbrt4")),
        "i": RatFunc.const(MultiNf.gen("i")),
    }

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, int) and not isinstance(node.value, bool):
                return RatFunc.const(node.value)
            raise InvalidInput("only integer literals are allowed")
        if isinstance(node, ast.Name):
            if node.id in names:
                return names[node.id]
            raise InvalidInput("unknown name %r" % node.id)
        if isinstance(node, ast.UnaryOp):
            val = walk(node.operand)
            if isinstance(node.op, ast.USub):
                return -val
            if isinstance(node.op, ast.UAdd):
                return val
            raise InvalidInput("unsupported unary operator")
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (
                    isinstance(node.right, ast.Constant)
                    and isinstance(node.right.value, int)
                ) and not (
                    isinstance(node.right, ast.UnaryOp)
                    and isinstance(node.right.op, ast.USub)
                    and isinstance(node.right.operand, ast.Constant)
                ):
                    raise InvalidInput("exponents must be integer literals")
                exp = (
                    node.right.value
                    if isinstance(node.right, ast.Constant)
                    else -node.right.operand.value
                )
                return walk(node.left) ** exp
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.is_zero():
                    raise InvalidInput("division by zero in expression")
                return left / right
            raise InvalidInput("unsupported operator")
        raise InvalidInput("unsupported syntax in %r" % (text,))

    return walk(tree)


# ---------------------------------------------------------------------------
# mod-p univariate toolkit (dense lists, low degree first)


def fp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def fp_add(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for k, c in enumerate(f):
        out[k] = c
    for k, c in enumerate(g):
        out[k] = (out[k] + c) % p
    return fp_trim(out)


def fp_sub(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for k, c in enumerate(f):
        out[k] = c
    for k, c in enumerate(g):
        out[k] = (out[k] - c) % p
    return fp_trim(out)


def fp_scale(f, s, p):
    s %= p
    return fp_trim([c * s % p for c in f])


def fp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for a, ca in enumerate(f):
        if not ca:
            continue
        for b, cb in enumerate(g):
            out[a + b] = (out[a + b] + ca * cb) % p
    return fp_trim(out)


def fp_divmod(f, g, p):
    f = list(f)
    g = fp_trim(list(g))
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = pow(g[-1], p - 2, p)
    dg = len(g) - 1
    q = [0] * max(0, len(f) - dg)
    while fp_trim(f) and len(f) - 1 >= dg:
        k = len(f) - 1 - dg
        c = f[-1] * inv % p
        q[k] = c
        for t, gc in enumerate(g):
            f[k + t] = (f[k + t] - c * gc) % p
        f = fp_trim(f)
    return fp_trim(q), fp_trim(f)


def fp_deriv(f, p):
    return fp_trim([c * k % p for k, c in enumerate(f)][1:])


def fp_gcd(f, g, p):
    f, g = fp_trim(list(f)), fp_trim(list(g))
    while g:
        f, g = g, fp_divmod(f, g, p)[1]
    if f:
        f = fp_scale(f, pow(f[-1], p - 2, p), p)
    return f


def fp_eval(f, x0, p):
    out = 0
    for c in reversed(f):
        out = (out * x0 + c) % p
    return out


def fp_interp(xs, ys, p):
    """Newton interpolation; xs distinct mod p."""
    n = len(xs)
    co = [y % p for y in ys]
    for j in range(1, n):
        for k in range(n - 1, j - 1, -1):
            inv = pow((xs[k] - xs[k - j]) % p, p - 2, p)
            co[k] = (co[k] - co[k - 1]) * inv % p
    poly = [co[n - 1]]
    for k in range(n - 2, -1, -1):
        # poly = poly*(X - xs[k]) + co[k]
        shifted = [0] + poly
        poly = fp_sub(shifted, fp_scale(poly, xs[k], p), p)
        poly = fp_add(poly, [co[k]], p)
    return fp_trim(poly)


def fp_resultant(f, g, p):
    f, g = fp_trim(list(f)), fp_trim(list(g))
    if not f or not g:
        return 0
    res = 1
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return res * pow(g[0], df, p) % p
        if df < dg:
            if df * dg % 2:
                res = -res % p
            f, g = g, f
            continue
        r = fp_divmod(f, g, p)[1]
        if not r:
            return 0
        dr = len(r) - 1
        if df * dg % 2:
            res = -res % p
        res = res * pow(g[-1], df - dr, p) % p
        f, g = g, r


def fp_distinct_root_count(f, p):
    """Number of distinct roots of f over the algebraic closure: the
    degree of f divided by its repeated part."""
    f = fp_trim(list(f))
    if len(f) <= 1:
        return 0
    rep = fp_gcd(f, fp_deriv(f, p), p)
    return (len(f) - 1) - (len(rep) - 1)


# bivariate mod-p values are dicts {(i, j): coeff}


def fp2_sub(f, g, p):
    out = dict(f)
    for k, c in g.items():
        v = (out.get(k, 0) - c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def fp2_scale(f, s, p):
    s %= p
    return {k: c * s % p for k, c in f.items() if c * s % p}


def fp2_shear(f, lam, p):
    """Substitute x -> x + lam*y."""
    out = {}
    for (i, j), c in f.items():
        row = {0: 1}
        for _ in range(i):
            nxt = {}
            for k, b in row.items():
                nxt[k] = (nxt.get(k, 0) + b) % p
                nxt[k + 1] = (nxt.get(k + 1, 0) + b * lam) % p
            row = nxt
        for k, b in row.items():
            key = (i - k, j + k)
            v = (out.get(key, 0) + c * b) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def fp2_eval_x(f, x0, p):
    """Evaluate x = x0; returns a dense list in y."""
    dy = max((j for (_, j) in f), default=-1)
    out = [0] * (dy + 1)
    for (i, j), c in f.items():
        out[j] = (out[j] + c * pow(x0, i, p)) % p
    return fp_trim(out)


def fp2_deg_x(f):
    return max((i for (i, _) in f), default=-1)


def fp2_deg_y(f):
    return max((j for (_, j) in f), default=-1)


__all__ = [
    "KNOWN_GENS",
    "MultiNf",
    "BiPoly",
    "RatFunc",
    "join_specs",
    "parse_ratfunc",
    "fp_trim",
    "fp_add",
    "fp_sub",
    "fp_scale",
    "fp_mul",
    "fp_divmod",
    "fp_deriv",
    "fp_gcd",
    "fp_eval",
    "fp_interp",
    "fp_resultant",
    "fp_distinct_root_count",
    "fp2_sub",
    "fp2_scale",
    "fp2_shear",
    "fp2_eval_x",
    "fp2_deg_x",
    "fp2_deg_y",
]
