"""Lattice model of a CM abelian variety J isogenous to E^g.

Holds the endomorphism arithmetic the decision procedure runs on: integral
endomorphisms, exponents of abelian subvarieties, atomic idempotents,
permutation endomorphisms, the Rosati transpose, and the subsets-lemma
engine.

Conventions (fixed once, everything downstream depends on them):
- the endomorphism order O is Z[sqrt(-d)], or Z[(1+sqrt(-d))/2] when
  d = 3 mod 4 and maximal_order is set;
- realification Q(sqrt(-d))^g -> Q^{2g} interleaves (rational part,
  sqrt(-d)-coefficient) per coordinate;
- composite gamma classes: gamma_b^T gamma_a = n_a * E[b][a], so
  e_i = E[i][i] and rosati(M) = D^-1 conj(M)^T D with D = diag(n_1..n_g);
- composition is plain matrix multiplication in column convention.

Indices are 0-based internally; 1-based only at the JSON/CLI boundary.
"""

import itertools
import math
from dataclasses import dataclass

from .errors import (
    InvalidInput,
    LatticeError,
    PreconditionError,
    ShapeError,
    UnsupportedQuery,
)
from .exact import ExactMatrix, QuadInt, Rat, ZLattice

LATTICE = "LATTICE"
AXIOMATIC = "AXIOMATIC"

CONSISTENT = "CONSISTENT"
VIOLATES = "VIOLATES"

__all__ = [
    "LATTICE",
    "AXIOMATIC",
    "CONSISTENT",
    "VIOLATES",
    "AbelianModel",
    "EndoQ",
    "PermEndoSpec",
    "build_model",
    "is_integral",
    "exponent",
    "atom_idempotent",
    "subset_idempotent",
    "norm_endo",
    "perm_endo",
    "full_grid",
    "rosati",
    "subsets_lemma_check",
    "proper_nonempty_subsets",
    "model_to_dict",
    "model_from_dict",
    "endo_to_jsonable",
    "endo_identity",
    "endo_zero",
    "verify_proper_exponents",
]


class EndoQ:
    """An element of End_Q(J): a g x g matrix over Q(sqrt(-d))."""

    __slots__ = ("mat", "d")

    def __init__(self, mat, d):
        if not isinstance(mat, ExactMatrix) or mat.rows != mat.cols:
            raise ShapeError("EndoQ needs a square ExactMatrix")
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("EndoQ is immutable")

    @classmethod
    def from_rows(cls, rows, d):
        qrows = []
        for row in rows:
            qrow = []
            for x in row:
                if isinstance(x, QuadInt):
                    if x.d != d:
                        raise InvalidInput("entry in Q(sqrt(-%d)), expected d=%d" % (x.d, d))
                    qrow.append(x)
                else:
                    qrow.append(QuadInt(Rat(x), 0, d))
            qrows.append(qrow)
        return cls(ExactMatrix(qrows), d)

    @property
    def g(self):
        return self.mat.rows

    def entry(self, i, j):
        return self.mat.entry(i, j)

    def __add__(self, other):
        if not isinstance(other, EndoQ):
            return NotImplemented
        return EndoQ(self.mat + other.mat, self.d)

    def __sub__(self, other):
        if not isinstance(other, EndoQ):
            return NotImplemented
        return EndoQ(self.mat - other.mat, self.d)

    def __neg__(self):
        return EndoQ(-self.mat, self.d)

    def __mul__(self, other):
        # composition when other is an EndoQ, otherwise scalar scaling
        if isinstance(other, EndoQ):
            return EndoQ(self.mat * other.mat, self.d)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if not isinstance(c, QuadInt):
            c = QuadInt(Rat(c), 0, self.d)
        return EndoQ(self.mat.scale(c), self.d)

    def conj(self):
        return EndoQ(self.mat.map_entries(lambda x: x.conj()), self.d)

    def apply(self, vec):
        """Matrix times column vector of QuadInt."""
        if len(vec) != self.g:
            raise ShapeError("vector length %d vs g=%d" % (len(vec), self.g))
        out = []
        for i in range(self.g):
            acc = QuadInt.zero(self.d)
            for j in range(self.g):
                acc = acc + self.mat.entry(i, j) * vec[j]
            out.append(acc)
        return out

    def is_zero(self):
        return all(x.is_zero() for row in self.mat.entries for x in row)

    def __eq__(self, other):
        if not isinstance(other, EndoQ):
            return NotImplemented
        return self.d == other.d and self.mat == other.mat

    def __hash__(self):
        return hash((self.d, self.mat))

    def __repr__(self):
        return "EndoQ(d=%d, %r)" % (self.d, [list(r) for r in self.mat.entries])


@dataclass(frozen=True)
class PermEndoSpec:
    """A permutation sigma of {0..g-1} with a restriction set U of cells
    (i, j) in I^2; describes the endomorphism sigma_U."""

    sigma: tuple
    U: frozenset

    def __post_init__(self):
        g = len(self.sigma)
        if sorted(self.sigma) != list(range(g)):
            raise InvalidInput("sigma is not a permutation of 0..%d" % (g - 1))
        for cell in self.U:
            if (
                not isinstance(cell, tuple)
                or len(cell) != 2
                or not all(0 <= c < g for c in cell)
            ):
                raise InvalidInput("U cell %r out of range for g=%d" % (cell, g))


def full_grid(g):
    return frozenset((i, j) for i in range(g) for j in range(g))


def realify_vec(w):
    out = []
    for x in w:
        out.append(x.a)
        out.append(x.b)
    return out


def derealify_vec(r, d):
    assert len(r) % 2 == 0
    return [QuadInt(r[2 * i], r[2 * i + 1], d) for i in range(len(r) // 2)]


def _divisors_sorted(n):
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


class AbelianModel:
    """A CM abelian variety J ~ E^g, either as an explicit lattice
    Lambda = O^g + glue (LATTICE mode) or as axiomatic exponent data
    (AXIOMATIC mode)."""

    def __init__(self, d, g, glue, mode, lattice, olat, atom_exponents,
                 maximal_order, assume_proper_ge4):
        self.d = d
        self.g = g
        self.glue = glue
        self.mode = mode
        self.lattice = lattice
        self._olat = olat
        self._atom_exps = atom_exponents
        self.maximal_order = maximal_order
        self.assume_proper_ge4 = assume_proper_ge4
        self._exp_cache = {}
        self._glue_exp = None
        self._proper_ge4_verified = None

    @property
    def atom_exponents(self):
        if self._atom_exps is None:
            self._atom_exps = tuple(
                exponent(self, frozenset([i])) for i in range(self.g)
            )
        return self._atom_exps

    def with_assumption(self):
        """Copy of the model with the proper-exponents->=4 assumption set."""
        if self.assume_proper_ge4:
            return self
        m = AbelianModel(
            self.d, self.g, self.glue, self.mode, self.lattice, self._olat,
            self._atom_exps, self.maximal_order, True,
        )
        return m

    def __repr__(self):
        return "AbelianModel(d=%d, g=%d, mode=%s)" % (self.d, self.g, self.mode)


def _order_rows(d, g, maximal_order):
    """Realified generators of O^g."""
    rows = []
    for i in range(g):
        one = [Rat(0)] * (2 * g)
        one[2 * i] = Rat(1)
        rows.append(one)
        w = [Rat(0)] * (2 * g)
        if maximal_order:
            # (1 + sqrt(-d))/2
            w[2 * i] = Rat(1, 2)
            w[2 * i + 1] = Rat(1, 2)
        else:
            w[2 * i + 1] = Rat(1)
        rows.append(w)
    return rows


def _coerce_glue_vector(vec, g, d):
    if len(vec) != g:
        raise LatticeError("glue vector has length %d, expected g=%d" % (len(vec), g))
    out = []
    for x in vec:
        if isinstance(x, QuadInt):
            if x.d != d:
                raise LatticeError("glue coordinate in Q(sqrt(-%d)), expected d=%d" % (x.d, d))
            out.append(x)
        elif isinstance(x, (tuple, list)):
            if len(x) != 2:
                raise LatticeError("glue coordinate %r is not a (rational, coefficient) pair" % (x,))
            out.append(QuadInt(Rat(x[0]), Rat(x[1]), d))
        else:
            out.append(QuadInt(Rat(x), 0, d))
    return tuple(out)


def build_model(d, g, glue=(), mode=LATTICE, exponents=None,
                maximal_order=False, assume_proper_ge4=False):
    """Construct an AbelianModel.

    glue: vectors in Q(sqrt(-d))^g; coordinates may be rationals, (a, b)
    pairs meaning a + b*sqrt(-d), or QuadInt.
    """
    if g < 1:
        raise InvalidInput("g must be >= 1, got %r" % (g,))
    if maximal_order and d % 4 != 3:
        raise InvalidInput("maximal order differs from Z[sqrt(-d)] only for d = 3 mod 4")
    if mode not in (LATTICE, AXIOMATIC):
        raise InvalidInput("mode must be LATTICE or AXIOMATIC, got %r" % (mode,))
    QuadInt.zero(d)  # validates d
    glue_vecs = tuple(_coerce_glue_vector(v, g, d) for v in glue)
    if mode == AXIOMATIC:
        if glue_vecs:
            raise InvalidInput("AXIOMATIC mode takes no glue vectors")
        if exponents is None:
            raise InvalidInput("AXIOMATIC mode requires the atom exponents")
        exps = tuple(int(n) for n in exponents)
        if len(exps) != g:
            raise InvalidInput("expected %d exponents, got %d" % (g, len(exps)))
        if any(n < 1 for n in exps):
            raise InvalidInput("exponents must be >= 1, got %r" % (exps,))
        if g == 1 and exps[0] != 1:
            raise InvalidInput("n_I must be 1, got %d for g=1" % exps[0])
        return AbelianModel(d, g, glue_vecs, AXIOMATIC, None, None, exps,
                            maximal_order, assume_proper_ge4)
    rows = _order_rows(d, g, maximal_order)
    rows += [realify_vec(v) for v in glue_vecs]
    lattice = ZLattice.from_rows(rows)
    olat = ZLattice.from_rows(_order_rows(d, g, maximal_order))
    model = AbelianModel(d, g, glue_vecs, LATTICE, lattice, olat, None,
                         maximal_order, assume_proper_ge4)
    if exponents is not None:
        got = model.atom_exponents
        if tuple(int(n) for n in exponents) != got:
            raise InvalidInput(
                "supplied exponents %r disagree with computed %r" % (tuple(exponents), got)
            )
    return model


# ---------------------------------------------------------------------------
# idempotents and permutation endomorphisms


def _check_subset(m, K):
    K = frozenset(K)
    if any(not isinstance(i, int) or not 0 <= i < m.g for i in K):
        raise InvalidInput("subset %r out of range for g=%d" % (sorted(K), m.g))
    return K


def subset_idempotent(m, K):
    """e_K: the diagonal idempotent cutting out the factors in K."""
    K = _check_subset(m, K)
    rows = [[Rat(1) if (i == j and i in K) else Rat(0) for j in range(m.g)]
            for i in range(m.g)]
    return EndoQ.from_rows(rows, m.d)


def atom_idempotent(m, i):
    return subset_idempotent(m, [i])


def endo_identity(m):
    return subset_idempotent(m, range(m.g))


def endo_zero(m):
    return subset_idempotent(m, [])


def norm_endo(m, K):
    """The primitive integral multiple n_K * e_K."""
    K = _check_subset(m, K)
    return subset_idempotent(m, K).scale(exponent(m, K))


def perm_endo(m, spec):
    """The endomorphism sigma_U = sum over i with (i, sigma(i)) in U of
    (n_sigma(i)/n_i) E[i][sigma(i)]; sigma_J when U is the full grid."""
    if len(spec.sigma) != m.g:
        raise ShapeError("sigma on %d letters, model has g=%d" % (len(spec.sigma), m.g))
    n = m.atom_exponents
    rows = [[Rat(0)] * m.g for _ in range(m.g)]
    for i in range(m.g):
        j = spec.sigma[i]
        if (i, j) in spec.U:
            rows[i][j] += Rat(n[j], n[i])
    return EndoQ.from_rows(rows, m.d)


def rosati(x, m):
    """The Rosati involution: M -> D^-1 conj(M)^T D with D = diag(n_i)."""
    if x.g != m.g:
        raise ShapeError("endomorphism size %d vs g=%d" % (x.g, m.g))
    n = m.atom_exponents
    rows = [
        [x.entry(j, i).conj() * Rat(n[j], n[i]) for j in range(m.g)]
        for i in range(m.g)
    ]
    return EndoQ(ExactMatrix(rows), m.d)


# ---------------------------------------------------------------------------
# integrality


def is_integral(m, x):
    """LATTICE mode: x is integral iff x . Lambda subset Lambda.

    AXIOMATIC mode: decided only for diagonal rational x (the e_K span)
    by the primitivity/shift/divisibility rules; raises UnsupportedQuery
    when the axioms cannot settle the query.
    """
    if not isinstance(x, EndoQ):
        raise InvalidInput("is_integral expects an EndoQ")
    if x.g != m.g:
        raise ShapeError("endomorphism size %d vs g=%d" % (x.g, m.g))
    if x.d != m.d:
        raise InvalidInput("endomorphism over d=%d, model d=%d" % (x.d, m.d))
    if m.mode == LATTICE:
        return _lattice_is_integral(m, x)
    return _axiomatic_is_integral(m, x)


def _lattice_is_integral(m, x):
    for row in m.lattice.basis_rows():
        w = derealify_vec(list(row), m.d)
        y = x.apply(w)
        if not m.lattice.contains(realify_vec(y)):
            return False
    return True


def _crt_solvable(congs):
    """Whether t = r mod n has a common solution across all (r, n)."""
    r0, m0 = 0, 1
    for r, n in congs:
        gcd = math.gcd(m0, n)
        if (r - r0) % gcd:
            return False
        step = n // gcd
        if step > 1:
            k = ((r - r0) // gcd * pow(m0 // gcd, -1, step)) % step
        else:
            k = 0
        lcm = m0 // gcd * n
        r0 = (r0 + m0 * k) % lcm
        m0 = lcm
    return True


def _axiomatic_is_integral(m, x):
    cs = []
    for i in range(m.g):
        for j in range(m.g):
            e = x.entry(i, j)
            if i == j:
                if e.b != 0:
                    raise UnsupportedQuery(
                        "axiomatic integrality is defined only on the e_K span "
                        "(diagonal rational matrices); entry (%d,%d) has a "
                        "sqrt(-d) part" % (i + 1, j + 1)
                    )
                cs.append(e.a)
            elif not e.is_zero():
                raise UnsupportedQuery(
                    "axiomatic integrality is defined only on the e_K span; "
                    "off-diagonal entry at (%d,%d)" % (i + 1, j + 1)
                )
    # q*e_i with q not an integer is never integral: iterating x would give
    # unbounded denominators inside the finite group Lambda/O^g
    if any(c.denominator != 1 for c in cs):
        return False
    cs = [c.numerator for c in cs]
    n = m.atom_exponents
    # shift certificate: t = c_i mod n_i for all i makes
    # x = t*id + sum_i ((c_i - t)/n_i) * (n_i e_i), a sum of integrals
    if _crt_solvable(list(zip(cs, n))):
        return True
    # divisibility certificates: for each value v, the product over the other
    # values of (x - u*id) is integral and equals M_v * e_{K_v}, so n_{K_v}
    # must divide M_v
    values = sorted(set(cs))
    for v in values:
        K_v = [i for i, c in enumerate(cs) if c == v]
        if len(K_v) == m.g:
            continue
        M_v = 1
        for u in values:
            if u != v:
                M_v *= v - u
        if len(K_v) == 1:
            if M_v % n[K_v[0]]:
                return False
        elif m.assume_proper_ge4 and 0 < abs(M_v) < 4:
            # n_{K_v} >= 4 cannot divide a smaller nonzero product
            return False
    raise UnsupportedQuery(
        "axiomatic integrality undecided for diagonal pattern %r with "
        "exponents %r" % (cs, list(n))
    )


# ---------------------------------------------------------------------------
# exponents


def exponent(m, K):
    """n_K: the minimal positive integer with n_K * e_K integral."""
    K = _check_subset(m, K)
    if not K or len(K) == m.g:
        return 1
    if m.mode == AXIOMATIC:
        if len(K) == 1:
            return m.atom_exponents[next(iter(K))]
        raise UnsupportedQuery(
            "exponent of %r is not derivable from atom exponents alone"
            % (sorted(i + 1 for i in K),)
        )
    if K in m._exp_cache:
        return m._exp_cache[K]
    e_K = subset_idempotent(m, K)
    for t in _divisors_sorted(_glue_group_exponent(m)):
        if _lattice_is_integral(m, e_K.scale(t)):
            m._exp_cache[K] = t
            return t
    raise AssertionError("no exponent found; glue group bound is wrong")


def _glue_group_exponent(m):
    """The exponent N of Lambda/O^g; every n_K divides it because
    N e_K Lambda lies in e_K O^g, inside O^g."""
    if m._glue_exp is not None:
        return m._glue_exp
    N = 1
    for row in m.lattice.basis_rows():
        den = 1
        for x in row:
            den = math.lcm(den, x.denominator)
        if m.maximal_order:
            den *= 2
        for t in _divisors_sorted(den):
            if m._olat.contains([t * x for x in row]):
                N = math.lcm(N, t)
                break
        else:
            raise AssertionError("row %r not commensurable with O^g" % (row,))
    m._glue_exp = N
    return N


# ---------------------------------------------------------------------------
# the subsets lemma


def proper_nonempty_subsets(g):
    for size in range(1, g):
        for K in itertools.combinations(range(g), size):
            yield frozenset(K)


def verify_proper_exponents(m, bound=4):
    """Check n_K >= bound for every proper nonempty K; returns None when the
    check holds, else one offending (K, n_K)."""
    if m.mode == AXIOMATIC:
        if m.g == 1:
            return None  # no proper nonempty subsets at all
        for i, n in enumerate(m.atom_exponents):
            if n < bound:
                return frozenset([i]), n
        if not m.assume_proper_ge4:
            return None, None  # unions not certified
        return None
    if m._proper_ge4_verified and bound <= 4:
        return None
    for K in proper_nonempty_subsets(m.g):
        n = exponent(m, K)
        if n < bound:
            return K, n
    if bound >= 4:
        m._proper_ge4_verified = True
    return None


def subsets_lemma_check(m, A, B):
    """Check one instance of the subsets lemma: if 2e_A + e_B is integral
    then A and B must both be empty or everything.

    Returns CONSISTENT or VIOLATES (a VIOLATES would be a counterexample).
    Precondition: every proper nonempty K has n_K >= 4; verified in LATTICE
    mode, and required as declared axiomatic data in AXIOMATIC mode.
    """
    A = _check_subset(m, A)
    B = _check_subset(m, B)
    bad = verify_proper_exponents(m)
    if bad is not None:
        K, n = bad
        if K is None:
            raise PreconditionError(
                "AXIOMATIC model does not certify exponents >= 4 for unions "
                "of atoms; build it with assume_proper_ge4"
            )
        raise PreconditionError(
            "exponent hypothesis fails: n_%r = %d < 4"
            % (sorted(i + 1 for i in K), n)
        )
    x = subset_idempotent(m, A).scale(2) + subset_idempotent(m, B)
    allowed = len(A) in (0, m.g) and len(B) in (0, m.g)
    if is_integral(m, x) and not allowed:
        return VIOLATES
    return CONSISTENT


# ---------------------------------------------------------------------------
# JSON model description


def _pair(x):
    x = Rat(x)
    return [x.numerator, x.denominator]


def _from_pair(p):
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise InvalidInput("rational must be a [numerator, denominator] pair, got %r" % (p,))
    num, den = p
    if not isinstance(num, int) or not isinstance(den, int) or den == 0:
        raise InvalidInput("bad rational pair %r" % (p,))
    return Rat(num, den)


def endo_to_jsonable(x):
    """Row-major nested list with each entry as [[an, ad], [bn, bd]]."""
    return [
        [[_pair(q.a), _pair(q.b)] for q in row] for row in x.mat.entries
    ]


def model_to_dict(m):
    out = {
        "d": m.d,
        "g": m.g,
        "glue": [
            [[_pair(x.a), _pair(x.b)] for x in vec] for vec in m.glue
        ],
        "mode": m.mode.lower(),
        "exponents": list(m.atom_exponents),
    }
    if m.maximal_order:
        out["maximal_order"] = True
    if m.assume_proper_ge4:
        out["assume_proper_exponents_ge4"] = True
    return out


def _parse_glue_coord(entry):
    # [[an, ad], [bn, bd]] or the shorthand [num, den] for a rational
    if (
        isinstance(entry, (list, tuple))
        and len(entry) == 2
        and all(isinstance(c, int) for c in entry)
    ):
        return _from_pair(entry), Rat(0)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return _from_pair(entry[0]), _from_pair(entry[1])
    raise InvalidInput("bad glue coordinate %r" % (entry,))


def model_from_dict(data):
    if not isinstance(data, dict):
        raise InvalidInput("model description must be a JSON object")
    for key in ("d", "g", "mode"):
        if key not in data:
            raise InvalidInput("model description missing %r" % key)
    mode = str(data["mode"]).upper()
    if mode not in (LATTICE, AXIOMATIC):
        raise InvalidInput("mode must be 'lattice' or 'axiomatic', got %r" % (data["mode"],))
    d = data["d"]
    g = data["g"]
    if not isinstance(d, int) or not isinstance(g, int):
        raise InvalidInput("d and g must be integers")
    glue = []
    for vec in data.get("glue", []):
        if not isinstance(vec, (list, tuple)):
            raise InvalidInput("glue vector %r is not a list" % (vec,))
        glue.append([_parse_glue_coord(entry) for entry in vec])
    exponents = data.get("exponents")
    return build_model(
        d,
        g,
        glue=glue,
        mode=mode,
        exponents=exponents,
        maximal_order=bool(data.get("maximal_order", False)),
        assume_proper_ge4=bool(data.get("assume_proper_exponents_ge4", False)),
    )
