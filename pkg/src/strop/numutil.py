"""Exact-arithmetic helpers: rationals, integer polynomials in one
variable, rational functions, and membership in finitely generated
subgroups of the multiplicative group of the rationals.

Polynomials are tuples of ints, lowest degree first, normalized so the
last entry is nonzero (the zero polynomial is the empty tuple).
Rational functions are (numerator, denominator) pairs of such tuples;
they are *not* reduced to lowest terms -- equality is decided by
cross-multiplication, which is exact and avoids polynomial gcd.
"""

from fractions import Fraction

from .errors import DivisionByZeroFunction, Unsupported


def parse_rational(s):
    """Parse "p/q" or "p" into a Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ord2(q):
    """2-adic order of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("ord2 of zero is undefined")
    n = 0
    num, den = abs(q.numerator), q.denominator
    while num % 2 == 0:
        num //= 2
        n += 1
    while den % 2 == 0:
        den //= 2
        n -= 1
    return n


def sample_fraction(rng, box, nonzero=False):
    """Uniform numerator in [-box, box], denominator in [1, box]."""
    while True:
        q = Fraction(rng.randint(-box, box), rng.randint(1, box))
        if q != 0 or not nonzero:
            return q


# ---------------------------------------------------------------------------
# integer polynomials, lowest degree first


def poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_add(f, g):
    n = max(len(f), len(g))
    return poly_trim(
        (f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)
    )


def poly_mul(f, g):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return poly_trim(out)


def poly_ord(f):
    """Order of vanishing at t = 0 (index of the lowest nonzero coefficient)."""
    for i, c in enumerate(f):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no order")


def poly_low_coeff(f):
    return f[poly_ord(f)]


class RationalFunction:
    """A quotient of integer polynomials in one variable, exact."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num = poly_trim(num)
        den = poly_trim(den)
        if not den:
            raise DivisionByZeroFunction("denominator is the zero polynomial")
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, q):
        q = Fraction(q)
        return cls((q.numerator,), (q.denominator,))

    @classmethod
    def monomial(cls, k, c=1):
        return cls((0,) * k + (c,))

    def is_zero(self):
        return not self.num

    def __mul__(self, other):
        return RationalFunction(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    def __add__(self, other):
        return RationalFunction(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

    def inverse(self):
        if self.is_zero():
            raise DivisionByZeroFunction("cannot invert the zero function")
        return RationalFunction(self.den, self.num)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return poly_mul(self.num, other.den) == poly_mul(other.num, self.den)

    def __hash__(self):
        # Not canonical across equal fractions; rational functions are
        # compared pairwise, never used as dict keys.
        raise TypeError("RationalFunction is not hashable")

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def low_data(self):
        """(ord_t num - ord_t den, lowest-coefficient ratio) of a nonzero function."""
        if self.is_zero():
            raise ValueError("zero function")
        return (
            poly_ord(self.num) - poly_ord(self.den),
            Fraction(poly_low_coeff(self.num), poly_low_coeff(self.den)),
        )

    def as_constant(self):
        """The rational value of this function when it is constant, else None."""
        if self.is_zero():
            return Fraction(0)
        nl, dl = poly_low_coeff(self.num), poly_low_coeff(self.den)
        if tuple(a * dl for a in self.num) == tuple(b * nl for b in self.den):
            return Fraction(nl, dl)
        return None


# ---------------------------------------------------------------------------
# multiplicative subgroup membership in Q*


def factor_int(n):
    """Trial-division factorization of a nonzero int into {prime: exponent}."""
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rational_exponents(q):
    """Prime exponent vector of a nonzero rational, plus sign.

    Returns ({prime: exponent}, sign).
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no factorization")
    num = factor_int(q.numerator)
    den = factor_int(q.denominator)
    for p, e in den.items():
        num[p] = num.get(p, 0) - e
    return {p: e for p, e in num.items() if e}, 1 if q > 0 else -1


class QStarSubgroup:
    """A finitely generated subgroup of (Q*, x) with decidable membership.

    Membership reduces to integer linear algebra on prime exponent
    vectors.  Construction requires the generators' exponent vectors to
    be linearly independent over Q (then the rational solution of the
    exponent system is unique and membership is its integrality); the
    samplers used for checks enforce this.
    """

    def __init__(self, generators):
        self.generators = [Fraction(g) for g in generators]
        if any(g == 0 for g in self.generators):
            raise ValueError("0 is not a unit")
        if any(g < 0 for g in self.generators):
            raise Unsupported("negative generators not supported")
        vecs = [rational_exponents(g)[0] for g in self.generators]
        self.primes = sorted({p for v in vecs for p in v})
        self.matrix = [[v.get(p, 0) for v in vecs] for p in self.primes]
        if self.generators and _rank(self.matrix) < len(self.generators):
            raise Unsupported("generator exponent vectors are not independent")

    def contains(self, q):
        q = Fraction(q)
        if q <= 0:
            return False
        if q == 1:
            return True
        if not self.generators:
            return False
        vec, _ = rational_exponents(q)
        if any(p not in self.primes for p in vec):
            return False
        b = [Fraction(vec.get(p, 0)) for p in self.primes]
        sol = _solve_unique(self.matrix, b)
        if sol is None:
            return False
        return all(x.denominator == 1 for x in sol)


def _rank(matrix):
    m = [[Fraction(x) for x in row] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col] / m[row][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
    return rank


def _solve_unique(matrix, b):
    """Solve matrix @ x = b for the unique rational solution, or None.

    Assumes the columns of `matrix` are linearly independent.
    """
    m = [[Fraction(x) for x in row] + [b[i]] for i, row in enumerate(matrix)]
    cols = len(matrix[0])
    row = 0
    pivots = []
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col] / m[row][col]
                m[r] = [a - f * c for a, c in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    # inconsistent rows mean q is outside the subgroup's span
    for r in range(row, len(m)):
        if m[r][cols] != 0:
            return None
    return [m[i][cols] / m[i][pivots[i]] for i in range(len(pivots))]
