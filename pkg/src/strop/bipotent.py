"""Bipotent semiring carriers: totally ordered commutative monoids with
absorbing least element 0, addition derived as max.

Finite carriers store a multiplication table and a rank permutation;
addition is always derived, never stored.  Infinite carriers (max-plus
rationals, the multiplicative unit interval, lexicographic powers) are
closed under the listed operations and expose seeded samplers instead
of enumeration.  All arithmetic is exact.
"""

import random
from fractions import Fraction

from . import config
from .errors import (
    BadRank,
    ForeignElement,
    MalformedCarrier,
    NotHomomorphism,
    NotMultiplicative,
    NotOrderCompatible,
)
from .numutil import format_rational, sample_fraction
from .oracles import oracle_semiring_axioms
from .report import ValidationReport


class BipotentCarrier:
    """Shared behavior: add = max under the carrier order."""

    is_finite = False
    variant = None

    def eq(self, x, y):
        return x == y

    def le(self, x, y):
        raise NotImplementedError

    def lt(self, x, y):
        return self.le(x, y) and not self.eq(x, y)

    def cmp(self, x, y):
        if self.eq(x, y):
            return 0
        return -1 if self.le(x, y) else 1

    def add(self, x, y):
        return y if self.le(x, y) else x

    def mul(self, x, y):
        raise NotImplementedError

    def contains(self, x):
        raise NotImplementedError

    def require(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise ForeignElement(f"{x!r} is not an element of {self.label}")

    def name(self, x):
        return str(x)

    @property
    def label(self):
        return self.variant or type(self).__name__

    def __repr__(self):
        return f"<{self.label}>"


class FiniteBipotent(BipotentCarrier):
    """Table-backed carrier; elements are indices into `names`.

    `order` lists indices in ascending carrier order, rank 0 = zero.
    """

    is_finite = True

    def __init__(self, names, mul_table, order, one, variant="finite"):
        n = len(names)
        if len(set(names)) != n:
            raise MalformedCarrier("duplicate element names")
        if len(mul_table) != n or any(len(row) != n for row in mul_table):
            raise MalformedCarrier("multiplication table is not n x n")
        if any(not (0 <= v < n) for row in mul_table for v in row):
            raise MalformedCarrier("table entry out of range")
        if sorted(order) != list(range(n)):
            raise MalformedCarrier("order is not a permutation of the element indices")
        if not (0 <= one < n):
            raise MalformedCarrier("unit index out of range")
        self.names = list(names)
        self.table = [list(row) for row in mul_table]
        self.order = list(order)
        self.rank = [0] * n
        for r, idx in enumerate(order):
            self.rank[idx] = r
        self.one = one
        self.zero = order[0]
        self.variant = variant

    def elements(self):
        return range(len(self.names))

    def __len__(self):
        return len(self.names)

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < len(self.names)

    def mul(self, x, y):
        return self.table[x][y]

    def le(self, x, y):
        return self.rank[x] <= self.rank[y]

    def name(self, x):
        return self.names[x]

    def index_of(self, name):
        return self.names.index(name)

    def sample(self, rng):
        return rng.randrange(len(self.names))

    def to_doc(self):
        return {
            "kind": "bipotent",
            "variant": self.variant,
            "elements": list(self.names),
            "mul": [list(row) for row in self.table],
            "order": list(self.order),
            "one": self.one,
        }


def boolean():
    """The two-element carrier {0 < 1}."""
    return FiniteBipotent(["0", "1"], [[0, 0], [0, 1]], [0, 1], 1, variant="boolean")


def chain3():
    """{0 < a < 1} with a*a = a*1 = a (multiplication is min)."""
    return FiniteBipotent(
        ["0", "a", "1"],
        [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
        [0, 1, 2],
        2,
    )


def null_bipotent():
    """The one-element carrier (1 = 0)."""
    return FiniteBipotent(["0"], [[0]], [0], 0, variant="null")


class RationalMaxPlus(BipotentCarrier):
    """Exact rationals under (max, +); zero is the bottom element None."""

    variant = "rational_maxplus"
    zero = None
    one = Fraction(0)

    def contains(self, x):
        return x is None or isinstance(x, Fraction)

    def mul(self, x, y):
        if x is None or y is None:
            return None
        return x + y

    def le(self, x, y):
        if x is None:
            return True
        if y is None:
            return False
        return x <= y

    def sample(self, rng):
        if rng.randrange(20) == 0:
            return None
        return sample_fraction(rng, config.RATIONAL_BOX)

    def name(self, x):
        return "-inf" if x is None else format_rational(x)

    def to_doc(self):
        return {"kind": "bipotent", "variant": self.variant}


class UnitIntervalMul(BipotentCarrier):
    """Exact rationals in [0, 1] under (max, *)."""

    variant = "unit_interval_mul"
    zero = Fraction(0)
    one = Fraction(1)

    def contains(self, x):
        return isinstance(x, Fraction) and 0 <= x <= 1

    def mul(self, x, y):
        return x * y

    def le(self, x, y):
        return x <= y

    def sample(self, rng):
        den = rng.randint(1, config.RATIONAL_BOX)
        return Fraction(rng.randint(0, den), den)

    def name(self, x):
        return format_rational(x)

    def to_doc(self):
        return {"kind": "bipotent", "variant": self.variant}


class LexRationalPower(BipotentCarrier):
    """k-tuples of exact rationals, product = componentwise sum,
    lexicographic order; zero is the bottom element None."""

    variant = "lex_power"
    zero = None

    def __init__(self, k):
        if k < 1:
            raise MalformedCarrier("lex power needs k >= 1")
        self.k = k
        self.one = (Fraction(0),) * k

    def contains(self, x):
        return x is None or (
            isinstance(x, tuple) and len(x) == self.k and all(isinstance(c, Fraction) for c in x)
        )

    def mul(self, x, y):
        if x is None or y is None:
            return None
        return tuple(a + b for a, b in zip(x, y))

    def le(self, x, y):
        if x is None:
            return True
        if y is None:
            return False
        return x <= y

    def sample(self, rng):
        if rng.randrange(20) == 0:
            return None
        return tuple(sample_fraction(rng, config.RATIONAL_BOX) for _ in range(self.k))

    def name(self, x):
        if x is None:
            return "-inf"
        return "(" + ",".join(format_rational(c) for c in x) + ")"

    def to_doc(self):
        return {"kind": "bipotent", "variant": self.variant, "k": self.k}


class CollapsedUnitInterval(BipotentCarrier):
    """Quotient of the unit interval carrier by the ideal [0, theta]:
    the set {0} + (theta, 1] with x*y = xy when xy > theta, else 0."""

    variant = "unit_interval_collapsed"
    zero = Fraction(0)
    one = Fraction(1)

    def __init__(self, theta, closed=True):
        theta = Fraction(theta)
        if not (0 < theta < 1):
            raise MalformedCarrier("theta must lie strictly between 0 and 1")
        self.theta = theta
        self.closed = closed

    def _collapsed(self, x):
        if self.closed:
            return x <= self.theta
        return x < self.theta

    def contains(self, x):
        return isinstance(x, Fraction) and (x == 0 or (not self._collapsed(x) and x <= 1))

    def mul(self, x, y):
        p = x * y
        return Fraction(0) if self._collapsed(p) else p

    def le(self, x, y):
        return x <= y

    def sample(self, rng):
        if rng.randrange(10) == 0:
            return Fraction(0)
        while True:
            den = rng.randint(1, config.RATIONAL_BOX)
            q = Fraction(rng.randint(0, den), den)
            if not self._collapsed(q):
                return q

    def name(self, x):
        return format_rational(x)

    def to_doc(self):
        return {
            "kind": "bipotent",
            "variant": self.variant,
            "theta": format_rational(self.theta),
            "closed": self.closed,
        }


# ---------------------------------------------------------------------------
# operations


def ghost_ops(M, op, x, y=None):
    """Evaluate mul / add / cmp inside the carrier M."""
    M.require(x)
    if op == "cmp":
        M.require(y)
        return M.cmp(x, y)
    if op == "mul":
        M.require(y)
        return M.mul(x, y)
    if op == "add":
        M.require(y)
        return M.add(x, y)
    raise ValueError(f"unknown op {op!r}")


def validate_bipotent(M, seed=None, samples=None):
    """Full axiom suite: semiring laws for (max, *), bipotency, total
    order with 0 least, and monotonicity of multiplication."""
    report = oracle_semiring_axioms(M, seed=seed, samples=samples, subject=f"bipotent {M.label}")

    if M.is_finite:
        elems = list(M.elements())
        pairs = [(x, y) for x in elems for y in elems]
        triples = [(x, y, z) for x in elems for y in elems for z in elems]
    else:
        rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
        n = config.DEFAULT_SAMPLES if samples is None else samples
        triples = [(M.sample(rng), M.sample(rng), M.sample(rng)) for _ in range(n)]
        elems = [t[0] for t in triples[: max(64, n // 16)]]
        pairs = [(x, y) for x, y, _ in triples]

    w = next((x for x in elems if not M.eq(M.add(x, x), x)), None)
    report.check("bipotent", w is None, w)

    w = next((x for x in elems if not M.le(M.zero, x)), None)
    report.check("zero-least", w is None, w)

    w = next(
        ((x, y) for x, y in pairs if not (M.le(x, y) or M.le(y, x))),
        None,
    )
    report.check("order-total", w is None, w)

    w = next(
        ((x, y) for x, y in pairs if M.le(x, y) and M.le(y, x) and not M.eq(x, y)),
        None,
    )
    report.check("order-antisymmetric", w is None, w)

    # monotonicity follows from distributivity; checked separately for a
    # cheaper, earlier witness
    w = next(
        (
            (x, y, z)
            for x, y, z in triples
            if M.le(x, y) and not M.le(M.mul(x, z), M.mul(y, z))
        ),
        None,
    )
    report.check("mul-monotone", w is None, w)
    return report


class CancellativityResult:
    def __init__(self, cancellative, witness=None, proof="exhaustive"):
        self.cancellative = cancellative
        self.witness = witness
        self.proof = proof

    def __bool__(self):
        return self.cancellative

    def __repr__(self):
        if self.cancellative:
            return f"CancellativityResult(True, proof={self.proof!r})"
        return f"CancellativityResult(False, witness={self.witness!r})"


BY_CONSTRUCTION_CANCELLATIVE = (RationalMaxPlus, UnitIntervalMul, LexRationalPower)


def is_cancellative(M):
    """xz = yz with z != 0 forces x = y.  Exhaustive for finite carriers;
    the named infinite variants are cancellative by construction."""
    if isinstance(M, BY_CONSTRUCTION_CANCELLATIVE):
        return CancellativityResult(True, proof="by-construction")
    if not M.is_finite:
        return CancellativityResult(None, proof="unknown")
    elems = list(M.elements())
    for z in elems:
        if M.eq(z, M.zero):
            continue
        for x in elems:
            for y in elems:
                if M.eq(M.mul(x, z), M.mul(y, z)) and not M.eq(x, y):
                    return CancellativityResult(False, witness=(x, y, z))
    return CancellativityResult(True)


def is_semidomain(M):
    """No zero divisors: xy = 0 implies x = 0 or y = 0."""
    if isinstance(M, BY_CONSTRUCTION_CANCELLATIVE):
        return True
    if not M.is_finite:
        return None
    z = M.zero
    for x in M.elements():
        for y in M.elements():
            if M.eq(M.mul(x, y), z) and not (M.eq(x, z) or M.eq(y, z)):
                return False
    return True


# ---------------------------------------------------------------------------
# homomorphisms


class GhostHomomorphism:
    """A map between bipotent carriers, recorded with an optional section
    (right inverse) used when a canonical preimage is needed."""

    def __init__(self, source, target, fn, rule="explicit", section=None, surjective=False):
        self.source = source
        self.target = target
        self._fn = fn
        self.rule = rule
        self._section = section
        self.surjective = surjective

    @classmethod
    def from_indices(cls, source, target, image, surjective=None):
        image = list(image)
        if len(image) != len(source.names):
            raise MalformedCarrier("image array length mismatch")
        if surjective is None:
            surjective = set(image) == set(target.elements())
        preimage = {}
        for i, t in enumerate(image):
            preimage.setdefault(t, i)
        return cls(
            source,
            target,
            lambda x: image[x],
            rule="table",
            section=lambda t: preimage.get(t),
            surjective=surjective,
        )

    @classmethod
    def identity(cls, M):
        return cls(M, M, lambda x: x, rule="identity", section=lambda x: x, surjective=True)

    def apply(self, x):
        return self._fn(x)

    __call__ = apply

    def section(self, y):
        if self._section is None:
            return None
        return self._section(y)

    def preimage(self, y):
        """Canonical preimage of y, or None when y is outside the image."""
        s = self.section(y)
        if s is not None and self.target.eq(self.apply(s), y):
            return s
        if self.source.is_finite:
            for x in self.source.elements():
                if self.target.eq(self.apply(x), y):
                    return x
        return None

    def image_elements(self):
        if not self.source.is_finite:
            raise ForeignElement("image enumeration needs a finite source")
        out = []
        for x in self.source.elements():
            y = self.apply(x)
            if not any(self.target.eq(y, z) for z in out):
                out.append(y)
        return out

    def is_injective(self):
        if not self.source.is_finite:
            return None
        seen = []
        for x in self.source.elements():
            y = self.apply(x)
            if any(self.target.eq(y, z) for z in seen):
                return False
            seen.append(y)
        return True

    def compose(self, other):
        """self after other."""
        return GhostHomomorphism(
            other.source,
            self.target,
            lambda x: self.apply(other.apply(x)),
            rule=f"{self.rule}*{other.rule}",
            section=None,
            surjective=self.surjective and other.surjective,
        )

    def to_doc(self):
        doc = {"kind": "ghost_hom", "rule": self.rule, "surjective": self.surjective}
        if self.source.is_finite:
            doc["map"] = [self.apply(x) for x in self.source.elements()]
        return doc


def convex_projection(M, j):
    """Projection of a lexicographic power onto its first j coordinates.

    The kernel of triviality (tuples with first j coordinates zero) is a
    convex subgroup, and the projection is a surjective homomorphism.
    """
    if not isinstance(M, LexRationalPower):
        raise BadRank("convex projection is defined on lexicographic powers")
    if not (1 <= j < M.k):
        raise BadRank(f"need 1 <= j < {M.k}")
    target = LexRationalPower(j)
    pad = (Fraction(0),) * (M.k - j)

    def fn(x):
        return None if x is None else x[:j]

    def section(y):
        return None if y is None else y + pad

    return GhostHomomorphism(M, target, fn, rule=f"lex_proj_{j}", section=section, surjective=True)


def validate_ghost_hom(gamma, seed=None, samples=None):
    """gamma(0)=0, gamma(1)=1, multiplicative, weakly order preserving;
    surjectivity re-verified when claimed."""
    M, N = gamma.source, gamma.target
    report = ValidationReport(subject=f"homomorphism {M.label} -> {N.label}")
    if M.is_finite:
        pairs = [(x, y) for x in M.elements() for y in M.elements()]
        report.mode = "exhaustive"
    else:
        rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
        n = config.DEFAULT_SAMPLES if samples is None else samples
        pairs = [(M.sample(rng), M.sample(rng)) for _ in range(n)]
        report.mode = "sampled"
        report.seed = config.DEFAULT_SEED if seed is None else seed
        report.samples = n

    report.check("maps-zero", N.eq(gamma.apply(M.zero), N.zero), M.zero)
    report.check("maps-one", N.eq(gamma.apply(M.one), N.one), M.one)
    w = next(
        (
            (x, y)
            for x, y in pairs
            if not N.eq(gamma.apply(M.mul(x, y)), N.mul(gamma.apply(x), gamma.apply(y)))
        ),
        None,
    )
    report.check("multiplicative", w is None, w)
    w = next(
        ((x, y) for x, y in pairs if M.le(x, y) and not N.le(gamma.apply(x), gamma.apply(y))),
        None,
    )
    report.check("order-preserving", w is None, w)
    if gamma.surjective:
        if N.is_finite and M.is_finite:
            hit = {gamma.apply(x) for x in M.elements()}
            missing = [y for y in N.elements() if y not in hit]
            report.check("surjective", not missing, missing or None)
        else:
            report.notes.append("surjectivity claimed by rule, not enumerable")
    return report


def ensure_ghost_hom(gamma):
    rep = validate_ghost_hom(gamma)
    if not rep.ok:
        bad = rep.first_failure()
        raise NotHomomorphism(f"{bad.name} fails", witness=bad.witness)
    return rep


# ---------------------------------------------------------------------------
# quotients


def quotient_bipotent(M, phi):
    """The quotient carrier M/phi with [x][y] = [xy], ordered by
    representatives.  Requires phi multiplicative with convex classes.

    Returns (carrier, class_map) where class_map sends an element of M
    to its index in the quotient (finite M) or to its canonical
    representative (interval family)."""
    if M.is_finite:
        return _quotient_finite(M, phi)
    if isinstance(M, UnitIntervalMul) and getattr(phi, "family", None) == "ideal":
        return _quotient_interval(M, phi)
    raise NotMultiplicative(
        "quotients of infinite carriers are supported only for the interval ideal family"
    )


def _quotient_finite(M, phi):
    elems = list(M.elements())
    blocks = [sorted(b, key=lambda x: M.rank[x]) for b in phi.classes()]
    blocks.sort(key=lambda b: M.rank[b[0]])

    for b in blocks:
        lo, hi = M.rank[b[0]], M.rank[b[-1]]
        members = set(b)
        for x in elems:
            if lo < M.rank[x] < hi and x not in members:
                raise NotOrderCompatible(
                    f"class {[M.name(v) for v in b]} is not convex", witness=(b[0], x, b[-1])
                )

    cls_of = {}
    for i, b in enumerate(blocks):
        for x in b:
            cls_of[x] = i

    for x, y in [(x, y) for x in elems for y in elems if phi.related(x, y)]:
        for z in elems:
            if cls_of[M.mul(x, z)] != cls_of[M.mul(y, z)]:
                raise NotMultiplicative(
                    "relation is not multiplicative", witness=(x, y, z)
                )

    table = [
        [cls_of[M.mul(b[0], c[0])] for c in blocks]
        for b in blocks
    ]
    names = ["{" + ",".join(M.name(x) for x in b) + "}" if len(b) > 1 else M.name(b[0]) for b in blocks]
    quotient = FiniteBipotent(names, table, list(range(len(blocks))), cls_of[M.one])
    return quotient, cls_of


def _quotient_interval(M, phi):
    handle = phi.params["ideal"]
    theta = handle.theta
    carrier = CollapsedUnitInterval(theta, closed=handle.closed)

    def class_map(x):
        return Fraction(0) if carrier._collapsed(x) else x

    return carrier, class_map
