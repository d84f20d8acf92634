"""Monoid valuations v: R -> M, supervaluations phi: R -> U, cover
construction, dominance, and unit-group data.

Coefficient rings are Z/n (or explicit tables), the rational field, and
the field of rational functions with integer coefficients; everything
is exact.
"""

import random
from fractions import Fraction

from . import config
from .bipotent import LexRationalPower, RationalMaxPlus, is_cancellative
from .errors import (
    LawViolation,
    MalformedCarrier,
    NotGroupLike,
    NotSurjective,
    TargetNotCancellative,
)
from .numutil import RationalFunction, ord2, poly_trim, sample_fraction
from .report import ValidationReport
from .supertropical import TaggedCarrier, materialize


class ZmodRing:
    is_finite = True

    def __init__(self, n):
        if n < 2:
            raise MalformedCarrier("modulus must be at least 2")
        self.n = n
        self.zero = 0
        self.one = 1

    def elements(self):
        return range(self.n)

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def eq(self, a, b):
        return a == b

    def name(self, a):
        return str(a)

    def sample(self, rng):
        return rng.randrange(self.n)

    @property
    def label(self):
        return f"Z/{self.n}"

    def to_doc(self):
        return {"kind": "ring", "variant": "zmod", "n": self.n}


class TableRing:
    """A finite commutative ring given by explicit addition and
    multiplication tables."""

    is_finite = True

    def __init__(self, names, add_table, mul_table, zero, one):
        self.names = list(names)
        self._add = [list(r) for r in add_table]
        self._mul = [list(r) for r in mul_table]
        self.zero = zero
        self.one = one

    def elements(self):
        return range(len(self.names))

    def add(self, a, b):
        return self._add[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def eq(self, a, b):
        return a == b

    def name(self, a):
        return self.names[a]

    def sample(self, rng):
        return rng.randrange(len(self.names))

    @property
    def label(self):
        return "table-ring"

    def to_doc(self):
        return {
            "kind": "ring",
            "variant": "table",
            "elements": list(self.names),
            "add": self._add,
            "mul": self._mul,
            "zero": self.zero,
            "one": self.one,
        }


class RationalField:
    is_finite = False
    zero = Fraction(0)
    one = Fraction(1)
    label = "Q"

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def eq(self, a, b):
        return a == b

    def name(self, a):
        return str(a)

    def sample(self, rng):
        return sample_fraction(rng, config.RATIONAL_BOX)

    def to_doc(self):
        return {"kind": "ring", "variant": "rational"}


class RationalFunctionField:
    is_finite = False
    label = "Q(t)"

    def __init__(self):
        self.zero = RationalFunction(())
        self.one = RationalFunction((1,))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def eq(self, a, b):
        return a == b

    def name(self, a):
        return f"({a.num})/({a.den})"

    def sample(self, rng):
        def poly(allow_zero):
            while True:
                coeffs = poly_trim(rng.randint(-9, 9) for _ in range(rng.randint(1, 4)))
                if coeffs or allow_zero:
                    return coeffs

        if rng.randrange(25) == 0:
            return self.zero
        return RationalFunction(poly(False), poly(False))

    def to_doc(self):
        return {"kind": "ring", "variant": "rational_function"}


# ---------------------------------------------------------------------------


class MValuation:
    """v: R -> M, multiplicative, subadditive, v(0)=0, v(1)=1; a
    valuation when M is cancellative."""

    def __init__(self, source, target, fn, rule="explicit"):
        self.source = source
        self.target = target
        self._fn = fn
        self.rule = rule

    @classmethod
    def from_table(cls, source, target, image):
        image = list(image)
        return cls(source, target, lambda a: image[a], rule="table")

    def apply(self, a):
        return self._fn(a)

    __call__ = apply

    def is_valuation(self):
        return bool(is_cancellative(self.target))

    def support(self):
        """The prime-candidate ideal v^{-1}(0); a predicate for infinite R."""
        M = self.target
        if self.source.is_finite:
            return [a for a in self.source.elements() if M.eq(self.apply(a), M.zero)]
        return lambda a: M.eq(self.apply(a), M.zero)

    def to_doc(self):
        doc = {
            "kind": "m_valuation",
            "ring": self.source.to_doc(),
            "target": self.target.to_doc(),
        }
        if self.source.is_finite and self.rule == "table":
            doc["map"] = [self.apply(a) for a in self.source.elements()]
        else:
            doc["map"] = {"rule": self.rule}
        return doc


def _ring_pairs(R, seed, samples):
    if R.is_finite:
        return "exhaustive", [(a, b) for a in R.elements() for b in R.elements()]
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    n = config.DEFAULT_SAMPLES if samples is None else samples
    return "sampled", [(R.sample(rng), R.sample(rng)) for _ in range(n)]


def validate_m_valuation(v, seed=None, samples=None):
    R, M = v.source, v.target
    mode, pairs = _ring_pairs(R, seed, samples)
    report = ValidationReport(
        subject=f"m-valuation {R.label} -> {M.label}",
        mode=mode,
        seed=None if mode == "exhaustive" else (config.DEFAULT_SEED if seed is None else seed),
        samples=None if mode == "exhaustive" else len(pairs),
    )
    report.check("maps-zero", M.eq(v(R.zero), M.zero))
    report.check("maps-one", M.eq(v(R.one), M.one))
    w = next(
        ((a, b) for a, b in pairs if not M.eq(v(R.mul(a, b)), M.mul(v(a), v(b)))),
        None,
    )
    report.check("multiplicative", w is None, w)
    w = next(
        ((a, b) for a, b in pairs if not M.le(v(R.add(a, b)), M.add(v(a), v(b)))),
        None,
    )
    report.check("subadditive", w is None, w)
    report.check("target-cancellative-for-valuation", True, None)
    report.notes.append(
        "valuation" if v.is_valuation() else "m-valuation (target not known cancellative)"
    )
    if R.is_finite:
        supp = set(v.support())
        ideal = all(R.mul(a, b) in supp for a in supp for b in R.elements()) and all(
            R.add(a, b) in supp for a in supp for b in supp
        )
        report.check("support-ideal", ideal, sorted(supp))
        prime = all(
            R.mul(a, b) not in supp
            for a in R.elements()
            for b in R.elements()
            if a not in supp and b not in supp
        )
        report.notes.append(f"support-prime: {prime}")
    return report


def ensure_m_valuation(v):
    rep = validate_m_valuation(v)
    if not rep.ok:
        bad = rep.first_failure()
        raise LawViolation(f"{bad.name} fails", witness=bad.witness)
    return rep


class Supervaluation:
    """phi: R -> U, multiplicative, 0 -> 0, 1 -> 1, whose ghost composite
    is an m-valuation (the covered valuation, cached)."""

    def __init__(self, source, target, fn, rule="explicit"):
        self.source = source
        self.target = target
        self._fn = fn
        self.rule = rule
        self._covered = None

    def apply(self, a):
        return self._fn(a)

    __call__ = apply

    def covered(self):
        if self._covered is None:
            U = self.target
            self._covered = MValuation(
                self.source,
                U.ghost_carrier(),
                lambda a: U.companion_value(self.apply(a)),
                rule=f"ghost({self.rule})",
            )
        return self._covered

    def is_tangible(self, seed=None, samples=200):
        """phi(a) tangible or zero for every (sampled) a."""
        U = self.target
        if self.source.is_finite:
            pool = list(self.source.elements())
        else:
            rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
            pool = [self.source.sample(rng) for _ in range(samples)]
        return all(
            U.is_tangible(self.apply(a)) or U.eq(self.apply(a), U.zero) for a in pool
        )

    def is_surjective(self):
        """U = phi(R) + e phi(R)."""
        U = self.target
        if not (self.source.is_finite and U.is_finite):
            return None
        hit = []
        for a in self.source.elements():
            x = self.apply(a)
            hit.append(x)
            hit.append(U.companion(x))
        return all(any(U.eq(u, h) for h in hit) for u in U.elements())

    def to_doc(self):
        doc = {
            "kind": "supervaluation",
            "ring": self.source.to_doc(),
            "target": self.target.to_doc(),
        }
        if self.source.is_finite and self.target.is_finite:
            doc["map"] = [self.apply(a) for a in self.source.elements()]
        else:
            doc["map"] = {"rule": self.rule}
        return doc


def validate_supervaluation(phi, seed=None, samples=None):
    R, U = phi.source, phi.target
    mode, pairs = _ring_pairs(R, seed, samples)
    report = ValidationReport(
        subject=f"supervaluation {R.label} -> {U.label}",
        mode=mode,
        seed=None if mode == "exhaustive" else (config.DEFAULT_SEED if seed is None else seed),
        samples=None if mode == "exhaustive" else len(pairs),
    )
    report.check("maps-zero", U.eq(phi(R.zero), U.zero))
    report.check("maps-one", U.eq(phi(R.one), U.one))
    w = next(
        ((a, b) for a, b in pairs if not U.eq(phi(R.mul(a, b)), U.mul(phi(a), phi(b)))),
        None,
    )
    report.check("multiplicative", w is None, w)
    covered = validate_m_valuation(phi.covered(), seed=seed, samples=samples)
    report.check("ghost-composite-is-m-valuation", covered.ok, covered.first_failure())
    surj = phi.is_surjective()
    if surj is not None:
        report.notes.append(f"surjective: {surj}")
    return report


def ensure_supervaluation(phi):
    rep = validate_supervaluation(phi)
    if not rep.ok:
        bad = rep.first_failure()
        raise LawViolation(f"{bad.name} fails", witness=bad.witness)
    return rep


# ---------------------------------------------------------------------------
# the cover U(v)


def construct_cover(v):
    """U(v): tangibles are a disjoint copy of R minus the support, ghosts
    are M, products go through v; phi_v(a) = a-hat (0 on the support).

    Returns (carrier, phi_v)."""
    canc = is_cancellative(v.target)
    if canc.cancellative is False:
        raise TargetNotCancellative("cover construction needs a cancellative target",
                                    witness=canc.witness)
    R, M = v.source, v.target

    def mul_tt(r1, r2):
        rr = R.mul(r1, r2)
        if M.eq(v(rr), M.zero):
            return ("g", M.zero)
        return ("t", rr)

    one = ("t", R.one) if not M.eq(v(R.one), M.zero) else ("g", M.one)
    kwargs = dict(
        mul_tt=mul_tt,
        proj=lambda r: v(r),
        one=one,
        teq=R.eq,
        tname=lambda r: f"{R.name(r)}^",
        variant="cover",
    )
    if R.is_finite:
        tangibles = [r for r in R.elements() if not M.eq(v(r), M.zero)]
        lazy = TaggedCarrier(M, tangible_elems=tangibles, **kwargs)
        if M.is_finite:
            U, to_idx = materialize(lazy)

            def phi_fn(a):
                if M.eq(v(a), M.zero):
                    return U.zero
                return to_idx[("t", a)]

            return U, Supervaluation(R, U, phi_fn, rule="cover")
        U = lazy
    else:
        def nonzero_sampler(rng):
            while True:
                r = R.sample(rng)
                if not M.eq(v(r), M.zero):
                    return r

        U = TaggedCarrier(M, tangible_sampler=nonzero_sampler, **kwargs)

    def phi_fn(a):
        if M.eq(v(a), M.zero):
            return U.zero
        return ("t", a)

    return U, Supervaluation(R, U, phi_fn, rule="cover")


def tangible_bottom_cover(v):
    """The unique tangible supervaluation into the tangible double D(M):
    a -> t(v(a)) for a outside the support."""
    from .supertropical import tangible_double

    M = v.target
    D = tangible_double(M, materialized=M.is_finite)

    if getattr(D, "is_finite", False) and hasattr(D, "index_of"):
        def fn(a):
            val = v(a)
            if M.eq(val, M.zero):
                return D.zero
            return D.index_of(f"{M.name(val)}^")
    else:
        def fn(a):
            val = v(a)
            if M.eq(val, M.zero):
                return D.zero
            return ("t", val)

    return D, Supervaluation(v.source, D, fn, rule="tangible_bottom")


def dominance(phi, psi):
    """The forced transmission alpha with psi = alpha . phi, or None with
    the obstructing pair.  phi must be surjective."""
    from .transmissions import Transmission, validate_transmission

    if phi.source is not psi.source:
        raise LawViolation("dominance compares supervaluations on one ring")
    R = phi.source
    U, V = phi.target, psi.target
    if not R.is_finite or not U.is_finite:
        raise NotSurjective("forced-map dominance needs finite data")
    if phi.is_surjective() is False:
        raise NotSurjective("phi is not surjective")

    forced = {}

    def assign(u, w):
        for u0, w0 in forced.items():
            if U.eq(u, u0):
                if not V.eq(w, w0):
                    return (u, w0, w)
                return None
        forced[u] = w
        return None

    for a in R.elements():
        clash = assign(phi(a), psi(a)) or assign(
            U.companion(phi(a)), V.companion(psi(a))
        )
        if clash:
            return None, clash

    def alpha(u):
        for u0, w0 in forced.items():
            if U.eq(u, u0):
                return w0
        raise LawViolation(f"phi does not reach {U.name(u)}")

    t = Transmission(U, V, alpha, rule="dominance")
    rep = validate_transmission(t)
    if not rep.ok:
        bad = rep.first_failure()
        return None, (bad.name, bad.witness)
    return t, None


class UnitData:
    """omega*: elements of value exactly 1; m: elements of value < 1."""

    def __init__(self, omega_star, m_ideal):
        self.omega_star = omega_star
        self.m_ideal = m_ideal


def unit_data(v):
    R, M = v.source, v.target
    if R.is_finite:
        supp = set(v.support())
        units = [a for a in R.elements() if a not in supp]
        for a in units:
            if not any(R.eq(R.mul(a, b), R.one) and b not in supp for b in units):
                raise NotGroupLike(
                    f"{R.name(a)} has no inverse outside the support"
                )
        omega = [a for a in R.elements() if M.eq(v(a), M.one)]
        m_ideal = [a for a in R.elements() if M.lt(v(a), M.one)]
        return UnitData(omega, m_ideal)
    return UnitData(
        lambda a: M.eq(v(a), M.one),
        lambda a: M.lt(v(a), M.one),
    )


# ---------------------------------------------------------------------------
# named infinite valuations


def padic_valuation(p=2):
    """v(a) = -ord_p(a) into max-plus rationals; v(0) is the bottom."""
    R = RationalField()
    M = RationalMaxPlus()

    def ordp(q):
        if p == 2:
            return ord2(q)
        n = 0
        num, den = abs(q.numerator), q.denominator
        while num % p == 0:
            num //= p
            n += 1
        while den % p == 0:
            den //= p
            n -= 1
        return n

    def fn(a):
        if a == 0:
            return None
        return Fraction(-ordp(a))

    return MValuation(R, M, fn, rule=f"padic-{p}")


def laurent_rank2_valuation():
    """The rank-2 valuation on rational functions: order of vanishing at
    t = 0 (negated), refined by the 2-adic order of the lowest
    coefficient ratio."""
    R = RationalFunctionField()
    M = LexRationalPower(2)

    def fn(f):
        if f.is_zero():
            return None
        d, lc = f.low_data()
        return (Fraction(-d), Fraction(-ord2(lc)))

    return MValuation(R, M, fn, rule="laurent_rank2")
