"""Ideals of supertropical and bipotent carriers: saturation, radicals,
primes, exhaustive enumeration, and the ideal data attached to a ghost
relation (least class members, the companion-kernel ideal).

A subset closed under global multiplication is automatically closed
under addition (any sum is x, y, or ex), so ideal validation only
scans products.
"""

from fractions import Fraction

from . import config
from .errors import (
    AxiomViolation,
    InfiniteUnsupported,
    NotIdeal,
    NotProper,
    NotSaturated,
    NotTE,
    PhiNotHomomorphic,
    TooLarge,
)
from .numutil import format_rational
from .relations import (
    Relation,
    classes_convex,
    classify_relation,
    least_class_members,
    rel_from_ghost_data,
    rel_of_ideal,
)


class FiniteSubsetIdeal:
    """An ideal of a finite carrier given by its element set."""

    def __init__(self, carrier, elements, validate=True):
        self.carrier = carrier
        self._members = sorted(set(elements))
        if validate:
            self.validate()

    def validate(self):
        U = self.carrier
        mset = set(self._members)
        if U.zero not in mset:
            raise NotIdeal("ideal must contain 0")
        for a in self._members:
            for z in U.elements():
                if U.mul(a, z) not in mset:
                    raise NotIdeal("not closed under global multiplication", witness=(a, z))
        return self

    def members(self):
        return list(self._members)

    def contains(self, x):
        return x in set(self._members)

    def sat_contains(self, m):
        U = self.carrier
        M = U.ghost_carrier()
        top = max(
            (U.companion_value(a) for a in self._members), key=lambda v: M.rank[v]
        )
        return M.le(m, top)

    def key(self):
        return tuple(self._members)

    def __repr__(self):
        names = [self.carrier.name(x) for x in self._members]
        return f"Ideal({{{', '.join(names)}}})"

    def to_doc(self, over=None):
        doc = {"kind": "ideal", "elements": list(self._members)}
        if over:
            doc["over"] = over
        return doc


class IntervalIdeal:
    """[0, theta] or [0, theta) inside the multiplicative unit interval."""

    def __init__(self, theta, closed=True):
        self.theta = Fraction(theta)
        self.closed = closed
        if not (0 <= self.theta <= 1):
            raise NotIdeal("theta must lie in [0, 1]")

    def contains(self, x):
        if self.closed:
            return x <= self.theta
        return x < self.theta

    # lower sets are their own saturation
    sat_contains = contains

    def members(self):
        raise InfiniteUnsupported("interval ideals are not enumerable")

    def key(self):
        return ("interval", self.theta, self.closed)

    def __repr__(self):
        return f"IntervalIdeal([0,{self.theta}{']' if self.closed else ')'})"

    def to_doc(self, over=None):
        doc = {
            "kind": "ideal",
            "interval": {"theta": format_rational(self.theta), "closed": self.closed},
        }
        if over:
            doc["over"] = over
        return doc


# ---------------------------------------------------------------------------


def saturate(U, ideal):
    """sat(a) = {x : ex <= c for some c in e*a}; a closure operator, and
    E(a) = E(sat a) is re-verified on finite carriers."""
    if isinstance(ideal, IntervalIdeal):
        return ideal  # lower sets are saturated
    members = ideal.members() if hasattr(ideal, "members") else list(ideal)
    M = U.ghost_carrier()
    top = max((U.companion_value(a) for a in members), key=lambda v: M.rank[v])
    sat = [x for x in U.elements() if M.le(U.companion_value(x), top)]
    handle = FiniteSubsetIdeal(U, sat)
    if not rel_of_ideal(U, handle).same_as(rel_of_ideal(U, members)):
        raise AxiomViolation("saturation changed the induced relation", witness=members)
    return handle


def is_saturated(U, ideal):
    if isinstance(ideal, IntervalIdeal):
        return True
    return set(saturate(U, ideal).members()) == set(ideal.members())


def radical(U, ideal):
    """The smallest prime ideal containing a saturated proper ideal:
    {x : e x^n lands in the ideal for some n}, equal to the plain
    radical {x : x^n in the ideal}; both forms are computed."""
    if isinstance(ideal, IntervalIdeal):
        if ideal.theta == 0 and ideal.closed:
            return IntervalIdeal(0, closed=True)
        if ideal.theta == 1 and ideal.closed:
            raise NotProper("radical needs a proper ideal")
        # powers of x < 1 fall below any positive threshold eventually
        return IntervalIdeal(1, closed=False)

    if not is_saturated(U, ideal):
        raise NotSaturated("radical is defined for saturated ideals")
    members = set(ideal.members())
    if len(members) == len(list(U.elements())):
        raise NotProper("radical needs a proper ideal")

    def power_reaches(x):
        seen = []
        p = x
        while not any(U.eq(p, q) for q in seen):
            if U.companion(p) in members:
                return True
            seen.append(p)
            p = U.mul(p, x)
        return False

    def power_reaches_plain(x):
        seen = []
        p = x
        while not any(U.eq(p, q) for q in seen):
            if p in members:
                return True
            seen.append(p)
            p = U.mul(p, x)
        return False

    via_companion = [x for x in U.elements() if power_reaches(x)]
    plain = [x for x in U.elements() if power_reaches_plain(x)]
    if via_companion != plain:
        raise AxiomViolation(
            "companion radical disagrees with the plain radical",
            witness=(via_companion, plain),
        )
    out = FiniteSubsetIdeal(U, via_companion)
    prime, _ = is_prime(U, out)
    if not prime:
        raise AxiomViolation("computed radical is not prime", witness=out.members())
    return out


def is_prime(U, ideal):
    """Complement multiplicatively closed.  When e is outside the ideal
    the ghost-level criterion (e*a prime in M, companion preimage closed)
    is computed independently and compared."""
    if isinstance(ideal, IntervalIdeal):
        theta, closed = ideal.theta, ideal.closed
        if theta == 0 and closed:
            return True, {"criterion": "no zero divisors"}
        if theta == 1 and not closed:
            return True, {"criterion": "complement {1} closed"}
        if 0 < theta < 1 and closed:
            x = _between(theta, _sqrt_upper(theta))
            return False, {"witness": (x, x)}
        if not closed and theta < 1:
            # x, y just below theta... complement [theta,1]: closed iff theta*theta >= theta
            if theta * theta < theta:
                x = _between(theta * theta, theta)  # x in complement? need x >= theta
                x = theta  # theta itself is in the complement, theta^2 < theta
                return False, {"witness": (x, x)}
            return True, {}
        return False, {}

    members = set(ideal.members())
    complement = [x for x in U.elements() if x not in members]
    direct = True
    witness = None
    for x in complement:
        for y in complement:
            if U.mul(x, y) in members:
                direct, witness = False, (x, y)
                break
        if not direct:
            break
    data = {"witness": witness}
    if U.e not in members:
        M = U.ghost_carrier()
        em = {U.companion_value(a) for a in members if U.is_ghost(a)}
        m_complement = [m for m in M.elements() if m not in em]
        ghost_prime = all(
            M.mul(a, b) not in em for a in m_complement for b in m_complement
        ) and M.zero in em
        preimage_closed = all(
            (x in members) for x in U.elements() if U.companion_value(x) in em
        )
        criterion = ghost_prime and preimage_closed
        data["ghost_criterion"] = criterion
        if criterion != direct:
            raise AxiomViolation(
                "ghost-level primality criterion disagrees with the direct test",
                witness=ideal.members(),
            )
    return direct, data


def _sqrt_upper(q):
    """A rational strictly between sqrt(q) and 1, found by bisection."""
    lo, hi = q, Fraction(1)
    for _ in range(40):
        mid = (lo + hi) / 2
        if mid * mid > q:
            hi = mid
        else:
            lo = mid
    return hi


def _between(a, b):
    return (a + b) / 2


def enumerate_ideals(U, which="all"):
    """All ideals of a finite carrier (subsets closed under global
    multiplication), optionally filtered to saturated or prime ones.

    Saturated ideals are verified to form a chain and to correspond to
    the lower-set ideals of the ghost carrier."""
    elems = list(U.elements())
    if len(elems) > config.MAX_ENUM_ELEMENTS:
        raise TooLarge(f"ideal enumeration capped at {config.MAX_ENUM_ELEMENTS} elements")
    rest = [x for x in elems if not U.eq(x, U.zero)]
    ideals = []
    for mask in range(1 << len(rest)):
        subset = {U.zero} | {rest[i] for i in range(len(rest)) if mask >> i & 1}
        if all(U.mul(a, z) in subset for a in subset for z in elems):
            ideals.append(FiniteSubsetIdeal(U, sorted(subset), validate=False))
    if which == "all":
        return ideals
    if which == "saturated":
        out = [h for h in ideals if is_saturated(U, h)]
        keys = [set(h.members()) for h in out]
        for a in keys:
            for b in keys:
                if not (a <= b or b <= a):
                    raise AxiomViolation("saturated ideals do not form a chain",
                                         witness=(sorted(a), sorted(b)))
        _check_lower_set_bijection(U, out)
        return out
    if which == "prime":
        return [h for h in ideals if U.e not in set(h.members()) and is_prime(U, h)[0]]
    raise ValueError(f"unknown filter {which!r}")


def _check_lower_set_bijection(U, saturated):
    M = U.ghost_carrier()
    melems = list(M.elements())
    lower_ideals = []
    rest = [m for m in melems if not M.eq(m, M.zero)]
    for mask in range(1 << len(rest)):
        sub = {M.zero} | {rest[i] for i in range(len(rest)) if mask >> i & 1}
        if all(M.mul(a, z) in sub for a in sub for z in melems) and all(
            y in sub for x in sub for y in melems if M.le(y, x)
        ):
            lower_ideals.append(frozenset(sub))
    from_sat = {
        frozenset(U.ghost_value(x) for x in h.members() if U.is_ghost(x))
        for h in saturated
    }
    if from_sat != set(lower_ideals):
        raise AxiomViolation(
            "saturated ideals do not biject with lower-set ideals of M",
            witness=(sorted(map(sorted, from_sat)), sorted(map(sorted, lower_ideals))),
        )


# ---------------------------------------------------------------------------
# ideal data of ghost relations


class IntervalComplementSet:
    """(theta, 1]: the least-class members of the interval collapse."""

    def __init__(self, theta):
        self.theta = Fraction(theta)

    def contains(self, x):
        return self.theta < x <= 1

    def __repr__(self):
        return f"({self.theta}, 1]"


def L_of_phi(M, phi):
    """Least nonzero representatives of phi-classes possessing one."""
    if M.is_finite:
        return least_class_members(M, phi)
    if phi.family == "ideal" and hasattr(phi.params.get("ideal"), "theta"):
        # classes are the collapsed interval plus singletons above it; the
        # collapsed class contains 0 and has no least nonzero member
        return IntervalComplementSet(phi.params["ideal"].theta)
    raise InfiniteUnsupported("L(phi) requires a finite carrier or interval family")


def phi_ideals(U, phi):
    """(a_phi, A_phi): the ideal of elements whose companion collapses to
    zero, and its union with the ghost ideal.  The ghost-data relation
    built from A_phi is verified to coincide with the initial-relation
    description attached to the projection of phi."""
    M = U.ghost_carrier()
    cls_ok, w = classes_convex(M, phi)
    mult_w = next(
        (
            (x, y, z)
            for b in phi.classes()
            for x in b
            for y in b
            for z in M.elements()
            if not phi.related(M.mul(x, z), M.mul(y, z))
        ),
        None,
    )
    if not cls_ok or mult_w is not None:
        raise PhiNotHomomorphic("phi must be homomorphic on M", witness=w or mult_w)
    a_phi = [
        x for x in U.elements() if phi.related(U.companion_value(x), M.zero)
    ]
    A_phi = sorted(set(a_phi) | set(U.ghosts()))
    a_handle = FiniteSubsetIdeal(U, a_phi)
    A_handle = FiniteSubsetIdeal(U, A_phi)

    ghost_data = rel_from_ghost_data(U, A_phi, phi)

    def f_related(x, y):
        if U.eq(x, y):
            return True
        vx, vy = U.companion_value(x), U.companion_value(y)
        if U.is_ghost(x) and U.is_ghost(y) and phi.related(vx, vy):
            return True
        return phi.related(vx, vy) and phi.related(vx, M.zero)

    f_rel = Relation.intensional(U, "initial_phi", {}, f_related)
    if not ghost_data.same_as(f_rel):
        raise AxiomViolation(
            "ghost-data relation over A_phi differs from the projection description",
            witness=(ghost_data.blocks_key(), f_rel.blocks_key()),
        )
    return a_handle, A_handle


def zero_class_ideal(U, E):
    """[0]_E for a TE-relation: a saturated ideal, maximal among ideals
    whose relation refines E."""
    cls = classify_relation(U, E)
    if not cls.te:
        raise NotTE("relation fails TE1-TE3", witness=cls.witnesses)
    zero_class = sorted(E.class_of(U.zero))
    handle = FiniteSubsetIdeal(U, zero_class)
    if not is_saturated(U, handle):
        raise AxiomViolation("[0]_E is not saturated", witness=zero_class)
    for other in enumerate_ideals(U):
        if E.contains(rel_of_ideal(U, other)) and not set(other.members()) <= set(zero_class):
            raise AxiomViolation(
                "[0]_E is not the biggest ideal with E(a) inside E",
                witness=other.members(),
            )
    return handle
