"""Supertropical semiring carriers.

A supertropical carrier U has an idempotent e = 1+1 whose multiples
form a bipotent ghost ideal M = eU; every x has a ghost companion
e*x, and addition is forced:

    x + y = y    if e*x < e*y,
            x    if e*x > e*y,
            e*x  if e*x = e*y.

Finite carriers are explicit tables with the canonical encoding
index 0 = zero, ghosts listed ascending.  Infinite carriers (tangible
doubles, covers of valuations, ghost extensions) compute products and
sums lazily from payloads.
"""

import itertools
import random

from . import config
from .bipotent import (
    FiniteBipotent,
    GhostHomomorphism,
    is_cancellative,
    is_semidomain,
    validate_bipotent,
    validate_ghost_hom,
)
from .errors import (
    AxiomViolation,
    ForeignElement,
    GhostSetMismatch,
    HypothesisViolation,
    MalformedCarrier,
    NotSubsemiring,
    StropError,
    Unsupported,
)
from .oracles import oracle_semiring_axioms
from .report import ValidationReport


class SupertropicalCarrier:
    is_finite = False
    variant = None

    # subclasses provide: zero, one, e, mul, companion, is_ghost,
    # ghost_carrier, ghost_value, ghost_element, contains, name

    def eq(self, x, y):
        return x == y

    def is_tangible(self, x):
        return not self.is_ghost(x)

    def companion(self, x):
        return self.mul(self.e, x)

    def companion_value(self, x):
        return self.ghost_value(self.companion(x))

    def add(self, x, y):
        M = self.ghost_carrier()
        vx, vy = self.companion_value(x), self.companion_value(y)
        if M.lt(vx, vy):
            return y
        if M.lt(vy, vx):
            return x
        return self.companion(x)

    def require(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise ForeignElement(f"{x!r} is not an element of {self.label}")

    @property
    def label(self):
        return self.variant or type(self).__name__

    def __repr__(self):
        return f"<{self.label}>"


class FiniteSupertropical(SupertropicalCarrier):
    """Explicit table carrier; elements are indices, index 0 is zero,
    ghosts are listed in ascending ghost order (zero first)."""

    is_finite = True
    variant = "finite"

    def __init__(self, names, mul_table, e, one, ghosts):
        n = len(names)
        if len(set(names)) != n:
            raise MalformedCarrier("duplicate element names")
        if len(mul_table) != n or any(len(r) != n for r in mul_table):
            raise MalformedCarrier("multiplication table is not n x n")
        if any(not (0 <= v < n) for r in mul_table for v in r):
            raise MalformedCarrier("table entry out of range")
        if not ghosts or ghosts[0] != 0:
            raise MalformedCarrier("ghost list must start with the zero index 0")
        if len(set(ghosts)) != len(ghosts) or any(not (0 <= g < n) for g in ghosts):
            raise MalformedCarrier("bad ghost list")
        self.names = list(names)
        self.table = [list(r) for r in mul_table]
        self.e = e
        self.one = one
        self.zero = 0
        self.ghost_list = list(ghosts)
        self.ghost_set = frozenset(ghosts)
        self._ghost_carrier = None
        self._m_of_u = {g: i for i, g in enumerate(self.ghost_list)}

    def elements(self):
        return range(len(self.names))

    def __len__(self):
        return len(self.names)

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < len(self.names)

    def mul(self, x, y):
        return self.table[x][y]

    def is_ghost(self, x):
        return x in self.ghost_set

    def ghosts(self):
        return list(self.ghost_list)

    def tangibles(self):
        return [x for x in self.elements() if x not in self.ghost_set]

    def ghost_carrier(self):
        if self._ghost_carrier is None:
            g = self.ghost_list
            table = [[self._m_of_u[self.table[a][b]] for b in g] for a in g]
            self._ghost_carrier = FiniteBipotent(
                [self.names[i] for i in g],
                table,
                list(range(len(g))),
                self._m_of_u[self.e],
            )
        return self._ghost_carrier

    def ghost_value(self, x):
        try:
            return self._m_of_u[x]
        except KeyError:
            raise ForeignElement(f"{self.name(x)} is not a ghost") from None

    def ghost_element(self, m):
        return self.ghost_list[m]

    def name(self, x):
        return self.names[x]

    def index_of(self, name):
        return self.names.index(name)

    def sample(self, rng):
        return rng.randrange(len(self.names))

    def to_doc(self):
        return {
            "kind": "supertropical",
            "variant": "finite",
            "elements": list(self.names),
            "zero": 0,
            "one": self.one,
            "e": self.e,
            "ghosts": list(self.ghost_list),
            "mul": [list(r) for r in self.table],
        }

    def with_table_entry(self, i, j, value):
        """Copy with one symmetric table entry replaced (mutation testing)."""
        table = [list(r) for r in self.table]
        table[i][j] = value
        table[j][i] = value
        return FiniteSupertropical(self.names, table, self.e, self.one, self.ghost_list)


class GhostOnlyCarrier(SupertropicalCarrier):
    """A bipotent carrier viewed as the degenerate supertropical semiring
    with no tangibles (U = M, e = 1)."""

    def __init__(self, M):
        self.M = M
        self.zero = M.zero
        self.one = M.one
        self.e = M.one
        self.variant = f"ghost_only[{M.label}]"
        self.is_finite = M.is_finite

    def contains(self, x):
        return self.M.contains(x)

    def eq(self, x, y):
        return self.M.eq(x, y)

    def mul(self, x, y):
        return self.M.mul(x, y)

    def is_ghost(self, x):
        return True

    def ghost_carrier(self):
        return self.M

    def ghost_value(self, x):
        return x

    def ghost_element(self, m):
        return m

    def elements(self):
        return self.M.elements()

    def ghosts(self):
        return list(self.M.elements())

    def tangibles(self):
        return []

    def sample(self, rng):
        return self.M.sample(rng)

    def name(self, x):
        return self.M.name(x)

    def to_doc(self):
        return {"kind": "supertropical", "variant": "ghost_only", "base": self.M.to_doc()}


class TaggedCarrier(SupertropicalCarrier):
    """Lazy carrier over a bipotent M: ghosts are ("g", m), tangibles
    ("t", payload), products computed from a tangible monoid and a
    multiplicative projection onto M."""

    def __init__(
        self,
        M,
        *,
        mul_tt,
        proj,
        one,
        teq=None,
        tname=None,
        tangible_elems=None,
        tangible_sampler=None,
        variant="constructed",
        doc=None,
    ):
        self.M = M
        self._mul_tt = mul_tt
        self._proj = proj
        self.one = one
        self._teq = teq or (lambda a, b: a == b)
        self._tname = tname or (lambda t: f"{t}^")
        self._tangible_elems = tangible_elems
        self._tangible_sampler = tangible_sampler
        self.variant = variant
        self._doc = doc
        self.zero = ("g", M.zero)
        self.e = ("g", M.one)
        self.is_finite = M.is_finite and tangible_elems is not None

    def contains(self, x):
        if not (isinstance(x, tuple) and len(x) == 2 and x[0] in ("g", "t")):
            return False
        if x[0] == "g":
            return self.M.contains(x[1])
        if self._tangible_elems is not None:
            return any(self._teq(x[1], t) for t in self._tangible_elems)
        return True

    def eq(self, x, y):
        if x[0] != y[0]:
            return False
        if x[0] == "g":
            return self.M.eq(x[1], y[1])
        return self._teq(x[1], y[1])

    def mul(self, x, y):
        if x[0] == "g" and y[0] == "g":
            return ("g", self.M.mul(x[1], y[1]))
        if x[0] == "t" and y[0] == "t":
            return self._mul_tt(x[1], y[1])
        t, g = (x, y) if x[0] == "t" else (y, x)
        return ("g", self.M.mul(self._proj(t[1]), g[1]))

    def companion(self, x):
        if x[0] == "g":
            return x
        return ("g", self._proj(x[1]))

    def is_ghost(self, x):
        return x[0] == "g"

    def ghost_carrier(self):
        return self.M

    def ghost_value(self, x):
        if x[0] != "g":
            raise ForeignElement(f"{x!r} is not a ghost")
        return x[1]

    def ghost_element(self, m):
        return ("g", m)

    def ghosts(self):
        return [("g", m) for m in self.M.elements()]

    def tangibles(self):
        if self._tangible_elems is None:
            raise Unsupported("tangibles of this carrier are not enumerable")
        return [("t", t) for t in self._tangible_elems]

    def elements(self):
        return self.ghosts() + self.tangibles()

    def sample(self, rng):
        if self._tangible_sampler is not None and rng.randrange(2) == 0:
            return ("t", self._tangible_sampler(rng))
        if self._tangible_elems and rng.randrange(2) == 0:
            return ("t", self._tangible_elems[rng.randrange(len(self._tangible_elems))])
        return ("g", self.M.sample(rng))

    def name(self, x):
        if x[0] == "g":
            return self.M.name(x[1])
        return self._tname(x[1])

    def to_doc(self):
        if self._doc is not None:
            return dict(self._doc)
        return {"kind": "supertropical", "variant": self.variant, "base": self.M.to_doc()}


def tangible_double(M, materialized=None):
    """D(M): the carrier whose tangibles are a disjoint copy of M minus 0,
    with t(a)t(b) = t(ab) and ghost companion t(a) -> a."""

    def mul_tt(a, b):
        ab = M.mul(a, b)
        if M.eq(ab, M.zero):
            return ("g", M.zero)
        return ("t", ab)

    elems = None
    if M.is_finite:
        elems = [m for m in M.elements() if not M.eq(m, M.zero)]
    carrier = TaggedCarrier(
        M,
        mul_tt=mul_tt,
        proj=lambda a: a,
        one=("t", M.one),
        teq=M.eq,
        tname=lambda a: f"{M.name(a)}^",
        tangible_elems=elems,
        tangible_sampler=None if M.is_finite else _nonzero_sampler(M),
        variant="doubled",
        doc={"kind": "supertropical", "variant": "doubled", "base": M.to_doc()},
    )
    if materialized is None:
        materialized = M.is_finite
    if materialized:
        return materialize(carrier)[0]
    return carrier


def _nonzero_sampler(M):
    def sample(rng):
        while True:
            m = M.sample(rng)
            if not M.eq(m, M.zero):
                return m

    return sample


def construct_from_projection(
    M,
    *,
    mul_tt,
    proj,
    one,
    tangibles=None,
    tangible_sampler=None,
    teq=None,
    tname=None,
    seed=None,
    samples=200,
    variant="constructed",
    materialized=None,
):
    """Build the supertropical carrier forced by a cancellative bipotent
    semidomain M sitting as a monoid ideal inside an abelian monoid, with
    a multiplicative projection fixing M and killing only zero.

    The hypotheses are verified (exhaustively for finite data, on seeded
    samples otherwise); HypothesisViolation names the first failure.
    """
    teq = teq or (lambda a, b: a == b)
    canc = is_cancellative(M)
    if canc.cancellative is False:
        raise HypothesisViolation("ghost ideal is not cancellative", witness=canc.witness)
    if is_semidomain(M) is False:
        raise HypothesisViolation("ghost ideal is not a semidomain")

    carrier = TaggedCarrier(
        M,
        mul_tt=mul_tt,
        proj=proj,
        one=one,
        teq=teq,
        tname=tname,
        tangible_elems=tangibles,
        tangible_sampler=tangible_sampler,
        variant=variant,
    )

    if tangibles is not None:
        tpool = list(tangibles)
    else:
        rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
        tpool = [tangible_sampler(rng) for _ in range(max(8, samples // 8))]

    for t in tpool:
        if M.eq(proj(t), M.zero):
            raise HypothesisViolation("projection sends a nonzero element to 0", witness=t)
    if one[0] == "t":
        if not M.eq(proj(one[1]), M.one):
            raise HypothesisViolation("projection does not send 1 to 1", witness=one)
    elif not M.eq(one[1], M.one):
        raise HypothesisViolation("declared unit is not the unit of M", witness=one)

    if tangibles is not None:
        pairs = list(itertools.product(tpool, tpool))
    else:
        pairs = list(zip(tpool, reversed(tpool)))
    for a, b in pairs:
        ab = mul_tt(a, b)
        ba = mul_tt(b, a)
        if not carrier.eq(ab, ba):
            raise HypothesisViolation("tangible product is not commutative", witness=(a, b))
        want = M.mul(proj(a), proj(b))
        got = proj(ab[1]) if ab[0] == "t" else ab[1]
        if not M.eq(got, want):
            raise HypothesisViolation("projection is not multiplicative", witness=(a, b))
        ex = carrier.mul(carrier.one, ("t", a))
        if not carrier.eq(ex, ("t", a)):
            raise HypothesisViolation("declared unit is not an identity", witness=a)

    triples = (
        list(itertools.product(tpool, tpool, tpool))
        if tangibles is not None and len(tpool) <= 24
        else list(zip(tpool, tpool[1:] + tpool[:1], tpool[2:] + tpool[:2]))
    )
    for a, b, c in triples:
        lhs = carrier.mul(carrier.mul(("t", a), ("t", b)), ("t", c))
        rhs = carrier.mul(("t", a), carrier.mul(("t", b), ("t", c)))
        if not carrier.eq(lhs, rhs):
            raise HypothesisViolation("tangible product is not associative", witness=(a, b, c))

    if materialized is None:
        materialized = carrier.is_finite
    if materialized and carrier.is_finite:
        return materialize(carrier)[0]
    return carrier


def ghost_extension(U, gamma):
    """Extend the ghost ideal of U along an injective homomorphism
    gamma: eU -> M'.  Returns (U', include) with include the element map
    U -> U'; the inclusion is a transmission covering gamma.
    """
    rep = validate_ghost_hom(gamma)
    if not rep.ok:
        bad = rep.first_failure()
        raise NotSubsemiring(f"embedding fails {bad.name}", witness=bad.witness)
    if gamma.is_injective() is False:
        raise NotSubsemiring("embedding is not injective")
    carrier = GhostExtendedCarrier(U, gamma)
    include = carrier.include
    if U.is_finite and gamma.target.is_finite:
        fin, to_idx = materialize(carrier)
        return fin, (lambda x, _m=to_idx, _c=carrier: _m[_key(_c.include(x))])
    return carrier, include


class GhostExtendedCarrier(SupertropicalCarrier):
    """U' = U + (M' minus gamma(eU)): the ghost ideal grows to M', the
    tangibles are unchanged, mixed products go through the companion."""

    variant = "ghost_extended"

    def __init__(self, U, gamma):
        self.U = U
        self.gamma = gamma
        self.Mp = gamma.target
        self.zero = ("u", U.zero)
        self.one = ("u", U.one)
        self.e = ("u", U.e)
        self.is_finite = U.is_finite and self.Mp.is_finite

    def include(self, x):
        return ("u", x)

    def _ghost(self, w):
        p = self.gamma.preimage(w)
        if p is not None:
            return ("u", self.U.ghost_element(p))
        return ("m", w)

    def contains(self, x):
        if not (isinstance(x, tuple) and len(x) == 2):
            return False
        if x[0] == "u":
            return self.U.contains(x[1])
        if x[0] == "m":
            return self.Mp.contains(x[1]) and self.gamma.preimage(x[1]) is None
        return False

    def eq(self, x, y):
        if x[0] != y[0]:
            return False
        if x[0] == "u":
            return self.U.eq(x[1], y[1])
        return self.Mp.eq(x[1], y[1])

    def _new_ghost_value(self, x):
        if x[0] == "m":
            return x[1]
        return self.gamma.apply(self.U.ghost_value(x[1]))

    def mul(self, x, y):
        if x[0] == "u" and y[0] == "u":
            return ("u", self.U.mul(x[1], y[1]))
        if x[0] == "m" and y[0] == "m":
            return self._ghost(self.Mp.mul(x[1], y[1]))
        u, m = (x, y) if x[0] == "u" else (y, x)
        cu = self.gamma.apply(self.U.companion_value(u[1]))
        return self._ghost(self.Mp.mul(cu, m[1]))

    def companion(self, x):
        if x[0] == "m":
            return x
        return ("u", self.U.companion(x[1]))

    def is_ghost(self, x):
        return x[0] == "m" or self.U.is_ghost(x[1])

    def ghost_carrier(self):
        return self.Mp

    def ghost_value(self, x):
        if not self.is_ghost(x):
            raise ForeignElement(f"{x!r} is not a ghost")
        return self._new_ghost_value(x)

    def ghost_element(self, w):
        return self._ghost(w)

    def elements(self):
        out = [("u", x) for x in self.U.elements()]
        image = [self.gamma.apply(m) for m in self.U.ghost_carrier().elements()]
        for w in self.Mp.elements():
            if not any(self.Mp.eq(w, v) for v in image):
                out.append(("m", w))
        return out

    def ghosts(self):
        return [x for x in self.elements() if self.is_ghost(x)]

    def tangibles(self):
        return [x for x in self.elements() if not self.is_ghost(x)]

    def sample(self, rng):
        if rng.randrange(2) == 0:
            return ("u", self.U.sample(rng))
        return self._ghost(self.Mp.sample(rng))

    def name(self, x):
        if x[0] == "u":
            return self.U.name(x[1])
        return self.Mp.name(x[1])

    def to_doc(self):
        return {
            "kind": "supertropical",
            "variant": "ghost_extended",
            "base": self.U.to_doc(),
            "ghost_target": self.Mp.to_doc(),
        }


# ---------------------------------------------------------------------------
# canonical materialization


def _key(x):
    return x


def materialize(carrier):
    """Convert a finite carrier to the canonical explicit table form:
    index 0 = zero, ghosts ascending, then tangibles ordered by
    (companion rank, name).  Returns (FiniteSupertropical, to_index)."""
    if not carrier.is_finite:
        raise Unsupported("cannot materialize an infinite carrier")
    M = carrier.ghost_carrier()
    ghosts = sorted(carrier.ghosts(), key=lambda g: M.rank[carrier.ghost_value(g)])
    if not carrier.eq(ghosts[0], carrier.zero):
        raise MalformedCarrier("zero is not the least ghost")
    tangibles = sorted(
        carrier.tangibles(),
        key=lambda t: (M.rank[carrier.companion_value(t)], carrier.name(t)),
    )
    order = ghosts + tangibles
    to_idx = {}
    for i, x in enumerate(order):
        to_idx[_key(x)] = i

    def idx(x):
        for i, y in enumerate(order):
            if carrier.eq(x, y):
                return i
        raise ForeignElement(f"{x!r} fell outside the carrier during materialization")

    table = [[idx(carrier.mul(x, y)) for y in order] for x in order]
    names = [carrier.name(x) for x in order]
    fin = FiniteSupertropical(
        names,
        table,
        e=idx(carrier.e),
        one=idx(carrier.one),
        ghosts=list(range(len(ghosts))),
    )
    return fin, to_idx


# ---------------------------------------------------------------------------
# operations


def st_ops(U, op, x, y=None):
    U.require(x)
    if op == "companion":
        return U.companion(x)
    U.require(y)
    if op == "add":
        return U.add(x, y)
    if op == "mul":
        return U.mul(x, y)
    raise ValueError(f"unknown op {op!r}")


def validate_supertropical(U, seed=None, samples=None):
    """The axiom package: e idempotent, ghost set = eU, ex = 0 forces
    x = 0, bipotent ghost ideal, and the derived addition satisfies the
    semiring axioms.  Exhaustive for finite carriers, seeded samples
    otherwise."""
    report = ValidationReport(
        subject=f"supertropical {U.label}",
        mode="exhaustive" if U.is_finite else "sampled",
        seed=None if U.is_finite else (config.DEFAULT_SEED if seed is None else seed),
    )
    report.check("e-idempotent", U.eq(U.mul(U.e, U.e), U.e))

    if U.is_finite:
        elems = list(U.elements())
    else:
        rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
        n = max(64, (config.DEFAULT_SAMPLES if samples is None else samples) // 16)
        elems = [U.sample(rng) for _ in range(n)]

    w = next((x for x in elems if not U.is_ghost(U.companion(x))), None)
    report.check("companions-are-ghost", w is None, w)

    w = next(
        (x for x in elems if U.is_ghost(x) and not U.eq(U.companion(x), x)),
        None,
    )
    report.check("ghost-map-fixes-ghosts", w is None, w)

    if U.is_finite:
        companions = [U.companion(x) for x in elems]
        ghosts = [x for x in elems if U.is_ghost(x)]
        extra = next(
            (g for g in ghosts if not any(U.eq(g, c) for c in companions)), None
        )
        missing = next(
            (c for c in companions if not any(U.eq(c, g) for g in ghosts)), None
        )
        report.check("ghost-set-is-eU", extra is None and missing is None, extra or missing)

    w = next(
        (
            x
            for x in elems
            if U.eq(U.companion(x), U.zero) and not U.eq(x, U.zero)
        ),
        None,
    )
    report.check("ghost-zero-forces-zero", w is None, w)

    # The derived addition is only meaningful once companions land in the
    # ghost ideal; a broken table is reported, not raised.
    try:
        sub = validate_bipotent(U.ghost_carrier(), seed=seed, samples=samples)
        report.check("ghost-ideal-bipotent", sub.ok, sub.first_failure())
        if isinstance(U, GhostOnlyCarrier):
            # U = M: the derived addition is the bipotent max already
            # covered by the ghost-ideal suite
            report.checks.extend(sub.checks[:8])
        else:
            axioms = oracle_semiring_axioms(
                U, seed=seed, samples=samples, subject=f"supertropical {U.label}"
            )
            report.checks.extend(axioms.checks)
        report.check("one-plus-one-is-e", U.eq(U.add(U.one, U.one), U.e))
    except (StropError, KeyError, IndexError) as exc:
        report.check("derived-addition-evaluates", False, exc)
    return report


def ensure_supertropical(U, seed=None, samples=None):
    rep = validate_supertropical(U, seed=seed, samples=samples)
    if not rep.ok:
        bad = rep.first_failure()
        if bad.name == "ghost-set-is-eU":
            raise GhostSetMismatch("declared ghost set differs from eU", witness=bad.witness)
        raise AxiomViolation(f"{bad.name} fails", witness=bad.witness)
    return rep


class StabilizerResult:
    def __init__(self, kind, elements=None):
        self.kind = kind  # "explicit" or "all_tangibles"
        self.elements = elements

    def __repr__(self):
        if self.kind == "explicit":
            return f"StabilizerResult({self.elements!r})"
        return "StabilizerResult(all tangibles)"


def mult_stabilizer(U):
    """S(U): elements whose product with every tangible stays tangible."""
    if U.is_finite:
        tang = U.tangibles()
        out = [x for x in U.elements() if all(U.is_tangible(U.mul(x, t)) for t in tang)]
        return StabilizerResult("explicit", out)
    if getattr(U, "variant", None) == "doubled":
        return StabilizerResult("all_tangibles")
    raise Unsupported("tangible closure undecidable for this carrier")


def ghost_part(U, V, alpha):
    """The restriction of a map alpha: U -> V to the ghost ideals, as a
    homomorphism between the bipotent carriers."""
    M, N = U.ghost_carrier(), V.ghost_carrier()

    def fn(m):
        return V.ghost_value(alpha(U.ghost_element(m)))

    return GhostHomomorphism(M, N, fn, rule="restriction")


def find_isomorphism(U1, U2):
    """Index-renaming isomorphism search for finite carriers (<= 8
    elements): returns the element map U1 -> U2 or None."""
    if not (U1.is_finite and U2.is_finite):
        raise Unsupported("isomorphism search needs finite carriers")
    e1, e2 = list(U1.elements()), list(U2.elements())
    if len(e1) != len(e2):
        return None
    if len(e1) > 8:
        raise Unsupported("isomorphism search capped at 8 elements")
    g1 = sorted(U1.ghosts(), key=lambda g: U1.ghost_carrier().rank[U1.ghost_value(g)])
    g2 = sorted(U2.ghosts(), key=lambda g: U2.ghost_carrier().rank[U2.ghost_value(g)])
    if len(g1) != len(g2):
        return None
    base = dict(zip(g1, g2))  # ghost order is preserved by any isomorphism
    t1, t2 = U1.tangibles(), U2.tangibles()
    if len(t1) != len(t2):
        return None
    for perm in itertools.permutations(t2):
        mapping = dict(base)
        mapping.update(zip(t1, perm))
        if _check_iso(U1, U2, mapping):
            return mapping
    return None


def _check_iso(U1, U2, mapping):
    if not U2.eq(mapping[U1.one], U2.one):
        return False
    if not U2.eq(mapping[U1.e], U2.e):
        return False
    for x in U1.elements():
        for y in U1.elements():
            if not U2.eq(mapping[U1.mul(x, y)], U2.mul(mapping[x], mapping[y])):
                return False
    return True
