"""Transmissions between supertropical carriers, the constructive
quotient engine, initial transmissions along a ghost homomorphism,
pushout verification by challenge batteries, t-collapses, and the
pushforward of maps and supervaluations along a coarsening.

Transmissivity is always decided constructively: the forced quotient
structure is built and fully validated, never accepted from a
criterion alone.
"""

import random
from dataclasses import dataclass

from . import config
from .bipotent import FiniteBipotent, GhostHomomorphism, is_cancellative, validate_ghost_hom
from .errors import (
    GhostPartNotIdentity,
    InfiniteUnsupported,
    NotSurjective,
    StropError,
    TangiblesNotClosed,
    UnsupportedGamma,
)
from .oracles import partitions_of
from .relations import (
    Relation,
    classify_relation,
    ghost_restriction,
    rel_initial_gamma,
    rel_t_collapse,
)
from .report import ValidationReport
from .supertropical import (
    FiniteSupertropical,
    SupertropicalCarrier,
    ghost_extension,
    ghost_part,
    validate_supertropical,
)
from .valuations import Supervaluation


class Transmission:
    """A map between supertropical carriers, tracked with the relation
    it quotients by (when built from one) for challenge verification."""

    def __init__(self, source, target, fn, rule="explicit", relation=None):
        self.source = source
        self.target = target
        self._fn = fn
        self.rule = rule
        self.relation = relation

    def apply(self, x):
        return self._fn(x)

    __call__ = apply

    def ghost_hom(self):
        return ghost_part(self.source, self.target, self._fn)

    def compose(self, other):
        """self after other."""
        return Transmission(
            other.source,
            self.target,
            lambda x: self.apply(other.apply(x)),
            rule=f"{self.rule}*{other.rule}",
        )

    @classmethod
    def identity(cls, U):
        return cls(U, U, lambda x: x, rule="identity")

    def to_doc(self):
        doc = {"kind": "transmission", "rule": self.rule}
        if self.source.is_finite:
            doc["map"] = [self.apply(x) for x in self.source.elements()]
        return doc

    def __repr__(self):
        return f"Transmission({self.source.label} -> {self.target.label}, {self.rule})"


def _element_pool(U, seed=None, count=256):
    if U.is_finite:
        return list(U.elements())
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    return [U.sample(rng) for _ in range(count)]


def validate_transmission(alpha, seed=None, samples=None):
    """The characterization: 0 -> 0, 1 -> 1, e -> e, multiplicative, and
    the ghost restriction is a homomorphism of bipotent semirings.
    Whether alpha is additionally additive is recorded as a note."""
    U, V = alpha.source, alpha.target
    report = ValidationReport(
        subject=f"transmission {U.label} -> {V.label}",
        mode="exhaustive" if U.is_finite else "sampled",
        seed=None if U.is_finite else (config.DEFAULT_SEED if seed is None else seed),
    )
    report.check("maps-zero", V.eq(alpha(U.zero), V.zero))
    report.check("maps-one", V.eq(alpha(U.one), V.one))
    report.check("maps-e", V.eq(alpha(U.e), V.e))
    elems = _element_pool(U, seed)
    if U.is_finite:
        pairs = [(x, y) for x in elems for y in elems]
    else:
        n = min(len(elems), 64)
        pairs = [(x, y) for x in elems[:n] for y in elems[:n:7]]
    w = next(
        ((x, y) for x, y in pairs if not V.eq(alpha(U.mul(x, y)), V.mul(alpha(x), alpha(y)))),
        None,
    )
    report.check("multiplicative", w is None, w)
    sub = validate_ghost_hom(alpha.ghost_hom(), seed=seed, samples=samples)
    report.check("ghost-restriction-homomorphism", sub.ok, sub.first_failure())
    w = next(
        (
            x
            for x in elems
            if not V.eq(alpha(U.companion(x)), V.companion(alpha(x)))
        ),
        None,
    )
    report.check("commutes-with-ghost-map", w is None, w)
    w = next(
        ((x, y) for x, y in pairs if not V.eq(alpha(U.add(x, y)), V.add(alpha(x), alpha(y)))),
        None,
    )
    report.notes.append("homomorphic" if w is None else f"not additive, witness {w!r}")
    return report


def is_homomorphic_transmission(alpha):
    rep = validate_transmission(alpha)
    return rep.ok and any(n == "homomorphic" for n in rep.notes)


# ---------------------------------------------------------------------------
# the quotient engine


@dataclass
class QuotientResult:
    transmissive: bool
    carrier: object = None
    projection: object = None
    class_of: dict = None
    failed: str = None
    witness: object = None
    report: object = None

    def __bool__(self):
        return self.transmissive


def build_quotient_structure(U, E):
    """The forced structure on U/E after the TE checks pass: products by
    representatives, ghost classes in inherited order, addition derived.
    Returns a QuotientResult that has not yet been validated."""
    cls = classify_relation(U, E)
    if not cls.multiplicative:
        return QuotientResult(False, failed="TE1-multiplicative",
                              witness=cls.witnesses.get("multiplicative"))
    if not cls.order_compatible_on_M:
        return QuotientResult(False, failed="TE2-order-compatible",
                              witness=cls.witnesses.get("order_compatible_on_M"))
    if not cls.te3:
        return QuotientResult(False, failed="TE3-zero-pullback",
                              witness=cls.witnesses.get("te3"))

    M = U.ghost_carrier()
    blocks = E.classes()
    ghost_blocks = sorted(
        (b for b in blocks if any(U.is_ghost(x) for x in b)),
        key=lambda b: min(M.rank[U.ghost_value(x)] for x in b if U.is_ghost(x)),
    )
    ghost_pos = {b: i for i, b in enumerate(ghost_blocks)}
    tangible_blocks = sorted(
        (b for b in blocks if b not in ghost_pos),
        key=lambda b: (ghost_pos[E.class_of(U.companion(b[0]))], b[0]),
    )
    ordered = ghost_blocks + tangible_blocks
    qidx = {b: i for i, b in enumerate(ordered)}
    class_of = {x: qidx[E.class_of(x)] for x in U.elements()}

    names = [
        "{" + ",".join(U.name(x) for x in b) + "}" if len(b) > 1 else U.name(b[0])
        for b in ordered
    ]
    table = [
        [class_of[U.mul(a[0], b[0])] for b in ordered]
        for a in ordered
    ]
    try:
        quotient = FiniteSupertropical(
            names,
            table,
            e=class_of[U.e],
            one=class_of[U.one],
            ghosts=list(range(len(ghost_blocks))),
        )
    except StropError as exc:
        return QuotientResult(False, failed="structure", witness=exc)
    pi = Transmission(U, quotient, lambda x: class_of[x], rule="quotient", relation=E)
    return QuotientResult(True, carrier=quotient, projection=pi, class_of=class_of)


def quotient_by_relation(U, E):
    """Decide transmissivity constructively: check TE1-TE3, build the
    forced structure on U/E, and run the full semiring validation.
    """
    if not U.is_finite:
        return _quotient_family(U, E)
    built = build_quotient_structure(U, E)
    if not built.transmissive:
        return built
    quotient = built.carrier
    class_of = built.class_of

    rep = validate_supertropical(quotient)
    if not rep.ok:
        bad = rep.first_failure()
        return QuotientResult(False, failed=f"axiom:{bad.name}", witness=bad.witness,
                              report=rep)
    pi = built.projection
    pi_rep = validate_transmission(pi)
    if not pi_rep.ok:
        bad = pi_rep.first_failure()
        return QuotientResult(False, failed=f"projection:{bad.name}", witness=bad.witness,
                              report=pi_rep)
    return QuotientResult(True, carrier=quotient, projection=pi, class_of=class_of,
                          report=rep)


def _quotient_family(U, E):
    if E.family == "initial_gamma":
        gamma = E.params["gamma"]
        carrier = InitialQuotientCarrier(U, gamma)
        pi = Transmission(U, carrier, carrier.project, rule="initial-quotient", relation=E)
        return QuotientResult(True, carrier=carrier, projection=pi, class_of=None)
    if E.family in ("orbital_lex", "orbital_units"):
        carrier = OrbitalQuotientCarrier(U, E)
        pi = Transmission(U, carrier, carrier.project, rule="orbital-quotient", relation=E)
        return QuotientResult(True, carrier=carrier, projection=pi, class_of=None)
    raise InfiniteUnsupported(f"no known quotient form for family {E.family!r}")


class InitialQuotientCarrier(SupertropicalCarrier):
    """Quotient of a lazy tagged carrier along the initial relation of a
    surjective gamma with cancellative target: canonical representatives
    are surviving tangibles and elements of the target."""

    def __init__(self, U, gamma):
        self.U = U
        self.gamma = gamma
        self.N = gamma.target
        self.zero = ("g", self.N.zero)
        self.e = ("g", self.N.one)
        self.one = self.project(U.one)
        self.variant = f"initial_quotient[{U.label}]"

    def project(self, x):
        if self.U.is_ghost(x):
            return ("g", self.gamma.apply(self.U.ghost_value(x)))
        c = self.gamma.apply(self.U.companion_value(x))
        if self.N.eq(c, self.N.zero):
            return self.zero
        return x

    def lift(self, q):
        """A canonical preimage under the projection."""
        if q[0] == "t":
            return q
        s = self.gamma.section(q[1])
        if s is None:
            raise UnsupportedGamma("gamma has no section at this ghost")
        return self.U.ghost_element(s)

    def contains(self, x):
        if not (isinstance(x, tuple) and len(x) == 2):
            return False
        if x[0] == "g":
            return self.N.contains(x[1])
        return self.U.contains(x) and not self.N.eq(
            self.gamma.apply(self.U.companion_value(x)), self.N.zero
        )

    def eq(self, x, y):
        if x[0] != y[0]:
            return False
        if x[0] == "g":
            return self.N.eq(x[1], y[1])
        return self.U.eq(x, y)

    def mul(self, x, y):
        if x[0] == "g" and y[0] == "g":
            return ("g", self.N.mul(x[1], y[1]))
        if x[0] == "t" and y[0] == "t":
            return self.project(self.U.mul(x, y))
        t, g = (x, y) if x[0] == "t" else (y, x)
        cn = self.gamma.apply(self.U.companion_value(t))
        return ("g", self.N.mul(cn, g[1]))

    def companion(self, x):
        if x[0] == "g":
            return x
        return ("g", self.gamma.apply(self.U.companion_value(x)))

    def is_ghost(self, x):
        return x[0] == "g"

    def ghost_carrier(self):
        return self.N

    def ghost_value(self, x):
        return x[1]

    def ghost_element(self, n):
        return ("g", n)

    def sample(self, rng):
        return self.project(self.U.sample(rng))

    def name(self, x):
        if x[0] == "g":
            return self.N.name(x[1])
        return self.U.name(x)


class OrbitalQuotientCarrier(SupertropicalCarrier):
    """Quotient of a lazy carrier by an orbital relation: tangible orbit
    representatives over the quotient ghost carrier."""

    def __init__(self, U, E):
        self.U = U
        self.E = E
        if E.family == "orbital_lex":
            from .bipotent import LexRationalPower

            j = E.params["j"]
            self.N = LexRationalPower(j)
            self._gv = lambda m: None if m is None else m[:j]
        else:
            self.N = U.ghost_carrier()
            self._gv = lambda m: m
        self.zero = ("g", self.N.zero)
        self.e = ("g", self.N.one)
        self.one = self.project(U.one)
        self.variant = f"orbital_quotient[{U.label}]"

    def project(self, x):
        if self.U.is_ghost(x):
            return ("g", self._gv(self.U.ghost_value(x)))
        return x

    def contains(self, x):
        if x[0] == "g":
            return self.N.contains(x[1])
        return self.U.contains(x)

    def eq(self, x, y):
        if x[0] != y[0]:
            return False
        if x[0] == "g":
            return self.N.eq(x[1], y[1])
        return self.E.related(x, y)

    def mul(self, x, y):
        if x[0] == "g" and y[0] == "g":
            return ("g", self.N.mul(x[1], y[1]))
        if x[0] == "t" and y[0] == "t":
            return self.project(self.U.mul(x, y))
        t, g = (x, y) if x[0] == "t" else (y, x)
        cn = self._gv(self.U.companion_value(t))
        return ("g", self.N.mul(cn, g[1]))

    def companion(self, x):
        if x[0] == "g":
            return x
        return ("g", self._gv(self.U.companion_value(x)))

    def is_ghost(self, x):
        return x[0] == "g"

    def ghost_carrier(self):
        return self.N

    def ghost_value(self, x):
        return x[1]

    def ghost_element(self, n):
        return ("g", n)

    def sample(self, rng):
        return self.project(self.U.sample(rng))

    def name(self, x):
        if x[0] == "g":
            return self.N.name(x[1])
        return self.U.name(x)


# ---------------------------------------------------------------------------
# initial transmissions


@dataclass
class InitialResult:
    carrier: object
    alpha: Transmission
    ghost_to_target: object  # eV-value -> value in gamma's target
    route: str


def initial_transmission(U, gamma, enum_cap=7):
    """The initial transmission covering gamma.

    Routes: surjective gamma with cancellative target -> quotient by the
    initial relation; injective gamma -> ghost extension; cancellative
    image -> quotient followed by extension.  For finite surjective
    gamma with non-cancellative image, falls back to enumerating all
    transmissive quotients covering gamma and certifying a finest one.
    """
    M = U.ghost_carrier()
    target = gamma.target

    if gamma.is_injective():
        Uprime, include = ghost_extension(U, gamma)
        alpha = Transmission(U, Uprime, include, rule="ghost-extension")
        return InitialResult(Uprime, alpha, lambda n: n, route="extension")

    if M.is_finite and target.is_finite:
        image = gamma.image_elements()
        surjective = len(image) == len(list(target.elements()))
    else:
        image = None
        surjective = gamma.surjective

    target_canc = is_cancellative(target)
    if surjective and target_canc.cancellative:
        E = rel_initial_gamma(U, gamma)
        if U.is_finite:
            result = quotient_by_relation(U, E)
            if not result.transmissive:
                raise UnsupportedGamma(
                    f"initial quotient failed {result.failed}", witness=result.witness
                )
            g2t = _ghost_identification(U, gamma, result)
            return InitialResult(result.carrier, result.projection, g2t, route="quotient")
        result = quotient_by_relation(U, E)
        return InitialResult(result.carrier, result.projection, lambda n: n,
                             route="quotient-lazy")

    if image is not None:
        Mbar = _image_carrier(M, target, image, gamma)
        if Mbar is not None and is_cancellative(Mbar[0]).cancellative:
            bar_carrier, to_bar, from_bar = Mbar
            gamma_bar = GhostHomomorphism(
                M, bar_carrier, lambda m: to_bar(gamma.apply(m)), rule="corestriction",
                surjective=True,
            )
            first = initial_transmission(U, gamma_bar)
            inclusion = GhostHomomorphism(
                bar_carrier, target, from_bar, rule="image-inclusion",
                section=to_bar,
            )
            mid_gamma = GhostHomomorphism(
                first.carrier.ghost_carrier(),
                target,
                lambda m: from_bar(first.ghost_to_target(m)),
                rule="via-image",
                section=None,
            )
            second = initial_transmission(first.carrier, mid_gamma)
            alpha = second.alpha.compose(first.alpha)
            return InitialResult(second.carrier, alpha, second.ghost_to_target,
                                 route="composite")

    if U.is_finite and surjective:
        return _initial_by_enumeration(U, gamma, enum_cap)
    raise UnsupportedGamma("no initial-transmission route applies to this gamma")


def _ghost_identification(U, gamma, result):
    """Map ghost values of the quotient onto gamma's target (the forced
    isomorphism [m] -> gamma(m))."""
    quotient = result.carrier
    M = U.ghost_carrier()
    table = {}
    for m in M.elements():
        q = result.class_of[U.ghost_element(m)]
        table[quotient.ghost_value(q)] = gamma.apply(m)
    return lambda n: table[n]


def _image_carrier(M, target, image, gamma):
    """The image of gamma as a bipotent subcarrier of the target, with
    maps in both directions."""
    ranked = sorted(image, key=lambda y: target.rank[y])
    index = {y: i for i, y in enumerate(ranked)}
    try:
        table = [[index[target.mul(a, b)] for b in ranked] for a in ranked]
    except KeyError:
        return None  # image not closed: not a homomorphism anyway
    if target.one not in index:
        return None
    carrier = FiniteBipotent(
        [target.name(y) for y in ranked], table, list(range(len(ranked))),
        index[target.one],
    )
    return carrier, (lambda y: index[y]), (lambda i: ranked[i])


def _initial_by_enumeration(U, gamma, enum_cap):
    elems = list(U.elements())
    if len(elems) > enum_cap:
        raise UnsupportedGamma(f"enumeration fallback capped at {enum_cap} elements")
    ghost_classes = {}
    M = U.ghost_carrier()
    for m in M.elements():
        ghost_classes.setdefault(gamma.apply(m), []).append(m)
    wanted = Relation.from_blocks(M, list(ghost_classes.values()))
    candidates = []
    for blocks in partitions_of(elems):
        E = Relation.from_blocks(U, blocks)
        if not ghost_restriction(U, E).same_as(wanted):
            continue
        result = quotient_by_relation(U, E)
        if result.transmissive:
            candidates.append((E, result))
    if not candidates:
        raise UnsupportedGamma("no transmissive quotient covers gamma")
    meet_blocks = _partition_meet(elems, [E for E, _ in candidates])
    meet = Relation.from_blocks(U, meet_blocks)
    for E, _ in candidates:
        if not E.contains(meet):
            raise UnsupportedGamma("candidate quotients have no common refinement basis")
    hit = next((r for E, r in candidates if E.same_as(meet)), None)
    if hit is None:
        result = quotient_by_relation(U, meet)
        if not result.transmissive:
            raise UnsupportedGamma("the finest covering relation is not transmissive",
                                   witness=result.witness)
        hit = result
    g2t = _ghost_identification(U, gamma, hit)
    return InitialResult(hit.carrier, hit.projection, g2t, route="enumeration")


def _partition_meet(elems, relations):
    blocks = {}
    for x in elems:
        key = tuple(E.class_index(x) for E in relations)
        blocks.setdefault(key, []).append(x)
    return list(blocks.values())


# ---------------------------------------------------------------------------
# pushout verification


@dataclass
class PushoutChallenge:
    delta: object  # GhostHomomorphism out of the ghost carrier of alpha's target
    beta: object  # Transmission out of alpha's source
    description: str = ""


def verify_pushout(alpha, challenges, seed=None):
    """For each challenge (delta, beta) with beta^nu = delta . alpha^nu,
    build the forced eta on alpha's target, check well-definedness, and
    validate eta as a transmission covering delta.  eta is unique because
    it is forced on the image of alpha and on the new ghosts."""
    U, V = alpha.source, alpha.target
    reports = []
    for ch in challenges:
        rep = ValidationReport(subject=f"pushout challenge {ch.description or ch.beta.rule}")
        W = ch.beta.target
        ok = _forced_eta_well_defined(alpha, ch.beta, rep, seed=seed)
        if not ok:
            reports.append(rep)
            continue
        eta = _forced_eta(alpha, ch)
        if eta is None:
            rep.check("eta-total", False, "an element of the target is neither hit nor ghost")
            reports.append(rep)
            continue
        sub = validate_transmission(eta, seed=seed)
        rep.check("eta-transmission", sub.ok, sub.first_failure())
        if V.is_finite:
            w = next(
                (
                    m
                    for m in V.ghost_carrier().elements()
                    if not W.eq(
                        eta(V.ghost_element(m)),
                        W.ghost_element(ch.delta.apply(m)),
                    )
                ),
                None,
            )
            rep.check("eta-covers-delta", w is None, w)
            w = next(
                (x for x in U.elements() if not W.eq(eta(alpha(x)), ch.beta(x))),
                None,
            )
            rep.check("eta-factors-beta", w is None, w)
        rep.notes.append("eta unique: forced on the image of alpha and on ghosts")
        reports.append(rep)
    return reports


def _forced_eta_well_defined(alpha, beta, rep, seed=None):
    U, V, W = alpha.source, alpha.target, beta.target
    if U.is_finite:
        elems = list(U.elements())
        w = next(
            (
                (x, y)
                for x in elems
                for y in elems
                if V.eq(alpha(x), alpha(y)) and not W.eq(beta(x), beta(y))
            ),
            None,
        )
        return rep.check("eta-well-defined", w is None, w)
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    witness = None
    if alpha.relation is not None:
        for _ in range(256):
            x, y = alpha.relation.sample_related_pair(rng)
            if not W.eq(beta(x), beta(y)):
                witness = (x, y)
                break
    return rep.check("eta-well-defined", witness is None, witness)


def _forced_eta(alpha, ch):
    U, V = alpha.source, alpha.target
    W = ch.beta.target
    if U.is_finite and V.is_finite:
        table = {}
        for x in U.elements():
            table[alpha(x)] = ch.beta(x)
        missing = [v for v in V.elements() if v not in table]
        for v in missing:
            if not V.is_ghost(v):
                return None
            table[v] = W.ghost_element(ch.delta.apply(V.ghost_value(v)))
        return Transmission(V, W, lambda v: table[v], rule="forced-eta")

    def fn(v):
        lift = getattr(V, "lift", None)
        if lift is not None:
            return ch.beta(lift(v))
        if V.is_ghost(v):
            return W.ghost_element(ch.delta.apply(V.ghost_value(v)))
        return ch.beta(v)  # tangibles of lazy quotients are their own lifts

    return Transmission(V, W, fn, rule="forced-eta")


def challenge_battery(alpha, size_cap=None):
    """All challenges arising from transmissive quotients F of the
    source whose ghost restriction is refined by that of alpha (so the
    induced delta exists), plus the identity challenge."""
    U, V = alpha.source, alpha.target
    if not U.is_finite:
        raise InfiniteUnsupported("challenge generation needs a finite source")
    size_cap = size_cap or config.MAX_ENUM_ELEMENTS
    if len(list(U.elements())) > size_cap:
        raise InfiniteUnsupported("source too large for the full battery")

    M = U.ghost_carrier()
    eV = V.ghost_carrier()
    alpha_ghost = {}
    for m in M.elements():
        alpha_ghost.setdefault(V.ghost_value(alpha(U.ghost_element(m))), []).append(m)

    out = [
        PushoutChallenge(
            GhostHomomorphism.identity(eV), alpha, description="identity"
        )
    ]
    for blocks in partitions_of(list(U.elements())):
        F = Relation.from_blocks(U, blocks)
        fcls = {x: i for i, b in enumerate(blocks) for x in b}
        # delta exists iff alpha-equal ghosts stay F-equal
        if any(
            len({fcls[U.ghost_element(m)] for m in ms}) > 1
            for ms in alpha_ghost.values()
        ):
            continue
        result = quotient_by_relation(U, F)
        if not result.transmissive:
            continue
        W = result.carrier
        eW = W.ghost_carrier()
        forced = {
            n: W.ghost_value(result.projection(U.ghost_element(ms[0])))
            for n, ms in alpha_ghost.items()
        }
        # the image of alpha's ghost part forces delta there; on new
        # ghosts (extensions) every homomorphic completion is a challenge
        missing = [n for n in eV.elements() if n not in forced]
        completions = [forced]
        for n in missing:
            completions = [
                {**c, n: w} for c in completions for w in eW.elements()
            ]
        for idx, table in enumerate(completions):
            delta = GhostHomomorphism(
                eV, eW, lambda n, _t=table: _t[n], rule="induced"
            )
            if missing and not validate_ghost_hom(delta).ok:
                continue
            out.append(
                PushoutChallenge(
                    delta,
                    result.projection,
                    description=f"quotient-{len(blocks)}-classes"
                    + (f"-completion{idx}" if missing else ""),
                )
            )
    return out


def pushout_criterion(U, E):
    """True iff every merged tangible collapses to zero: tangible x ~ y
    with x != y forces x ~ 0."""
    if not U.is_finite:
        raise InfiniteUnsupported("criterion scan needs a finite carrier")
    for x in U.elements():
        if not U.is_tangible(x):
            continue
        for y in U.elements():
            if not U.eq(x, y) and E.related(x, y) and not E.related(x, U.zero):
                return False, (x, y)
    return True, None


# ---------------------------------------------------------------------------
# pushforward along a coarsening


def lambda_gamma(lam, gamma, seed=None):
    """The induced transmission between the initial quotients: the unique
    map with lambda_gamma . alpha_{U,gamma} = alpha_{V,gamma} . lambda.
    `lam` must be a transmission over the common ghost ideal."""
    U, V = lam.source, lam.target
    M = U.ghost_carrier()
    pool = _element_pool(M, seed, count=64)
    w = next(
        (
            m
            for m in pool
            if not V.eq(lam(U.ghost_element(m)), V.ghost_element(m))
        ),
        None,
    )
    if w is not None:
        raise GhostPartNotIdentity(f"lambda moves the ghost {M.name(w)}")

    left = initial_transmission(U, gamma)
    right = initial_transmission(V, gamma)

    if U.is_finite:
        table = {}
        for x in U.elements():
            q = left.alpha(x)
            img = right.alpha(lam(x))
            for q0, i0 in table.items():
                if left.carrier.eq(q, q0) and not right.carrier.eq(img, i0):
                    raise UnsupportedGamma(
                        "pushforward of lambda is not well-defined", witness=(q, i0, img)
                    )
            table.setdefault(q, img)

        def fn(q):
            for q0, i0 in table.items():
                if left.carrier.eq(q, q0):
                    return i0
            raise UnsupportedGamma(f"{q!r} missed by the pushforward table")

    else:
        def fn(q):
            return right.alpha(lam(left.carrier.lift(q)))

    induced = Transmission(left.carrier, right.carrier, fn, rule="lambda_gamma")
    return induced, left, right


def check_pushforward_square(lam, gamma, seed=None, samples=400):
    """lambda_gamma . alpha_{U,gamma} == alpha_{V,gamma} . lambda,
    pointwise (exhaustive when finite)."""
    induced, left, right = lambda_gamma(lam, gamma, seed=seed)
    U = lam.source
    pool = _element_pool(U, seed, count=samples)
    for x in pool:
        lhs = induced(left.alpha(x))
        rhs = right.alpha(lam(x))
        if not right.carrier.eq(lhs, rhs):
            return False, x
    return True, None


def pushout_supervaluation(phi, gamma):
    """The initial coarsening gamma_*(phi) = alpha_{U,gamma} . phi."""
    res = initial_transmission(phi.target, gamma)
    pushed = Supervaluation(
        phi.source, res.carrier, lambda a: res.alpha(phi(a)), rule=f"pushout({phi.rule})"
    )
    return pushed, res


def t_collapse_map(U, ideal_members):
    """Quotient by the tangible collapse over an ideal of the ghost
    carrier; the projection is a semiring homomorphism and the collapse
    is idempotent."""
    E = rel_t_collapse(U, ideal_members)
    if U.is_finite:
        result = quotient_by_relation(U, E)
        if not result.transmissive:
            raise TangiblesNotClosed(f"collapse quotient failed {result.failed}",
                                     witness=result.witness)
        return result.carrier, result.projection
    raise InfiniteUnsupported("t-collapse is materialized only for finite carriers")
