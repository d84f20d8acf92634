"""Equivalence relations on supertropical carriers: builders for the
ideal, initial, orbital, ghost-data, tangible-collapse and closure
families, and the predicate battery that classifies an arbitrary
relation (multiplicative, additive, order compatible, TE, ...).

Extensional relations are canonical sorted partitions; intensional
families carry a membership predicate and materialize to partitions on
finite carriers.
"""

import random
from dataclasses import dataclass, field

from . import config
from .bipotent import is_cancellative
from .errors import (
    AxiomViolation,
    FiberMismatch,
    FiberViolation,
    ForeignElement,
    GhostsNotContained,
    InfiniteUnsupported,
    MalformedDocument,
    NotIdeal,
    NotInStabilizer,
    NotRefinement,
    NotSubmonoid,
    NotSurjective,
    PhiNotOrderCompatible,
    TangiblesNotClosed,
    TargetNotCancellative,
)
from .supertropical import mult_stabilizer


def _canonical_blocks(blocks):
    out = []
    for b in blocks:
        b = tuple(sorted(set(b)))
        if b:
            out.append(b)
    out.sort(key=lambda b: b[0])
    return tuple(out)


class Relation:
    """An equivalence relation over a carrier, extensional or intensional."""

    def __init__(self, carrier, blocks=None, family=None, params=None, related_fn=None,
                 related_sampler=None):
        self.carrier = carrier
        self.family = family
        self.params = params or {}
        self._related_fn = related_fn
        self._related_sampler = related_sampler
        self._block_of = None
        self._blocks = None
        if blocks is not None:
            self._install_blocks(blocks)

    def _install_blocks(self, blocks):
        self._blocks = _canonical_blocks(blocks)
        self._block_of = {}
        for i, b in enumerate(self._blocks):
            for x in b:
                if x in self._block_of:
                    raise MalformedDocument(f"element {x!r} appears in two blocks")
                self._block_of[x] = i

    @classmethod
    def from_blocks(cls, carrier, blocks, family=None, params=None):
        rel = cls(carrier, blocks=blocks, family=family, params=params)
        if carrier.is_finite:
            covered = set(rel._block_of)
            for x in carrier.elements():
                if x not in covered:
                    raise MalformedDocument(f"partition misses element {carrier.name(x)}")
        return rel

    @classmethod
    def identity(cls, carrier):
        if carrier.is_finite:
            return cls.from_blocks(carrier, [[x] for x in carrier.elements()],
                                   family="identity")
        return cls(carrier, family="identity", related_fn=carrier.eq)

    @classmethod
    def intensional(cls, carrier, family, params, related_fn, related_sampler=None):
        rel = cls(carrier, family=family, params=params, related_fn=related_fn,
                  related_sampler=related_sampler)
        if carrier.is_finite:
            rel.materialize()
        return rel

    @property
    def is_extensional(self):
        return self._blocks is not None

    def materialize(self):
        if self._blocks is not None:
            return self
        if not self.carrier.is_finite:
            raise InfiniteUnsupported("cannot materialize a relation over an infinite carrier")
        elems = list(self.carrier.elements())
        blocks = []
        for x in elems:
            for b in blocks:
                if self._related_fn(x, b[0]):
                    b.append(x)
                    break
            else:
                blocks.append([x])
        self._install_blocks(blocks)
        return self

    def related(self, x, y):
        if self._block_of is not None:
            try:
                return self._block_of[x] == self._block_of[y]
            except (KeyError, TypeError):
                raise ForeignElement(f"{x!r} or {y!r} outside the relation's carrier") from None
        return self._related_fn(x, y)

    def classes(self):
        self.materialize()
        return list(self._blocks)

    def blocks_key(self):
        self.materialize()
        return self._blocks

    def class_of(self, x):
        self.materialize()
        return self._blocks[self._block_of[x]]

    def class_index(self, x):
        self.materialize()
        return self._block_of[x]

    def sample_related_pair(self, rng):
        if self._related_sampler is not None:
            return self._related_sampler(rng)
        x = self.carrier.sample(rng)
        return (x, x)

    def contains(self, other):
        """other is a refinement of self (every other-pair is a self-pair)."""
        self.materialize()
        other.materialize()
        for b in other.classes():
            i = self._block_of[b[0]]
            if any(self._block_of[x] != i for x in b[1:]):
                return False
        return True

    def same_as(self, other):
        return self.blocks_key() == other.blocks_key()

    def to_doc(self, carrier_name=None):
        doc = {"kind": "relation"}
        if carrier_name:
            doc["over"] = carrier_name
        if self._blocks is not None:
            doc["repr"] = {"partition": [list(b) for b in self._blocks]}
        else:
            doc["repr"] = {"family": self.family, "params": {
                k: v for k, v in self.params.items() if isinstance(v, (int, str, bool))
            }}
        return doc

    def __repr__(self):
        if self._blocks is not None:
            names = [[self.carrier.name(x) for x in b] for b in self._blocks]
            return f"Relation({names})"
        return f"Relation(family={self.family})"


def ghost_restriction(U, E):
    """E|M as a relation over the ghost carrier of U."""
    M = U.ghost_carrier()
    if E.is_extensional or U.is_finite:
        E.materialize()
        blocks = []
        for b in E.classes():
            mb = [U.ghost_value(x) for x in b if U.is_ghost(x)]
            if mb:
                blocks.append(mb)
        return Relation.from_blocks(M, blocks, family="restriction")
    return Relation(
        M,
        family="restriction",
        related_fn=lambda m, n: E.related(U.ghost_element(m), U.ghost_element(n)),
    )


# ---------------------------------------------------------------------------
# classification


@dataclass
class RelationClassification:
    multiplicative: bool
    additive: bool
    order_compatible_on_M: bool
    ghost_compatible: bool
    fiber_conserving: bool
    te3: bool
    te: bool
    ghost_cancellative: bool
    homomorphic: bool
    strictly_ghost_separating: bool
    witnesses: dict = field(default_factory=dict)
    mode: str = "exhaustive"

    def to_doc(self):
        doc = {
            k: getattr(self, k)
            for k in (
                "multiplicative",
                "additive",
                "order_compatible_on_M",
                "ghost_compatible",
                "fiber_conserving",
                "te3",
                "te",
                "ghost_cancellative",
                "homomorphic",
                "strictly_ghost_separating",
            )
        }
        doc["mode"] = self.mode
        doc["witnesses"] = {k: repr(v) for k, v in self.witnesses.items()}
        return doc


def classes_convex(M, phi):
    """Every class convex in the total order of M (the order-compatibility
    criterion used by the classifier)."""
    for b in phi.classes():
        ranks = sorted(M.rank[x] for x in b)
        lo, hi = ranks[0], ranks[-1]
        members = set(b)
        for x in M.elements():
            if lo < M.rank[x] < hi and x not in members:
                return False, (M.order[lo], x, M.order[hi])
    return True, None


def order_compatible_quantified(M, phi):
    """The four-point quantifier form of order compatibility; kept as an
    independent implementation to cross-check the convexity criterion."""
    elems = list(M.elements())
    for x1 in elems:
        for x2 in elems:
            if not M.le(x1, x2):
                continue
            for x3 in elems:
                for x4 in elems:
                    if (
                        M.le(x3, x4)
                        and phi.related(x1, x4)
                        and phi.related(x2, x3)
                        and not phi.related(x1, x2)
                    ):
                        return False, (x1, x2, x3, x4)
    return True, None


def classify_relation(U, E):
    """Compute every classification flag by its direct definition.

    Exhaustive for finite carriers.  For intensional relations over
    infinite carriers the flags are computed on seeded samples and the
    result is marked mode="sampled"."""
    if U.is_finite:
        return _classify_finite(U, E)
    return _classify_sampled(U, E)


def _classify_finite(U, E):
    E.materialize()
    elems = list(U.elements())
    related_pairs = [
        (x, y) for b in E.classes() for x in b for y in b if x != y
    ]
    witnesses = {}

    def scan(name, bad):
        witnesses[name] = bad
        return bad is None

    mult = scan(
        "multiplicative",
        next(
            (
                (x, y, z)
                for x, y in related_pairs
                for z in elems
                if not E.related(U.mul(x, z), U.mul(y, z))
            ),
            None,
        ),
    )
    additive = scan(
        "additive",
        next(
            (
                (x, y, z)
                for x, y in related_pairs
                for z in elems
                if not E.related(U.add(x, z), U.add(y, z))
            ),
            None,
        ),
    )
    ghost_comp = scan(
        "ghost_compatible",
        next(
            (
                (x, y)
                for x, y in related_pairs
                if not E.related(U.companion(x), U.companion(y))
            ),
            None,
        ),
    )
    fiber = scan(
        "fiber_conserving",
        next(
            ((x, y) for x, y in related_pairs if not U.eq(U.companion(x), U.companion(y))),
            None,
        ),
    )
    M = U.ghost_carrier()
    oc, oc_w = classes_convex(M, ghost_restriction(U, E))
    scan("order_compatible_on_M", None if oc else oc_w)
    te3 = scan(
        "te3",
        next(
            (
                x
                for x in elems
                if E.related(U.companion(x), U.zero) and not E.related(x, U.zero)
            ),
            None,
        ),
    )
    ghosts = U.ghosts()
    canc = scan(
        "ghost_cancellative",
        next(
            (
                (x, y, z)
                for x in ghosts
                for y in ghosts
                for z in ghosts
                if not E.related(z, U.zero)
                and E.related(U.mul(x, z), U.mul(y, z))
                and not E.related(x, y)
            ),
            None,
        ),
    )
    sgs = scan(
        "strictly_ghost_separating",
        next(
            (
                (x, y)
                for x, y in related_pairs
                if U.is_tangible(x) and U.is_ghost(y)
            ),
            None,
        ),
    )
    return RelationClassification(
        multiplicative=mult,
        additive=additive,
        order_compatible_on_M=oc,
        ghost_compatible=ghost_comp,
        fiber_conserving=fiber,
        te3=te3,
        te=mult and oc and te3,
        ghost_cancellative=canc,
        homomorphic=mult and additive,
        strictly_ghost_separating=sgs,
        witnesses={k: v for k, v in witnesses.items() if v is not None},
    )


def _classify_sampled(U, E, seed=None, samples=400):
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    elems = [U.sample(rng) for _ in range(samples)]
    pairs = []
    for _ in range(samples):
        pairs.append(E.sample_related_pair(rng))
    witnesses = {}

    def scan(name, bad):
        witnesses[name] = bad
        return bad is None

    def first(gen):
        return next(gen, None)

    zs = elems[: max(8, samples // 16)]
    mult = scan(
        "multiplicative",
        first(
            (x, y, z)
            for x, y in pairs
            for z in zs
            if not E.related(U.mul(x, z), U.mul(y, z))
        ),
    )
    additive = scan(
        "additive",
        first(
            (x, y, z)
            for x, y in pairs
            for z in zs
            if not E.related(U.add(x, z), U.add(y, z))
        ),
    )
    ghost_comp = scan(
        "ghost_compatible",
        first((x, y) for x, y in pairs if not E.related(U.companion(x), U.companion(y))),
    )
    fiber = scan(
        "fiber_conserving",
        first((x, y) for x, y in pairs if not U.eq(U.companion(x), U.companion(y))),
    )
    M = U.ghost_carrier()
    ghost_pairs = [(U.ghost_element(M.sample(rng)), U.ghost_element(M.sample(rng))) for _ in range(samples)]
    oc = scan(
        "order_compatible_on_M",
        first(
            (x, y, z)
            for (x, y) in pairs
            if U.is_ghost(x) and U.is_ghost(y)
            for (z, _) in ghost_pairs
            if M.lt(U.ghost_value(x), U.ghost_value(z))
            and M.lt(U.ghost_value(z), U.ghost_value(y))
            and not E.related(x, z)
        ),
    )
    te3 = scan(
        "te3",
        first(
            x
            for x in elems
            if E.related(U.companion(x), U.zero) and not E.related(x, U.zero)
        ),
    )
    canc = scan(
        "ghost_cancellative",
        first(
            (x, y, z)
            for (x, y) in pairs
            if U.is_ghost(x) and U.is_ghost(y)
            for (z, _) in ghost_pairs
            if not E.related(z, U.zero)
            and E.related(U.mul(x, z), U.mul(y, z))
            and not E.related(x, y)
        ),
    )
    sgs = scan(
        "strictly_ghost_separating",
        first((x, y) for x, y in pairs if U.is_tangible(x) and U.is_ghost(y)),
    )
    return RelationClassification(
        multiplicative=mult,
        additive=additive,
        order_compatible_on_M=oc,
        ghost_compatible=ghost_comp,
        fiber_conserving=fiber,
        te3=te3,
        te=mult and oc and te3,
        ghost_cancellative=canc,
        homomorphic=mult and additive,
        strictly_ghost_separating=sgs,
        witnesses={k: v for k, v in witnesses.items() if v is not None},
        mode="sampled",
    )


# ---------------------------------------------------------------------------
# builders


def _ideal_members(U, ideal):
    if hasattr(ideal, "members"):
        return list(ideal.members())
    return list(ideal)


def _check_ideal(U, members):
    elems = list(U.elements())
    mset = set(members)
    if U.zero not in mset:
        raise NotIdeal("ideal must contain 0")
    for a in members:
        for z in elems:
            if U.mul(a, z) not in mset:
                raise NotIdeal("subset not closed under global multiplication",
                               witness=(a, z))


def rel_of_ideal(U, ideal):
    """E(ideal): x ~ y iff x + a = y + b for some a, b in the ideal.

    The fast path (one saturated class plus singletons) and the direct
    definition are both computed and must agree."""
    if U.is_finite:
        members = _ideal_members(U, ideal)
        _check_ideal(U, members)
        elems = list(U.elements())
        M = U.ghost_carrier()
        comp = {a: U.companion_value(a) for a in members}
        top = max((comp[a] for a in members), key=lambda m: M.rank[m])
        sat = [x for x in elems if M.le(U.companion_value(x), top)]
        fast_blocks = [sat] + [[x] for x in elems if x not in set(sat)]
        fast = Relation.from_blocks(U, fast_blocks, family="ideal",
                                    params={"ideal": ideal})

        def directly_related(x, y):
            return any(
                U.eq(U.add(x, a), U.add(y, b)) for a in members for b in members
            )

        direct = Relation.intensional(U, "ideal-direct", {}, directly_related)
        if not fast.same_as(direct):
            raise AxiomViolation(
                "saturated-class fast path disagrees with the direct definition",
                witness=(fast.blocks_key(), direct.blocks_key()),
            )
        return fast

    # infinite carriers: the ideal handle supplies saturation membership
    if not hasattr(ideal, "sat_contains"):
        raise InfiniteUnsupported("ideal relation over an infinite carrier needs a handle")

    def related(x, y):
        if U.eq(x, y):
            return True
        return ideal.sat_contains(U.companion_value(x)) and ideal.sat_contains(
            U.companion_value(y)
        )

    def sampler(rng):
        x = U.sample(rng)
        if ideal.sat_contains(U.companion_value(x)):
            y = U.sample(rng)
            if ideal.sat_contains(U.companion_value(y)):
                return (x, y)
        return (x, x)

    return Relation(U, family="ideal", params={"ideal": ideal},
                    related_fn=related, related_sampler=sampler)


def rel_initial_gamma(U, gamma):
    """x1 ~ x2 iff they are equal, or both are ghosts with the same
    image, or both companions map to 0."""
    M = U.ghost_carrier()
    if gamma.source is not M and gamma.source.to_doc() != M.to_doc():
        raise ForeignElement("gamma must start at the ghost ideal of U")
    if M.is_finite and gamma.target.is_finite:
        hit = {gamma.apply(m) for m in M.elements()}
        if hit != set(gamma.target.elements()):
            raise NotSurjective("gamma is not surjective")
    elif not gamma.surjective:
        raise NotSurjective("gamma is not flagged surjective")
    canc = is_cancellative(gamma.target)
    if canc.cancellative is False:
        raise TargetNotCancellative("target of gamma is not cancellative",
                                    witness=canc.witness)

    N = gamma.target

    def g(x):
        return gamma.apply(U.companion_value(x))

    def related(x, y):
        if U.eq(x, y):
            return True
        gx, gy = g(x), g(y)
        if not N.eq(gx, gy):
            return False
        if U.is_ghost(x) and U.is_ghost(y):
            return True
        return N.eq(gx, N.zero)

    def sampler(rng):
        x = U.ghost_element(M.sample(rng))
        s = gamma.section(g(x))
        if s is not None:
            return (x, U.ghost_element(s))
        return (x, x)

    return Relation.intensional(U, "initial_gamma", {"gamma": gamma}, related,
                                related_sampler=sampler)


def rel_orbital(U, H):
    """E(H) for an explicit submonoid H of the tangible stabilizer:
    x ~ y iff gx = hy for some g, h in H."""
    H = list(H)
    stab = mult_stabilizer(U)
    if stab.kind == "explicit":
        sset = set(stab.elements)
        for h in H:
            if h not in sset:
                raise NotInStabilizer(f"{U.name(h)} does not stabilize the tangibles")
    if not any(U.eq(h, U.one) for h in H):
        raise NotSubmonoid("H must contain 1")
    for g_ in H:
        for h in H:
            if not any(U.eq(U.mul(g_, h), k) for k in H):
                raise NotSubmonoid("H is not closed under multiplication",
                                   witness=(g_, h))

    def related(x, y):
        return any(U.eq(U.mul(g_, x), U.mul(h, y)) for g_ in H for h in H)

    return Relation.intensional(U, "orbital", {"H": H}, related)


def rel_orbital_lex(U, j):
    """E(t(Delta)) on the tangible double of a lexicographic power, with
    Delta the convex subgroup of tuples whose first j coordinates vanish:
    same tag and same first j coordinates."""
    M = U.ghost_carrier()
    k = M.k

    def related(x, y):
        if x[0] != y[0]:
            return False
        a, b = x[1], y[1]
        if a is None or b is None:
            return a is None and b is None
        return a[:j] == b[:j]

    def sampler(rng):
        x = U.sample(rng)
        if x[1] is None:
            return (x, x)
        from fractions import Fraction

        delta = tuple(
            Fraction(0) if i < j else Fraction(rng.randint(-5, 5)) for i in range(k)
        )
        return (x, (x[0], tuple(a + d for a, d in zip(x[1], delta))))

    return Relation(U, family="orbital_lex", params={"j": j}, related_fn=related,
                    related_sampler=sampler)


def rel_orbital_units(U, subgroup):
    """E(H) on a cover of a valuation, for H a subgroup of the units
    whose value is 1: tangibles are H-cosets, ghosts are untouched."""

    def related(x, y):
        if x[0] != y[0]:
            return False
        if x[0] == "g":
            return U.ghost_carrier().eq(x[1], y[1])
        ratio = (x[1] * y[1].inverse()).as_constant()
        if ratio is None:
            return False
        return subgroup.contains(ratio)

    def sampler(rng):
        x = U.sample(rng)
        if x[0] != "t" or not subgroup.generators:
            return (x, x)
        g_ = subgroup.generators[rng.randrange(len(subgroup.generators))]
        from .numutil import RationalFunction

        return (x, ("t", x[1] * RationalFunction.constant(g_)))

    return Relation(U, family="orbital_units", params={"subgroup": subgroup},
                    related_fn=related, related_sampler=sampler)


def rel_from_ghost_data(U, A, phi):
    """E(U, A, Phi): x ~ y iff x = y, or both lie in A with
    Phi-equivalent companions."""
    A = list(A)
    aset = set(A)
    for g_ in U.ghosts():
        if g_ not in aset:
            raise GhostsNotContained(f"A must contain the ghost {U.name(g_)}")

    def related(x, y):
        if U.eq(x, y):
            return True
        if x in aset and y in aset:
            return phi.related(U.companion_value(x), U.companion_value(y))
        return False

    return Relation.intensional(U, "ghost_data", {"A": A, "phi": phi}, related)


def a_of(U, E):
    """A(E) = {x : x ~ ex}.  When E is ghost compatible this must agree
    with {x : x ~ z for some ghost z}; both are computed and compared."""
    if not U.is_finite:
        raise InfiniteUnsupported("A(E) enumeration needs a finite carrier")
    direct = [x for x in U.elements() if E.related(x, U.companion(x))]
    cls = classify_relation(U, E)
    if cls.ghost_compatible:
        ghosts = U.ghosts()
        via_ghosts = [
            x for x in U.elements() if any(E.related(x, z) for z in ghosts)
        ]
        if via_ghosts != direct:
            raise AxiomViolation(
                "ghost-compatible A(E) computed two ways disagrees",
                witness=(direct, via_ghosts),
            )
    return direct


def rel_t_collapse(U, ideal_members):
    """Tangible collapse over an ideal of the ghost carrier: tangibles
    whose companion lies in the ideal are merged fiberwise."""
    M = U.ghost_carrier()
    if U.is_finite:
        tang = U.tangibles()
        for s in tang:
            for t in tang:
                if not U.is_tangible(U.mul(s, t)):
                    raise TangiblesNotClosed(
                        "tangibles are not closed under multiplication", witness=(s, t)
                    )
        members = set(ideal_members)
        for m in members:
            for z in M.elements():
                if M.mul(m, z) not in members:
                    raise NotIdeal("not an ideal of the ghost carrier", witness=(m, z))

        def in_ideal(m):
            return m in members

    elif hasattr(ideal_members, "contains"):
        in_ideal = ideal_members.contains
    else:
        raise InfiniteUnsupported("t-collapse over an infinite carrier needs an ideal handle")

    def related(x, y):
        if U.eq(x, y):
            return True
        if U.is_tangible(x) and U.is_tangible(y):
            vx, vy = U.companion_value(x), U.companion_value(y)
            return M.eq(vx, vy) and in_ideal(vx)
        return False

    return Relation.intensional(U, "t_collapse", {"ideal": ideal_members}, related)


def rel_idempotent_fiber(U, f):
    """The finest MFCE-relation merging the fibers of the ideal fU:
    x ~ y iff x = y, or x, y in fU with ex = ey."""
    if not U.eq(U.mul(f, f), f):
        raise NotIdeal(f"{U.name(f)} is not idempotent")
    fU = []
    for z in U.elements():
        w = U.mul(f, z)
        if not any(U.eq(w, v) for v in fU):
            fU.append(w)
    fset = set(fU)

    def related(x, y):
        if U.eq(x, y):
            return True
        return x in fset and y in fset and U.eq(U.companion(x), U.companion(y))

    return Relation.intensional(U, "idempotent_fiber", {"f": f}, related)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


def mfce_closure(U, pairs=None, ghosts_of=None):
    """Smallest multiplicative equivalence relation containing the given
    pairs (or the pairs (x, ex) for x in ghosts_of), verified to be
    fiber conserving; FiberViolation otherwise."""
    if not U.is_finite:
        raise InfiniteUnsupported("closure computation needs a finite carrier")
    elems = list(U.elements())
    seed_pairs = list(pairs or [])
    for x in ghosts_of or []:
        seed_pairs.append((x, U.companion(x)))
    uf = _UnionFind(elems)
    todo = list(seed_pairs)
    while todo:
        x, y = todo.pop()
        if not uf.union(x, y):
            continue
        for z in elems:
            xz, yz = U.mul(x, z), U.mul(y, z)
            if uf.find(xz) != uf.find(yz):
                todo.append((xz, yz))
    groups = {}
    for x in elems:
        groups.setdefault(uf.find(x), []).append(x)
    for block in groups.values():
        c0 = U.companion(block[0])
        for x in block[1:]:
            if not U.eq(U.companion(x), c0):
                raise FiberViolation(
                    "generated relation is not fiber conserving",
                    witness=(block[0], x),
                )
    return Relation.from_blocks(U, list(groups.values()), family="mfce",
                                params={"pairs": seed_pairs})


# ---------------------------------------------------------------------------
# additive relations and their classifying data


@dataclass
class AdditiveData:
    phi: Relation  # over the ghost carrier
    fibers: dict  # ghost value a in L(phi) -> tuple of blocks of U-elements

    def key(self):
        return (
            self.phi.blocks_key(),
            tuple(sorted((a, _canonical_blocks(bs)) for a, bs in self.fibers.items())),
        )


def least_class_members(M, phi):
    """L(Phi): the nonzero elements that are least in their class."""
    out = []
    for b in phi.classes():
        least = min(b, key=lambda x: M.rank[x])
        if not M.eq(least, M.zero):
            out.append(least)
    return sorted(out, key=lambda x: M.rank[x])


def fiber_of(U, a):
    """U_a = {x : ex = a} for a ghost value a."""
    return [x for x in U.elements() if U.eq(U.companion(x), U.ghost_element(a))]


def additive_from_data(U, data):
    """The unique additive relation with ghost restriction phi and the
    prescribed fiber relations over L(phi)."""
    M = U.ghost_carrier()
    ok, w = classes_convex(M, data.phi)
    if not ok:
        raise PhiNotOrderCompatible("phi has a non-convex class", witness=w)
    L = least_class_members(M, data.phi)
    if sorted(data.fibers) != sorted(L):
        raise FiberMismatch(f"fiber data must be given exactly on L(phi) = {L}")
    fiber_rel = {}
    for a, blocks in data.fibers.items():
        blocks = _canonical_blocks(blocks)
        covered = sorted(x for b in blocks for x in b)
        if covered != sorted(fiber_of(U, a)):
            raise FiberMismatch(f"blocks over {M.name(a)} do not partition the fiber")
        block_of = {}
        for i, b in enumerate(blocks):
            for x in b:
                block_of[x] = i
        fiber_rel[a] = block_of
    lset = set(L)

    def related(x, y):
        vx, vy = U.companion_value(x), U.companion_value(y)
        if M.lt(vy, vx):
            x, y, vx, vy = y, x, vy, vx
        if not data.phi.related(vx, vy):
            return False
        if vx not in lset:
            return True
        bo = fiber_rel[vx]
        ghost_a = U.ghost_element(vx)
        if M.eq(vx, vy):
            return bo[x] == bo[y]
        return bo[x] == bo[ghost_a]

    return Relation.intensional(U, "additive_data", {"data": data}, related)


def additive_to_data(U, E):
    """Recover (phi, fiber relations over L(phi)) from an additive E."""
    cls = classify_relation(U, E)
    if not cls.additive:
        raise AxiomViolation("relation is not additive",
                             witness=cls.witnesses.get("additive"))
    M = U.ghost_carrier()
    phi = ghost_restriction(U, E)
    fibers = {}
    for a in least_class_members(M, phi):
        fiber = fiber_of(U, a)
        blocks = []
        for x in fiber:
            for b in blocks:
                if E.related(x, b[0]):
                    b.append(x)
                    break
            else:
                blocks.append([x])
        fibers[a] = _canonical_blocks(blocks)
    return AdditiveData(phi=phi, fibers=fibers)


def quotient_relation(F, E, quotient_carrier, class_of):
    """F/E on the already-constructed quotient by E: classes of F pushed
    through the class map of E.  Requires E to refine F."""
    if not F.contains(E):
        raise NotRefinement("E is not a refinement of F")
    blocks = []
    for b in F.classes():
        blocks.append(sorted({class_of[x] for x in b}))
    return Relation.from_blocks(quotient_carrier, blocks, family="quotient")
