"""JSON documents for carriers, rings, valuations, relations, and
ideals.  Rationals travel as "p/q" strings; finite carriers as explicit
tables; infinite ones as named rules."""

from fractions import Fraction

from . import bipotent as bp
from .errors import MalformedDocument
from .ideals import FiniteSubsetIdeal, IntervalIdeal
from .numutil import parse_rational
from .relations import (
    Relation,
    rel_from_ghost_data,
    rel_initial_gamma,
    rel_of_ideal,
    rel_orbital,
    rel_orbital_lex,
    rel_t_collapse,
)
from .supertropical import FiniteSupertropical, GhostOnlyCarrier, tangible_double
from .valuations import (
    MValuation,
    RationalField,
    RationalFunctionField,
    Supervaluation,
    TableRing,
    ZmodRing,
    laurent_rank2_valuation,
    padic_valuation,
)


def from_doc(doc):
    kind = doc.get("kind")
    if kind == "bipotent":
        return bipotent_from_doc(doc)
    if kind == "supertropical":
        return supertropical_from_doc(doc)
    if kind == "ring":
        return ring_from_doc(doc)
    if kind == "m_valuation":
        return valuation_from_doc(doc)
    if kind == "supervaluation":
        return supervaluation_from_doc(doc)
    raise MalformedDocument(f"cannot deserialize kind {kind!r}")


def bipotent_from_doc(doc):
    variant = doc.get("variant", "finite")
    if variant in ("finite", "boolean", "null"):
        return bp.FiniteBipotent(
            doc["elements"], doc["mul"], doc["order"], doc["one"], variant=variant
        )
    if variant == "rational_maxplus":
        return bp.RationalMaxPlus()
    if variant == "unit_interval_mul":
        return bp.UnitIntervalMul()
    if variant == "lex_power":
        return bp.LexRationalPower(int(doc["k"]))
    if variant == "unit_interval_collapsed":
        return bp.CollapsedUnitInterval(parse_rational(doc["theta"]), doc.get("closed", True))
    raise MalformedDocument(f"unknown bipotent variant {variant!r}")


def supertropical_from_doc(doc):
    variant = doc.get("variant", "finite")
    if variant == "finite":
        if doc.get("zero", 0) != 0:
            raise MalformedDocument("canonical documents put zero at index 0")
        return FiniteSupertropical(
            doc["elements"], doc["mul"], e=doc["e"], one=doc["one"], ghosts=doc["ghosts"]
        )
    if variant == "doubled":
        base = bipotent_from_doc(doc["base"])
        return tangible_double(base, materialized=base.is_finite)
    if variant == "ghost_only":
        return GhostOnlyCarrier(bipotent_from_doc(doc["base"]))
    if variant == "cover":
        v = valuation_from_doc(doc["valuation"])
        from .valuations import construct_cover

        return construct_cover(v)[0]
    raise MalformedDocument(f"unknown supertropical variant {variant!r}")


def ring_from_doc(doc):
    variant = doc.get("variant")
    if variant == "zmod":
        return ZmodRing(int(doc["n"]))
    if variant == "rational":
        return RationalField()
    if variant == "rational_function":
        return RationalFunctionField()
    if variant == "table":
        return TableRing(doc["elements"], doc["add"], doc["mul"], doc["zero"], doc["one"])
    raise MalformedDocument(f"unknown ring variant {variant!r}")


def _target_element_from_doc(target, value):
    if target.is_finite:
        return int(value)
    if isinstance(target, bp.LexRationalPower):
        if value is None:
            return None
        return tuple(parse_rational(c) for c in value)
    if value is None:
        return None
    return parse_rational(value)


def valuation_from_doc(doc):
    source = ring_from_doc(doc["ring"])
    target = bipotent_from_doc(doc["target"])
    spec = doc["map"]
    if isinstance(spec, list):
        image = [_target_element_from_doc(target, v) for v in spec]
        return MValuation.from_table(source, target, image)
    rule = spec.get("rule")
    if rule == "padic":
        return padic_valuation(int(spec.get("p", 2)))
    if rule == "laurent_rank2":
        return laurent_rank2_valuation()
    raise MalformedDocument(f"unknown valuation rule {rule!r}")


def supervaluation_from_doc(doc):
    source = ring_from_doc(doc["ring"])
    target = supertropical_from_doc(doc["target"])
    spec = doc["map"]
    if isinstance(spec, list):
        image = [int(v) for v in spec]
        return Supervaluation(source, target, lambda a: image[a], rule="table")
    raise MalformedDocument("supervaluations deserialize from explicit maps only")


def gamma_from_doc(M, doc):
    """A ghost homomorphism out of M: either an explicit image array with
    an inline target, a lex projection {"lex_proj": j}, or the shorthand
    "name->name,..." remapping ghosts inside M's own element set."""
    if isinstance(doc, str):
        return parse_gamma_shorthand(M, doc)
    if "lex_proj" in doc:
        return bp.convex_projection(M, int(doc["lex_proj"]))
    if "identity" in doc:
        return bp.GhostHomomorphism.identity(M)
    target = bipotent_from_doc(doc["target"])
    return bp.GhostHomomorphism.from_indices(M, target, [int(i) for i in doc["map"]])


def parse_gamma_shorthand(M, text):
    """"a->1" style: listed elements are remapped (by name) inside M, the
    rest stay fixed; the target is the image subcarrier."""
    image_of = {x: x for x in M.elements()}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            src, dst = part.split("->")
        except ValueError:
            raise MalformedDocument(f"bad gamma shorthand {part!r}") from None
        image_of[M.index_of(src.strip())] = M.index_of(dst.strip())
    image = sorted(set(image_of.values()), key=lambda x: M.rank[x])
    index = {x: i for i, x in enumerate(image)}
    table = [[None] * len(image) for _ in image]
    for a in image:
        for b in image:
            prod = M.mul(a, b)
            if prod not in index:
                raise MalformedDocument("image of the shorthand map is not closed")
            table[index[a]][index[b]] = index[prod]
    target = bp.FiniteBipotent(
        [M.name(x) for x in image], table, list(range(len(image))), index[image_of[M.one]]
    )
    return bp.GhostHomomorphism.from_indices(M, target, [index[image_of[x]] for x in M.elements()])


def relation_from_doc(U, doc, extra=None):
    """Build a relation over U from its JSON form."""
    repr_doc = doc.get("repr", doc)
    if "partition" in repr_doc:
        return Relation.from_blocks(U, repr_doc["partition"])
    family = repr_doc.get("family")
    params = repr_doc.get("params", {})
    if family is None:
        raise MalformedDocument("relation document needs a partition or family")
    if family == "identity":
        return Relation.identity(U)
    if family == "ideal":
        ideal = ideal_from_doc(U, params.get("ideal") or repr_doc.get("ideal"))
        return rel_of_ideal(U, ideal)
    if family == "initial_gamma":
        gamma = gamma_from_doc(U.ghost_carrier(), params.get("gamma") or repr_doc["gamma"])
        return rel_initial_gamma(U, gamma)
    if family == "orbital":
        return rel_orbital(U, [int(h) for h in params["H"]])
    if family == "orbital_lex":
        return rel_orbital_lex(U, int(params["j"]))
    if family == "ghost_data":
        phi = relation_from_doc(U.ghost_carrier(), params["phi"])
        return rel_from_ghost_data(U, [int(a) for a in params["A"]], phi)
    if family == "t_collapse":
        members = params["ideal"]
        if isinstance(members, list):
            members = [int(m) for m in members]
        else:
            members = ideal_from_doc(U, members)
        return rel_t_collapse(U, members)
    if family == "mfce":
        from .relations import mfce_closure

        pairs = [tuple(p) for p in params.get("pairs", [])]
        ghosts_of = [int(x) for x in params.get("ghosts_of", [])]
        return mfce_closure(U, pairs=pairs, ghosts_of=ghosts_of)
    raise MalformedDocument(f"unknown relation family {family!r}")


def ideal_from_doc(U, doc):
    if isinstance(doc, list):
        return FiniteSubsetIdeal(U, [int(i) for i in doc])
    if "interval" in doc:
        spec = doc["interval"]
        return IntervalIdeal(parse_rational(spec["theta"]), spec.get("closed", True))
    if "elements" in doc:
        return FiniteSubsetIdeal(U, [int(i) for i in doc["elements"]])
    raise MalformedDocument("ideal document needs elements or an interval")
