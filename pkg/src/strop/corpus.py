"""The instance corpus: small named carriers and valuations used by the
check registry and the CLI.

Every instance validates on load, with one documented exception: t5 is
the tangible double of a non-cancellative chain, and the doubled
addition genuinely violates distributivity there (the carrier is kept
because its multiplicative and relational structure is exercised
everywhere; see the README note on corpus validity).
"""

import json
import os
from dataclasses import dataclass
from fractions import Fraction

from . import bipotent, serialize
from .errors import MalformedDocument
from .ideals import IntervalIdeal
from .supertropical import GhostOnlyCarrier, tangible_double
from .valuations import MValuation, ZmodRing, construct_cover, laurent_rank2_valuation


@dataclass
class CorpusInstance:
    name: str
    kind: str  # "bipotent" | "supertropical" | "m_valuation"
    obj: object
    extra: dict = None


def _uv_z4():
    R = ZmodRing(4)
    B = bipotent.boolean()
    v = MValuation.from_table(R, B, [0, 1, 0, 1])
    U, phi = construct_cover(v)
    return U, {"valuation": v, "phi": phi}


def _uv_z8():
    R = ZmodRing(8)
    B = bipotent.boolean()
    v = MValuation.from_table(R, B, [0, 1, 0, 1, 0, 1, 0, 1])
    U, phi = construct_cover(v)
    return U, {"valuation": v, "phi": phi}


_BUILDERS = {}


def _register(name, kind, fn):
    _BUILDERS[name] = (kind, fn)


_register("boolean", "bipotent", lambda: (bipotent.boolean(), None))
_register("chain3", "bipotent", lambda: (bipotent.chain3(), None))
_register(
    "interval",
    "supertropical",
    lambda: (
        GhostOnlyCarrier(bipotent.UnitIntervalMul()),
        {"ideal": IntervalIdeal(Fraction(1, 2), closed=True)},
    ),
)
_register("stb", "supertropical", lambda: (tangible_double(bipotent.boolean()), None))
_register("t5", "supertropical", lambda: (tangible_double(bipotent.chain3()), None))
_register("uv_z4", "supertropical", _uv_z4)
_register("uv_z8", "supertropical", _uv_z8)
_register(
    "lex2",
    "supertropical",
    lambda: (tangible_double(bipotent.LexRationalPower(2), materialized=False), None),
)
_register("rank2field", "m_valuation", lambda: (laurent_rank2_valuation(), None))


def all_names():
    return sorted(_BUILDERS)


def build(name):
    try:
        kind, fn = _BUILDERS[name]
    except KeyError:
        raise MalformedDocument(f"unknown corpus instance {name!r}") from None
    obj, extra = fn()
    return CorpusInstance(name=name, kind=kind, obj=obj, extra=extra or {})


def corpus_dir():
    override = os.environ.get("STROP_CORPUS")
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "corpus_data")


def load(name_or_path):
    """Load an instance by corpus name, by corpus file name, or by path."""
    if name_or_path in _BUILDERS:
        return build(name_or_path)
    path = name_or_path
    if not os.path.exists(path):
        candidate = os.path.join(corpus_dir(), os.path.basename(path))
        if not candidate.endswith(".json"):
            candidate += ".json"
        if os.path.exists(candidate):
            path = candidate
        else:
            raise MalformedDocument(f"no corpus instance or file {name_or_path!r}")
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    obj = serialize.from_doc(doc)
    name = os.path.splitext(os.path.basename(path))[0]
    return CorpusInstance(name=name, kind=doc.get("kind", "unknown"), obj=obj)


def write_corpus_files(directory=None):
    """Regenerate the shipped corpus documents from the builders."""
    directory = directory or corpus_dir()
    os.makedirs(directory, exist_ok=True)
    written = []
    for name in all_names():
        inst = build(name)
        doc = inst.obj.to_doc()
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        written.append(path)
    return written
