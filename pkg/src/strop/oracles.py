"""Brute-force oracles: set partitions in canonical order and a
semiring-axiom checker shared by every carrier validator.
"""

import random

from . import config
from .errors import TooLarge
from .report import ValidationReport


def partitions_of(items):
    """All partitions of `items`, as tuples of tuples, in restricted-growth
    order.  Exactly Bell(n) results, no duplicates."""
    items = list(items)
    n = len(items)
    if n > config.MAX_ENUM_ELEMENTS:
        raise TooLarge(f"partition enumeration capped at {config.MAX_ENUM_ELEMENTS} elements")
    if n == 0:
        yield ()
        return

    def grow(rgs, k):
        i = len(rgs)
        if i == n:
            blocks = [[] for _ in range(k)]
            for idx, b in enumerate(rgs):
                blocks[b].append(items[idx])
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(k):
            yield from grow(rgs + [b], k)
        yield from grow(rgs + [k], k + 1)

    yield from grow([0], 1)


def bell_number(n):
    count = 0
    for _ in partitions_of(range(n)):
        count += 1
    return count


def _triple_source(carrier, seed, samples):
    if getattr(carrier, "is_finite", False):
        elems = list(carrier.elements())
        return (
            "exhaustive",
            [(x, y, z) for x in elems for y in elems for z in elems],
            None,
        )
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    n = config.DEFAULT_SAMPLES if samples is None else samples
    triples = [
        (carrier.sample(rng), carrier.sample(rng), carrier.sample(rng)) for _ in range(n)
    ]
    return "sampled", triples, rng


def oracle_semiring_axioms(carrier, seed=None, samples=None, subject=None):
    """Check the commutative-semiring laws for `carrier`'s (+, *).

    Exhaustive over all triples for finite carriers, seeded samples
    otherwise.  The first violating triple is attached as witness.
    """
    mode, triples, _ = _triple_source(carrier, seed, samples)
    report = ValidationReport(
        subject=subject or f"semiring axioms of {getattr(carrier, 'label', carrier)}",
        mode=mode,
        seed=(config.DEFAULT_SEED if seed is None else seed) if mode == "sampled" else None,
        samples=len(triples) if mode == "sampled" else None,
    )
    eq, add, mul = carrier.eq, carrier.add, carrier.mul
    zero, one = carrier.zero, carrier.one

    def scan(name, law):
        witness = None
        for t in triples:
            if not law(*t):
                witness = t
                break
        report.check(name, witness is None, witness)

    scan("add-associative", lambda x, y, z: eq(add(add(x, y), z), add(x, add(y, z))))
    scan("add-commutative", lambda x, y, z: eq(add(x, y), add(y, x)))
    scan("add-identity", lambda x, y, z: eq(add(x, zero), x))
    scan("mul-associative", lambda x, y, z: eq(mul(mul(x, y), z), mul(x, mul(y, z))))
    scan("mul-commutative", lambda x, y, z: eq(mul(x, y), mul(y, x)))
    scan("mul-identity", lambda x, y, z: eq(mul(x, one), x))
    scan("zero-absorbing", lambda x, y, z: eq(mul(x, zero), zero))
    scan("distributive", lambda x, y, z: eq(mul(add(x, y), z), add(mul(x, z), mul(y, z))))
    return report
