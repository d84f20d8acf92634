"""Default sampling parameters.

All sampled validations are deterministic: the seed used is recorded in
the resulting report.  CLI flags --seed / --samples override these.
"""

DEFAULT_SEED = 1729
DEFAULT_SAMPLES = 10_000

# Sampler box: numerators drawn from [-RATIONAL_BOX, RATIONAL_BOX],
# denominators from [1, RATIONAL_BOX], uniformly.
RATIONAL_BOX = 50

# Hard cap for exhaustive subset / partition scans.
MAX_ENUM_ELEMENTS = 10
