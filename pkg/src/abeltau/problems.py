"""The four worked test problems, shipped as configuration text."""
from __future__ import annotations

from .config import parse_config

__all__ = ["EXAMPLE_CONFIGS", "example_config", "example"]

# alpha = 1/4; y = [t^(5/4), 5 sqrt(2) pi / (16 Gamma(3/4)) t].
# The t^(3/2) forcing coefficient is Gamma(9/4)/Gamma(5/2) = 5 sqrt(2 pi) / (12 Gamma(3/4)),
# which is what substituting y into the equation gives.
EXAMPLE1 = """\
[problem]
name = example1
n = 2
alphas = 1/4, 1/4; 1/4, 1/4

[kernel 1 2]
terms = (0, 0, 1 / Gamma(1/4))

[kernel 2 1]
terms = (0, 0, -1 / Gamma(1/4))

[kernel 2 2]
terms = (0, 0, -1 / Gamma(1/4))

[forcing 2]
terms = (4, 5 * sqrt(2) * pi / (16 * Gamma(3/4))), (5, 1), (6, Gamma(9/4) / Gamma(5/2))

[exact 1]
terms = (5, 1)

[exact 2]
terms = (4, 5 * sqrt(2) * pi / (16 * Gamma(3/4)))
"""

# gamma = 5; y = [t + t^2, t - t^2]
EXAMPLE2 = """\
[problem]
name = example2
n = 2
alphas = 4/5, 3/5; 2/5, 1/5

[kernel 1 1]
terms = (0, 0, 1)

[kernel 1 2]
terms = (0, 0, 1)

[kernel 2 1]
terms = (0, 0, 1)

[kernel 2 2]
terms = (0, 0, 1)

[forcing 1]
terms = (5, 1), (10, 1), (14, -25/6552 * 130), (9, -25/6552 * 182), (13, 25/6552 * 210), (8, -25/6552 * 273)

[forcing 2]
terms = (5, 1), (10, -1), (12, -25/924 * 55), (7, -25/924 * 66), (11, 25/924 * 140), (6, -25/924 * 154)

[exact 1]
terms = (5, 1), (10, 1)

[exact 2]
terms = (5, 1), (10, -1)
"""

# y = [arctan(sqrt t), t^(3/4)]; the forcing subtracts the integral terms in closed form
EXAMPLE3 = """\
[problem]
name = example3
n = 2
alphas = 1/4, 3/4; 1/4, 1/2

[kernel 1 1]
terms = (0, 0, 1)

[kernel 1 2]
terms = (0, 0, 1)

[kernel 2 1]
terms = (0, 0, 1)

[kernel 2 2]
terms = (0, 0, 1)

[forcing 1]
terms = (6, -Beta(3/4, 7/4))
builtins = arctan_sqrt: 1; abel_arctan_sqrt: -1

[forcing 2]
terms = (3, 1), (5, -Beta(1/2, 7/4))
builtins = abel_arctan_sqrt: -1

[exact 1]
builtins = arctan_sqrt: 1

[exact 2]
terms = (3, 1)
"""

# y = [1 - exp(pi t) erfc(sqrt(pi t)), sqrt t]
EXAMPLE4 = """\
[problem]
name = example4
n = 2
alphas = 1/2, 1/2; 1/2, 1/2

[kernel 1 1]
terms = (0, 0, -1)

[kernel 1 2]
terms = (0, 0, -1)

[kernel 2 1]
terms = (0, 0, 1)

[forcing 1]
terms = (1, 2), (2, pi / 2)

[forcing 2]
terms = (0, 1), (1, -1)
builtins = erfc_comb: -1

[exact 1]
terms = (0, 1)
builtins = erfc_comb: -1

[exact 2]
terms = (1, 1)
"""

EXAMPLE_CONFIGS = {1: EXAMPLE1, 2: EXAMPLE2, 3: EXAMPLE3, 4: EXAMPLE4}


def example_config(k):
    try:
        text = EXAMPLE_CONFIGS[int(k)]
    except (KeyError, ValueError):
        raise ValueError(f"unknown example {k!r}; choose from {sorted(EXAMPLE_CONFIGS)}") from None
    return parse_config(text, source=f"<example{k}>")


def example(k):
    """Problem object for built-in example ``k`` (1-4)."""
    return example_config(k).to_problem()
