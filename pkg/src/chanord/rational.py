"""Exact rational arithmetic backend and "p/q" string codec.

All library values are exact rationals; only the capacity iteration uses
floats. gmpy2's mpq is used when available (much faster), falling back to
the stdlib Fraction. Both types print as "p/q" (or "p" for integers) and
hash/compare interchangeably.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

ZERO = Rat(0)
ONE = Rat(1)


def rat(numerator, denominator=None):
    """Build an exact rational from ints, strings, or another rational."""
    if denominator is None:
        return Rat(numerator)
    return Rat(numerator, denominator)


def parse_rat(text: str):
    """Parse a rational string "p/q" or "p". Rejects anything else."""
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {type(text).__name__}")
    parts = text.strip().split("/")
    if len(parts) == 1:
        return Rat(int(parts[0]))
    if len(parts) == 2:
        num, den = int(parts[0]), int(parts[1])
        if den == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return Rat(num, den)
    raise ValueError(f"malformed rational {text!r}")


def rat_str(value) -> str:
    """Render a rational as "p/q" (or "p" when the denominator is 1)."""
    return str(Rat(value))
