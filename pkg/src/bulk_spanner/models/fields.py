from fractions import Fraction
from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer


def parse_rational(value: Any) -> Fraction:
    """
    Coerce a document value into an exact Fraction.

    Accepts Fractions, integers, "num/den" strings, decimal strings and floats
    (floats are read through their shortest decimal repr).

    Raises:
        ValueError: If the value cannot be read as a rational.
    """
    if isinstance(value, bool):
        raise ValueError(f"Boolean is not a rational value: {value}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Could not parse rational from {value!r}") from e
    raise ValueError(f"Unsupported rational value: {value!r}")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]
