"""Signed reals stored as ``sign * exp(log_magnitude)``.

Used for hyperbolic functions of arguments of order ``M * gamma`` that would
overflow a double.  Only final ratios are converted back to plain floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class ScaledReal:
    sign: int
    log_magnitude: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and self.log_magnitude != -math.inf:
            object.__setattr__(self, "log_magnitude", -math.inf)

    # construction

    @classmethod
    def zero(cls) -> "ScaledReal":
        return cls(0, -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "ScaledReal":
        if x == 0.0:
            return cls.zero()
        if not math.isfinite(x):
            raise ValueError(f"cannot scale non-finite value {x}")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def exp(cls, x: float) -> "ScaledReal":
        return cls(1, float(x))

    @classmethod
    def sinh(cls, x: float) -> "ScaledReal":
        if x == 0.0:
            return cls.zero()
        a = abs(x)
        # sinh a = e^a (1 - e^{-2a}) / 2
        return cls(1 if x > 0 else -1, a - _LOG2 + math.log(-math.expm1(-2.0 * a)))

    @classmethod
    def cosh(cls, x: float) -> "ScaledReal":
        a = abs(x)
        return cls(1, a - _LOG2 + math.log1p(math.exp(-2.0 * a)))

    # arithmetic

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.sign, self.log_magnitude)

    def __abs__(self) -> "ScaledReal":
        return ScaledReal(abs(self.sign), self.log_magnitude)

    def __mul__(self, other) -> "ScaledReal":
        other = _coerce(other)
        s = self.sign * other.sign
        if s == 0:
            return ScaledReal.zero()
        return ScaledReal(s, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledReal":
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero ScaledReal")
        if self.sign == 0:
            return ScaledReal.zero()
        return ScaledReal(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __rtruediv__(self, other) -> "ScaledReal":
        return _coerce(other) / self

    def __add__(self, other) -> "ScaledReal":
        other = _coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        ratio = math.exp(small.log_magnitude - big.log_magnitude)
        factor = 1.0 + ratio if big.sign == small.sign else 1.0 - ratio
        if factor == 0.0:
            return ScaledReal.zero()
        return ScaledReal(big.sign, big.log_magnitude + math.log(factor))

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledReal":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "ScaledReal":
        return _coerce(other) - self

    def __float__(self) -> float:
        """Plain value; overflows to inf or underflows to 0 outside double range."""
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_magnitude)

    def __repr__(self) -> str:
        return f"ScaledReal(sign={self.sign}, log_magnitude={self.log_magnitude!r})"

    def is_finite(self) -> bool:
        return self.sign == 0 or math.isfinite(self.log_magnitude)


def _coerce(x) -> ScaledReal:
    return x if isinstance(x, ScaledReal) else ScaledReal.from_float(float(x))
