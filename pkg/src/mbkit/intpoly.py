"""Dense integer polynomials in one variable t.

Coefficients are stored low degree first and trimmed, so the zero
polynomial is the empty tuple.  Python ints give arbitrary precision.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

_SUPERSCRIPTS = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class DegreeError(ValueError):
    """A reversal was asked for with a cap below the polynomial's degree."""


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class IntPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        coeffs = list(coeffs)
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"coefficients must be integers, got {c!r}")
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        if degree < 0:
            raise ValueError("negative degree")
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by t**k."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def to_list(self) -> list:
        return list(self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return add(self, -_coerce(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return add(_coerce(other), -self)

    def __mul__(self, other) -> "IntPolynomial":
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("IntPolynomial", self.coeffs))

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "t" if k == 1 else "t" + str(k).translate(_SUPERSCRIPTS)
                body = power if mag == 1 else f"{mag}{power}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += sign + body
        return text


def _coerce(value) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return IntPolynomial([value])
    raise TypeError(f"cannot use {value!r} as a polynomial")


ZERO = IntPolynomial()
ONE = IntPolynomial([1])
ONE_PLUS_T = IntPolynomial([1, 1])


def add(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    n = max(len(a.coeffs), len(b.coeffs))
    return IntPolynomial(a.coefficient(k) + b.coefficient(k) for k in range(n))


def mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    if not a.coeffs or not b.coeffs:
        return ZERO
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
    return IntPolynomial(out)


def divide_by_one_plus_t(p: IntPolynomial) -> Tuple[IntPolynomial, bool]:
    """Synthetic division of ``p`` by ``1 + t``.

    Returns ``(quotient, exact)``.  When ``exact`` is false the quotient is
    meaningless and callers must not use it.
    """
    a = p.coeffs
    if not a:
        return ZERO, True
    if p(-1) != 0:
        return ZERO, False
    # top-down: q[n-1] = a[n], q[k-1] = a[k] - q[k]
    n = len(a) - 1
    q = [0] * n
    carry = 0
    for k in range(n, 0, -1):
        carry = a[k] - carry
        q[k - 1] = carry
    quotient = IntPolynomial(q)
    if mul(ONE_PLUS_T, quotient) != p:
        return ZERO, False
    return quotient, True


def reverse(p: IntPolynomial, degree_cap: int) -> IntPolynomial:
    """Return ``t**degree_cap * p(1/t)``."""
    if degree_cap < 0:
        raise DegreeError(f"degree cap must be nonnegative, got {degree_cap}")
    if p.degree > degree_cap:
        raise DegreeError(
            f"degree {p.degree} exceeds duality dimension {degree_cap}")
    padded = list(p.coeffs) + [0] * (degree_cap + 1 - len(p.coeffs))
    return IntPolynomial(reversed(padded))


def is_nonnegative(p: IntPolynomial) -> bool:
    return all(c >= 0 for c in p.coeffs)


def from_json(value: Sequence[int]) -> IntPolynomial:
    if not isinstance(value, (list, tuple)):
        raise TypeError(f"polynomial must be an array of integers, got {value!r}")
    return IntPolynomial(list(value))
