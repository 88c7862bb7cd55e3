"""Exact arithmetic over Q and cyclotomic fields Q(zeta_d) = Q[z]/Phi_d(z).

Rationals are :class:`fractions.Fraction`.  An element of Q(zeta_d) is a
:class:`CycloScalar`: a tuple of ``phi(d)`` rational coordinates in the power
basis ``1, z, ..., z^(phi(d)-1)``.  For d = 1 and d = 2 the field is Q itself
and zeta is 1 or -1.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from numbers import Rational


class OrderMismatch(ValueError):
    """Operands live in cyclotomic fields of different order."""


class ScalarParseError(ValueError):
    pass


# -- univariate helpers; a polynomial is a list of coefficients, low degree first

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(out)


def _poly_divmod(a, b):
    """Long division in Q[z]; b must be nonzero."""
    a = [Fraction(c) for c in a]
    _trim(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[i + shift] -= c * bi
        _trim(a)
    return _trim(q), a


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_d, lowest degree first.

    Uses Phi_d = (z^d - 1) / prod_{e | d, e < d} Phi_e.
    """
    if d < 1:
        raise ValueError(f"cyclotomic order must be positive, got {d}")
    num = [-1] + [0] * (d - 1) + [1]
    den = [1]
    for e in range(1, d):
        if d % e == 0:
            den = _poly_mul(den, list(cyclotomic_polynomial(e)))
    q, r = _poly_divmod(num, den)
    assert not r
    return tuple(int(c) for c in q)


def euler_phi(d: int) -> int:
    return len(cyclotomic_polynomial(d)) - 1


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as a rational")


class CycloScalar:
    """Immutable element of Q(zeta_d)."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs=None):
        deg = euler_phi(order)
        if coeffs is None:
            coeffs = ()
        coeffs = [_as_fraction(c) for c in coeffs]
        if len(coeffs) > deg:
            # accept unreduced input
            coeffs = _reduce(order, coeffs)
        coeffs = coeffs + [Fraction(0)] * (deg - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, order, coeffs):
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q, order: int = 1) -> "CycloScalar":
        deg = euler_phi(order)
        return cls._raw(order, (_as_fraction(q),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def zero(cls, order: int = 1) -> "CycloScalar":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CycloScalar":
        return cls.rational(1, order)

    @classmethod
    def zeta(cls, order: int) -> "CycloScalar":
        """The class of z, a primitive order-th root of unity."""
        return cls(order, [0, 1])

    # -- predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- coercion

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.order != self.order:
                raise OrderMismatch(f"Q(zeta_{self.order}) vs Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar.rational(other, self.order)
        return NotImplemented

    # -- arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloScalar._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloScalar._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return CycloScalar._raw(self.order, (a[0] * b[0],))
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return CycloScalar._raw(self.order, tuple(_reduce(self.order, prod)))

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        """Inverse via the extended Euclidean algorithm against Phi_d."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % self.order)
        if len(self.coeffs) == 1:
            return CycloScalar._raw(self.order, (1 / self.coeffs[0],))
        r0 = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r1 = _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        # invariant: s_i * self == r_i (mod Phi_d)
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return CycloScalar(self.order, [x / c for x in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloScalar.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing

    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.order, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"CycloScalar({self.order}, {format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _reduce(order, coeffs):
    # Phi_d is monic: peel off the top coefficient until the degree is < phi(d)
    phi_poly = cyclotomic_polynomial(order)
    deg = len(phi_poly) - 1
    out = list(coeffs)
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            shift = k - deg
            for i, t in enumerate(phi_poly[:-1]):
                if t:
                    out[shift + i] -= c * t
    out = out[:deg]
    return out + [Fraction(0)] * (deg - len(out))


# -- text form: "c0 + c1*z + c2*z^2"

def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(a: CycloScalar) -> str:
    parts = []
    for k, c in enumerate(a.coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_format_rational(mag)}*{mono}"
        else:
            body = _format_rational(mag)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


_SCALAR_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*)?)?(z(?:\s*\^\s*(\d+))?)?\s*"
)


def parse_scalar(text: str, order: int = 1) -> CycloScalar:
    """Parse ``"c0 + c1*z + ..."`` into an element of Q(zeta_order)."""
    coeffs: dict[int, Fraction] = {}
    pos = 0
    text = text.strip()
    if not text:
        raise ScalarParseError("empty scalar")
    first = True
    while pos < len(text):
        m = _SCALAR_TERM.match(text, pos)
        sign, num, zpart, exp = m.groups()
        if m.end() == pos or (num is None and zpart is None):
            raise ScalarParseError(f"bad scalar syntax at position {pos}: {text!r}")
        if sign is None and not first:
            raise ScalarParseError(f"expected '+' or '-' at position {pos}: {text!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if zpart is None else (int(exp) if exp is not None else 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return CycloScalar(order, [coeffs.get(k, 0) for k in range(top + 1)])
