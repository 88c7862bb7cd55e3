"""Sparse multivariate polynomials over Q(zeta_d), with an optional fiber variable T.

A :class:`MultiPoly` lives in ``K[x0, ..., x{N}]`` or ``K[x0, ..., x{N}, T]``.
Exponent vectors list the x-exponents first and, when present, the
T-exponent last.  T is weighted by ``weight_n``: it stands for a section of the
same line bundle as a degree-``weight_n`` form, so ``alpha*T + g(x)`` with
``deg g = weight_n`` is homogeneous.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable

from .exactfield import CycloScalar, OrderMismatch, format_scalar, parse_scalar


class ShapeMismatch(ValueError):
    """Polynomials from incompatible rings were combined."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonHomogeneous(ValueError):
    pass


Exponents = tuple[int, ...]


class MultiPoly:
    """Immutable sparse polynomial.  ``terms`` maps exponent tuples to nonzero scalars."""

    __slots__ = ("num_vars", "has_T", "weight_n", "order", "terms")

    def __init__(self, num_vars: int, terms=None, *, has_T: bool = False,
                 weight_n: int = 1, order: int = 1):
        self.num_vars = num_vars
        self.has_T = has_T
        self.weight_n = weight_n
        self.order = order
        width = num_vars + (1 if has_T else 0)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != width:
                raise ShapeMismatch(f"exponent vector {exps} does not have length {width}")
            if not isinstance(c, CycloScalar):
                c = CycloScalar.rational(c, order)
            elif c.order != order:
                raise OrderMismatch(f"coefficient in Q(zeta_{c.order}), ring over Q(zeta_{order})")
            if c:
                clean[exps] = clean[exps] + c if exps in clean else c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def _from_clean(cls, like: "MultiPoly", terms: dict) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.num_vars = like.num_vars
        obj.has_T = like.has_T
        obj.weight_n = like.weight_n
        obj.order = like.order
        obj.terms = terms
        return obj

    # -- constructors

    @classmethod
    def zero(cls, num_vars: int, **ring) -> "MultiPoly":
        return cls(num_vars, {}, **ring)

    @classmethod
    def constant(cls, c, num_vars: int, **ring) -> "MultiPoly":
        width = num_vars + (1 if ring.get("has_T") else 0)
        return cls(num_vars, {(0,) * width: c}, **ring)

    @classmethod
    def var(cls, i: int, num_vars: int, **ring) -> "MultiPoly":
        width = num_vars + (1 if ring.get("has_T") else 0)
        exps = [0] * width
        exps[i] = 1
        return cls(num_vars, {tuple(exps): 1}, **ring)

    @classmethod
    def T(cls, num_vars: int, weight_n: int = 1, order: int = 1) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars + (1,): 1}, has_T=True,
                   weight_n=weight_n, order=order)

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1, **ring) -> "MultiPoly":
        exps = tuple(exps)
        num_vars = len(exps) - (1 if ring.get("has_T") else 0)
        return cls(num_vars, {exps: coeff}, **ring)

    # -- ring bookkeeping

    def ring(self) -> dict:
        return {"has_T": self.has_T, "weight_n": self.weight_n, "order": self.order}

    def _check(self, other: "MultiPoly") -> None:
        if self.num_vars != other.num_vars or self.has_T != other.has_T:
            raise ShapeMismatch(
                f"ring with {self.num_vars} vars (T={self.has_T}) vs "
                f"{other.num_vars} vars (T={other.has_T})")
        if self.has_T and self.weight_n != other.weight_n:
            raise ShapeMismatch(f"T weight {self.weight_n} vs {other.weight_n}")
        if self.order != other.order:
            raise OrderMismatch(f"Q(zeta_{self.order}) vs Q(zeta_{other.order})")

    def with_T(self, weight_n: int | None = None) -> "MultiPoly":
        """Embed into the ring with the fiber variable T adjoined."""
        if self.has_T:
            return self
        w = weight_n if weight_n is not None else self.weight_n
        obj = MultiPoly._from_clean(self, {e + (0,): c for e, c in self.terms.items()})
        obj.has_T = True
        obj.weight_n = w
        return obj

    def lift(self, order: int) -> "MultiPoly":
        """Reinterpret a polynomial with rational coefficients over Q(zeta_order)."""
        if order == self.order:
            return self
        terms = {}
        for e, c in self.terms.items():
            if not c.is_rational():
                raise OrderMismatch(f"cannot move {format_scalar(c)} to Q(zeta_{order})")
            terms[e] = CycloScalar.rational(c.coeffs[0], order)
        obj = MultiPoly._from_clean(self, terms)
        obj.order = order
        return obj

    # -- predicates and degrees

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def weighted_degree_of(self, exps: Exponents) -> int:
        if self.has_T:
            return sum(exps[:-1]) + self.weight_n * exps[-1]
        return sum(exps)

    def degrees(self) -> set[int]:
        return {self.weighted_degree_of(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Weighted degree of a nonzero homogeneous polynomial."""
        degs = self.degrees()
        if len(degs) != 1:
            if not degs:
                raise ValueError("the zero polynomial has no degree")
            raise NonHomogeneous(f"terms of degrees {sorted(degs)}")
        return degs.pop()

    def T_degree(self) -> int:
        if not self.has_T:
            return 0
        return max((e[-1] for e in self.terms), default=0)

    def coefficient(self, exps: Iterable[int]) -> CycloScalar:
        return self.terms.get(tuple(exps), CycloScalar.zero(self.order))

    # -- arithmetic

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.num_vars, **self.ring())
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                s = terms[e] + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
            else:
                terms[e] = c
        return MultiPoly._from_clean(self, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean(self, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.num_vars, **self.ring())
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        if not isinstance(c, CycloScalar):
            c = CycloScalar.rational(c, self.order)
        elif c.order != self.order:
            raise OrderMismatch(f"scalar in Q(zeta_{c.order}), ring over Q(zeta_{self.order})")
        if not c:
            return MultiPoly._from_clean(self, {})
        return MultiPoly._from_clean(self, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + c
                else:
                    terms[e] = c
        return MultiPoly._from_clean(self, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.num_vars, **self.ring())
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (self.num_vars == other.num_vars and self.has_T == other.has_T
                    and self.order == other.order and self.terms == other.terms)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            width = self.num_vars + (1 if self.has_T else 0)
            return self.terms == {(0,) * width: CycloScalar.rational(other, self.order)}
        return NotImplemented

    def __hash__(self):
        return hash((self.num_vars, self.has_T, frozenset(self.terms.items())))

    # -- calculus / evaluation

    def partial(self, i: int) -> "MultiPoly":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return MultiPoly._from_clean(self, terms)

    def evaluate(self, point) -> CycloScalar:
        """Evaluate at a point given as a sequence of scalars (x-values, then T if present)."""
        total = CycloScalar.zero(self.order)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * (x ** k)
            total = total + v
        return total

    def x_part(self) -> "MultiPoly":
        """Terms free of T, in the T-less ring."""
        if not self.has_T:
            return self
        terms = {e[:-1]: c for e, c in self.terms.items() if e[-1] == 0}
        obj = MultiPoly._from_clean(self, terms)
        obj.has_T = False
        return obj

    # -- display

    def sorted_terms(self) -> list[tuple[Exponents, CycloScalar]]:
        return sorted(self.terms.items(), key=lambda kv: term_order_key(kv[0], self))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, num_vars={self.num_vars}, has_T={self.has_T})"


def term_order_key(exps: Exponents, ring: MultiPoly):
    """Graded-lex key, T > x0 > x1 > ...; sorting ascending gives the canonical order."""
    if ring.has_T:
        lex = (exps[-1],) + tuple(exps[:-1])
    else:
        lex = tuple(exps)
    return (-ring.weighted_degree_of(exps), tuple(-k for k in lex))


def monomials_of_degree(num_vars: int, n: int) -> list[Exponents]:
    """All exponent vectors of total degree n in ``num_vars`` variables, graded-lex descending."""
    if n < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(num_vars), n):
        exps = [0] * num_vars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    out.sort(key=lambda e: tuple(-k for k in e))
    return out


# -- text form

def _var_name(i: int, p: MultiPoly) -> str:
    if p.has_T and i == p.num_vars:
        return "T"
    return f"x{i}"


def _format_monomial(exps: Exponents, p: MultiPoly) -> str:
    order = list(range(len(exps)))
    if p.has_T:
        order = [len(exps) - 1] + order[:-1]
    parts = []
    for i in order:
        k = exps[i]
        if k == 1:
            parts.append(_var_name(i, p))
        elif k > 1:
            parts.append(f"{_var_name(i, p)}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Canonical text: graded-lex order, rational coefficients in lowest terms."""
    if not p.terms:
        return "0"
    pieces = []
    for exps, c in p.sorted_terms():
        mono = _format_monomial(exps, p)
        if c.is_rational():
            q = c.coeffs[0]
            neg = q < 0
            mag = abs(q)
            if mono:
                body = mono if mag == 1 else f"{format_scalar(CycloScalar.rational(mag))}*{mono}"
            else:
                body = format_scalar(CycloScalar.rational(mag))
        else:
            neg = False
            body = f"({format_scalar(c)})" + (f"*{mono}" if mono else "")
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+|T)|(?P<paren>\((?P<inner>[^()]*)\))|(?P<op>[-+*^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastgroup) if m.lastgroup else pos
        kind = m.lastgroup if m.lastgroup != "inner" else "paren"
        if m.group("paren") is not None:
            tokens.append(("paren", m.group("inner"), start))
        else:
            tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_poly(text: str, num_vars: int | None = None, *, has_T: bool | None = None,
               weight_n: int = 1, order: int = 1, homogeneous: bool = False) -> MultiPoly:
    """Parse the polynomial grammar: signed terms of ``[coeff *] var[^exp] * ...``.

    ``num_vars`` and ``has_T`` are inferred from the text when omitted.
    Coefficients are ``p/q`` or a parenthesised cyclotomic scalar ``(c0 + c1*z)``.
    """
    tokens = _tokenize(text)
    max_var = -1
    saw_T = False
    for kind, val, _ in tokens:
        if kind == "var":
            if val == "T":
                saw_T = True
            else:
                max_var = max(max_var, int(val[1:]))
    if num_vars is None:
        num_vars = max_var + 1
    elif max_var >= num_vars:
        pos = next(p for k, v, p in tokens if k == "var" and v != "T" and int(v[1:]) >= num_vars)
        raise ParseError(f"variable x{max_var} outside x0..x{num_vars - 1}", pos)
    if has_T is None:
        has_T = saw_T
    elif saw_T and not has_T:
        pos = next(p for k, v, p in tokens if v == "T")
        raise ParseError("T not allowed here", pos)
    width = num_vars + (1 if has_T else 0)
    ring = dict(has_T=has_T, weight_n=weight_n, order=order)

    terms: dict = {}
    i = 0

    def peek():
        return tokens[i]

    sign = 1
    kind, val, pos = peek()
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        coeff = CycloScalar.rational(sign, order)
        exps = [0] * width
        expect_factor = True
        while expect_factor:
            kind, val, pos = tokens[i]
            if kind == "num":
                coeff = coeff * Fraction(val)
                i += 1
            elif kind == "paren":
                try:
                    coeff = coeff * parse_scalar(val, order)
                except ValueError as exc:
                    raise ParseError(str(exc), pos) from None
                i += 1
            elif kind == "var":
                idx = num_vars if val == "T" else int(val[1:])
                i += 1
                k = 1
                if tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    kk, vv, pp = tokens[i]
                    if kk != "num" or "/" in vv:
                        raise ParseError("expected integer exponent", pp)
                    k = int(vv)
                    i += 1
                exps[idx] += k
            else:
                raise ParseError("expected coefficient or variable", pos)
            if tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
            else:
                expect_factor = False
        key = tuple(exps)
        terms[key] = terms[key] + coeff if key in terms else coeff
        kind, val, pos = tokens[i]
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError(f"unexpected token {val!r}", pos)

    p = MultiPoly(num_vars, {e: c for e, c in terms.items() if c}, **ring)
    if homogeneous and not p.is_homogeneous():
        raise NonHomogeneous(f"{text!r} has terms of degrees {sorted(p.degrees())}")
    return p
