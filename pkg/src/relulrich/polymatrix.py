"""Square sparse matrices with :class:`MultiPoly` entries."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence

from .exactfield import CycloScalar, cyclotomic_polynomial
from .polyring import MultiPoly, parse_poly


class PolyMatrix:
    """Row-sparse square matrix; ``rows[i]`` maps column index to a nonzero entry.

    ``template`` is any polynomial of the entry ring; it fixes the number of
    variables, the presence and weight of T, and the coefficient field.
    """

    __slots__ = ("size", "template", "rows")

    def __init__(self, size: int, template: MultiPoly, rows: Sequence[dict] | None = None):
        self.size = size
        self.template = MultiPoly._from_clean(template, {})
        self.rows = [dict(r) for r in rows] if rows is not None else [{} for _ in range(size)]

    @classmethod
    def identity(cls, size: int, template: MultiPoly, scalar: MultiPoly | None = None) -> "PolyMatrix":
        if scalar is None:
            scalar = MultiPoly.constant(1, template.num_vars, **template.ring())
        m = cls(size, template)
        if scalar:
            for i in range(size):
                m.rows[i][i] = scalar
        return m

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[MultiPoly]], template: MultiPoly | None = None) -> "PolyMatrix":
        size = len(entries)
        if template is None:
            template = entries[0][0]
        m = cls(size, template)
        for i, row in enumerate(entries):
            if len(row) != size:
                raise ValueError("matrix is not square")
            for j, x in enumerate(row):
                if x:
                    m.rows[i][j] = x
        return m

    def zero_entry(self) -> MultiPoly:
        return self.template

    def __getitem__(self, ij) -> MultiPoly:
        i, j = ij
        return self.rows[i].get(j, self.template)

    def __setitem__(self, ij, value: MultiPoly) -> None:
        i, j = ij
        if value:
            self.rows[i][j] = value
        else:
            self.rows[i].pop(j, None)

    def copy(self) -> "PolyMatrix":
        return PolyMatrix(self.size, self.template, self.rows)

    def nonzero(self) -> Iterator[tuple[int, int, MultiPoly]]:
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                yield i, j, row[j]

    def to_dense(self) -> list[list[MultiPoly]]:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        out = self.copy()
        for i, j, x in other.nonzero():
            out[i, j] = out[i, j] + x
        return out

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.size, self.template,
                          [{j: -x for j, x in r.items()} for r in self.rows])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.size != other.size:
            raise ValueError(f"size {self.size} vs {other.size}")
        out = PolyMatrix(self.size, self.template)
        for i, row in enumerate(self.rows):
            acc: dict = {}
            for k, a in row.items():
                for j, b in other.rows[k].items():
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            out.rows[i] = {j: x for j, x in acc.items() if x}
        return out

    def scale(self, c) -> "PolyMatrix":
        if isinstance(c, MultiPoly):
            return PolyMatrix(self.size, self.template,
                              [{j: x * c for j, x in r.items() if x * c} for r in self.rows])
        return PolyMatrix(self.size, self.template,
                          [{j: x.scale(c) for j, x in r.items() if c} for r in self.rows])

    def power(self, k: int) -> "PolyMatrix":
        if k < 1:
            raise ValueError("power must be positive")
        if k == 1:
            return self.copy()
        return _IntImage.of(self).power(k).to_poly_matrix(self.template)

    def chain(self, *others: "PolyMatrix") -> "PolyMatrix":
        """self @ others[0] @ others[1] ... computed over the integers."""
        acc = _IntImage.of(self)
        for o in others:
            if o.size != self.size:
                raise ValueError(f"size {self.size} vs {o.size}")
            acc = acc.matmul(_IntImage.of(o))
        return acc.to_poly_matrix(self.template)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.size == other.size and self.rows == other.rows

    def deviation_from_scalar(self, f: MultiPoly) -> list[tuple[int, int, MultiPoly]]:
        """Entries where this matrix differs from f * I, with the difference."""
        out = []
        for i, row in enumerate(self.rows):
            cols = set(row) | {i}
            for j in sorted(cols):
                want = f if i == j else self.template
                diff = self[i, j] - want
                if diff:
                    out.append((i, j, diff))
        return out

    def evaluate(self, point) -> list[list[CycloScalar]]:
        zero = CycloScalar.zero(self.template.order)
        dense = [[zero] * self.size for _ in range(self.size)]
        for i, j, x in self.nonzero():
            dense[i][j] = x.evaluate(point)
        return dense

    def to_strings(self) -> list[list[str]]:
        return [[str(self[i, j]) for j in range(self.size)] for i in range(self.size)]

    @classmethod
    def from_strings(cls, entries: Sequence[Sequence[str]], num_vars: int, *, weight_n: int,
                     order: int) -> "PolyMatrix":
        template = MultiPoly.zero(num_vars, has_T=True, weight_n=weight_n, order=order)
        size = len(entries)
        m = cls(size, template)
        for i, row in enumerate(entries):
            if len(row) != size:
                raise ValueError(f"row {i} has {len(row)} entries, expected {size}")
            for j, text in enumerate(row):
                if text == "0":
                    continue
                x = parse_poly(text, num_vars, has_T=True, weight_n=weight_n, order=order)
                if x:
                    m.rows[i][j] = x
        return m


class _IntImage:
    """A polynomial matrix scaled to integer coefficients: entries / denom.

    Each entry is a dict from a packed exponent to an int.  The packed key
    holds the power of z in its lowest slot and the monomial exponents above
    it, so multiplying monomials is adding keys.  Powers of z are reduced
    modulo Phi_d only when converting back.
    """

    __slots__ = ("size", "order", "width", "nvars", "rows", "denom")

    BITS = 12

    def __init__(self, size, order, width, nvars, rows, denom):
        self.size, self.order, self.width, self.nvars = size, order, width, nvars
        self.rows, self.denom = rows, denom

    @classmethod
    def of(cls, m: PolyMatrix) -> "_IntImage":
        denom = 1
        for row in m.rows:
            for x in row.values():
                for c in x.terms.values():
                    for q in c.coeffs:
                        denom = denom * q.denominator // math.gcd(denom, q.denominator)
        b = cls.BITS
        nvars = m.template.num_vars + (1 if m.template.has_T else 0)
        rows = []
        for row in m.rows:
            out = {}
            for j, x in row.items():
                entry = {}
                for e, c in x.terms.items():
                    key = 0
                    for k in reversed(e):
                        key = (key << b) | k
                    key <<= b
                    for zpow, q in enumerate(c.coeffs):
                        if q:
                            entry[key | zpow] = int(q * denom)
                out[j] = entry
            rows.append(out)
        return cls(m.size, m.template.order, b, nvars, rows, denom)

    def matmul(self, other: "_IntImage") -> "_IntImage":
        rows = []
        other_rows = other.rows
        for row in self.rows:
            acc_row: dict = {}
            for k, a in row.items():
                for j, b in other_rows[k].items():
                    acc = acc_row.get(j)
                    if acc is None:
                        acc = acc_row[j] = {}
                    get = acc.get
                    for e1, c1 in a.items():
                        for e2, c2 in b.items():
                            e = e1 + e2
                            acc[e] = get(e, 0) + c1 * c2
            clean = {}
            for j, acc in acc_row.items():
                entry = {e: c for e, c in acc.items() if c}
                if entry:
                    clean[j] = entry
            rows.append(clean)
        return _IntImage(self.size, self.order, self.width, self.nvars, rows,
                         self.denom * other.denom)

    def power(self, k: int) -> "_IntImage":
        result = self
        for _ in range(k - 1):
            result = result.matmul(self)
        return result

    def to_poly_matrix(self, template: MultiPoly) -> PolyMatrix:
        b = self.width
        mask = (1 << b) - 1
        phi = cyclotomic_polynomial(self.order)
        deg = len(phi) - 1
        out = PolyMatrix(self.size, template)
        for i, row in enumerate(self.rows):
            for j, entry in row.items():
                grouped: dict = {}
                for key, c in entry.items():
                    zs = grouped.setdefault(key >> b, {})
                    zpow = key & mask
                    zs[zpow] = zs.get(zpow, 0) + c
                terms = {}
                for rest, zs in grouped.items():
                    ints = _reduce_ints(zs, phi, deg)
                    if not any(ints):
                        continue
                    exps = []
                    for _ in range(self.nvars):
                        exps.append(rest & mask)
                        rest >>= b
                    terms[tuple(exps)] = CycloScalar._raw(
                        self.order, tuple(Fraction(v, self.denom) for v in ints))
                if terms:
                    out.rows[i][j] = MultiPoly._from_clean(template, terms)
        return out


def _reduce_ints(zs: dict, phi, deg: int) -> list[int]:
    """Integer polynomial in z (as {power: coeff}) modulo the monic Phi_d."""
    top = max(zs)
    poly = [0] * max(top + 1, deg)
    for k, c in zs.items():
        poly[k] += c
    for k in range(top, deg - 1, -1):
        c = poly[k]
        if c:
            shift = k - deg
            for t in range(deg):
                if phi[t]:
                    poly[shift + t] -= c * phi[t]
    return poly[:deg]


def symbolic_determinant(m: PolyMatrix) -> MultiPoly:
    """Exact determinant by row expansion memoized over used-column sets.

    Cost is about 2^size * size entry products; meant for size <= 12.
    """
    n = m.size
    one = MultiPoly.constant(1, m.template.num_vars, **m.template.ring())
    layer = {0: one}
    for r in range(n):
        nxt: dict = {}
        for mask, val in layer.items():
            for c, entry in m.rows[r].items():
                bit = 1 << c
                if mask & bit:
                    continue
                # inversions contributed: earlier rows already sitting in larger columns
                inversions = bin(mask >> (c + 1)).count("1")
                term = val * entry
                if inversions & 1:
                    term = -term
                key = mask | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        layer = {k: v for k, v in nxt.items() if v}
        if not layer:
            return m.template
    return layer.get((1 << n) - 1, m.template)
