"""Graded pieces of the coordinate rings of P^N and of complete intersections.

Everything is degreewise linear algebra: the degree-n piece of the ideal is
spanned by ``monomial * f_i``, the quotient basis is the set of graded-lex
earliest monomials independent modulo that span, and reduction is projection
along the ideal piece.  No Groebner bases are involved.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .exactfield import CycloScalar
from .linear import NotInSpan, Subspace, combination_of_inputs, rref
from .polyring import Exponents, MultiPoly, monomials_of_degree, parse_poly


class DegreeNegative(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class NotInImage(ValueError):
    """The branch section is not in the image of the d-fold multiplication map."""


class MixedDegrees(ValueError):
    pass


class InvalidVariety(ValueError):
    pass


@dataclass(frozen=True)
class BaseVariety:
    """P^N, or the complete intersection in P^N cut out by ``forms``."""

    N: int
    forms: tuple[MultiPoly, ...] = ()

    def __post_init__(self):
        if self.N < 1:
            raise InvalidVariety(f"P^{self.N} is not allowed; need N >= 1")
        for f in self.forms:
            if f.num_vars != self.N + 1 or f.has_T:
                raise InvalidVariety(f"form {f} is not in x0..x{self.N}")
            if not f or not f.is_homogeneous():
                raise InvalidVariety(f"form {f} is not a nonzero homogeneous polynomial")
        if len(self.forms) > self.N - 1:
            raise InvalidVariety(
                f"{len(self.forms)} forms in P^{self.N} leave dimension < 1")

    @property
    def kind(self) -> str:
        return "CI" if self.forms else "P"

    @property
    def num_vars(self) -> int:
        return self.N + 1

    @property
    def form_degrees(self) -> tuple[int, ...]:
        return tuple(f.degree() for f in self.forms)

    @classmethod
    def projective_space(cls, N: int) -> "BaseVariety":
        return cls(N)

    @classmethod
    def complete_intersection(cls, N: int, forms: Sequence[str | MultiPoly]) -> "BaseVariety":
        parsed = tuple(
            f if isinstance(f, MultiPoly) else parse_poly(f, N + 1, has_T=False, homogeneous=True)
            for f in forms)
        return cls(N, parsed)

    @classmethod
    def from_json(cls, data: dict) -> "BaseVariety":
        kind = data.get("kind")
        if kind == "P":
            return cls.projective_space(int(data["N"]))
        if kind == "CI":
            return cls.complete_intersection(int(data["N"]), data["forms"])
        raise InvalidVariety(f"unknown base kind {kind!r}")

    def to_json(self) -> dict:
        if not self.forms:
            return {"kind": "P", "N": self.N}
        return {"kind": "CI", "N": self.N, "forms": [str(f) for f in self.forms]}

    def __str__(self):
        if not self.forms:
            return f"P^{self.N}"
        return f"V({', '.join(map(str, self.forms))}) in P^{self.N}"


@dataclass
class GradedPiece:
    """Degree-n piece of the homogeneous coordinate ring of ``variety``."""

    variety: BaseVariety
    degree: int
    order: int
    monomials: list[Exponents]
    basis: list[Exponents]
    ideal: Subspace = field(repr=False)
    _index: dict = field(repr=False, default_factory=dict)
    _basis_pos: list[int] = field(repr=False, default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ideal_dim(self) -> int:
        return self.ideal.dim

    def vector(self, p: MultiPoly) -> list:
        """Coefficients of a degree-n polynomial on all degree-n monomials."""
        zero = CycloScalar.zero(self.order)
        vec = [zero] * len(self.monomials)
        for e, c in p.terms.items():
            if sum(e) != self.degree:
                raise DegreeMismatch(f"{p} is not of degree {self.degree}")
            vec[self._index[e]] = c
        return vec

    def reduce_vector(self, vec: Sequence) -> list:
        """Project a monomial-coordinate vector along the ideal; return basis coordinates."""
        m = len(self.monomials)
        # the ideal is stored with columns reversed so pivots sit on the latest monomials
        rev = list(reversed(vec))
        for row, p in zip(self.ideal.basis, self.ideal.pivots):
            c = rev[p]
            if c:
                for j in range(p, m):
                    if row[j]:
                        rev[j] = rev[j] - c * row[j]
        vec = list(reversed(rev))
        return [vec[i] for i in self._basis_pos]

    def reduce(self, p: MultiPoly) -> list:
        if p.has_T:
            raise DegreeMismatch("cannot reduce a polynomial involving T")
        if p.order != self.order:
            p = p.lift(self.order)
        return self.reduce_vector(self.vector(p))

    def reduce_monomial(self, e: Exponents) -> list:
        zero = CycloScalar.zero(self.order)
        vec = [zero] * len(self.monomials)
        vec[self._index[e]] = CycloScalar.one(self.order)
        return self.reduce_vector(vec)

    def element(self, coords: Sequence) -> MultiPoly:
        """The polynomial with the given coordinates on the basis monomials."""
        return MultiPoly(self.variety.num_vars,
                         {e: c for e, c in zip(self.basis, coords) if c}, order=self.order)

    def basis_poly(self, i: int) -> MultiPoly:
        return MultiPoly.monomial(self.basis[i], 1, order=self.order)


@functools.lru_cache(maxsize=256)
def quotient_basis(v: BaseVariety, n: int, order: int = 1) -> GradedPiece:
    """Basis and reduction data for H^0(Z, O(n)|_Z) as the degree-n quotient piece."""
    if n < 0:
        raise DegreeNegative(f"degree {n} < 0")
    monos = monomials_of_degree(v.num_vars, n)
    index = {e: i for i, e in enumerate(monos)}
    m = len(monos)
    zero = CycloScalar.zero(order)
    gens = []
    for f in v.forms:
        a = f.degree()
        if a > n:
            continue
        f = f.lift(order)
        for mu in monomials_of_degree(v.num_vars, n - a):
            row = [zero] * m
            for e, c in f.terms.items():
                row[m - 1 - index[tuple(x + y for x, y in zip(e, mu))]] = c
            gens.append(row)
    ideal, _ = rref(gens, zero=zero) if gens else (Subspace(m, [], [], zero), 0)
    ideal.ambient_dim = m
    taken = {m - 1 - p for p in ideal.pivots}
    basis_pos = [i for i in range(m) if i not in taken]
    return GradedPiece(v, n, order, monos, [monos[i] for i in basis_pos], ideal,
                       index, basis_pos)


@dataclass
class MultMapImage:
    source: GradedPiece
    target: GradedPiece
    fold: int
    products: list[tuple[int, ...]]
    subspace: Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def is_surjective(self) -> bool:
        return self.subspace.dim == self.target.dim


def multmap_image(v: BaseVariety, n: int, m: int, *, order: int = 1,
                  track: bool = False) -> MultMapImage:
    """Image of H^0(O(n)|_Z)^{(x) m} -> H^0(O(mn)|_Z).

    The map is multilinear and symmetric, so its image is spanned by the
    products of m-multisets of basis monomials.
    """
    if m < 1:
        raise ValueError(f"fold {m} < 1")
    source = quotient_basis(v, n, order)
    target = quotient_basis(v, m * n, order)
    products = list(combinations_with_replacement(range(source.dim), m))
    rows = []
    for prod in products:
        e = tuple(map(sum, zip(*(source.basis[i] for i in prod)))) if n else (0,) * v.num_vars
        rows.append(target.reduce_monomial(e))
    zero = CycloScalar.zero(order)
    if rows and target.dim:
        space, _ = rref(rows, track=track, zero=zero)
    else:
        space = Subspace(target.dim, [], [], zero, [] if track else None)
    return MultMapImage(source, target, m, products, space)


@dataclass(frozen=True)
class SurjectivityReport:
    surjective: bool
    image_dim: int
    target_dim: int
    ambient_dim: int

    def __str__(self):
        verdict = "surjective" if self.surjective else "NOT surjective"
        return f"{verdict}: image {self.image_dim} of {self.target_dim}"


def is_surjective(v: BaseVariety, n: int, m: int) -> SurjectivityReport:
    img = multmap_image(v, n, m)
    return SurjectivityReport(img.is_surjective(), img.dim, img.target.dim,
                              comb(v.N + m * n, v.N))


@dataclass
class ProductDecomposition:
    """s = sum_i a_i^1 * ... * a_i^d with every a_i^j a degree-n form."""

    d: int
    degree_n: int
    terms: list[tuple[MultiPoly, ...]]

    def __post_init__(self):
        for t in self.terms:
            if len(t) != self.d:
                raise DegreeMismatch(f"term of length {len(t)} in a {self.d}-fold decomposition")
            for a in t:
                if a and a.degree() != self.degree_n:
                    raise DegreeMismatch(f"factor {a} is not of degree {self.degree_n}")

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def expand(self) -> MultiPoly:
        total = None
        for t in self.terms:
            prod = t[0]
            for a in t[1:]:
                prod = prod * a
            total = prod if total is None else total + prod
        if total is None:
            raise ValueError("empty decomposition has no ring to expand in")
        return total

    def factors(self) -> list[MultiPoly]:
        seen = []
        for t in self.terms:
            for a in t:
                if a and a not in seen:
                    seen.append(a)
        return seen

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.degree_n,
                "terms": [[str(a) for a in t] for t in self.terms]}

    @classmethod
    def from_json(cls, data: dict, num_vars: int, order: int = 1) -> "ProductDecomposition":
        terms = [tuple(parse_poly(a, num_vars, has_T=False, order=order) for a in t)
                 for t in data["terms"]]
        return cls(int(data["d"]), int(data["n"]), terms)


def decompose_in_image(v: BaseVariety, n: int, d: int, s: MultiPoly) -> ProductDecomposition:
    """Write s as a sum of pure d-fold products of degree-n forms.

    The coefficient of each product is folded into its first factor.  For a
    complete intersection the expansion equals s modulo the ideal.
    Raises :class:`NotInImage` when no such expression exists.
    """
    if s.has_T or s.num_vars != v.num_vars:
        raise DegreeMismatch(f"branch section must be a form in x0..x{v.N}")
    if s and (not s.is_homogeneous() or s.degree() != d * n):
        raise DegreeMismatch(f"branch section {s} is not homogeneous of degree {d * n}")
    order = s.order
    img = multmap_image(v, n, d, order=order, track=True)
    target = img.target.reduce(s)
    try:
        coeffs = combination_of_inputs(img.subspace, target)
    except NotInSpan:
        raise NotInImage(
            f"branch section {s} is not in the image of the {d}-fold multiplication map "
            f"(image dim {img.dim} of {img.target.dim})") from None
    src = img.source
    # products sharing their trailing d-1 factors merge into one term whose
    # first factor carries the combined coefficients
    grouped: dict = {}
    for prod, c in zip(img.products, coeffs):
        if not c:
            continue
        first = src.basis_poly(prod[0]).scale(c)
        key = prod[1:]
        grouped[key] = grouped[key] + first if key in grouped else first
    terms = []
    for key, first in grouped.items():
        if first:
            terms.append((first,) + tuple(src.basis_poly(i) for i in key))
    return ProductDecomposition(d, n, terms)


@dataclass(frozen=True)
class CertifiedEmpty:
    """The ideal contains every monomial of ``degree``, so the forms share no projective zero."""

    degree: int
    span_dim: int
    piece_dim: int


@dataclass(frozen=True)
class Inconclusive:
    max_degree: int


def elimination_certificate(forms: Sequence[MultiPoly], d_max: int, *,
                            equal_degrees: bool = False) -> CertifiedEmpty | Inconclusive:
    """Search D up to ``d_max`` for a degree in which the forms generate everything."""
    forms = [f for f in forms if f]
    if not forms:
        return Inconclusive(d_max)
    num_vars = forms[0].num_vars
    degs = [f.degree() for f in forms]
    if equal_degrees and len(set(degs)) > 1:
        raise MixedDegrees(f"forms of degrees {sorted(set(degs))}")
    for D in range(min(degs), d_max + 1):
        monos = monomials_of_degree(num_vars, D)
        index = {e: i for i, e in enumerate(monos)}
        zero = CycloScalar.zero(forms[0].order)
        rows = []
        for f, a in zip(forms, degs):
            if a > D:
                continue
            for mu in monomials_of_degree(num_vars, D - a):
                row = [zero] * len(monos)
                for e, c in f.terms.items():
                    row[index[tuple(x + y for x, y in zip(e, mu))]] = c
                rows.append(row)
        if len(rows) < len(monos):
            continue
        _, r = rref(rows, zero=zero)
        if r == len(monos):
            return CertifiedEmpty(D, r, len(monos))
    return Inconclusive(d_max)


def smoothness_certificate(s: MultiPoly, d_max: int) -> CertifiedEmpty | Inconclusive:
    """Certify that V(s) is smooth: its partial derivatives have no common zero.

    In characteristic zero the Euler relation puts s in the ideal of its partials.
    """
    partials = [s.partial(i) for i in range(s.num_vars)]
    return elimination_certificate(partials, d_max)


def global_generation_certificate(dec: ProductDecomposition,
                                  d_max: int) -> CertifiedEmpty | Inconclusive:
    """Certify that the factors of a decomposition have no common zero."""
    return elimination_certificate(dec.factors(), d_max, equal_degrees=True)

