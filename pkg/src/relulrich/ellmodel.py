"""Pole-order model of an elliptic curve y^2 = x^3 + A x + B.

H^0(D, O(k*O)) for the point at infinity O has basis x^a y^b with b <= 1 and
pole order 2a + 3b <= k.  A function-field element is a dict mapping
``(a, b)`` to a rational coefficient, always kept with b <= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .gradedgeom import NotInImage
from .linear import NotInSpan, combination_of_inputs, complement_positions, rref


class SingularCurve(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassCurve:
    A: Fraction
    B: Fraction

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))
        if self.discriminant == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.A}x + {self.B} is singular")

    @property
    def discriminant(self) -> Fraction:
        # up to the conventional factor -16
        return 4 * self.A ** 3 + 27 * self.B ** 2

    def __str__(self):
        return f"y^2 = x^3 + ({self.A})*x + ({self.B})"


def pole_order(mono: tuple[int, int]) -> int:
    a, b = mono
    return 2 * a + 3 * b


def pole_basis(c: WeierstrassCurve, k: int) -> list[tuple[int, int]]:
    """Monomials x^a y^b (b <= 1) with pole order at most k, by increasing pole order."""
    if k < 0:
        return []
    out = [(a, b) for b in (0, 1) for a in range(k // 2 + 1) if 2 * a + 3 * b <= k]
    out.sort(key=lambda m: (pole_order(m), m[1]))
    return out


def _add_into(acc, mono, coeff):
    v = acc.get(mono, 0) + coeff
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


def ell_multiply(c: WeierstrassCurve, f: dict, g: dict) -> dict:
    """Product of two reduced elements, reduced again with y^2 = x^3 + A x + B."""
    out: dict = {}
    for (a1, b1), c1 in f.items():
        for (a2, b2), c2 in g.items():
            a, b = a1 + a2, b1 + b2
            coeff = Fraction(c1) * c2
            if b < 2:
                _add_into(out, (a, b), coeff)
            else:
                _add_into(out, (a + 3, 0), coeff)
                _add_into(out, (a + 1, 0), coeff * c.A)
                _add_into(out, (a, 0), coeff * c.B)
    return out


def format_element(f: dict) -> str:
    if not f:
        return "0"
    parts = []
    for mono in sorted(f, key=lambda m: (-pole_order(m), -m[1])):
        coeff = f[mono]
        a, b = mono
        names = ([f"x^{a}" if a > 1 else "x"] if a else []) + (["y"] if b else [])
        body = "*".join(names)
        mag = abs(coeff)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not parts:
            parts.append(text if coeff > 0 else f"-{text}")
        else:
            parts.append(f"+ {text}" if coeff > 0 else f"- {text}")
    return " ".join(parts)


@dataclass
class EllipticImage:
    curve: WeierstrassCurve
    k: int
    fold: int
    source: list[tuple[int, int]]
    target: list[tuple[int, int]]
    products: list[tuple[int, ...]]
    image_dim: int
    cokernel: list[tuple[int, int]]
    space: object

    @property
    def target_dim(self) -> int:
        return len(self.target)

    @property
    def surjective(self) -> bool:
        return self.image_dim == self.target_dim


def _product_rows(c, source, target, products):
    index = {mono: i for i, mono in enumerate(target)}
    rows = []
    for prod in products:
        f = {source[prod[0]]: Fraction(1)}
        for i in prod[1:]:
            f = ell_multiply(c, f, {source[i]: Fraction(1)})
        row = [Fraction(0)] * len(target)
        for mono, coeff in f.items():
            row[index[mono]] = coeff
        rows.append(row)
    return rows


def multmap_image_ell(c: WeierstrassCurve, k: int = 2, m: int = 2, *,
                      track: bool = False) -> EllipticImage:
    """Image of H^0(L)^{(x) m} -> H^0(L^m) for L = O(k*O).

    Returns the image dimension and monomials spanning a complement (the cokernel).
    """
    source = pole_basis(c, k)
    target = pole_basis(c, m * k)
    products = list(combinations_with_replacement(range(len(source)), m))
    space, r = rref(_product_rows(c, source, target, products), track=track)
    space.ambient_dim = len(target)
    cokernel = [target[j] for j in complement_positions(space)]
    return EllipticImage(c, k, m, source, target, products, r, cokernel, space)


def decompose_ell(c: WeierstrassCurve, s: dict, k: int = 2, d: int = 2) -> list[tuple[dict, ...]]:
    """Express s in H^0(O(dk*O)) as a sum of d-fold products of H^0(O(k*O)) elements.

    Raises :class:`NotInImage` when s lies outside the image; with k = 2, d = 2
    this happens exactly when s has a nonzero y-coefficient.
    """
    img = multmap_image_ell(c, k, d, track=True)
    index = {mono: i for i, mono in enumerate(img.target)}
    vec = [Fraction(0)] * img.target_dim
    for mono, coeff in s.items():
        if mono not in index:
            raise ValueError(f"x^{mono[0]} y^{mono[1]} has pole order above {d * k}")
        vec[index[mono]] = Fraction(coeff)
    try:
        coeffs = combination_of_inputs(img.space, vec)
    except NotInSpan:
        raise NotInImage(
            f"{format_element(s)} is not in the image of the {d}-fold multiplication map "
            f"on the degree-{k} bundle (image dim {img.image_dim} of {img.target_dim}; "
            f"cokernel spanned by {', '.join(format_element({m: 1}) for m in img.cokernel)})"
        ) from None
    terms = []
    for prod, coeff in zip(img.products, coeffs):
        if coeff:
            factors = [{img.source[i]: Fraction(1)} for i in prod]
            factors[0] = {img.source[prod[0]]: coeff}
            terms.append(tuple(factors))
    return terms


def basis_generates(c: WeierstrassCurve, k: int = 2) -> bool:
    """Global generation of O(k*O), checked at the level of the pole basis.

    The constant 1 is a unit away from O, and the element of top pole order is
    a local generator at O (its pole order is exactly k, which needs k != 1).
    """
    basis = pole_basis(c, k)
    if (0, 0) not in basis:
        return False
    return any(pole_order(m) == k for m in basis)


def elliptic_report(c: WeierstrassCurve) -> dict:
    b2 = pole_basis(c, 2)
    b4 = pole_basis(c, 4)
    img = multmap_image_ell(c, 2, 2)
    y_section = {(0, 1): Fraction(1)}
    try:
        decompose_ell(c, y_section)
        verdict = "InImage"
    except NotInImage:
        verdict = "NotInImage"
    return {
        "curve": {"A": str(c.A), "B": str(c.B)},
        "pole_basis_2": [format_element({m: 1}) for m in b2],
        "pole_basis_4": [format_element({m: 1}) for m in b4],
        "globally_generated": basis_generates(c, 2),
        "image_dim": img.image_dim,
        "target_dim": img.target_dim,
        "surjective": img.surjective,
        "cokernel": [format_element({m: 1}) for m in img.cokernel],
        "branch_y_verdict": verdict,
    }
