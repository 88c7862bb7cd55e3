import random

from relulrich.polyring import MultiPoly, monomials_of_degree


def random_form(rng: random.Random, num_vars: int, n: int, *, order: int = 1,
                lo: int = -4, hi: int = 4, nonzero: bool = True) -> MultiPoly:
    while True:
        p = MultiPoly.zero(num_vars, order=order)
        for e in monomials_of_degree(num_vars, n):
            c = rng.randint(lo, hi)
            if c:
                p = p + MultiPoly.monomial(e, c, order=order)
        if p or not nonzero:
            return p


def poly_to_dict(p: MultiPoly) -> dict:
    return {e: c.to_fraction() for e, c in p.terms.items()}
