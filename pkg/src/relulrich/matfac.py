"""Matrix factorizations of T^d - s and the Ulrich certificates built from them.

Given s = sum_i a_i^1 ... a_i^d, a matrix Q with Q^d = (T^d - s) * I is
assembled from zeta-commuting tensor blocks

    E_0 = N(T, ..., T) (x) I (x) ... (x) I
    E_i = D (x) ... (x) D (x) N(-a_i^1, a_i^2, ..., a_i^d) (x) I (x) ... (x) I

where D = diag(1, zeta, ..., zeta^(d-1)) and N(b_1, ..., b_d) is the cyclic
matrix with N[j, j+1 mod d] = b_{j+1}.  Since N D = zeta D N, the blocks
satisfy E_i E_j = zeta E_j E_i for i < j, and for a primitive d-th root of
unity the power (sum E_i)^d collapses to sum E_i^d.  The cokernel of Q on the
compactified total space is an Ulrich bundle of rank size / d.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactfield import CycloScalar
from .gradedgeom import (BaseVariety, DegreeMismatch, ProductDecomposition,
                         decompose_in_image, quotient_basis)
from .linear import determinant, rref, solve_membership, NotInSpan
from .polymatrix import PolyMatrix, symbolic_determinant
from .polyring import MultiPoly, parse_poly

FORMAT_VERSION = "1"

# size cap for the memoized symbolic determinant
SYMBOLIC_DET_MAX = 9

# largest size whose determinant is evaluated numerically-exactly at sample
# points; beyond it the law follows from the root identity alone
DET_EVAL_MAX = 81

# roots up to this size are written as dense entry grids, larger ones as triplets
DENSE_JSON_MAX = 64


class EmptyDecomposition(ValueError):
    pass


class AllSamplesSingular(ValueError):
    pass


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedBase(ValueError):
    pass


def _into_entry_ring(p: MultiPoly, n: int, order: int) -> MultiPoly:
    return p.lift(order).with_T(n) if not p.has_T else p.lift(order)


@dataclass
class CyclicRoot:
    d: int
    forms: tuple[MultiPoly, ...]
    matrix: PolyMatrix

    def product(self) -> MultiPoly:
        out = self.forms[0]
        for a in self.forms[1:]:
            out = out * a
        return out

    def check(self) -> bool:
        """N^d == (a_1 ... a_d) * I."""
        return not self.matrix.power(self.d).deviation_from_scalar(self.product())


def cyclic_root(forms: Sequence[MultiPoly]) -> CyclicRoot:
    """The d x d matrix with N[j, j+1 mod d] = forms[j]; its d-th power is prod(forms) * I."""
    forms = tuple(forms)
    d = len(forms)
    if d < 1:
        raise ValueError("need at least one form")
    degs = {f.degree() for f in forms if f}
    if len(degs) > 1:
        raise DegreeMismatch(f"forms of degrees {sorted(degs)}")
    m = PolyMatrix(d, forms[0])
    for j, a in enumerate(forms):
        m[j, (j + 1) % d] = a
    return CyclicRoot(d, forms, m)


def _digits(index: int, d: int, length: int) -> list[int]:
    out = [0] * length
    for pos in range(length - 1, -1, -1):
        index, out[pos] = divmod(index, d)
    return out


def tensor_block(d: int, r: int, i: int, forms: Sequence[MultiPoly],
                 zeta_powers: Sequence[CycloScalar]) -> PolyMatrix:
    """E_i = D^{(x) i} (x) N(forms) (x) I^{(x)(r - i)} as a d^(r+1) square matrix."""
    size = d ** (r + 1)
    block = PolyMatrix(size, forms[0])
    stride = d ** (r - i)
    for row in range(size):
        digits = _digits(row, d, r + 1)
        k = digits[i]
        a = forms[k]
        if not a:
            continue
        col = row + ((k + 1) % d - k) * stride
        phase = sum(digits[:i]) % d
        block[row, col] = a if phase == 0 else a.scale(zeta_powers[phase])
    return block


@dataclass
class MatrixRoot:
    """A d-fold matrix factorization of ``target``.

    Either ``factors`` holds one matrix Q with Q^d = target * I (a matrix root),
    or d matrices B_1, ..., B_d with B_1 ... B_d = target * I.
    """

    d: int
    n: int
    order: int
    num_vars: int
    target: MultiPoly
    factors: list[PolyMatrix]
    term_count: int = 0
    construction: str = "clifford"
    blocks: list[PolyMatrix] | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.factors[0].size

    @property
    def is_root(self) -> bool:
        return len(self.factors) == 1

    @property
    def matrix(self) -> PolyMatrix:
        return self.factors[0]

    @property
    def ulrich_rank(self) -> int:
        return self.size // self.d

    def product(self) -> PolyMatrix:
        if self.is_root:
            return self.factors[0].power(self.d)
        return self.factors[0].chain(*self.factors[1:])

    def to_json(self) -> dict:
        data = {
            "format_version": FORMAT_VERSION,
            "d": self.d,
            "size": self.size,
            "n": self.n,
            "field_order": self.order,
            "num_vars": self.num_vars,
            "construction": self.construction,
            "term_count": self.term_count,
        }
        if self.is_root:
            key = "entries" if self.size <= DENSE_JSON_MAX else "entries_sparse"
            data[key] = _matrix_json(self.factors[0])
        else:
            data["factors"] = [_matrix_json(b) for b in self.factors]
        data["target"] = str(self.target)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "MatrixRoot":
        d, n, order = int(data["d"]), int(data["n"]), int(data["field_order"])
        num_vars = int(data["num_vars"])
        ring = dict(weight_n=n, order=order)
        size = int(data["size"]) if "size" in data else None
        if "entries" in data or "entries_sparse" in data:
            raw = [data.get("entries", data.get("entries_sparse"))]
        else:
            raw = data["factors"]
        factors = [_matrix_from_json(m, size, num_vars, ring) for m in raw]
        target = parse_poly(data["target"], num_vars, has_T=True, **ring)
        return cls(d, n, order, num_vars, target, factors,
                   int(data.get("term_count", 0)), data.get("construction", "external"))


def _matrix_json(m: PolyMatrix):
    if m.size <= DENSE_JSON_MAX:
        return m.to_strings()
    return [[i, j, str(x)] for i, j, x in m.nonzero()]


def _matrix_from_json(raw, size, num_vars, ring) -> PolyMatrix:
    if raw and isinstance(raw[0], list) and raw[0] and isinstance(raw[0][0], int):
        if size is None:
            raise ValueError("sparse matrix JSON needs a size")
        dense = PolyMatrix.from_strings([], num_vars, **ring)
        m = PolyMatrix(size, dense.template)
        for i, j, text in raw:
            if not (0 <= i < size and 0 <= j < size):
                raise ValueError(f"entry ({i}, {j}) outside a {size}x{size} matrix")
            m[i, j] = parse_poly(text, num_vars, has_T=True, **ring)
        return m
    m = PolyMatrix.from_strings(raw, num_vars, **ring)
    if size is not None and m.size != size:
        raise ValueError(f"matrix has {m.size} rows, expected size {size}")
    return m


def clifford_root(dec: ProductDecomposition, weight_n: int | None = None,
                  num_vars: int | None = None) -> MatrixRoot:
    """Matrix root Q of T^d - sum_i prod_j a_i^j, of size d^(r+1), over Q(zeta_d)."""
    if not dec.terms:
        raise EmptyDecomposition("decomposition has no terms")
    d = dec.d
    n = dec.degree_n if weight_n is None else weight_n
    order = d
    nz = [a for t in dec.terms for a in t]
    if num_vars is None:
        num_vars = nz[0].num_vars
    r = len(dec.terms)
    zeta = CycloScalar.zeta(order)
    zeta_powers = [zeta ** k for k in range(d)]
    T = MultiPoly.T(num_vars, n, order)

    blocks = [tensor_block(d, r, 0, [T] * d, zeta_powers)]
    target = T ** d
    for i, term in enumerate(dec.terms, start=1):
        forms = [_into_entry_ring(a, n, order) for a in term]
        forms[0] = -forms[0]
        blocks.append(tensor_block(d, r, i, forms, zeta_powers))
        prod = forms[0]
        for a in forms[1:]:
            prod = prod * a
        target = target + prod
    q = blocks[0]
    for b in blocks[1:]:
        q = q + b
    return MatrixRoot(d, n, order, num_vars, target, [q], r, "clifford", blocks)


def weyl_diagonal(d: int, template: MultiPoly) -> PolyMatrix:
    zeta = CycloScalar.zeta(d)
    one = MultiPoly.constant(1, template.num_vars, **template.ring())
    m = PolyMatrix(d, template)
    for k in range(d):
        m[k, k] = one.scale(zeta ** k)
    return m


def block_invariant_failures(q: MatrixRoot) -> list[str]:
    """Exact checks of the tensor blocks behind a Clifford root.

    E_i E_j = zeta E_j E_i for i < j, E_i^d = (signed term product) * I, and
    D^d = I.  An empty list means every check passed.
    """
    if q.blocks is None:
        raise ValueError("root carries no tensor blocks")
    zeta = CycloScalar.zeta(q.order)
    failures = []
    tmpl = q.blocks[0].template
    if weyl_diagonal(q.d, tmpl).power(q.d).deviation_from_scalar(
            MultiPoly.constant(1, tmpl.num_vars, **tmpl.ring())):
        failures.append("D^d != I")
    for i, ei in enumerate(q.blocks):
        for j in range(i + 1, len(q.blocks)):
            ej = q.blocks[j]
            if ei @ ej != (ej @ ei).scale(zeta):
                failures.append(f"E_{i} E_{j} != zeta E_{j} E_{i}")
        pw = ei.power(q.d)
        diag = pw[0, 0]
        if pw.deviation_from_scalar(diag):
            failures.append(f"E_{i}^{q.d} is not scalar")
    return failures


def double_cover_mf(a: MultiPoly, b: MultiPoly, n: int | None = None) -> MatrixRoot:
    """B1 = [[T, a], [b, T]], B2 = [[T, -a], [-b, T]]; B1 B2 = (T^2 - ab) I."""
    degs = {f.degree() for f in (a, b) if f}
    if len(degs) > 1:
        raise DegreeMismatch(f"forms of degrees {sorted(degs)}")
    if n is None:
        n = degs.pop() if degs else 1
    order = 2
    num_vars = a.num_vars
    a, b = _into_entry_ring(a, n, order), _into_entry_ring(b, n, order)
    T = MultiPoly.T(num_vars, n, order)
    b1 = PolyMatrix.from_dense([[T, a], [b, T]], T)
    b2 = PolyMatrix.from_dense([[T, -a], [-b, T]], T)
    return MatrixRoot(2, n, order, num_vars, T * T - a * b, [b1, b2], 1, "double_cover")


# -- verification

@dataclass(frozen=True)
class Violation:
    kind: str  # "identity" or "shape"
    row: int
    col: int
    detail: str
    factor: int = 0


@dataclass
class VerificationReport:
    identity_ok: bool
    shape_ok: bool
    violations: list[Violation]
    suspects: list[tuple[int, int]]
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.shape_ok

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 2

    def summary(self) -> str:
        if self.ok:
            return "PASS: identity and entry shape hold exactly"
        lines = []
        if not self.identity_ok:
            n_bad = sum(v.kind == "identity" for v in self.violations)
            lines.append(f"FAIL: product differs from target*I at {n_bad} position(s)")
            if self.suspects:
                lines.append("suspect entr" + ("y" if len(self.suspects) == 1 else "ies") + ": "
                             + ", ".join(f"({i}, {j})" for i, j in self.suspects))
        if not self.shape_ok:
            for v in self.violations:
                if v.kind == "shape":
                    lines.append(f"FAIL: entry ({v.row}, {v.col}) of factor {v.factor}: {v.detail}")
        return "\n".join(lines)


def _shape_problem(x: MultiPoly, n: int) -> str | None:
    for e, _ in x.terms.items():
        t = e[-1]
        xdeg = sum(e[:-1])
        if t == 1 and xdeg == 0:
            continue
        if t == 0 and xdeg == n:
            continue
        return f"term of T-degree {t} and x-degree {xdeg} is not alpha*T + g with deg g = {n}"
    return None


def verify_root(q: MatrixRoot, *, localize: bool = True, seed: int = 0) -> VerificationReport:
    """Check B_1 ... B_d == target * I exactly and that every entry is alpha*T + g(x)."""
    violations = []
    notes = []
    for k, b in enumerate(q.factors):
        for i, j, x in b.nonzero():
            problem = _shape_problem(x, q.n)
            if problem:
                violations.append(Violation("shape", i, j, problem, k))
    prod = q.product()
    dev = prod.deviation_from_scalar(q.target)
    for i, j, diff in dev:
        violations.append(Violation("identity", i, j, f"product - target*I = {diff}"))
    identity_ok = not dev
    shape_ok = not any(v.kind == "shape" for v in violations)
    suspects = []
    if not identity_ok and localize and q.is_root:
        suspects = locate_fault(q, prod, seed=seed)
    if not q.target:
        notes.append("degenerate: target is zero")
    elif q.target == MultiPoly.T(q.num_vars, q.n, q.order) ** q.d:
        notes.append("degenerate branch: s = 0")
    return VerificationReport(identity_ok, shape_ok, violations, suspects, notes)


def _random_point(num_vars: int, order: int, rng: random.Random) -> list[CycloScalar]:
    return [CycloScalar.rational(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), order)
            for _ in range(num_vars + 1)]


def _span_contains(gens: list[list], vecs: list[list], zero) -> bool:
    if not vecs:
        return True
    space, _ = rref(gens, zero=zero)
    space.ambient_dim = len(vecs[0])
    for v in vecs:
        try:
            solve_membership(space, v)
        except NotInSpan:
            return False
    return True


def locate_fault(q: MatrixRoot, prod: PolyMatrix | None = None, *, seed: int = 0,
                 points: int = 2) -> list[tuple[int, int]]:
    """Candidate positions for a single corrupted entry of a matrix root.

    If Q' = Q + c*e_i e_j^T with Q^d = f*I, every column of Q'^d - f*I lies
    in span{Q'^a e_i : a < d} and every row in span{e_j^T Q'^a : a < d}.
    Both conditions are tested at random points; the survivors are returned.
    """
    if prod is None:
        prod = q.product()
    qm = q.matrix
    size = qm.size
    rng = random.Random(seed)
    zero = CycloScalar.zero(q.order)
    rows_ok = set(range(size))
    cols_ok = set(range(size))
    residual = prod - PolyMatrix.identity(size, qm.template, q.target)
    for _ in range(points):
        pt = _random_point(q.num_vars, q.order, rng)
        a = qm.evaluate(pt)
        p = residual.evaluate(pt)
        prow_space, prank = rref(p, zero=zero)
        if prank == 0:
            continue
        pcols = [[p[i][j] for i in range(size)] for j in range(size)]
        pcol_space, _ = rref(pcols, zero=zero)
        col_vecs, row_vecs = pcol_space.basis, prow_space.basis
        at = [[a[i][j] for i in range(size)] for j in range(size)]
        for i in sorted(rows_ok):
            krylov = _krylov(a, i, q.d, zero)
            if not _span_contains(krylov, col_vecs, zero):
                rows_ok.discard(i)
        for j in sorted(cols_ok):
            krylov = _krylov(at, j, q.d, zero)
            if not _span_contains(krylov, row_vecs, zero):
                cols_ok.discard(j)
    candidates = [(i, j) for i in sorted(rows_ok) for j in sorted(cols_ok)]
    if len(candidates) > 1:
        # keep candidates where some single-entry correction can restore the identity
        for _ in range(points):
            pt = _random_point(q.num_vars, q.order, rng)
            a = qm.evaluate(pt)
            fv = q.target.evaluate(pt)
            candidates = [c for c in candidates if _correctable(a, fv, c, q.d, zero)]
    return candidates


def _upoly_trim(p, zero):
    while p and not p[-1]:
        p.pop()
    return p


def _upoly_gcd(a, b, zero):
    a, b = _upoly_trim(list(a), zero), _upoly_trim(list(b), zero)
    while b:
        r = list(a)
        while len(r) >= len(b):
            c = r[-1] / b[-1]
            shift = len(r) - len(b)
            for k, bk in enumerate(b):
                r[k + shift] = r[k + shift] - c * bk
            _upoly_trim(r, zero)
            if not r:
                break
        a, b = b, r
    return a


def _correctable(a, fv, pos, d, zero) -> bool:
    """Whether (A + t e_i e_j^T)^d - f I vanishes for a common root t."""
    n = len(a)
    i0, j0 = pos
    base = [[[x] if x else [] for x in row] for row in a]
    base[i0][j0] = [a[i0][j0], zero + 1]

    def mul(x, y):
        out = [[[] for _ in range(n)] for _ in range(n)]
        for r in range(n):
            for k in range(n):
                xk = x[r][k]
                if not xk:
                    continue
                for c in range(n):
                    yk = y[k][c]
                    if not yk:
                        continue
                    acc = out[r][c]
                    for u, p1 in enumerate(xk):
                        for v, p2 in enumerate(yk):
                            while len(acc) <= u + v:
                                acc.append(zero)
                            acc[u + v] = acc[u + v] + p1 * p2
        return out

    power = base
    for _ in range(d - 1):
        power = mul(power, base)
    g = None
    for r in range(n):
        for c in range(n):
            entry = list(power[r][c])
            if r == c:
                entry = entry or [zero]
                entry[0] = entry[0] - fv
            if not _upoly_trim(entry, zero):
                continue
            g = entry if g is None else _upoly_gcd(g, entry, zero)
            if len(g) == 1:
                return False
    return True


def _krylov(a, i, d, zero):
    n = len(a)
    v = [zero] * n
    v[i] = zero + 1
    out = [v]
    for _ in range(d - 1):
        v = [sum((a[r][c] * v[c] for c in range(n) if a[r][c] and v[c]), zero) for r in range(n)]
        out.append(v)
    return out


@dataclass
class DeterminantReport:
    ok: bool
    exponent: int
    scalar: CycloScalar | None
    samples: int
    symbolic: bool
    detail: str

    def to_json(self) -> dict:
        return {"ok": self.ok, "exponent": self.exponent,
                "scalar": None if self.scalar is None else str(self.scalar),
                "samples": self.samples, "symbolic": self.symbolic, "detail": self.detail}


def determinant_check(q: MatrixRoot, samples: int = 5, *, seed: int = 0,
                      symbolic: bool | None = None) -> DeterminantReport:
    """det(B_k) = c * target^(size/d) for one unit scalar c, at random points and,
    for small sizes, symbolically."""
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    exponent = q.size // q.d
    if symbolic is None:
        symbolic = q.size <= SYMBOLIC_DET_MAX
    scalar = None
    used = 0
    attempts = 0
    while used < samples:
        attempts += 1
        if attempts > 50 * samples:
            raise AllSamplesSingular("every sampled point annihilates the target")
        pt = _random_point(q.num_vars, q.order, rng)
        fv = q.target.evaluate(pt)
        if not fv:
            continue
        used += 1
        want = fv ** exponent
        for k, b in enumerate(q.factors):
            ratio = determinant(b.evaluate(pt)) / want
            if scalar is None:
                scalar = ratio
            elif ratio != scalar:
                return DeterminantReport(False, exponent, scalar, used, False,
                                         f"factor {k}: det/target^{exponent} = {ratio}, "
                                         f"expected {scalar}")
    if scalar is not None and scalar ** (2 * q.d) != 1 and not scalar.is_rational():
        return DeterminantReport(False, exponent, scalar, used, False,
                                 f"scalar {scalar} is not a unit of the expected form")
    did_symbolic = False
    if symbolic:
        power = q.target ** exponent
        for k, b in enumerate(q.factors):
            det = symbolic_determinant(b)
            if det != power.scale(scalar):
                return DeterminantReport(False, exponent, scalar, used, True,
                                         f"factor {k}: symbolic det differs from "
                                         f"{scalar} * target^{exponent}")
        did_symbolic = True
    return DeterminantReport(True, exponent, scalar, used, did_symbolic,
                             f"det = ({scalar}) * target^{exponent}")


# -- certificates

DET_IMPLIED = ("determinant: not sampled at this size; det(Q)^d = f^size forces "
               "det(Q) = u * f^(size/d) with u^d = 1 by unique factorization")

@dataclass
class UlrichCertificate:
    base: BaseVariety
    n: int
    d: int
    branch: MultiPoly
    decomposition: ProductDecomposition
    root: MatrixRoot
    rank: int
    verified: bool = False
    log: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "base": self.base.to_json(),
            "n": self.n,
            "d": self.d,
            "branch": str(self.branch),
            "decomposition": self.decomposition.to_json(),
            "root": self.root.to_json(),
            "rank": self.rank,
            "verified": self.verified,
            "log": list(self.log),
        }

    @classmethod
    def from_json(cls, data: dict) -> "UlrichCertificate":
        base = BaseVariety.from_json(data["base"])
        root = MatrixRoot.from_json(data["root"])
        dec = ProductDecomposition.from_json(data["decomposition"], base.num_vars)
        branch = parse_poly(data["branch"], base.num_vars, has_T=False)
        return cls(base, int(data["n"]), int(data["d"]), branch, dec, root,
                   int(data["rank"]), bool(data.get("verified", False)), list(data.get("log", [])))


def decomposition_matches(base: BaseVariety, dec: ProductDecomposition, s: MultiPoly) -> bool:
    """expand(dec) equals s in the degree-dn piece of the base's coordinate ring."""
    piece = quotient_basis(base, dec.d * dec.degree_n)
    if not dec.terms:
        return not any(piece.reduce(s))
    diff = dec.expand() - s
    return not any(piece.reduce(diff))


def root_from_decomposition(dec: ProductDecomposition, num_vars: int, *,
                            specialize: bool = True) -> MatrixRoot:
    if specialize and dec.d == 2 and len(dec.terms) == 1:
        a, b = dec.terms[0]
        return double_cover_mf(a, b, dec.degree_n)
    return clifford_root(dec, dec.degree_n, num_vars)


def ulrich_certificate(base, n: int, d: int, s, *, specialize: bool = True,
                       det_samples: int = 5, seed: int = 0) -> UlrichCertificate:
    """Decompose s, build the factorization, verify it, and check its determinant.

    Raises :class:`~relulrich.gradedgeom.NotInImage` when s is outside the image of the d-fold
    multiplication map, and :class:`VerificationFailed` if any check fails.
    """
    from .ellmodel import WeierstrassCurve, decompose_ell

    if isinstance(base, WeierstrassCurve):
        decompose_ell(base, s, n, d)
        raise UnsupportedBase("matrix factorizations over the elliptic pole model are not built")
    log = [f"base {base}, n = {n}, d = {d}, branch s = {s}"]
    dec = decompose_in_image(base, n, d, s)
    if not dec.terms:
        zero_form = MultiPoly.zero(base.num_vars)
        dec = ProductDecomposition(d, n, [(zero_form,) * d])
        log.append("degenerate branch: s = 0, using the zero term")
    log.append(f"decomposition with {len(dec.terms)} term(s)")
    if not decomposition_matches(base, dec, s):
        raise VerificationFailed("decomposition does not reproduce the branch section")
    log.append("decomposition expands to s exactly" if not base.forms
               else "decomposition expands to s modulo the defining ideal")
    root = root_from_decomposition(dec, base.num_vars, specialize=specialize)
    log.append(f"{root.construction} factorization of size {root.size}")
    report = verify_root(root, seed=seed)
    if not report.ok:
        raise VerificationFailed(report.summary(), report)
    log.append(("root identity Q^%d = (T^%d - s) I holds exactly" % (d, d)) if root.is_root
               else "product identity B_1 B_2 = (T^2 - s) I holds exactly")
    log.append("every entry has the form alpha*T + g with deg g = %d" % n)
    log.extend(report.notes)
    if root.size <= DET_EVAL_MAX:
        det = determinant_check(root, det_samples, seed=seed)
        if not det.ok:
            raise VerificationFailed(det.detail, det)
        log.append(f"determinant: {det.detail} ({det.samples} samples"
                   + (", symbolic)" if det.symbolic else ")"))
    else:
        log.append(DET_IMPLIED)
    rank = root.ulrich_rank
    log.append(f"relatively Ulrich bundle of rank {rank}")
    return UlrichCertificate(base, n, d, s, dec, root, rank, True, log)


def verify_certificate(cert: UlrichCertificate, *, det_samples: int = 5,
                       seed: int = 0) -> tuple[VerificationReport, DeterminantReport | None, bool]:
    """Re-check a certificate from scratch; returns (root report, det report, decomposition ok)."""
    dec_ok = decomposition_matches(cert.base, cert.decomposition, cert.branch)
    target_ok = True
    if cert.decomposition.terms and cert.root.construction != "external":
        expanded = cert.decomposition.expand()
        want = (MultiPoly.T(cert.root.num_vars, cert.n, cert.root.order) ** cert.d
                - _into_entry_ring(expanded, cert.n, cert.root.order))
        target_ok = want == cert.root.target
    report = verify_root(cert.root, seed=seed)
    det = None
    if report.ok and cert.root.size <= DET_EVAL_MAX:
        det = determinant_check(cert.root, det_samples, seed=seed)
    return report, det, dec_ok and target_ok
