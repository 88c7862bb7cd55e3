import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_form
from oracles import clifford_dense, close, leibniz_det, scalar_to_complex
from relulrich.ellmodel import WeierstrassCurve
from relulrich.exactfield import CycloScalar
from relulrich.gradedgeom import (BaseVariety, DegreeMismatch, NotInImage, ProductDecomposition,
                                  decompose_in_image)
from relulrich.matfac import (DET_EVAL_MAX, DET_IMPLIED, AllSamplesSingular, EmptyDecomposition, MatrixRoot,
                              UlrichCertificate, UnsupportedBase, block_invariant_failures,
                              clifford_root, cyclic_root, determinant_check, double_cover_mf,
                              ulrich_certificate, verify_certificate, verify_root)
from relulrich.polymatrix import PolyMatrix, symbolic_determinant
from relulrich.polyring import MultiPoly, parse_poly

P1, P2 = BaseVariety.projective_space(1), BaseVariety.projective_space(2)


def forms(*texts, num_vars=2):
    return [parse_poly(t, num_vars) for t in texts]


def random_dec(rng, d, r, num_vars, n=1):
    return ProductDecomposition(d, n, [tuple(random_form(rng, num_vars, n) for _ in range(d))
                                       for _ in range(r)])


# -- cyclic roots

def test_cyclic_root_d2():
    a, b = forms("x0", "x1")
    root = cyclic_root([a, b])
    assert root.matrix.to_strings() == [["0", "x0"], ["x1", "0"]]
    assert root.check()


def test_cyclic_root_d3(rng):
    fs = [random_form(rng, 3, 1) for _ in range(3)]
    assert cyclic_root(fs).check()
    x = parse_poly("x0", 2)
    root = cyclic_root([x, x, x])
    assert root.matrix.power(3).deviation_from_scalar(x * x * x) == []


def test_cyclic_root_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        cyclic_root(forms("x0", "x1^2"))


# -- clifford roots

CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (5, 1)]


@pytest.mark.parametrize("d, r", CASES)
def test_clifford_identity_and_blocks(d, r, rng):
    q = clifford_root(random_dec(rng, d, r, rng.choice([2, 3])))
    assert q.size == d ** (r + 1)
    assert q.ulrich_rank == d ** r
    rep = verify_root(q)
    assert rep.ok, rep.summary()
    assert block_invariant_failures(q) == []


def a_order(term):
    return term[0].order


@pytest.mark.parametrize("d, r", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)])
def test_clifford_layout_matches_kronecker_oracle(d, r, rng):
    nv = 3
    dec = random_dec(rng, d, r, nv)
    q = clifford_root(dec)
    point = [CycloScalar.rational(Fraction(rng.randint(-5, 5), rng.randint(1, 3)), d)
             for _ in range(nv + 1)]
    t_val = complex(float(point[-1].to_fraction()))
    term_vals = []
    for term in dec.terms:
        pt = [CycloScalar.rational(x.to_fraction(), a_order(term)) for x in point[:nv]]
        vals = [complex(float(a.evaluate(pt).to_fraction())) for a in term]
        vals[0] = -vals[0]
        term_vals.append(vals)
    dense = clifford_dense(d, t_val, term_vals)
    ours = q.matrix.evaluate(point)
    for i in range(q.size):
        for j in range(q.size):
            assert close(scalar_to_complex(ours[i][j].coeffs, d), dense[i][j])


def test_sum_of_squares_on_p1_stays_rational():
    dec = ProductDecomposition(2, 1, [tuple(forms("x0", "x0")), tuple(forms("x1", "x1"))])
    q = clifford_root(dec)
    assert q.size == 8
    assert q.target == parse_poly("T^2 - x0^2 - x1^2", 2, has_T=True, order=2)
    assert all(c.is_rational() for _, _, e in q.matrix.nonzero() for c in e.terms.values())
    assert verify_root(q).ok


def test_d3_r1_size9():
    dec = ProductDecomposition(3, 1, [tuple(forms("x0", "x1", "x0 + x1"))])
    q = clifford_root(dec)
    assert q.size == 9 and q.order == 3
    assert verify_root(q).ok


def test_empty_decomposition():
    with pytest.raises(EmptyDecomposition):
        clifford_root(ProductDecomposition(2, 1, []))


# -- double cover

def test_double_cover_pair(rng):
    for nv in (2, 3):
        for _ in range(5):
            a, b = random_form(rng, nv, 1), random_form(rng, nv, 1)
            q = double_cover_mf(a, b)
            assert q.size == 2 and q.ulrich_rank == 1
            assert verify_root(q).ok
            assert q.target == (MultiPoly.T(nv, 1, 2) ** 2 - (a * b).lift(2).with_T(1))


def test_double_cover_degenerate():
    x = parse_poly("x0", 2)
    q = double_cover_mf(x, MultiPoly.zero(2))
    rep = verify_root(q)
    assert rep.ok and any("degenerate" in n for n in rep.notes)
    q = double_cover_mf(x, x)
    assert q.target == parse_poly("T^2 - x0^2", 2, has_T=True, order=2)


def test_double_cover_mismatch():
    with pytest.raises(DegreeMismatch):
        double_cover_mf(*forms("x0", "x1^2"))


# -- verification is independent of construction

def hand_root(a, b):
    """[[T, a], [-b, -T]] squares to (T^2 - ab) I."""
    nv = a.num_vars
    T = MultiPoly.T(nv, 1, 2)
    a2, b2 = a.lift(2).with_T(1), b.lift(2).with_T(1)
    m = PolyMatrix.from_dense([[T, a2], [-b2, -T]], T)
    return MatrixRoot(2, 1, 2, nv, T * T - a2 * b2, [m], 1, "external")


def test_verify_accepts_external_root(rng):
    a, b = random_form(rng, 3, 1), random_form(rng, 3, 1)
    q = hand_root(a, b)
    assert verify_root(q).ok
    det = determinant_check(q, 5)
    assert det.ok and det.scalar == -1 and det.symbolic


def test_verify_rejects_bad_shape():
    a, b = forms("x0", "x1")
    q = hand_root(a, b)
    q.matrix[0, 1] = q.matrix[0, 1] + parse_poly("x0^2", 2, has_T=True, order=2)
    rep = verify_root(q)
    assert not rep.shape_ok
    assert [(v.row, v.col) for v in rep.violations if v.kind == "shape"] == [(0, 1)]
    assert rep.exit_code == 2


def test_shape_only_violation_exit_code():
    # x0*x1*T entries: wrong shape but the 1x1 identity still holds
    T = MultiPoly.T(2, 1, 1)
    bad = PolyMatrix.from_dense([[T.scale(2)]], T)
    q = MatrixRoot(1, 1, 1, 2, T.scale(2), [bad], 0, "external")
    assert verify_root(q).ok
    weird = parse_poly("x0*T", 2, has_T=True)
    q = MatrixRoot(1, 1, 1, 2, weird, [PolyMatrix.from_dense([[weird]], T)], 0, "external")
    rep = verify_root(q)
    assert rep.identity_ok and not rep.shape_ok and rep.exit_code == 2


def test_fault_on_x0_pinpointed(rng):
    q = clifford_root(random_dec(rng, 2, 2, 3))
    q.matrix[3, 5] = q.matrix[3, 5] + parse_poly("x0", 3, has_T=True, order=2)
    rep = verify_root(q)
    assert not rep.identity_ok
    assert rep.suspects == [(3, 5)]


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_random_single_faults_are_localized(seed):
    rng = random.Random(seed)
    d, r = rng.choice([(2, 1), (2, 2), (3, 1), (2, 3), (4, 1)])
    nv = rng.choice([2, 3])
    q = clifford_root(random_dec(rng, d, r, nv))
    i, j = rng.randrange(q.size), rng.randrange(q.size)
    pert = random_form(rng, nv, 1, order=q.order).with_T(1)
    if rng.random() < 0.3:
        pert = pert + MultiPoly.T(nv, 1, q.order).scale(rng.randint(1, 3))
    q.matrix[i, j] = q.matrix[i, j] + pert
    rep = verify_root(q, seed=seed)
    assert not rep.identity_ok
    assert rep.suspects == [(i, j)]


# -- determinants

def test_symbolic_det_size4_equals_square(rng):
    a, b = random_form(rng, 3, 1), random_form(rng, 3, 1)
    q = clifford_root(ProductDecomposition(2, 1, [(a, b)]))
    det = symbolic_determinant(q.matrix)
    assert det == q.target ** 2
    rep = determinant_check(q, 5)
    assert rep.ok and rep.symbolic and rep.exponent == 2


def test_symbolic_det_matches_leibniz(rng):
    q = clifford_root(random_dec(rng, 2, 1, 2))
    det = symbolic_determinant(q.matrix)
    for _ in range(3):
        pt = [CycloScalar.rational(rng.randint(-5, 5), 2) for _ in range(3)]
        assert det.evaluate(pt) == leibniz_det(q.matrix.evaluate(pt))


def test_double_cover_det_is_target(rng):
    q = double_cover_mf(random_form(rng, 2, 1), random_form(rng, 2, 1))
    for b in q.factors:
        assert symbolic_determinant(b) == q.target
    assert determinant_check(q, 5).exponent == 1


def test_det_size9_by_evaluation_and_symbolic(rng):
    q = clifford_root(random_dec(rng, 3, 1, 3))
    rep = determinant_check(q, 5)
    assert rep.ok and rep.exponent == 3 and rep.samples == 5 and rep.symbolic


@pytest.mark.parametrize("d, r", [(2, 3), (3, 2), (4, 1), (5, 1)])
def test_det_by_evaluation_large(d, r, rng):
    rep = determinant_check(clifford_root(random_dec(rng, d, r, 3)), 5)
    assert rep.ok and not rep.symbolic and rep.exponent == d ** r


def test_all_samples_singular():
    T = MultiPoly.T(2, 1, 2)
    zero = PolyMatrix(2, T)
    q = MatrixRoot(2, 1, 2, 2, MultiPoly.zero(2, has_T=True, weight_n=1, order=2), [zero])
    assert verify_root(q).identity_ok
    with pytest.raises(AllSamplesSingular):
        determinant_check(q, 3)
    with pytest.raises(ValueError):
        determinant_check(q, 0)


def test_det_detects_wrong_factor():
    a, b = forms("x0", "x1")
    q = double_cover_mf(a, b)
    q.factors[1] = q.factors[0]
    assert not determinant_check(q, 5).ok or not verify_root(q).ok


# -- certificates

def test_certificate_p2():
    cert = ulrich_certificate(P2, 1, 2, parse_poly("x0^2 + x1*x2", 3))
    assert cert.verified and cert.rank == 4 and cert.root.size == 8
    assert cert.rank * cert.d == cert.root.size


def test_certificate_p1_double_cover():
    cert = ulrich_certificate(P1, 1, 2, parse_poly("x0*x1", 2))
    assert cert.verified and cert.rank == 1 and cert.root.construction == "double_cover"
    generic = ulrich_certificate(P1, 1, 2, parse_poly("x0*x1", 2), specialize=False)
    assert generic.rank == 2


def test_certificate_elliptic_counterexample():
    c = WeierstrassCurve(-1, 1)
    with pytest.raises(NotInImage):
        ulrich_certificate(c, 2, 2, {(0, 1): 1})
    with pytest.raises(UnsupportedBase):
        ulrich_certificate(c, 2, 2, {(2, 0): 1})


def test_certificate_zero_branch_flagged():
    cert = ulrich_certificate(P1, 1, 2, MultiPoly.zero(2))
    assert cert.verified
    assert any("degenerate" in line for line in cert.log)


@pytest.mark.parametrize("d", [2, 3])
def test_certificate_rank_law(d, rng):
    for _ in range(3):
        s = random_form(rng, 3, d)
        cert = ulrich_certificate(P2, 1, d, s, specialize=False)
        assert cert.rank == d ** len(cert.decomposition.terms)


def test_certificate_json_round_trip(rng):
    s = random_form(rng, 3, 3)
    cert = ulrich_certificate(P2, 1, 3, s)
    text = json.dumps(cert.to_json())
    back = UlrichCertificate.from_json(json.loads(text))
    report, det, ok = verify_certificate(back)
    assert report.ok and ok
    assert back.root.size > DET_EVAL_MAX and det is None
    assert DET_IMPLIED in "\n".join(back.log)
    assert back.root.to_json() == cert.root.to_json()


def test_certificate_on_quadric(rng):
    v = BaseVariety.complete_intersection(3, ["x0*x3 - x1*x2"])
    s = random_form(rng, 4, 2)
    cert = ulrich_certificate(v, 1, 2, s)
    assert cert.verified
    assert any("modulo" in line for line in cert.log)


def test_certificate_tampered_decomposition_fails_reverify(rng):
    cert = ulrich_certificate(P2, 1, 2, parse_poly("x0^2 + x1*x2", 3))
    data = cert.to_json()
    data["branch"] = "x0^2 + 2*x1*x2"
    _, _, ok = verify_certificate(UlrichCertificate.from_json(data))
    assert not ok


def test_root_json_format(rng):
    q = clifford_root(ProductDecomposition(2, 1, [tuple(forms("x0", "x1"))]))
    data = q.to_json()
    assert data["format_version"] == "1"
    assert (data["d"], data["size"], data["n"], data["field_order"]) == (2, 4, 1, 2)
    assert data["target"] == "T^2 - x0*x1"
    assert MatrixRoot.from_json(data).matrix == q.matrix


def test_decomposition_feeds_root(rng):
    s = random_form(rng, 3, 2)
    dec = decompose_in_image(P2, 1, 2, s)
    q = clifford_root(dec)
    assert q.target == MultiPoly.T(3, 1, 2) ** 2 - s.lift(2).with_T(1)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_integer_power_path_matches_plain_products(seed):
    rng = random.Random(seed)
    d = rng.choice([2, 3, 4])
    q = clifford_root(random_dec(rng, d, 1, 2)).matrix
    half = q.scale(Fraction(1, rng.randint(1, 4)))
    plain = half
    for _ in range(d - 1):
        plain = plain @ half
    assert half.power(d) == plain
    assert half.chain(q, half) == half @ q @ half
