import json
import random

import pytest

from qfsplit.catalog import (
    RDP_QUARTIC_F2,
    SUPERSINGULAR_QUARTICS_F2,
    SUPERSINGULAR_QUARTICS_F3,
)
from qfsplit.cartier import (
    FAMILY_GENERAL,
    FAMILY_QUARTIC,
    SIGMA_AMBIGUOUS,
    SIGMA_EQUALS_TAU,
    artin_report,
    basis,
    bundle,
    bundle_to_json,
    default_height_cap,
    descent_product,
    fedder_height_oracle,
    find_axis_line,
    height,
    krylov_matrix,
    ns_index,
    rank,
)
from qfsplit.errors import ResourceError, UsageError
from qfsplit.ffield import field
from qfsplit.polyring import Polynomial, RingConfig, delta, parse_poly, poly_pow, u_op
from qfsplit.values import is_infinite

F2 = field(2)
F3 = field(3)
R2 = RingConfig(F2, (1, 1, 1, 1))
R3 = RingConfig(F3, (1, 1, 1, 1))
R3S = RingConfig(F3, (1, 1, 1, 3))


def random_form(rng, ring):
    monos = basis(ring).monomials
    p = ring.field.p
    return Polynomial(ring, {m: rng.randrange(p) for m in monos})


# -- basis -------------------------------------------------------------------

def test_basis_sizes():
    assert basis(R3).m == 35
    assert basis(R3S).m == 39
    assert basis(RingConfig(F2, (1, 1, 1, 1, 1))).m == 126


def test_basis_complete_and_ordered():
    bas = basis(R3S)
    assert len(set(bas.monomials)) == bas.m
    assert all(R3S.weighted_degree(m) == 6 for m in bas.monomials)
    # frozen order: descending lexicographic
    assert list(bas.monomials) == sorted(bas.monomials, key=lambda t: tuple(-e for e in t))


def test_basis_order_golden():
    # serialized bundles depend on this exact layout; lock it down
    quartic = basis(R3).monomials
    assert quartic[:4] == ((4, 0, 0, 0), (3, 1, 0, 0), (3, 0, 1, 0), (3, 0, 0, 1))
    assert quartic[-1] == (0, 0, 0, 4)
    sextic = basis(R3S).monomials
    assert sextic[:3] == ((6, 0, 0, 0), (5, 1, 0, 0), (5, 0, 1, 0))
    assert sextic[-3:] == ((0, 0, 6, 0), (0, 0, 3, 1), (0, 0, 0, 2))
    assert sextic.index((1, 1, 1, 1)) == 24


# -- bundle ------------------------------------------------------------------

def test_bundle_rejects_bad_input():
    with pytest.raises(UsageError):
        bundle(Polynomial.zero(R3))
    with pytest.raises(UsageError):
        bundle(parse_poly("x^3", R3))
    with pytest.raises(UsageError):
        bundle(parse_poly("x^4 + x^3", R3))


def test_bundle_reconstructs_f():
    rng = random.Random(0)
    for _ in range(5):
        f = random_form(rng, R3)
        if f.is_zero():
            continue
        b = bundle(f)
        assert b.basis.polynomial(b.v_f) == f


def test_lambda_entries_are_u_values():
    rng = random.Random(1)
    f = random_form(rng, R3)
    b = bundle(f)
    fp2 = poly_pow(f, 1)
    for i, mono in enumerate(b.basis.monomials):
        expected = u_op(fp2 * Polynomial.monomial(R3, mono))
        if expected.is_zero():
            assert b.lam[i] == 0
        else:
            assert expected.coefficient((0, 0, 0, 0)) == b.lam[i]


def test_lambda_p2_single_nonzero_entry():
    # f^(p-2) = 1, so lambda_i = [M_i == corner monomial]
    rng = random.Random(2)
    f = random_form(rng, R2)
    b = bundle(f)
    nonzero = [i for i, v in enumerate(b.lam) if v]
    assert nonzero == [b.basis.index_of((1, 1, 1, 1))]


def test_lambda_zero_iff_fermat_like_p3():
    f = parse_poly("x^4+y^4+z^4+w^4", R3)
    assert bundle(f).lam_is_zero()


def test_T_columns_expand_u_images():
    rng = random.Random(3)
    f = random_form(rng, R3)
    b = bundle(f)
    kernel = delta(f) * poly_pow(f, 1)
    for j in (0, 7, 34):
        image = u_op(kernel * Polynomial.monomial(R3, b.basis.monomials[j]))
        expected = b.basis.coefficients(image)
        assert [b.T[i][j] for i in range(b.m)] == expected


# -- height and ns ------------------------------------------------------------

def test_fermat_heights():
    assert is_infinite(height(bundle(parse_poly("x^4+y^4+z^4+w^4", R3))))
    b5 = bundle(parse_poly("x^4+y^4+z^4+w^4", RingConfig(field(5), (1, 1, 1, 1))))
    assert height(b5) == 1


def test_catalog_quartics_supersingular_with_expected_ns():
    for entry in SUPERSINGULAR_QUARTICS_F2 + SUPERSINGULAR_QUARTICS_F3:
        b = bundle(entry.polynomial())
        assert is_infinite(height(b)), entry.name
        assert ns_index(b) == entry.expected_sigma, entry.name


def test_ns_infinite_when_height_finite():
    b = bundle(parse_poly("x^4+y^4+z^4+w^4", RingConfig(field(5), (1, 1, 1, 1))))
    ns = ns_index(b)
    assert is_infinite(ns) and ns.cap is None


def test_dictionary_consistency_random():
    rng = random.Random(4)
    for ring in (R2, R3):
        for _ in range(25):
            f = random_form(rng, ring)
            if f.is_zero():
                continue
            b = bundle(f)
            h, ns = height(b), ns_index(b)
            assert is_infinite(h) != is_infinite(ns)


def test_ns_one_iff_lambda_zero_iff_fp2_in_frobenius_power():
    from qfsplit.polyring import in_frobenius_power

    rng = random.Random(5)
    for ring in (R2, R3):
        p = ring.field.p
        for _ in range(50):
            f = random_form(rng, ring)
            if f.is_zero():
                continue
            b = bundle(f)
            lam0 = b.lam_is_zero()
            member = in_frobenius_power(poly_pow(f, p - 2), 1)
            ns1 = ns_index(b) == 1
            assert lam0 == member == ns1


def test_height_cap_recorded():
    b = bundle(parse_poly("x^4+y^4+z^4+w^4", R3))
    h = height(b, cap=5)
    assert is_infinite(h) and h.cap == 5 and not h.exact
    h_full = height(b)
    assert h_full.cap == 35 and h_full.exact


def test_coordinate_permutation_invariance():
    rng = random.Random(6)
    perms = [[1, 0, 2, 3], [3, 2, 1, 0], [2, 0, 3, 1]]
    for entry in SUPERSINGULAR_QUARTICS_F3[:3]:
        f = entry.polynomial()
        for perm in perms:
            g = f.permute_variables(perm)
            bg = bundle(g)
            assert is_infinite(height(bg))
            assert ns_index(bg) == entry.expected_sigma


def test_scaling_invariance():
    for entry in (SUPERSINGULAR_QUARTICS_F3[3], SUPERSINGULAR_QUARTICS_F3[6]):
        f = entry.polynomial()
        g = f.scaled(2)
        bg = bundle(g)
        assert is_infinite(height(bg))
        assert ns_index(bg) == entry.expected_sigma


# -- krylov matrix / rank ------------------------------------------------------

def test_krylov_rank_profile_of_sigma3_row():
    f = SUPERSINGULAR_QUARTICS_F2[0].polynomial()
    b = bundle(f)
    assert rank(krylov_matrix(b, 1), F2) == 1
    assert rank(krylov_matrix(b, 2), F2) == 2
    assert rank(krylov_matrix(b, 3), F2) == 2


def test_krylov_first_row_independent_of_c():
    rng = random.Random(7)
    f = SUPERSINGULAR_QUARTICS_F3[3].polynomial()
    b = bundle(f)
    base = krylov_matrix(b, 1)
    for _ in range(5):
        c = [rng.randrange(3) for _ in range(b.m)]
        assert krylov_matrix(b, 1, c) == base


def test_krylov_rank_invariance_under_shift():
    rng = random.Random(8)
    for entry in (SUPERSINGULAR_QUARTICS_F2[1], SUPERSINGULAR_QUARTICS_F3[4]):
        f = entry.polynomial()
        b = bundle(f)
        p = b.field.p
        for _ in range(10):
            c = [rng.randrange(p) for _ in range(b.m)]
            for n in (2, 4, 6):
                assert rank(krylov_matrix(b, n, c), b.field) == rank(
                    krylov_matrix(b, n), b.field
                )


# -- corner oracle -------------------------------------------------------------

def test_fedder_oracle_level_one_is_classical():
    # height 1 iff f^(p-1) has a nonzero corner coefficient
    f = parse_poly("x^4+y^4+z^4+w^4", RingConfig(field(5), (1, 1, 1, 1)))
    with pytest.raises(UsageError):
        fedder_height_oracle(f)  # p = 5 unsupported
    g = parse_poly("x^2y^2 + z^2w^2", R3)  # f^2 has corner coefficient 2
    assert fedder_height_oracle(g, 1) == 1
    assert height(bundle(g)) == 1
    # Fermat at p=3: the square's corner vanishes, so level 1 does not split
    fermat = parse_poly("x^4+y^4+z^4+w^4", R3)
    assert fedder_height_oracle(fermat, 1) is None


def test_fedder_oracle_agrees_with_matrix_height():
    rng = random.Random(9)
    for ring in (R2, R3):
        for _ in range(25):
            f = random_form(rng, ring)
            if f.is_zero():
                continue
            oracle = fedder_height_oracle(f, 3)
            h = height(bundle(f))
            if oracle is None:
                assert is_infinite(h) or h > 3
            else:
                assert oracle == h


def test_fedder_oracle_agrees_on_weighted_sextics():
    rng = random.Random(10)
    for p in (2, 3):
        ring = RingConfig(field(p), (1, 1, 1, 3))
        for _ in range(12):
            f = random_form(rng, ring)
            if f.is_zero():
                continue
            oracle = fedder_height_oracle(f, 2)
            h = height(bundle(f))
            if oracle is None:
                assert is_infinite(h) or h > 2
            else:
                assert oracle == h


def test_fedder_oracle_fermat_p3_not_one_split():
    f = parse_poly("x^4+y^4+z^4+w^4", R3)
    assert fedder_height_oracle(f, 3) is None  # supersingular: no finite level


def test_fedder_oracle_resource_cap():
    f = parse_poly("x^4+y^4+z^4+w^4", R3)
    with pytest.raises(ResourceError):
        fedder_height_oracle(f, 5)
    with pytest.raises(ResourceError):
        descent_product(f, 5)


# -- reports -------------------------------------------------------------------

def test_artin_report_table_rows():
    entry = SUPERSINGULAR_QUARTICS_F3[3]
    rep = artin_report(entry.polynomial())
    assert rep.family == FAMILY_QUARTIC
    assert is_infinite(rep.height) and rep.ns == 4 and rep.tau == 4
    assert rep.sigma_note == SIGMA_EQUALS_TAU


def test_artin_report_char2_line_certificate():
    entry = SUPERSINGULAR_QUARTICS_F2[4]  # sigma 7 row, line x = w = 0
    rep = artin_report(entry.polynomial(), line=entry.line)
    assert rep.tau == 7 and rep.sigma_note == SIGMA_EQUALS_TAU
    rep_no_line = artin_report(entry.polynomial())
    assert rep_no_line.sigma_note == SIGMA_AMBIGUOUS


def test_artin_report_rejects_false_line():
    f = parse_poly("x^4+y^4+z^4+w^4", R2)  # not in (x, w)
    with pytest.raises(UsageError):
        artin_report(f, line=(0, 3))


def test_artin_report_ordinary_quartic():
    f = parse_poly("x^4+y^4+z^4+w^4", RingConfig(field(5), (1, 1, 1, 1)))
    rep = artin_report(f)
    assert rep.height == 1 and is_infinite(rep.ns) and is_infinite(rep.tau)


def test_artin_report_general_family():
    ring = RingConfig(F2, (1, 1, 1, 1, 1))
    f = parse_poly("x^5+y^5+z^5+w^5+u^5", ring)
    rep = artin_report(f)
    assert rep.family == FAMILY_GENERAL and rep.tau is None
    assert rep.sigma_note == "not_applicable"


def test_find_axis_line():
    f = SUPERSINGULAR_QUARTICS_F2[0].polynomial()
    assert find_axis_line(f) == (0, 3)
    assert find_axis_line(parse_poly("x^4+y^4+z^4+w^4", R2)) is None


def test_rdp_quartic_ns_two():
    b = bundle(RDP_QUARTIC_F2.polynomial())
    assert is_infinite(height(b))
    assert ns_index(b) == 2


# -- extension fields -----------------------------------------------------------

def test_bundle_over_extension_field():
    F4 = field(2, 2)
    ring = RingConfig(F4, (1, 1, 1, 1))
    f = parse_poly("x^4 + (t)*x*y^3 + y*w^3 + z^3*w", ring)
    b = bundle(f)
    assert default_height_cap(b) == 70  # m * e, heuristic
    h = height(b)
    if is_infinite(h):
        assert not h.exact


def test_semilinear_rows_match_corner_coefficients_over_f4():
    # over any coefficient field, R_n . v_f equals the level-n corner
    # coefficient of f^(p-1) * (F(f^(p-2)) delta(f) twists); this pins the
    # direction of the Frobenius twist in the extension-field recursion
    from qfsplit.polyring import corner_coefficient, mul_bounded, prune

    F4 = field(2, 2)
    ring = RingConfig(F4, (1, 1, 1, 1))
    elems = list(F4.elements())
    rng = random.Random(12)
    monos = basis(ring).monomials
    for _ in range(8):
        f = Polynomial(ring, {m: rng.choice(elems) for m in rng.sample(monos, 8)})
        if f.is_zero() or f.weighted_degree() != 4:
            continue
        b = bundle(f)
        rows = krylov_matrix(b, 3)
        first_nonzero = None
        for n in (1, 2, 3):
            bound = 2**n
            element = mul_bounded(descent_product(f, n), prune(f, bound), bound)
            corner = (
                F4.zero if element.is_zero() else corner_coefficient(element, n)
            )
            row_dot = F4.zero
            for rv, vv in zip(rows[n - 1], b.v_f):
                row_dot = F4.add(row_dot, F4.mul(rv, vv))
            assert row_dot == corner, (str(f), n)
            if first_nonzero is None and not F4.is_zero(corner):
                first_nonzero = n
        h = height(b, cap=3)
        if first_nonzero is not None:
            assert h == first_nonzero
        else:
            assert is_infinite(h)


def test_invariants_stable_under_base_extension():
    # an equation with F_2 coefficients keeps its height/ns over F_4
    entry = SUPERSINGULAR_QUARTICS_F2[0]
    ring4 = RingConfig(field(2, 2), (1, 1, 1, 1))
    f4 = parse_poly(entry.equation, ring4)
    b4 = bundle(f4)
    assert is_infinite(height(b4))
    assert ns_index(b4) == entry.expected_sigma


# -- serialization ----------------------------------------------------------------

def test_bundle_json_document():
    f = SUPERSINGULAR_QUARTICS_F3[0].polynomial()
    b = bundle(f)
    doc = bundle_to_json(b)
    text = json.dumps(doc)  # must be JSON-serializable
    assert doc["field"] == {"p": 3, "e": 1, "modulus": None}
    assert doc["weights"] == [1, 1, 1, 1]
    assert len(doc["basis"]) == 35 and len(doc["T"]) == 35
    assert all(len(row) == 35 for row in doc["T"])
    assert doc["v_f"][doc["basis"].index([4, 0, 0, 0])] == "1"
    assert "lambda" in json.loads(text)
