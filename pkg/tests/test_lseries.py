import pytest

from schurgate.cyclotomic import CyclotomicNumber as C
from schurgate.groups import GroupElement, conjugacy_classes, make_group, tower_subgroups
from schurgate.characters import (
    faithful_characters,
    one_faithful_character,
    permutation_character,
    trivial_character,
)
from schurgate.elliptic import EllipticCurveQ, a_v
from schurgate.frobenius import EXAMPLE_F1, frobenius_datum
from schurgate.lseries import (
    SymbolicPoly,
    cube_of_quadratic_defect,
    dirichlet_partial,
    eigenvalue_multiplicities,
    element_matrix,
    field_local_factor,
    good_primes,
    identity_series_check,
    mat_mul,
    mat_pow,
    mat_trace,
    monomial_model,
    reciprocal_root_magnitudes,
    symbolic_twisted_euler_factor,
    tower_residue_degrees,
    twisted_euler_factor,
    untwisted_factor,
    _resolve_local_factor,
)

E_MINUS_X = EllipticCurveQ.from_list([0, 0, 0, -1, 0])
G21 = make_group(7, 3, 1, 2)
G63 = make_group(7, 3, 2, 2)


def order7_class(G, x=1):
    return next(c for c in conjugacy_classes(G) if c.rep == GroupElement(x, 0))


def test_monomial_model_relations():
    for G in (G21, G63, make_group(19, 3, 2, 4)):
        tau = one_faithful_character(G)
        Ma, Mb = monomial_model(G, tau)
        # defining relation b a b^-1 = a^j
        conj = mat_mul(mat_mul(Mb, Ma), mat_pow(Mb, G.pn - 1))
        assert conj == mat_pow(Ma, G.j)
        # b^{p^r} is the scalar zeta_{p^{n-r}}^w
        _, _, w = tau.provenance
        pmr = G.pn // G.pr
        scalar = C.zeta(pmr, w) if pmr > 1 else C.from_rational(1)
        eye = [[scalar if i == j else C.from_rational(0) for j in range(G.pr)] for i in range(G.pr)]
        assert mat_pow(Mb, G.pr) == eye


def test_monomial_traces_match_table():
    for G in (G21, G63):
        for tau in faithful_characters(G):
            model = monomial_model(G, tau)
            for i, c in enumerate(conjugacy_classes(G)):
                assert mat_trace(element_matrix(G, model, c.rep)) == tau.values[i]


def test_eigenvalue_multiplicities_faithful_at_a():
    tau = one_faithful_character(G63)
    mults = eigenvalue_multiplicities(tau, order7_class(G63))
    # u = 1: eigenvalues zeta_7^{1, 2, 4}
    assert mults == {1: 1, 2: 1, 4: 1}


def test_eigenvalue_multiplicities_regular_like():
    perm = permutation_character(G21, [s for s in tower_subgroups(G21) if s.label == "F1"][0])
    cls = order7_class(G21)
    mults = eigenvalue_multiplicities(perm, cls)
    assert mults == {k: 3 for k in range(7)}  # regular character of <a>


def test_untwisted_factor_example():
    f = untwisted_factor(a_v(E_MINUS_X, 5), 5)
    assert f.poly == (C.from_rational(1), C.from_rational(2), C.from_rational(5))
    assert str(f) == "1 + 2*T + 5*T^2"


def test_twisted_factor_trivial_character():
    cls = conjugacy_classes(G63)[0]
    f = twisted_euler_factor(-2, 5, trivial_character(G63), cls)
    assert f.poly == untwisted_factor(-2, 5).poly


def test_twisted_factor_degree_and_constant():
    tau = one_faithful_character(G63)
    d = frobenius_datum(EXAMPLE_F1, G63, 5)
    f = twisted_euler_factor(a_v(E_MINUS_X, 5), 5, tau, d.conj_class)
    assert f.degree == 2 * tau.degree
    assert f.poly[0] == C.from_rational(1)


def test_reciprocal_roots_have_sqrt_v_magnitude():
    import math

    tau = one_faithful_character(G63)
    d = frobenius_datum(EXAMPLE_F1, G63, 11)
    f = twisted_euler_factor(a_v(E_MINUS_X, 11), 11, tau, d.conj_class)
    for mag in reciprocal_root_magnitudes(f):
        assert abs(mag - math.sqrt(11)) < 1e-9


def test_symbolic_factor_matches_displayed_product():
    tau = one_faithful_character(G63)
    sym = symbolic_twisted_euler_factor(tau, order7_class(G63))
    a, v = SymbolicPoly.var_a(), SymbolicPoly.var_v()
    expect = [SymbolicPoly.scalar(1)]
    for t in (1, 2, 4):
        z = C.zeta(7, t)
        block = [SymbolicPoly.scalar(1), -(z * a), (z * z) * v]
        new = [SymbolicPoly.zero() for _ in range(len(expect) + 2)]
        for i, x in enumerate(expect):
            for j, y in enumerate(block):
                new[i + j] = new[i + j] + x * y
        expect = new
    assert sym == expect


def test_symbolic_factor_specializes_to_numeric():
    tau = one_faithful_character(G63)
    cls = order7_class(G63)
    sym = symbolic_twisted_euler_factor(tau, cls)
    num = twisted_euler_factor(-2, 5, tau, cls)
    assert tuple(c.evaluate(-2, 5) for c in sym) == num.poly


def test_factor_is_not_a_cube():
    tau = one_faithful_character(G63)
    sym = symbolic_twisted_euler_factor(tau, order7_class(G63))
    out = cube_of_quadratic_defect(sym)
    assert out["is_cube"] is False
    assert set(out["witness"]["first_mismatch_by_root"]) == {"1", "zeta3", "zeta3^2"}
    # numeric specializations are not cubes either
    num = [c.evaluate(-2, 5) for c in sym]
    assert cube_of_quadratic_defect(num)["is_cube"] is False


def test_cube_detector_accepts_actual_cube():
    one = C.from_rational(1)
    q = [one, C.from_rational(3), C.from_rational(-2)]
    cube = [one]
    for _ in range(3):
        new = [C.from_rational(0)] * (len(cube) + 2)
        for i, x in enumerate(cube):
            for j, y in enumerate(q):
                new[i + j] = new[i + j] + x * y
        cube = new
    assert cube_of_quadratic_defect(cube)["is_cube"] is True


def test_dirichlet_partial_x1_is_one():
    s = dirichlet_partial(E_MINUS_X, G21, trivial_character(G21), EXAMPLE_F1, 1)
    assert s.X == 1 and s.coefficient(1) == C.from_rational(1)


def test_dirichlet_partial_trivial_matches_direct():
    X = 50
    s = dirichlet_partial(E_MINUS_X, G21, trivial_character(G21), EXAMPLE_F1, X)
    goods = good_primes(E_MINUS_X, EXAMPLE_F1, G21, X)
    # a_n by direct multiplicative extension over the same good support
    an = {1: 1}
    for v in goods:
        s0, s1 = 1, a_v(E_MINUS_X, v)
        powers = {1: 1}
        k, t = 1, v
        while t <= X:
            powers[t] = s1
            k += 1
            t *= v
            s0, s1 = s1, a_v(E_MINUS_X, v) * s1 - v * s0
        for m, c in list(an.items()):
            for t, val in powers.items():
                if t > 1 and m * t <= X:
                    an[m * t] = c * val
    for n in range(1, X + 1):
        want = C.from_rational(an.get(n, 0))
        assert s.coefficient(n) == want


def test_perm_character_series_matches_pattern_route():
    """Artin formalism: Ind_H 1 twisted series equals the residue-degree route."""
    X = 40
    for label, kind, level in (("F0", "F", 0), ("K1", "K", 1), ("F1", "F", 1)):
        sub = next(s for s in tower_subgroups(G63) if s.label == label)
        perm = permutation_character(G63, sub)
        via_char = dirichlet_partial(E_MINUS_X, G63, perm, EXAMPLE_F1, X)
        local = {}
        for v in good_primes(E_MINUS_X, EXAMPLE_F1, G63, X):
            kmax = 0
            t = v
            while t <= X:
                kmax += 1
                t *= v
            datum = frobenius_datum(EXAMPLE_F1, G63, v)
            degs = tower_residue_degrees(G63, datum, kind, level)
            poly = field_local_factor(a_v(E_MINUS_X, v), v, degs, kmax)
            from schurgate.lseries import _local_expansion

            local[v] = _local_expansion([C.from_rational(1)], poly, kmax)
        from schurgate.lseries import _assemble

        via_pattern = _assemble(X, local)
        assert via_char == via_pattern


def test_ambiguous_class_handling():
    tau = one_faithful_character(G63)
    datum = frobenius_datum(EXAMPLE_F1, G63, 53)  # ambiguous order-7 Frobenius
    assert datum.conj_class is None
    with pytest.raises(ValueError, match="candidates"):
        _resolve_local_factor(tau, datum, a_v(E_MINUS_X, 53), 53, 2, "error")
    # a single faithful twist genuinely depends on the candidate
    with pytest.raises(ValueError, match="ambiguity"):
        _resolve_local_factor(tau, datum, a_v(E_MINUS_X, 53), 53, 2, "invariant")
    # but the full faithful product does not
    from schurgate.characters import quotient_identity_virtual_character

    rhs = quotient_identity_virtual_character(G63).rhs
    num, den = _resolve_local_factor(rhs, datum, a_v(E_MINUS_X, 53), 53, 2, "invariant")
    assert den[0] == C.from_rational(1)


def test_identity_series_both_towers():
    chk1 = identity_series_check(E_MINUS_X, EXAMPLE_F1, G21, 120)
    assert chk1.holds and chk1.coefficient == 2 and chk1.first_mismatch is None
    chk2 = identity_series_check(E_MINUS_X, EXAMPLE_F1, G63, 120)
    assert chk2.holds and chk2.coefficient == 3


def test_identity_series_other_curve():
    E = EllipticCurveQ.from_list([1, -1, 1, -10, -20])
    chk = identity_series_check(E, EXAMPLE_F1, G21, 80)
    assert chk.holds


def test_series_json_round_trip_shape():
    s = dirichlet_partial(E_MINUS_X, G21, trivial_character(G21), EXAMPLE_F1, 10)
    js = s.to_json()
    assert js["X"] == 10 and len(js["an"]) == 10
    assert js["an"][0] == {"conductor": 1, "coeffs": ["1"]}
