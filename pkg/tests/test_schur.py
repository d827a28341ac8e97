import pytest

from schurgate.groups import iter_valid_groups, make_group, subgroup_X, tower_subgroups
from schurgate.characters import (
    VirtualCharacter,
    faithful_characters,
    one_faithful_character,
    permutation_character,
    regular_character,
    trivial_character,
)
from schurgate.schur import (
    REASON_COPRIME,
    REASON_INFINITY,
    REASON_MOD_P,
    REASON_TAME,
    global_index,
    local_index,
    multiplicity_divisibility_check,
    norm_criterion,
    qadic_class_order,
    qadic_class_order_direct,
)

G21 = make_group(7, 3, 1, 2)
G63 = make_group(7, 3, 2, 2)
G1539 = make_group(19, 3, 4, 4)


def test_local_index_at_q_examples():
    rep = local_index(G21, one_faithful_character(G21), 7)
    assert rep.index == 1 and rep.reason == REASON_TAME

    rep = local_index(G63, one_faithful_character(G63), 7)
    assert rep.index == 3
    assert rep.details["d"] == 3 and rep.details["f"] == 1

    rep = local_index(G1539, one_faithful_character(G1539), 19)
    assert rep.index == 9
    assert rep.details["d"] == 9


def test_local_index_other_places():
    tau = one_faithful_character(G63)
    assert local_index(G63, tau, "inf") == (
        "inf", 1, REASON_INFINITY, {"self_dual": False})
    assert local_index(G63, tau, 2).reason == REASON_COPRIME
    assert local_index(G63, tau, 11).index == 1
    rep = local_index(G63, tau, 3)
    assert rep.index == 1 and rep.reason == REASON_MOD_P
    assert rep.details["distinct_eigenvalues"] == 3


def test_local_index_rejects_unfaithful():
    with pytest.raises(ValueError, match="not faithful"):
        local_index(G63, trivial_character(G63), 7)


def test_global_index_known_values():
    assert global_index(G21, one_faithful_character(G21)).global_index == 1
    assert global_index(G63, one_faithful_character(G63)).global_index == 3
    assert global_index(G1539, one_faithful_character(G1539)).global_index == 9


def test_global_report_structure():
    rep = global_index(G63, one_faithful_character(G63))
    js = rep.to_json()
    assert js["global"] == 3
    assert js["divides_dimension"] is True
    places = {entry["place"]: entry["index"] for entry in js["local"]}
    assert places == {"inf": 1, 2: 1, "p": 1, "q": 3}


def test_norm_criterion():
    assert norm_criterion(G21, one_faithful_character(G21)) is True
    assert norm_criterion(G63, one_faithful_character(G63)) is False
    G19n4 = make_group(19, 3, 4, 7)  # j of order 3: r = 1
    assert norm_criterion(G19n4, one_faithful_character(G19n4)) is False


def test_qadic_formula_matches_direct_computation():
    for G in iter_valid_groups(3000):
        fast, _ = qadic_class_order(G.q, G.p, G.n, G.r)
        assert fast == qadic_class_order_direct(G.q, G.p, G.n, G.r)


def test_sweep_index_iff_divisibility():
    seen_nontrivial = 0
    for G in iter_valid_groups(10 ** 4):
        idx, _ = qadic_class_order(G.q, G.p, G.n, G.r)
        if (G.q - 1) % G.pn == 0:
            assert idx == 1
        else:
            assert idx > 1
            seen_nontrivial += 1
        # index is a power of p within [1, p^r] dividing the dimension p^r
        assert G.pr % idx == 0
    assert seen_nontrivial > 100


def test_index_depends_only_on_q_p_n_r():
    a = global_index(make_group(7, 3, 2, 2), one_faithful_character(make_group(7, 3, 2, 2)))
    b = global_index(make_group(7, 3, 2, 4), one_faithful_character(make_group(7, 3, 2, 4)))
    assert a.global_index == b.global_index == 3


def test_galois_orbit_constancy():
    for G in (G63, make_group(19, 3, 3, 4)):
        vals = {global_index(G, tau).global_index for tau in faithful_characters(G)}
        assert len(vals) == 1


def test_multiplicity_divisibility_regular():
    tau = one_faithful_character(G63)
    chk = multiplicity_divisibility_check(G63, tau, regular_character(G63))
    assert chk == (3, 3, True)


def test_multiplicity_divisibility_perm_of_X():
    tau = one_faithful_character(G63)
    rho = permutation_character(G63, subgroup_X(G63))
    chk = multiplicity_divisibility_check(G63, tau, rho)
    assert chk.multiplicity == 0 and chk.divisible


def test_multiplicity_divisibility_scaled_regular():
    tau = one_faithful_character(G1539)
    rho = 2 * VirtualCharacter.of(regular_character(G1539))
    chk = multiplicity_divisibility_check(G1539, tau, rho)
    assert chk == (18, 9, True)


def test_multiplicity_divisibility_rejects_irrational():
    tau = one_faithful_character(G63)
    with pytest.raises(ValueError, match="not a rational character"):
        multiplicity_divisibility_check(G63, tau, one_faithful_character(G63))


def test_tower_permutation_characters_divisible():
    for G in (G21, G63):
        taus = faithful_characters(G)
        mods = {t.char_id: global_index(G, t).global_index for t in taus}
        for sub in tower_subgroups(G):
            rho = permutation_character(G, sub)
            for tau in taus:
                chk = multiplicity_divisibility_check(G, tau, rho)
                assert chk.divisible and chk.modulus == mods[tau.char_id]
