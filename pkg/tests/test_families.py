import pytest

from hermcurve.embed import ChartFailure, containment_check_symbolic, evaluate_map
from hermcurve.families import (
    BOUNDARY_PLACES,
    COMPONENTS,
    FAMILY_IDS,
    ORACLE_LOG,
    FamilyError,
    boundary_oracle,
    check_applicable,
    construct_family,
    family_table,
    genus,
    kappa_transform,
    maximality_verdict,
    oracle_hash,
    splitting_check,
    verify_family_identities,
)
from hermcurve.hermitian import herm_eval
from hermcurve.plane_model import affine_points

CHEAP = [("ex51", 2), ("ex52", 2), ("ex53", 3), ("ex54", 2), ("ex54", 4), ("ex55", 3)]


@pytest.mark.parametrize(
    "fid,q,g",
    [("ex51", 2, 1), ("ex51", 5, 4), ("ex53", 3, 1), ("ex53", 5, 4), ("ex54", 2, 0), ("ex54", 4, 2),
     ("ex55", 3, 1), ("ex52", 5, 3)],
)
def test_published_genus_values(fid, q, g):
    assert genus(fid, q) == g


@pytest.mark.parametrize("args", [("ex53", 4), ("ex54", 3), ("ex55", 5), ("ex51", 3), ("ex52", 4), ("ex53", 3, 0)])
def test_inapplicable_instances_rejected(args):
    with pytest.raises(FamilyError):
        check_applicable(*args)


def test_unknown_family():
    with pytest.raises(FamilyError, match="unknown family"):
        construct_family("ex99", 3)


def test_default_component_is_first_valid():
    assert construct_family("ex53", 3).i == COMPONENTS["ex53"][0] == 1


@pytest.mark.parametrize("fid,q", CHEAP)
def test_every_identity_group_has_a_reading_that_holds(fid, q):
    items = verify_family_identities(fid, q)
    groups = {}
    for it in items:
        groups.setdefault(it.group, []).append(it.holds)
    assert all(any(v) for v in groups.values()), [(it.name, it.holds) for it in items]


def test_known_misprints_are_detected():
    names = {it.name: it.holds for it in verify_family_identities("ex52", 5)}
    assert names["product identity, exponent (q-2)/3"]
    assert not names["product identity, exponent q-3"]
    assert not names["raw coordinates on the surface as printed"]
    assert not names["relation y^3x^q + y^(3q+2) + x^(2q+1) - 3x^(q+1)y^(q+1) mod F"]
    ex55 = {it.name: it.holds for it in verify_family_identities("ex55", 3)}
    assert not ex55["cubic surface as printed"]
    assert ex55["product, first factor Tr^2 - X^q - X, sign-flipped right side"]
    ex54 = {it.name: it.holds for it in verify_family_identities("ex54", 4)}
    assert ex54["product reading"] and not ex54["sum reading"]


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_containment_for_every_component(fid):
    q = {"ex51": 2, "ex52": 2, "ex53": 3, "ex54": 2, "ex55": 3}[fid]
    for i in COMPONENTS[fid]:
        inst = construct_family(fid, q, i)
        assert containment_check_symbolic(inst.pc, inst.form)
        assert inst.form.is_hermitian()


@pytest.mark.parametrize("fid,q", CHEAP)
def test_frozen_boundary_counts_match_the_oracle(fid, q):
    for i in COMPONENTS[fid]:
        inst = construct_family(fid, q, i)
        orc = boundary_oracle(inst)
        assert orc.boundary_places == BOUNDARY_PLACES[(fid, q, i)]
        frozen = ORACLE_LOG[(fid, q, i)]
        assert (orc.degrees, orc.counts, orc.affine_count) == (frozen["degrees"], frozen["counts"], frozen["affine"])


def test_boundary_oracle_counts_affine_points():
    inst = construct_family("ex53", 3, 2)
    orc = boundary_oracle(inst)
    assert orc.affine_count == len(affine_points(inst.plane)) == 15
    assert orc.log()["boundary_places"] == 1


def test_oracle_hash_is_stable():
    assert oracle_hash(BOUNDARY_PLACES) == family_table()[0]["oracle_hash"]
    assert oracle_hash({("a", 1, 0): 1}) == oracle_hash({("a", 1, 0): 1})
    assert oracle_hash({("a", 1, 0): 1}) != oracle_hash({("a", 1, 0): 2})


@pytest.mark.parametrize("fid,q,total", [("ex51", 2, 9), ("ex53", 3, 16), ("ex54", 2, 5), ("ex54", 4, 33), ("ex55", 3, 16)])
def test_maximal_instances(fid, q, total):
    for i in COMPONENTS[fid]:
        v = maximality_verdict(fid, q, i)
        assert v.total == v.hasse_weil_bound == total
        assert v.is_maximal


def test_ex52_q5_falls_short_of_the_bound():
    v = maximality_verdict("ex52", 5, 0)
    assert (v.affine_count, v.infinite_places, v.hasse_weil_bound) == (24, 2, 56)
    assert not v.is_maximal


@pytest.mark.parametrize("q", [2, 5])
def test_kappa_needs_gf_q6(q):
    k = kappa_transform(q)
    assert k.verified and k.identities_hold and k.lambda_norm_relation
    assert not k.mu_in_GFq


def test_ex52_image_is_on_its_degree_q_plus_1_surface():
    inst = construct_family("ex52", 5, 1)
    for P in affine_points(inst.plane)[:10]:
        try:
            img = evaluate_map(inst.raw_pc, P)
        except ChartFailure:
            continue
        assert herm_eval(inst.surface_form, img).is_zero()


@pytest.mark.parametrize("fid,q", [("ex53", 3), ("ex54", 2), ("ex55", 3), ("ex51", 2)])
def test_splitting_covers_the_intersection(fid, q):
    r = splitting_check(fid, q)
    assert r.covered and r.images_on_surfaces and r.ext_images_on_surfaces
    assert set(r.component_sizes) == set(COMPONENTS[fid])


def test_ex53_equivalence_maps_components():
    r = splitting_check("ex53", 3)
    assert all(e["maps_to"] == i for i, e in r.equivalences.items())


def test_ex51_q2_equivalence_lands_on_the_other_component():
    r = splitting_check("ex51", 2)
    assert r.equivalences[1]["maps_to"] == 2
    assert r.equivalences[2]["maps_to"] == 1
