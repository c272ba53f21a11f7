import random
from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afsys.cat import (
    FiniteFunctor,
    SetFunctor,
    discrete_category,
    identity_functor,
)
from afsys.errors import DirectionalityError
from afsys.functors import system_isomorphic
from afsys.institutions import (
    AffineInstMorphism,
    AffineInstitution,
    ElementaryInstitution,
    InstitutionMorphism,
    check_affine_inst_morphism,
    check_affine_institution,
    check_elementary,
    check_inst_morphism,
    check_localic_institution,
    check_localic_reflection_naturality,
    check_spatial_institution,
    check_spatial_unit_naturality,
    compose_affine_inst_morphisms,
    entailment_closure,
    geo,
    identity_affine_inst_morphism,
    ie_lift,
    ie_loc_lift,
    iloc_lift,
    ispat_lift,
    models_of,
    spatial_completion,
    theory_lattice,
    theory_system,
)


def _inst(ws, name):
    return ws.find("institution", name).value.institution


def _afinst(ws, name):
    return ws.find("afinstitution", name).value.institution


def _single_object_institution(sat_pairs, sentences, models):
    sign = discrete_category(["S"])
    sen = SetFunctor(sign, {"S": tuple(sentences)}, {"id_S": {s: s for s in sentences}})
    mod = SetFunctor(
        sign, {"S": tuple(models)}, {"id_S": {m: m for m in models}}, contravariant=True
    )
    return ElementaryInstitution(sign, sen, mod, {"S": frozenset(sat_pairs)})


def test_fixture_institutions_pass(ws_inst1, ws_inst2):
    assert check_elementary(_inst(ws_inst1, "INST1")).passed
    assert check_elementary(_inst(ws_inst2, "INST2")).passed


def test_satisfaction_violation_witness(ws_inst2):
    inst = _inst(ws_inst2, "INST2")
    sat = dict(inst.sat)
    sat["T"] = sat["T"] ^ {("b1", "t1")}
    broken = ElementaryInstitution(inst.sign, inst.sen, inst.mod, sat)
    rep = check_elementary(broken)
    assert not rep.passed
    assert any("satisfaction condition" in f for f in rep.failures)


def test_identity_institution_morphism(ws_inst1):
    inst = _inst(ws_inst1, "INST1")
    mu = InstitutionMorphism(
        inst,
        inst,
        identity_functor(inst.sign),
        {"S": {s: s for s in inst.sen.at("S")}},
        {"S": {m: m for m in inst.mod.at("S")}},
    )
    assert check_inst_morphism(mu).passed


def test_comorphism_direction_rejected(ws_inst2):
    inst = _inst(ws_inst2, "INST2")
    # a one-sentence source mapped into INST2 at T: alpha keyed by the
    # source sentences is comorphism-shaped data and must be rejected
    small = _single_object_institution({("b1", "t1")}, ("t1",), ("b1", "b2"))
    phi = FiniteFunctor(small.sign, inst.sign, {"S": "T"}, {"id_S": "id_T"})
    mu = InstitutionMorphism(
        small,
        inst,
        phi,
        {"S": {"t1": "t1"}},  # keys are Sen(source), not Sen'(phi S)
        {"S": {"b1": "b1", "b2": "b2"}},
    )
    with pytest.raises(DirectionalityError):
        check_inst_morphism(mu)


def test_institution_morphism_between_fixtures(ws_inst2):
    inst = _inst(ws_inst2, "INST2")
    # restriction of INST2 to its S component, mapped back in
    restr = _single_object_institution(
        {("a1", "s1"), ("a2", "s2")}, ("s1", "s2"), ("a1", "a2")
    )
    phi = FiniteFunctor(restr.sign, inst.sign, {"S": "S"}, {"id_S": "id_S"})
    mu = InstitutionMorphism(
        restr,
        inst,
        phi,
        {"S": {"s1": "s1", "s2": "s2"}},
        {"S": {"a1": "a1", "a2": "a2"}},
    )
    assert check_inst_morphism(mu).passed


# -- entailment and theories -----------------------------------------------------


def test_entailment_closure_on_inst1(ws_inst1):
    inst = _inst(ws_inst1, "INST1")
    assert entailment_closure(inst, "S", ()) == {"s1"}
    assert entailment_closure(inst, "S", ("s2",)) == {"s1", "s2"}


def _random_institution(rng, nsen, nmod):
    sentences = tuple(f"s{i}" for i in range(nsen))
    models = tuple(f"m{i}" for i in range(nmod))
    pairs = {
        (m, s) for m in models for s in sentences if rng.random() < 0.5
    }
    return _single_object_institution(pairs, sentences, models)


def test_entailment_closure_is_closure_operator():
    rng = random.Random(11)
    inst = _random_institution(rng, 6, 4)
    sen = inst.sen.at("S")
    subsets = [
        frozenset(s for i, s in enumerate(sen) if mask >> i & 1)
        for mask in range(2 ** len(sen))
    ]
    closures = {sub: entailment_closure(inst, "S", sub) for sub in subsets}
    for sub in subsets:
        c = closures[sub]
        assert sub <= c
        assert entailment_closure(inst, "S", c) == c
    for s1 in subsets:
        for s2 in subsets:
            if s1 <= s2:
                assert closures[s1] <= closures[s2]


def test_theory_lattice_structure(ws_inst1):
    inst = _inst(ws_inst1, "INST1")
    lat = theory_lattice(inst, "S")
    assert lat.theories == (frozenset({"s1"}), frozenset({"s1", "s2"}))
    i, j = 0, 1
    # join = intersection, meet = closure of union
    assert lat.join_table[i][j] == 0
    assert lat.meet_table[i][j] == 1


def test_theory_lattice_random_instances_verify():
    rng = random.Random(23)
    for _ in range(4):
        inst = _random_institution(rng, 7, 4)
        theory_lattice(inst, "S")  # internal completeness check must not raise


def test_theory_system_report(ws_inst1):
    inst = _inst(ws_inst1, "INST1")
    rep = theory_system(inst, "S")
    assert rep.meets_respected
    t_all = rep.lattice.theories.index(frozenset({"s1", "s2"}))
    assert rep.forces[("m1", t_all)]
    assert not rep.forces[("m2", t_all)]
    # m2 forces the join (intersection) of {s1} and {s1,s2} = {s1} only
    # through its first member, so no violation is reported there
    assert all(isinstance(v, tuple) for v in rep.join_violations)


def test_spatial_completion_isomorphic_to_sys1(ws_inst1, ws_sys1):
    inst = _inst(ws_inst1, "INST1")
    sc = spatial_completion(inst, "S")
    sys1 = ws_sys1.find("system", "SYS1").value.system
    assert system_isomorphic(sc, sys1) is not None


# -- affine institutions ----------------------------------------------------------


def test_affine_institution_checks(ws_afinst1):
    ai = _afinst(ws_afinst1, "AFI1")
    assert check_affine_institution(ai).passed


def test_lifts_and_left_inverse_laws(ws_afinst1):
    ai = _afinst(ws_afinst1, "AFI1")
    si = ispat_lift(ai)
    assert check_spatial_institution(si).passed
    assert ispat_lift(ie_lift(si)) == si
    li = iloc_lift(ai)
    assert check_localic_institution(li).passed
    assert iloc_lift(ie_loc_lift(li)) == li


def test_unit_and_reflection_naturality(ws_afinst1):
    ai = _afinst(ws_afinst1, "AFI1")
    assert check_spatial_unit_naturality(ispat_lift(ai))
    assert check_localic_reflection_naturality(ai)


def test_geo_of_fixture(ws_afinst1, ws_sys1):
    ai = _afinst(ws_afinst1, "AFI1")
    inst = geo(ai)
    assert check_elementary(inst).passed
    sys1 = ws_sys1.find("system", "SYS1").value.system
    top = sys1.theory.base.constant("top")
    for a in range(sys1.algebra.size):
        for x in range(len(sys1.points)):
            expected = sys1.ext[a][x] == top
            got = inst.satisfies("A", sys1.points[x], sys1.algebra.labels[a])
            assert got == expected


def test_geo_requires_two_element_base(theory3, ws_sys1):
    from afsys.cat import discrete_category
    from afsys.topology import AffineSystem

    sign = discrete_category(["S"])
    sys3 = AffineSystem(
        theory3, ("p",), theory3.base, ((0,), (1,), (2,))
    )
    from afsys.topology import identity_system_morphism

    ai = AffineInstitution(
        sign, theory3, {"S": sys3}, {"id_S": identity_system_morphism(sys3)}
    )
    with pytest.raises(ValueError):
        geo(ai)


def test_affine_inst_morphism_compose(ws_afinst1):
    ai = _afinst(ws_afinst1, "AFI1")
    ident = identity_affine_inst_morphism(ai)
    assert check_affine_inst_morphism(ident).passed
    again = compose_affine_inst_morphisms(ident, ident)
    assert check_affine_inst_morphism(again).passed
    assert again.phi == ident.phi
    assert again.alpha == ident.alpha
