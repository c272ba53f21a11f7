import random
from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afsys.algebra import FRAME, Homomorphism, check_laws, enumerate_homs
from afsys.errors import BudgetExceededError, MalformedMapError
from afsys.standard import chain_frame, diamond_frame, two_frame
from afsys.topology import (
    AffineSpace,
    AffineSystem,
    AffineTheory,
    SystemMorphism,
    all_tuples,
    compose_system_morphisms,
    constant_tuples,
    final_lift,
    identity_system_morphism,
    initial_lift,
    is_separated,
    is_space,
    is_space_morphism,
    is_system,
    is_system_morphism,
    pointwise_close,
    vickers_axiom_check,
    variable_basis_morphism_check,
)


def test_theory_rejects_lawless_base():
    alg = two_frame()
    tables = list(alg.tables)
    join = list(tables[0])
    join[1] = 0
    tables[0] = tuple(join)
    broken = type(alg)(alg.signature, alg.size, alg.labels, tuple(tables))
    with pytest.raises(ValueError):
        AffineTheory(broken, FRAME)


def test_pointwise_close_is_a_closure(theory2):
    base = theory2.base
    seeds = [[(0, 1)], [(1, 0), (0, 1)], [], [(1, 1)]]
    for seed in seeds:
        closed = pointwise_close(base, 2, seed)
        # extensive, idempotent, contains constants
        assert set(seed) <= set(closed)
        assert pointwise_close(base, 2, closed) == closed
        for c in constant_tuples(base, 2):
            assert c in closed


def test_sierpinski_space(theory2, ws_sys1):
    sier = ws_sys1.find("space", "SIER").value.space
    assert sier.theory == theory2
    ok, w = is_space(sier.theory, sier.points, sier.opens)
    assert ok, w


def test_not_closed_family_witness(theory2):
    ok, w = is_space(theory2, ("x", "y"), ((0, 1), (1, 0)))
    assert not ok
    sym, args, missing = w
    assert sym in ("join", "meet", "bot", "top")


def test_space_morphism_check(theory2, ws_sys1):
    sier = ws_sys1.find("space", "SIER").value.space
    # constant-to-closed-point map is continuous, swap is not
    assert is_space_morphism((0, 0), sier, sier)[0]
    assert not is_space_morphism((1, 0), sier, sier)[0]


def test_initial_lift_smallest(theory2, ws_sys1):
    sier = ws_sys1.find("space", "SIER").value.space
    lifted = initial_lift(theory2, ("a", "b", "c"), [((0, 1, 1), sier)])
    assert is_space(theory2, lifted.points, lifted.opens)[0]
    for f, space in [((0, 1, 1), sier)]:
        assert is_space_morphism(f, lifted, space)[0]
    # any other space making the map continuous contains these opens
    full = AffineSpace(theory2, ("a", "b", "c"), all_tuples(theory2.base, 3))
    assert set(lifted.opens) <= set(full.opens)


def test_final_lift_largest(theory2, ws_sys1):
    sier = ws_sys1.find("space", "SIER").value.space
    lifted = final_lift(theory2, ("z",), [((0, 0), sier)])
    assert is_space(theory2, lifted.points, lifted.opens)[0]
    assert is_space_morphism((0, 0), sier, lifted)[0]


def test_all_tuples_budget():
    with pytest.raises(BudgetExceededError):
        all_tuples(diamond_frame(), 20, budget=1000)


# -- systems ------------------------------------------------------------------


def test_sys1_is_separated_system(ws_sys1):
    sys1 = ws_sys1.find("system", "SYS1").value.system
    assert is_system(sys1)[0]
    assert is_separated(sys1)


def test_nonsep_detected(ws_diamond):
    nonsep = ws_diamond.find("system", "NONSEP").value.system
    assert is_system(nonsep)[0]
    assert not is_separated(nonsep)


def test_bad_ext_witness(theory2):
    carrier = chain_frame(3)
    ext = ((0, 0), (0, 1), (1, 0))  # top must go to the top tuple
    sys = AffineSystem(theory2, ("x", "y"), carrier, ext)
    ok, w = is_system(sys)
    assert not ok and w is not None


def test_system_morphism_and_composition(ws_afinst1):
    ai = ws_afinst1.find("afinstitution", "AFI1").value.institution
    f = ai.arrows["f"]
    assert is_system_morphism(f)[0]
    ident = identity_system_morphism(f.source)
    assert compose_system_morphisms(f, ident) == f
    assert compose_system_morphisms(identity_system_morphism(f.target), f) == f


def test_system_morphism_direction_enforced(ws_afinst1):
    ai = ws_afinst1.find("afinstitution", "AFI1").value.institution
    f = ai.arrows["f"]
    flipped = SystemMorphism(f.target, f.source, (0,), f.phi)
    with pytest.raises(MalformedMapError):
        is_system_morphism(flipped)


def test_vickers_axioms_on_fixture(ws_sys1):
    sys1 = ws_sys1.find("system", "SYS1").value.system
    rep = vickers_axiom_check(sys1)
    assert rep.passed


def test_vickers_failure_carries_witness(theory2):
    # hand-built extent that is not a homomorphism: join axiom must break
    carrier = diamond_frame()
    ext = ((0, 0), (1, 0), (0, 1), (0, 0))  # top |-> bottom tuple
    sys = AffineSystem(theory2, ("x", "y"), carrier, ext)
    rep = vickers_axiom_check(sys)
    assert not rep.passed
    assert rep.join_failures


def test_variable_basis_morphism_check(theory2, theory3, ws_sys1):
    sier = ws_sys1.find("space", "SIER").value.space
    tgt = AffineSpace(theory3, ("p",), ((0,), (1,), (2,)))
    phi_op = Homomorphism(theory3.base, theory2.base, (0, 1, 1))
    ok, w = variable_basis_morphism_check((0,) * 2, phi_op, sier, tgt)
    assert ok, w


@given(st.integers(min_value=0, max_value=2**8 - 1))
@settings(max_examples=40, deadline=None)
def test_random_two_frame_families_close_idempotently(mask):
    theory = AffineTheory(two_frame(), FRAME)
    seed = [
        tuple((mask >> (3 * i + j)) & 1 for j in range(3))
        for i in range(2)
    ]
    closed = pointwise_close(theory.base, 3, seed)
    ok, w = is_space(theory, ("a", "b", "c"), closed)
    assert ok, w
