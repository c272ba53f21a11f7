"""Elementary institutions, theory lattices, and the system-side lifts.

Satisfaction data is finite and dense, so the signature-change condition,
entailment closure, and the completeness of the theory lattice are all
verified by exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import FiniteAlgebra, Homomorphism
from .cat import (
    CatReport,
    FiniteCategory,
    FiniteFunctor,
    FiniteNatTrans,
    SetFunctor,
    check_category,
    check_functor,
    check_nat_trans,
    check_set_functor,
    opposite_category,
    precompose_set_functor,
)
from .errors import DEFAULT_BUDGET, BudgetExceededError, DirectionalityError
from .functors import (
    e_loc,
    e_loc_morphism,
    e_space,
    e_space_morphism,
    loc_universal_arrow,
    spat,
    spat_morphism,
)
from .standard import FRAME_SIG, two_frame
from .topology import (
    AffineSpace,
    AffineSystem,
    AffineTheory,
    SystemMorphism,
    compose_system_morphisms,
    identity_system_morphism,
    is_space,
    is_system,
    is_system_morphism,
)
from .algebra import FRAME as FRAME_PROFILE


# ---------------------------------------------------------------------------
# elementary institutions


@dataclass
class ElementaryInstitution:
    sign: FiniteCategory
    sen: SetFunctor  # covariant
    mod: SetFunctor  # contravariant
    sat: dict[str, frozenset[tuple[str, str]]]  # obj -> {(model, sentence)}

    def satisfies(self, obj: str, model: str, sentence: str) -> bool:
        return (model, sentence) in self.sat[obj]


@dataclass(frozen=True)
class InstReport:
    passed: bool
    failures: tuple[str, ...] = ()


def check_elementary(inst: ElementaryInstitution) -> InstReport:
    """Functor laws plus the satisfaction condition for every signature
    morphism, model, and sentence."""
    fails = list(check_category(inst.sign).failures)
    if inst.sen.contravariant or not inst.mod.contravariant:
        fails.append("sentence functor must be covariant, model functor contravariant")
    fails += [f"sen: {f}" for f in check_set_functor(inst.sen).failures]
    fails += [f"mod: {f}" for f in check_set_functor(inst.mod).failures]
    for obj in inst.sign.objects:
        if obj not in inst.sat:
            fails.append(f"no satisfaction matrix at {obj}")
            continue
        for m, s in inst.sat[obj]:
            if m not in inst.mod.at(obj) or s not in inst.sen.at(obj):
                fails.append(f"satisfaction entry ({m},{s}) at {obj} out of range")
    if fails:
        return InstReport(False, tuple(fails))
    for phi, (src, tgt) in inst.sign.morphisms.items():
        sen_phi = inst.sen.on(phi)  # Sen(src) -> Sen(tgt)
        mod_phi = inst.mod.on(phi)  # Mod(tgt) -> Mod(src)
        for m2 in inst.mod.at(tgt):
            for s in inst.sen.at(src):
                lhs = inst.satisfies(tgt, m2, sen_phi[s])
                rhs = inst.satisfies(src, mod_phi[m2], s)
                if lhs != rhs:
                    fails.append(
                        f"satisfaction condition fails at ({phi},{m2},{s})"
                    )
    return InstReport(not fails, tuple(fails))


@dataclass
class InstitutionMorphism:
    """Signature functor plus sentence/model translations, morphism-direction.

    alpha[obj] maps target sentences at phi(obj) back to source sentences;
    beta[obj] maps source models at obj forward to target models.
    """

    source: ElementaryInstitution
    target: ElementaryInstitution
    phi: FiniteFunctor
    alpha: dict[str, dict[str, str]]
    beta: dict[str, dict[str, str]]


def _reject_comorphism(keys, morphism_domain, comorphism_domain, what, obj):
    if set(keys) == set(morphism_domain):
        return
    if set(keys) == set(comorphism_domain) and set(morphism_domain) != set(
        comorphism_domain
    ):
        raise DirectionalityError(
            f"{what} component at {obj} runs in the comorphism direction"
        )


def check_inst_morphism(mu: InstitutionMorphism) -> InstReport:
    fails = list(check_functor(mu.phi).failures)
    src, tgt = mu.source, mu.target
    for obj in src.sign.objects:
        pobj = mu.phi.obj_map[obj]
        _reject_comorphism(
            mu.alpha.get(obj, {}), tgt.sen.at(pobj), src.sen.at(obj), "alpha", obj
        )
        _reject_comorphism(
            mu.beta.get(obj, {}), src.mod.at(obj), tgt.mod.at(pobj), "beta", obj
        )
    sen_prime_phi = precompose_set_functor(tgt.sen, mu.phi)
    mod_prime_phi = precompose_set_functor(tgt.mod, mu.phi)
    alpha_nt = FiniteNatTrans(sen_prime_phi, src.sen, dict(mu.alpha))
    beta_nt = FiniteNatTrans(src.mod, mod_prime_phi, dict(mu.beta))
    fails += [f"alpha: {f}" for f in check_nat_trans(alpha_nt).failures]
    fails += [f"beta: {f}" for f in check_nat_trans(beta_nt).failures]
    if fails:
        return InstReport(False, tuple(fails))
    for obj in src.sign.objects:
        pobj = mu.phi.obj_map[obj]
        for m in src.mod.at(obj):
            for s2 in tgt.sen.at(pobj):
                lhs = src.satisfies(obj, m, mu.alpha[obj][s2])
                rhs = tgt.satisfies(pobj, mu.beta[obj][m], s2)
                if lhs != rhs:
                    fails.append(f"translation condition fails at ({obj},{m},{s2})")
    return InstReport(not fails, tuple(fails))


# ---------------------------------------------------------------------------
# entailment and theories


def models_of(inst: ElementaryInstitution, obj: str, sentences: Iterable[str]):
    sentences = tuple(sentences)
    return tuple(
        m
        for m in inst.mod.at(obj)
        if all(inst.satisfies(obj, m, s) for s in sentences)
    )


def entailment_closure(
    inst: ElementaryInstitution, obj: str, sentences: Iterable[str]
) -> frozenset[str]:
    """All sentences true in every model of the given set."""
    ms = models_of(inst, obj, sentences)
    return frozenset(
        s for s in inst.sen.at(obj) if all(inst.satisfies(obj, m, s) for m in ms)
    )


def _theory_key(inst, obj, t: frozenset[str]):
    order = {s: i for i, s in enumerate(inst.sen.at(obj))}
    return (len(t), tuple(sorted(order[s] for s in t)))


@dataclass
class TheoryLattice:
    obj: str
    theories: tuple[frozenset[str], ...]  # canonically sorted
    join_table: tuple[tuple[int, ...], ...]  # pairwise intersection
    meet_table: tuple[tuple[int, ...], ...]  # closure of pairwise union

    def index(self, t: frozenset[str]) -> int:
        return self.theories.index(t)

    def leq(self, i: int, j: int) -> bool:
        # smaller means entails: reverse inclusion of sentence sets
        return self.theories[j] <= self.theories[i]


def theory_lattice(
    inst: ElementaryInstitution, obj: str, budget: int = DEFAULT_BUDGET
) -> TheoryLattice:
    """Enumerate all entailment-closed sentence sets and tabulate the
    lattice operations; completeness over every subset is re-verified."""
    sen = inst.sen.at(obj)
    total = 2 ** len(sen)
    if total > budget:
        raise BudgetExceededError(total, budget, "theory enumeration")
    theories = set()
    for mask in range(total):
        subset = frozenset(s for i, s in enumerate(sen) if mask >> i & 1)
        theories.add(entailment_closure(inst, obj, subset))
    ordered = tuple(sorted(theories, key=lambda t: _theory_key(inst, obj, t)))
    pos = {t: i for i, t in enumerate(ordered)}
    n = len(ordered)
    join = tuple(
        tuple(pos[ordered[i] & ordered[j]] for j in range(n)) for i in range(n)
    )
    meet = tuple(
        tuple(pos[entailment_closure(inst, obj, ordered[i] | ordered[j])] for j in range(n))
        for i in range(n)
    )
    lattice = TheoryLattice(obj, ordered, join, meet)
    if 2**n <= budget:
        _verify_completeness(inst, lattice)
    return lattice


def _verify_completeness(inst: ElementaryInstitution, lat: TheoryLattice):
    n = len(lat.theories)
    full = frozenset(inst.sen.at(lat.obj))
    for mask in range(2**n):
        members = [lat.theories[i] for i in range(n) if mask >> i & 1]
        # empty intersection is the full sentence set (the bottom theory)
        join = frozenset.intersection(*members) if members else full
        if join not in lat.theories:
            raise AssertionError(f"join of subset {mask:b} escapes the lattice")
        union = frozenset().union(*members)
        if entailment_closure(inst, lat.obj, union) not in lat.theories:
            raise AssertionError(f"meet of subset {mask:b} escapes the lattice")


@dataclass
class TheorySystemReport:
    models: tuple[str, ...]
    lattice: TheoryLattice
    forces: dict[tuple[str, int], bool]  # (model, theory index) -> forces
    meets_respected: bool
    join_violations: tuple[tuple[tuple[int, ...], str], ...]


def theory_system(
    inst: ElementaryInstitution, obj: str, budget: int = DEFAULT_BUDGET
) -> TheorySystemReport:
    """The models / theory-lattice / forcing triple, with the join audit.

    A model forces a theory when it satisfies every member.  Meets are
    always respected; each join (intersection) a model forces without
    forcing any member is reported as a violation witness.
    """
    lat = theory_lattice(inst, obj, budget)
    models = inst.mod.at(obj)
    forces = {
        (m, i): all(inst.satisfies(obj, m, s) for s in t)
        for m in models
        for i, t in enumerate(lat.theories)
    }
    meets_ok = True
    violations = []
    n = len(lat.theories)
    if 2**n > budget:
        raise BudgetExceededError(2**n, budget, "theory subset sweep")
    for mask in range(2**n):
        idxs = tuple(i for i in range(n) if mask >> i & 1)
        members = [lat.theories[i] for i in idxs]
        full = frozenset(inst.sen.at(obj))
        join = frozenset.intersection(*members) if members else full
        meet = entailment_closure(inst, obj, frozenset().union(*members))
        ji = lat.theories.index(join)
        mi = lat.theories.index(meet)
        for m in models:
            if forces[(m, mi)] != all(forces[(m, i)] for i in idxs):
                meets_ok = False
            if idxs and forces[(m, ji)] and not any(forces[(m, i)] for i in idxs):
                violations.append((idxs, m))
    return TheorySystemReport(models, lat, forces, meets_ok, tuple(violations))


def spatial_completion(
    inst: ElementaryInstitution, obj: str, budget: int = DEFAULT_BUDGET
) -> AffineSystem:
    """Finite stand-in for completing the theory semilattice to a frame.

    Takes the model extents of all theories and closes them under finite
    intersection and (finite = arbitrary here) union, including the empty
    and full extents; the result is a frame of model sets, and membership
    gives a separated system over the two-element base.
    """
    lat = theory_lattice(inst, obj, budget)
    models = inst.mod.at(obj)
    midx = {m: i for i, m in enumerate(models)}
    family = {frozenset(), frozenset(range(len(models)))}
    for t in lat.theories:
        family.add(frozenset(midx[m] for m in models_of(inst, obj, t)))
    work = True
    while work:
        work = False
        current = list(family)
        for a, b in combinations(current, 2):
            for v in (a | b, a & b):
                if v not in family:
                    family.add(v)
                    work = True
    ordered = sorted(family, key=lambda s: (len(s), tuple(sorted(s))))
    pos = {s: i for i, s in enumerate(ordered)}
    n = len(ordered)
    join = tuple(pos[a | b] for a in ordered for b in ordered)
    meet = tuple(pos[a & b] for a in ordered for b in ordered)
    labels = tuple(
        "{" + ",".join(models[i] for i in sorted(s)) + "}" for s in ordered
    )
    algebra = FiniteAlgebra(
        FRAME_SIG,
        n,
        labels,
        (join, meet, (pos[frozenset()],), (pos[frozenset(range(len(models)))],)),
    )
    theory = AffineTheory(two_frame(), FRAME_PROFILE)
    ext = tuple(
        tuple(1 if x in s else 0 for x in range(len(models))) for s in ordered
    )
    return AffineSystem(theory, models, algebra, ext)


# ---------------------------------------------------------------------------
# affine institutions and their lifts


@dataclass
class AffineInstitution:
    sign: FiniteCategory
    theory: AffineTheory
    systems: dict[str, AffineSystem]
    arrows: dict[str, SystemMorphism]


@dataclass
class SpatialAffineInstitution:
    sign: FiniteCategory
    theory: AffineTheory
    spaces: dict[str, AffineSpace]
    arrows: dict[str, tuple[int, ...]]  # point maps


@dataclass
class LocalicAffineInstitution:
    sign: FiniteCategory
    theory: AffineTheory
    algebras: dict[str, FiniteAlgebra]
    arrows: dict[str, Homomorphism]  # op-side: algebra at cod -> algebra at dom


def check_affine_institution(ai: AffineInstitution) -> InstReport:
    fails = list(check_category(ai.sign).failures)
    for obj in ai.sign.objects:
        sys = ai.systems.get(obj)
        if sys is None:
            fails.append(f"no system at {obj}")
            continue
        ok, w = is_system(sys)
        if not ok:
            fails.append(f"system at {obj} fails at {w}")
    if fails:
        return InstReport(False, tuple(fails))
    for m, (d, c) in ai.sign.morphisms.items():
        mor = ai.arrows.get(m)
        if mor is None or mor.source != ai.systems[d] or mor.target != ai.systems[c]:
            fails.append(f"arrow {m} missing or mistyped")
            continue
        if not is_system_morphism(mor)[0]:
            fails.append(f"arrow {m} is not a system morphism")
    if fails:
        return InstReport(False, tuple(fails))
    for obj in ai.sign.objects:
        if ai.arrows[ai.sign.identities[obj]] != identity_system_morphism(
            ai.systems[obj]
        ):
            fails.append(f"identity arrow at {obj} not the identity")
    for g, f in ai.sign.composable_pairs():
        if ai.arrows[ai.sign.compose(g, f)] != compose_system_morphisms(
            ai.arrows[g], ai.arrows[f]
        ):
            fails.append(f"functoriality fails on ({g},{f})")
    return InstReport(not fails, tuple(fails))


def check_spatial_institution(si: SpatialAffineInstitution) -> InstReport:
    fails = list(check_category(si.sign).failures)
    for obj in si.sign.objects:
        sp = si.spaces.get(obj)
        if sp is None:
            fails.append(f"no space at {obj}")
            continue
        ok, w = is_space(sp.theory, sp.points, sp.opens)
        if not ok:
            fails.append(f"space at {obj} not closed: {w}")
    if fails:
        return InstReport(False, tuple(fails))
    from .topology import is_space_morphism

    for m, (d, c) in si.sign.morphisms.items():
        f = si.arrows.get(m)
        if f is None or not is_space_morphism(f, si.spaces[d], si.spaces[c])[0]:
            fails.append(f"arrow {m} is not a space morphism")
    for obj in si.sign.objects:
        if si.arrows[si.sign.identities[obj]] != tuple(
            range(len(si.spaces[obj].points))
        ):
            fails.append(f"identity arrow at {obj} not the identity")
    for g, f in si.sign.composable_pairs():
        gf = tuple(si.arrows[g][v] for v in si.arrows[f])
        if si.arrows[si.sign.compose(g, f)] != gf:
            fails.append(f"functoriality fails on ({g},{f})")
    return InstReport(not fails, tuple(fails))


def check_localic_institution(li: LocalicAffineInstitution) -> InstReport:
    from .algebra import identity_hom, is_homomorphism

    fails = list(check_category(li.sign).failures)
    for m, (d, c) in li.sign.morphisms.items():
        h = li.arrows.get(m)
        if (
            h is None
            or h.source != li.algebras[c]
            or h.target != li.algebras[d]
            or not is_homomorphism(h.source, h.target, h.mapping)[0]
        ):
            fails.append(f"arrow {m} is not an op-side homomorphism")
    if fails:
        return InstReport(False, tuple(fails))
    for obj in li.sign.objects:
        if li.arrows[li.sign.identities[obj]] != identity_hom(li.algebras[obj]):
            fails.append(f"identity arrow at {obj} not the identity")
    for g, f in li.sign.composable_pairs():
        # op-side arrows compose in reverse order
        if li.arrows[li.sign.compose(g, f)] != li.arrows[f].compose(li.arrows[g]):
            fails.append(f"functoriality fails on ({g},{f})")
    return InstReport(not fails, tuple(fails))


def ie_lift(si: SpatialAffineInstitution) -> AffineInstitution:
    """Embed a spatial institution objectwise and morphismwise."""
    systems = {obj: e_space(sp) for obj, sp in si.spaces.items()}
    arrows = {
        m: e_space_morphism(f, si.spaces[si.sign.dom(m)], si.spaces[si.sign.cod(m)])
        for m, f in si.arrows.items()
    }
    return AffineInstitution(si.sign, si.theory, systems, arrows)


def ispat_lift(ai: AffineInstitution) -> SpatialAffineInstitution:
    spaces = {obj: spat(sys) for obj, sys in ai.systems.items()}
    arrows = {m: spat_morphism(mor) for m, mor in ai.arrows.items()}
    return SpatialAffineInstitution(ai.sign, ai.theory, spaces, arrows)


def iloc_lift(ai: AffineInstitution) -> LocalicAffineInstitution:
    algebras = {obj: sys.algebra for obj, sys in ai.systems.items()}
    arrows = {m: mor.phi for m, mor in ai.arrows.items()}
    return LocalicAffineInstitution(ai.sign, ai.theory, algebras, arrows)


def ie_loc_lift(
    li: LocalicAffineInstitution, budget: int = DEFAULT_BUDGET
) -> AffineInstitution:
    systems = {obj: e_loc(a, li.theory, budget) for obj, a in li.algebras.items()}
    arrows = {m: e_loc_morphism(h, li.theory, budget) for m, h in li.arrows.items()}
    return AffineInstitution(li.sign, li.theory, systems, arrows)


def spatial_unit_components(si: SpatialAffineInstitution) -> dict[str, tuple[int, ...]]:
    """Per object, the unit I(obj) -> Spat(E(I(obj))): the identity map,
    since spatialization after embedding is the identity on spaces."""
    out = {}
    for obj, sp in si.spaces.items():
        if spat(e_space(sp)) != sp:
            raise AssertionError(f"left-inverse law failed at {obj}")
        out[obj] = tuple(range(len(sp.points)))
    return out


def check_spatial_unit_naturality(si: SpatialAffineInstitution) -> bool:
    """Naturality squares for the unit into the round-tripped institution."""
    comps = spatial_unit_components(si)
    round_trip = ispat_lift(ie_lift(si))
    for m, (d, c) in si.sign.morphisms.items():
        lhs = tuple(comps[c][v] for v in si.arrows[m])
        rhs = tuple(round_trip.arrows[m][v] for v in comps[d])
        if lhs != rhs:
            return False
    return True


def localic_reflection_arrows(
    ai: AffineInstitution, budget: int = DEFAULT_BUDGET
) -> dict[str, SystemMorphism]:
    """Per object, the reflection I(obj) -> E_loc(Loc(I(obj)))."""
    return {
        obj: loc_universal_arrow(sys, budget) for obj, sys in ai.systems.items()
    }


def check_localic_reflection_naturality(
    ai: AffineInstitution, budget: int = DEFAULT_BUDGET
) -> bool:
    comps = localic_reflection_arrows(ai, budget)
    round_trip = ie_loc_lift(iloc_lift(ai), budget)
    for m, (d, c) in ai.sign.morphisms.items():
        lhs = compose_system_morphisms(comps[c], ai.arrows[m])
        rhs = compose_system_morphisms(round_trip.arrows[m], comps[d])
        if lhs != rhs:
            return False
    return True


def geo(ai: AffineInstitution, budget: int = DEFAULT_BUDGET) -> ElementaryInstitution:
    """Read an affine institution over the two-element base as an
    elementary institution: models are points, sentences are algebra
    elements, satisfaction is the extent matrix.

    System morphisms carry the algebra translation backward, so the
    institution lives over the opposite of the signature category.
    """
    base = ai.theory.base
    if base.size != 2 or not base.signature.has("top"):
        raise ValueError("geo needs the two-element frame as base")
    top = base.constant("top")
    sign = opposite_category(ai.sign)
    obj_sen = {obj: sys.algebra.labels for obj, sys in ai.systems.items()}
    obj_mod = {obj: sys.points for obj, sys in ai.systems.items()}
    sen_maps, mod_maps = {}, {}
    for m, (d, c) in ai.sign.morphisms.items():
        mor = ai.arrows[m]
        # in the opposite category m runs c -> d
        sen_maps[m] = {
            ai.systems[c].algebra.labels[a]: ai.systems[d].algebra.labels[
                mor.phi.mapping[a]
            ]
            for a in range(ai.systems[c].algebra.size)
        }
        mod_maps[m] = {
            ai.systems[d].points[x]: ai.systems[c].points[mor.f[x]]
            for x in range(len(ai.systems[d].points))
        }
    sen = SetFunctor(sign, obj_sen, sen_maps, contravariant=False)
    mod = SetFunctor(sign, obj_mod, mod_maps, contravariant=True)
    sat = {
        obj: frozenset(
            (sys.points[x], sys.algebra.labels[a])
            for a in range(sys.algebra.size)
            for x in range(len(sys.points))
            if sys.ext[a][x] == top
        )
        for obj, sys in ai.systems.items()
    }
    return ElementaryInstitution(sign, sen, mod, sat)


# ---------------------------------------------------------------------------
# affine institution morphisms (fixed theory)


@dataclass
class AffineInstMorphism:
    source: AffineInstitution
    target: AffineInstitution
    phi: FiniteFunctor  # between the signature categories
    alpha: dict[str, SystemMorphism]  # obj -> I1(obj) -> I2(phi obj)


def check_affine_inst_morphism(mu: AffineInstMorphism) -> InstReport:
    fails = list(check_functor(mu.phi).failures)
    for obj in mu.source.sign.objects:
        comp = mu.alpha.get(obj)
        pobj = mu.phi.obj_map[obj]
        if (
            comp is None
            or comp.source != mu.source.systems[obj]
            or comp.target != mu.target.systems[pobj]
        ):
            fails.append(f"component at {obj} missing or mistyped")
        elif not is_system_morphism(comp)[0]:
            fails.append(f"component at {obj} is not a system morphism")
    if fails:
        return InstReport(False, tuple(fails))
    for m, (d, c) in mu.source.sign.morphisms.items():
        lhs = compose_system_morphisms(mu.alpha[c], mu.source.arrows[m])
        rhs = compose_system_morphisms(
            mu.target.arrows[mu.phi.mor_map[m]], mu.alpha[d]
        )
        if lhs != rhs:
            fails.append(f"naturality fails at {m}")
    return InstReport(not fails, tuple(fails))


def identity_affine_inst_morphism(ai: AffineInstitution) -> AffineInstMorphism:
    from .cat import identity_functor

    return AffineInstMorphism(
        ai,
        ai,
        identity_functor(ai.sign),
        {obj: identity_system_morphism(sys) for obj, sys in ai.systems.items()},
    )


def compose_affine_inst_morphisms(
    m2: AffineInstMorphism, m1: AffineInstMorphism
) -> AffineInstMorphism:
    """Whisker-and-paste composite of two fixed-theory morphisms."""
    from .cat import compose_functors

    if m1.target is not m2.source and m1.target != m2.source:
        raise ValueError("morphisms are not composable")
    alpha = {
        obj: compose_system_morphisms(m2.alpha[m1.phi.obj_map[obj]], m1.alpha[obj])
        for obj in m1.source.sign.objects
    }
    return AffineInstMorphism(
        m1.source, m2.target, compose_functors(m2.phi, m1.phi), alpha
    )
