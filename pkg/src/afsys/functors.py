"""Spatialization, localification, points, and theory-morphism machinery.

Space <-> system translations keep everything structurally canonical, so the
left-inverse laws (spatialize after embed, project after localic embed) hold
as exact equalities on the data, not merely up to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import NamedTuple, Optional, Sequence

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    enumerate_homs,
    identity_hom,
    is_homomorphism,
)
from .errors import DEFAULT_BUDGET, BudgetExceededError, VacuousFamilyError
from .topology import (
    AffineSpace,
    AffineSystem,
    AffineTheory,
    SystemMorphism,
    compose_system_morphisms,
    is_space_morphism,
    is_system_morphism,
    pointwise_apply,
)


def _tuple_label(base: FiniteAlgebra, t: tuple[int, ...]) -> str:
    return "(" + ",".join(base.labels[v] for v in t) + ")"


def tuple_algebra(
    theory: AffineTheory, npoints: int, tuples: Sequence[tuple[int, ...]]
) -> FiniteAlgebra:
    """A closed tuple family as a finite algebra with pointwise tables."""
    fam = tuple(sorted(set(tuples)))
    pos = {t: i for i, t in enumerate(fam)}
    base = theory.base
    tables = []
    for si, (name, arity) in enumerate(base.signature.symbols):
        row = []
        for args in iproduct(fam, repeat=arity):
            v = pointwise_apply(base, si, args, npoints)
            if v not in pos:
                raise ValueError(f"tuple family not closed under {name!r}")
            row.append(pos[v])
        tables.append(tuple(row))
    labels = tuple(_tuple_label(base, t) for t in fam)
    return FiniteAlgebra(base.signature, len(fam), labels, tuple(tables))


# ---------------------------------------------------------------------------
# spatialization: E and Spat


def e_space(space: AffineSpace) -> AffineSystem:
    """Embed a space as the system whose algebra is its own open family."""
    alg = tuple_algebra(space.theory, len(space.points), space.opens)
    return AffineSystem(space.theory, space.points, alg, space.opens)


def e_space_morphism(
    f: Sequence[int], source: AffineSpace, target: AffineSpace
) -> SystemMorphism:
    """E on morphisms: phi restricts pullback-along-f to the open families."""
    ok, bad = is_space_morphism(f, source, target)
    if not ok:
        raise ValueError(f"not a space morphism; open {bad} does not pull back")
    s_sys, t_sys = e_space(source), e_space(target)
    f = tuple(f)
    pos = {t: i for i, t in enumerate(source.opens)}
    mapping = tuple(
        pos[tuple(alpha[f[x]] for x in range(len(source.points)))]
        for alpha in target.opens
    )
    phi = Homomorphism(t_sys.algebra, s_sys.algebra, mapping)
    return SystemMorphism(s_sys, t_sys, f, phi)


def spat(sys: AffineSystem) -> AffineSpace:
    """Replace the system algebra by the image of its extent map."""
    return AffineSpace(sys.theory, sys.points, tuple(set(sys.ext)))


def spat_morphism(m: SystemMorphism) -> tuple[int, ...]:
    """Spat on morphisms keeps the point map (checked to be a morphism)."""
    ok, bad = is_space_morphism(m.f, spat(m.source), spat(m.target))
    if not ok:
        raise ValueError(f"point map fails on spatialized open {bad}")
    return tuple(m.f)


def counit_system(sys: AffineSystem) -> SystemMorphism:
    """The co-universal arrow E(Spat(sys)) -> sys.

    Identity on points; the algebra component corestricts ext onto its
    image, stored op-side.
    """
    embedded = e_space(spat(sys))
    pos = {t: i for i, t in enumerate(spat(sys).opens)}
    mapping = tuple(pos[sys.ext[a]] for a in range(sys.algebra.size))
    phi = Homomorphism(sys.algebra, embedded.algebra, mapping)
    return SystemMorphism(embedded, sys, tuple(range(len(sys.points))), phi)


@dataclass(frozen=True)
class CouniversalCase:
    space: AffineSpace
    morphism_ok: bool
    factorizations: int
    unique: bool


@dataclass(frozen=True)
class CouniversalReport:
    cases: tuple[CouniversalCase, ...]

    @property
    def passed(self) -> bool:
        return all(c.morphism_ok and c.unique for c in self.cases)


def verify_couniversal(
    sys: AffineSystem,
    tests: Sequence[tuple[AffineSpace, SystemMorphism]],
    budget: int = DEFAULT_BUDGET,
) -> CouniversalReport:
    """For each test morphism E(S') -> sys, count the g with counit . E(g)
    equal to it; exactly one must exist.  Candidates range over all point
    maps S' -> Spat(sys).
    """
    if not tests:
        raise VacuousFamilyError("co-universal check needs a nonempty test family")
    eps = counit_system(sys)
    spatial = spat(sys)
    cases = []
    for space, morphism in tests:
        if morphism.source != e_space(space) or morphism.target != sys:
            raise ValueError("test morphism must run from E(space) to the system")
        ok, _ = is_system_morphism(morphism)
        if not ok:
            cases.append(CouniversalCase(space, False, 0, False))
            continue
        total = len(spatial.points) ** len(space.points)
        if total > budget:
            raise BudgetExceededError(total, budget, "candidate point maps")
        count = 0
        for g in iproduct(range(len(spatial.points)), repeat=len(space.points)):
            if not is_space_morphism(g, space, spatial)[0]:
                continue
            composite = compose_system_morphisms(eps, e_space_morphism(g, space, spatial))
            if composite == morphism:
                count += 1
        cases.append(CouniversalCase(space, True, count, count == 1))
    return CouniversalReport(tuple(cases))


# ---------------------------------------------------------------------------
# localification: Loc, Pt, and the localic embedding


def loc(sys: AffineSystem) -> FiniteAlgebra:
    return sys.algebra


def loc_morphism(m: SystemMorphism) -> Homomorphism:
    return m.phi


def pt(
    algebra: FiniteAlgebra, theory: AffineTheory, budget: int = DEFAULT_BUDGET
) -> tuple[Homomorphism, ...]:
    """The points of an algebra: all homomorphisms into the base algebra."""
    return enumerate_homs(algebra, theory.base, budget)


def counit_eps(
    algebra: FiniteAlgebra, theory: AffineTheory, budget: int = DEFAULT_BUDGET
) -> tuple[tuple[int, ...], ...]:
    """The evaluation extent: eps(a) is the tuple p |-> p(a) over pt."""
    points = pt(algebra, theory, budget)
    return tuple(
        tuple(p.mapping[a] for p in points) for a in range(algebra.size)
    )


def _point_label(theory: AffineTheory, p: Homomorphism) -> str:
    return "<" + ",".join(theory.base.labels[v] for v in p.mapping) + ">"


def e_loc(
    algebra: FiniteAlgebra, theory: AffineTheory, budget: int = DEFAULT_BUDGET
) -> AffineSystem:
    """Embed an algebra as the system over its own point set."""
    points = pt(algebra, theory, budget)
    labels = tuple(_point_label(theory, p) for p in points)
    return AffineSystem(theory, labels, algebra, counit_eps(algebra, theory, budget))


def e_loc_morphism(
    phi: Homomorphism, theory: AffineTheory, budget: int = DEFAULT_BUDGET
) -> SystemMorphism:
    """E on algebra morphisms: the point map precomposes with phi (op-side).

    phi runs B2 -> B1; the induced system morphism runs
    e_loc(B1) -> e_loc(B2).
    """
    b2, b1 = phi.source, phi.target
    src, tgt = e_loc(b1, theory, budget), e_loc(b2, theory, budget)
    pts1 = pt(b1, theory, budget)
    pts2 = pt(b2, theory, budget)
    pos = {p.mapping: i for i, p in enumerate(pts2)}
    f = tuple(pos[p.compose(phi).mapping] for p in pts1)
    return SystemMorphism(src, tgt, f, phi)


def unit_eta(space: AffineSpace) -> tuple[Homomorphism, ...]:
    """Per point, the evaluation homomorphism out of the open-family algebra."""
    alg = tuple_algebra(space.theory, len(space.points), space.opens)
    out = []
    for x in range(len(space.points)):
        mapping = tuple(alpha[x] for alpha in space.opens)
        ok, witness = is_homomorphism(alg, space.theory.base, mapping)
        if not ok:
            raise AssertionError(f"evaluation at point {x} fails at {witness}")
        out.append(Homomorphism(alg, space.theory.base, mapping))
    return tuple(out)


def loc_universal_arrow(
    sys: AffineSystem, budget: int = DEFAULT_BUDGET
) -> SystemMorphism:
    """The reflection arrow sys -> e_loc(sys.algebra).

    Each point x goes to the homomorphism a |-> ext(a)(x); the algebra
    component is the identity.
    """
    target = e_loc(sys.algebra, sys.theory, budget)
    points = pt(sys.algebra, sys.theory, budget)
    pos = {p.mapping: i for i, p in enumerate(points)}
    f = []
    for x in range(len(sys.points)):
        mapping = tuple(sys.ext[a][x] for a in range(sys.algebra.size))
        if mapping not in pos:
            raise ValueError(f"evaluation at point {x} is not a homomorphism")
        f.append(pos[mapping])
    return SystemMorphism(sys, target, tuple(f), identity_hom(sys.algebra))


def verify_loc_universal(
    sys: AffineSystem,
    tests: Sequence[tuple[FiniteAlgebra, SystemMorphism]],
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Each test morphism sys -> e_loc(C) must factor through the reflection
    arrow by a unique algebra homomorphism.
    """
    if not tests:
        raise VacuousFamilyError("universal check needs a nonempty test family")
    arrow = loc_universal_arrow(sys, budget)
    for c, morphism in tests:
        if morphism.source != sys or morphism.target != e_loc(c, sys.theory, budget):
            raise ValueError("test morphism must run from the system to e_loc(C)")
        if not is_system_morphism(morphism)[0]:
            return False
        count = 0
        for psi in enumerate_homs(c, sys.algebra, budget):
            candidate = compose_system_morphisms(
                e_loc_morphism(psi, sys.theory, budget), arrow
            )
            if candidate == morphism:
                count += 1
        if count != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# theory morphisms and the induced functor on systems


@dataclass(frozen=True)
class TheoryMorphism:
    """A base-algebra homomorphism plus an optional point relabeling.

    The natural transformation acts on tuples by post-composition with h;
    the point-set functor is restricted to bijective relabelings.
    """

    source: AffineTheory
    target: AffineTheory
    h: Homomorphism  # source.base -> target.base
    relabel: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.h.source != self.source.base or self.h.target != self.target.base:
            raise ValueError("h must map the source base into the target base")
        old = [a for a, _ in self.relabel]
        new = [b for _, b in self.relabel]
        if len(set(old)) != len(old) or len(set(new)) != len(new):
            raise ValueError("relabeling must be a bijection on labels")

    def rename(self, label: str) -> str:
        for old, new in self.relabel:
            if old == label:
                return new
        return label


def identity_theory_morphism(theory: AffineTheory) -> TheoryMorphism:
    return TheoryMorphism(theory, theory, identity_hom(theory.base))


def theory_compose(tm2: TheoryMorphism, tm1: TheoryMorphism) -> TheoryMorphism:
    if tm1.target != tm2.source:
        raise ValueError("theory morphisms are not composable")
    relabel = []
    seen = set()
    for old, mid in tm1.relabel:
        relabel.append((old, tm2.rename(mid)))
        seen.add(old)
    for old, new in tm2.relabel:
        if old not in seen:
            relabel.append((old, new))
    composite = [(o, n) for o, n in relabel if o != n]
    return TheoryMorphism(
        tm1.source, tm2.target, tm2.h.compose(tm1.h), tuple(composite)
    )


def afsys_apply(tm: TheoryMorphism, sys: AffineSystem) -> AffineSystem:
    """Transport a system along a theory morphism.

    Points are relabeled, the system algebra is kept, and every extent
    tuple is pushed forward through h.
    """
    if sys.theory != tm.source:
        raise ValueError("system lives over the wrong theory")
    points = tuple(tm.rename(x) for x in sys.points)
    ext = tuple(tuple(tm.h.mapping[v] for v in t) for t in sys.ext)
    return AffineSystem(tm.target, points, sys.algebra, ext)


def afsys_apply_morphism(tm: TheoryMorphism, m: SystemMorphism) -> SystemMorphism:
    return SystemMorphism(
        afsys_apply(tm, m.source), afsys_apply(tm, m.target), m.f, m.phi
    )


# ---------------------------------------------------------------------------
# adjunction bookkeeping


@dataclass(frozen=True)
class AdjunctionWitness:
    """Unit/counit components over a finite test family of spaces/systems."""

    spaces: tuple[AffineSpace, ...]
    systems: tuple[AffineSystem, ...]

    def unit_component(self, space: AffineSpace) -> tuple[int, ...]:
        # Spat(E(space)) == space exactly, so the unit is the identity map.
        if spat(e_space(space)) != space:
            raise AssertionError("left-inverse law failed; no unit component")
        return tuple(range(len(space.points)))

    def counit_component(self, sys: AffineSystem) -> SystemMorphism:
        return counit_system(sys)

    def triangle_identities_hold(self) -> bool:
        for space in self.spaces:
            emb = e_space(space)
            lhs = compose_system_morphisms(
                counit_system(emb),
                e_space_morphism(self.unit_component(space), space, spat(emb)),
            )
            if lhs != SystemMorphism(
                emb, emb, tuple(range(len(space.points))), identity_hom(emb.algebra)
            ):
                return False
        for sys in self.systems:
            eps = counit_system(sys)
            f = spat_morphism(eps)
            unit = self.unit_component(spat(sys))
            composite = tuple(f[v] for v in unit)
            if composite != tuple(range(len(spat(sys).points))):
                return False
        return True


# ---------------------------------------------------------------------------
# the coproduct cardinality demonstration


class CoproductGapResult(NamedTuple):
    lhs: int
    rhs: int
    equal: bool


def variable_basis_coproduct_gap(n: int) -> CoproductGapResult:
    """Cardinality witness that the variable-basis functor preserves no
    binary coproducts for base size n > 1: it would force n**4 == n**2.
    """
    if n < 1:
        raise ValueError("base cardinality must be positive")
    lhs = n**4
    rhs = n**2
    return CoproductGapResult(lhs, rhs, lhs == rhs)


def system_isomorphic(
    a: AffineSystem, b: AffineSystem, budget: int = DEFAULT_BUDGET
) -> Optional[tuple[tuple[int, ...], Homomorphism]]:
    """Search for a bijective system morphism a -> b; canonical first hit."""
    if a.theory != b.theory or len(a.points) != len(b.points):
        return None
    if a.algebra.size != b.algebra.size:
        return None
    iso_homs = [h for h in enumerate_homs(b.algebra, a.algebra, budget) if h.bijective]
    from itertools import permutations

    for f in permutations(range(len(b.points))):
        for phi in iso_homs:
            m = SystemMorphism(a, b, f, phi)
            if is_system_morphism(m)[0]:
                back = SystemMorphism(
                    b,
                    a,
                    tuple(f.index(i) for i in range(len(f))),
                    Homomorphism(
                        a.algebra,
                        b.algebra,
                        tuple(phi.mapping.index(i) for i in range(a.algebra.size)),
                    ),
                )
                if is_system_morphism(back)[0]:
                    return f, phi
    return None
