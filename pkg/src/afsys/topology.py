"""Affine spaces and affine systems over a fixed base algebra.

A theory fixes a base algebra V (passing its variety's laws); the function
algebra V^X is never materialized except inside `final_lift` and oracle
tests.  Tuples over the point set stand for elements of V^X, ordered by the
point labels, and all tuple families are kept sorted for canonical equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Optional, Sequence

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    VarietyProfile,
    check_laws,
)
from .errors import DEFAULT_BUDGET, BudgetExceededError, MalformedMapError

Tuple_ = tuple  # element tuples X -> V, indexed in point order


@dataclass(frozen=True)
class AffineTheory:
    """Base algebra plus the variety profile it satisfies."""

    base: FiniteAlgebra
    profile: VarietyProfile

    def __post_init__(self):
        report = check_laws(self.base, self.profile)
        if not report.passed:
            bad = ", ".join(c.law for c in report.failures())
            raise ValueError(f"base algebra violates {self.profile.name} laws: {bad}")


# ---------------------------------------------------------------------------
# pointwise function algebra, computed on demand


def pointwise_apply(
    base: FiniteAlgebra, symbol_index: int, arg_tuples: Sequence[tuple[int, ...]], npoints: int
) -> tuple[int, ...]:
    return tuple(
        base.apply_index(symbol_index, tuple(t[x] for t in arg_tuples))
        for x in range(npoints)
    )


def constant_tuples(base: FiniteAlgebra, npoints: int) -> list[tuple[int, ...]]:
    """The nullary operations of V^X: one constant tuple per nullary symbol."""
    out = []
    for si, (_, arity) in enumerate(base.signature.symbols):
        if arity == 0:
            out.append((base.apply_index(si, ()),) * npoints)
    return out


def pointwise_close(
    base: FiniteAlgebra,
    npoints: int,
    seed: Sequence[tuple[int, ...]],
    budget: int = DEFAULT_BUDGET,
) -> tuple[tuple[int, ...], ...]:
    """Least pointwise subalgebra of V^X containing the seed tuples."""
    closed = set(seed)
    closed.update(constant_tuples(base, npoints))
    work = True
    while work:
        work = False
        current = sorted(closed)
        for si, (_, arity) in enumerate(base.signature.symbols):
            if arity == 0:
                continue
            for args in iproduct(current, repeat=arity):
                v = pointwise_apply(base, si, args, npoints)
                if v not in closed:
                    closed.add(v)
                    work = True
                    if len(closed) > budget:
                        raise BudgetExceededError(
                            len(closed), budget, "pointwise closure"
                        )
    return tuple(sorted(closed))


def all_tuples(
    base: FiniteAlgebra, npoints: int, budget: int = DEFAULT_BUDGET
) -> tuple[tuple[int, ...], ...]:
    total = base.size**npoints
    if total > budget:
        raise BudgetExceededError(total, budget, "function algebra")
    return tuple(iproduct(range(base.size), repeat=npoints))


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class AffineSpace:
    theory: AffineTheory
    points: tuple[str, ...]
    opens: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("point labels must be unique")
        object.__setattr__(self, "opens", tuple(sorted(set(self.opens))))


def is_space(
    theory: AffineTheory, points: Sequence[str], opens: Sequence[tuple[int, ...]]
) -> tuple[bool, Optional[tuple[str, tuple, tuple[int, ...]]]]:
    """Is the tuple family closed under all pointwise operations?

    Returns (ok, witness) where the witness is (symbol, argument tuples,
    missing result tuple).
    """
    n = len(points)
    base = theory.base
    fam = set()
    for t in opens:
        if len(t) != n or any(not (0 <= v < base.size) for v in t):
            raise MalformedMapError(f"open {t} is not a tuple over the point set")
        fam.add(tuple(t))
    for si, (name, arity) in enumerate(base.signature.symbols):
        for args in iproduct(sorted(fam), repeat=arity):
            v = pointwise_apply(base, si, args, n)
            if v not in fam:
                return False, (name, args, v)
    return True, None


def is_space_morphism(
    f: Sequence[int], source: AffineSpace, target: AffineSpace
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Does every target open pull back into the source structure?"""
    f = _validate_point_map(f, source.points, target.points)
    opens1 = set(source.opens)
    for alpha in target.opens:
        pulled = tuple(alpha[f[x]] for x in range(len(source.points)))
        if pulled not in opens1:
            return False, alpha
    return True, None


def _validate_point_map(f, source_points, target_points) -> tuple[int, ...]:
    f = tuple(f)
    if len(f) != len(source_points):
        raise MalformedMapError("point map is not total over the source points")
    if any(not (0 <= v < len(target_points)) for v in f):
        raise MalformedMapError("point map image outside the target points")
    return f


def initial_lift(
    theory: AffineTheory,
    points: Sequence[str],
    family: Sequence[tuple[Sequence[int], AffineSpace]],
    budget: int = DEFAULT_BUDGET,
) -> AffineSpace:
    """Least structure on the points making every f_i a morphism.

    Pulls every open of every target back along its map and closes the
    union pointwise.
    """
    points = tuple(points)
    seed = []
    for f, space in family:
        f = _validate_point_map(f, points, space.points)
        for alpha in space.opens:
            seed.append(tuple(alpha[f[x]] for x in range(len(points))))
    opens = pointwise_close(theory.base, len(points), seed, budget)
    return AffineSpace(theory, points, opens)


def final_lift(
    theory: AffineTheory,
    points: Sequence[str],
    family: Sequence[tuple[Sequence[int], AffineSpace]],
    budget: int = DEFAULT_BUDGET,
) -> AffineSpace:
    """Greatest structure making every f_i (into the points) a morphism."""
    points = tuple(points)
    checked = [
        (_validate_point_map(f, space.points, points), space) for f, space in family
    ]
    opens = []
    for alpha in all_tuples(theory.base, len(points), budget):
        ok = True
        for f, space in checked:
            pulled = tuple(alpha[f[x]] for x in range(len(space.points)))
            if pulled not in set(space.opens):
                ok = False
                break
        if ok:
            opens.append(alpha)
    return AffineSpace(theory, points, tuple(opens))


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class AffineSystem:
    theory: AffineTheory
    points: tuple[str, ...]
    algebra: FiniteAlgebra
    ext: tuple[tuple[int, ...], ...]  # one tuple X -> V per algebra element

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("point labels must be unique")
        if len(self.ext) != self.algebra.size:
            raise ValueError("ext must be total over the system algebra")


def is_system(sys: AffineSystem) -> tuple[bool, Optional[tuple[str, tuple[int, ...]]]]:
    """Is ext a homomorphism into the pointwise function algebra?"""
    base = sys.theory.base
    n = len(sys.points)
    if sys.algebra.signature != base.signature:
        return False, ("signature", ())
    for t in sys.ext:
        if len(t) != n or any(not (0 <= v < base.size) for v in t):
            raise MalformedMapError(f"extent {t} is not a tuple over the point set")
    for si, (name, arity) in enumerate(sys.algebra.signature.symbols):
        for args in iproduct(range(sys.algebra.size), repeat=arity):
            lhs = sys.ext[sys.algebra.apply_index(si, args)]
            rhs = pointwise_apply(base, si, [sys.ext[a] for a in args], n)
            if lhs != rhs:
                return False, (name, args)
    return True, None


def is_separated(sys: AffineSystem) -> bool:
    """A system is separated iff its extent map is injective."""
    return len(set(sys.ext)) == sys.algebra.size


@dataclass(frozen=True)
class SystemMorphism:
    """A point map plus an algebra homomorphism stored op-side.

    phi runs target.algebra -> source.algebra, which is the direction every
    concrete membership check uses.
    """

    source: AffineSystem
    target: AffineSystem
    f: tuple[int, ...]
    phi: Homomorphism


def is_system_morphism(
    m: SystemMorphism,
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check ext1(phi(a2))(x1) == ext2(a2)(f(x1)); witness is (a2, x1)."""
    f = _validate_point_map(m.f, m.source.points, m.target.points)
    if m.phi.source != m.target.algebra or m.phi.target != m.source.algebra:
        raise MalformedMapError("phi must map the target algebra into the source algebra")
    for a2 in range(m.target.algebra.size):
        pulled = m.source.ext[m.phi.mapping[a2]]
        for x1 in range(len(m.source.points)):
            if pulled[x1] != m.target.ext[a2][f[x1]]:
                return False, (a2, x1)
    return True, None


def identity_system_morphism(sys: AffineSystem) -> SystemMorphism:
    from .algebra import identity_hom

    return SystemMorphism(sys, sys, tuple(range(len(sys.points))), identity_hom(sys.algebra))


def compose_system_morphisms(m2: SystemMorphism, m1: SystemMorphism) -> SystemMorphism:
    """m2 after m1; point maps compose forward, phi composes backward."""
    if m1.target != m2.source:
        raise ValueError("system morphisms are not composable")
    f = tuple(m2.f[v] for v in m1.f)
    return SystemMorphism(m1.source, m2.target, f, m1.phi.compose(m2.phi))


# ---------------------------------------------------------------------------
# Vickers axioms (base algebra = two-element frame)


@dataclass(frozen=True)
class VickersReport:
    passed: bool
    meet_failures: tuple[tuple[tuple[int, ...], int], ...]  # (subset, point)
    join_failures: tuple[tuple[tuple[int, ...], int], ...]


def _require_two_frame(theory: AffineTheory) -> tuple[int, int]:
    base = theory.base
    for name in ("join", "meet", "bot", "top"):
        if not base.signature.has(name):
            raise ValueError("Vickers axioms need the frame signature")
    if base.size != 2:
        raise ValueError("Vickers axioms are stated over the two-element frame")
    return base.constant("bot"), base.constant("top")


def _fold(alg: FiniteAlgebra, op: str, unit: str, elems: Sequence[int]) -> int:
    acc = alg.constant(unit)
    for e in elems:
        acc = alg.apply(op, acc, e)
    return acc


def vickers_axiom_check(
    sys: AffineSystem, budget: int = DEFAULT_BUDGET
) -> VickersReport:
    """Exhaustive check of the two topological-system axioms.

    For every subset S of the system algebra: a point satisfies the meet of
    S iff it satisfies every member, and the join of S iff it satisfies
    some member.
    """
    _, top = _require_two_frame(sys.theory)
    a = sys.algebra
    total = 2**a.size
    if total > budget:
        raise BudgetExceededError(total, budget, "subset sweep")
    meet_fail, join_fail = [], []
    for mask in range(total):
        subset = tuple(e for e in range(a.size) if mask >> e & 1)
        meet_s = _fold(a, "meet", "top", subset)
        join_s = _fold(a, "join", "bot", subset)
        for x in range(len(sys.points)):
            holds_all = all(sys.ext[e][x] == top for e in subset)
            holds_some = any(sys.ext[e][x] == top for e in subset)
            if (sys.ext[meet_s][x] == top) != holds_all:
                meet_fail.append((subset, x))
            if (sys.ext[join_s][x] == top) != holds_some:
                join_fail.append((subset, x))
    return VickersReport(not meet_fail and not join_fail, tuple(meet_fail), tuple(join_fail))


# ---------------------------------------------------------------------------
# variable-basis morphism check


def variable_basis_morphism_check(
    f: Sequence[int],
    phi_op: Homomorphism,
    source: AffineSpace,
    target: AffineSpace,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Check phi_op . alpha . f lands in the source structure for every
    target open.  phi_op maps the target base into the source base.
    """
    if phi_op.source != target.theory.base or phi_op.target != source.theory.base:
        raise MalformedMapError("phi_op must map the target base into the source base")
    f = _validate_point_map(f, source.points, target.points)
    opens1 = set(source.opens)
    for alpha in target.opens:
        pulled = tuple(phi_op.mapping[alpha[f[x]]] for x in range(len(source.points)))
        if pulled not in opens1:
            return False, alpha
    return True, None
