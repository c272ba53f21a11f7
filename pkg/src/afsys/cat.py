"""Finite categories, functors, and natural transformations.

Everything is small enough to verify laws by exhaustion; every check
returns a report carrying a witness for the first violation found.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional


@dataclass(frozen=True)
class CatReport:
    passed: bool
    failures: tuple[str, ...] = ()


@dataclass
class FiniteCategory:
    objects: tuple[str, ...]
    morphisms: dict[str, tuple[str, str]]  # name -> (dom, cod)
    identities: dict[str, str]  # object -> identity morphism name
    composition: dict[tuple[str, str], str]  # (g, f) -> g . f when cod f == dom g

    def dom(self, m: str) -> str:
        return self.morphisms[m][0]

    def cod(self, m: str) -> str:
        return self.morphisms[m][1]

    def compose(self, g: str, f: str) -> str:
        if self.cod(f) != self.dom(g):
            raise ValueError(f"{g} . {f} is undefined")
        return self.composition[(g, f)]

    def composable_pairs(self):
        for g in self.morphisms:
            for f in self.morphisms:
                if self.cod(f) == self.dom(g):
                    yield g, f

    def __eq__(self, other):
        return (
            isinstance(other, FiniteCategory)
            and self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identities == other.identities
            and self.composition == other.composition
        )


def check_category(c: FiniteCategory) -> CatReport:
    fails = []
    for obj in c.objects:
        i = c.identities.get(obj)
        if i is None or c.morphisms.get(i) != (obj, obj):
            fails.append(f"identity missing or mistyped at object {obj}")
    for m, (d, co) in c.morphisms.items():
        if d not in c.objects or co not in c.objects:
            fails.append(f"morphism {m} has unknown endpoints")
    for g, f in c.composable_pairs():
        if (g, f) not in c.composition:
            fails.append(f"composite {g}.{f} undefined")
            continue
        h = c.composition[(g, f)]
        if h not in c.morphisms:
            fails.append(f"composite {g}.{f} = {h} is not a morphism")
        elif c.morphisms[h] != (c.dom(f), c.cod(g)):
            fails.append(f"composite {g}.{f} misdirected (triple witness {g},{f},{h})")
    if not fails:
        for m in c.morphisms:
            if c.compose(m, c.identities[c.dom(m)]) != m:
                fails.append(f"right identity fails at {m}")
            if c.compose(c.identities[c.cod(m)], m) != m:
                fails.append(f"left identity fails at {m}")
        for h in c.morphisms:
            for g in c.morphisms:
                if c.cod(g) != c.dom(h):
                    continue
                for f in c.morphisms:
                    if c.cod(f) != c.dom(g):
                        continue
                    if c.compose(c.compose(h, g), f) != c.compose(h, c.compose(g, f)):
                        fails.append(f"associativity fails on triple ({h},{g},{f})")
    return CatReport(not fails, tuple(fails))


def discrete_category(objects) -> FiniteCategory:
    objects = tuple(objects)
    morphisms = {f"id_{o}": (o, o) for o in objects}
    identities = {o: f"id_{o}" for o in objects}
    composition = {(i, i): i for i in morphisms}
    return FiniteCategory(objects, morphisms, identities, composition)


def opposite_category(c: FiniteCategory) -> FiniteCategory:
    morphisms = {m: (co, d) for m, (d, co) in c.morphisms.items()}
    composition = {(f, g): h for (g, f), h in c.composition.items()}
    return FiniteCategory(c.objects, morphisms, dict(c.identities), composition)


# ---------------------------------------------------------------------------
# functors between finite categories


@dataclass
class FiniteFunctor:
    source: FiniteCategory
    target: FiniteCategory
    obj_map: dict[str, str]
    mor_map: dict[str, str]
    contravariant: bool = False

    def on_obj(self, o: str) -> str:
        return self.obj_map[o]

    def on_mor(self, m: str) -> str:
        return self.mor_map[m]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFunctor)
            and self.source == other.source
            and self.target == other.target
            and self.obj_map == other.obj_map
            and self.mor_map == other.mor_map
            and self.contravariant == other.contravariant
        )


def check_functor(fn: FiniteFunctor) -> CatReport:
    fails = []
    c, d = fn.source, fn.target
    for o in c.objects:
        if fn.obj_map.get(o) not in d.objects:
            fails.append(f"object {o} unmapped or mapped outside the target")
    for m, (do, co) in c.morphisms.items():
        img = fn.mor_map.get(m)
        if img not in d.morphisms:
            fails.append(f"morphism {m} unmapped")
            continue
        want = (fn.obj_map[co], fn.obj_map[do]) if fn.contravariant else (
            fn.obj_map[do],
            fn.obj_map[co],
        )
        if d.morphisms[img] != want:
            fails.append(f"morphism {m} image misdirected (witness {m})")
    if not fails:
        for o in c.objects:
            if fn.mor_map[c.identities[o]] != d.identities[fn.obj_map[o]]:
                fails.append(f"identity at {o} not preserved")
        for g, f in c.composable_pairs():
            h = fn.mor_map[c.compose(g, f)]
            if fn.contravariant:
                expect = d.compose(fn.mor_map[f], fn.mor_map[g])
            else:
                expect = d.compose(fn.mor_map[g], fn.mor_map[f])
            if h != expect:
                fails.append(f"composition not preserved on ({g},{f})")
    return CatReport(not fails, tuple(fails))


def identity_functor(c: FiniteCategory) -> FiniteFunctor:
    return FiniteFunctor(
        c, c, {o: o for o in c.objects}, {m: m for m in c.morphisms}
    )


def compose_functors(g: FiniteFunctor, f: FiniteFunctor) -> FiniteFunctor:
    """g after f; contravariance flags multiply."""
    if f.target != g.source:
        raise ValueError("functors are not composable")
    return FiniteFunctor(
        f.source,
        g.target,
        {o: g.obj_map[v] for o, v in f.obj_map.items()},
        {m: g.mor_map[v] for m, v in f.mor_map.items()},
        f.contravariant != g.contravariant,
    )


# ---------------------------------------------------------------------------
# finite-set-valued functors (the Sen/Mod carriers)


@dataclass
class SetFunctor:
    """A functor from a finite category into finite sets."""

    source: FiniteCategory
    obj_sets: dict[str, tuple[str, ...]]
    mor_maps: dict[str, dict[str, str]]
    contravariant: bool = False

    def at(self, obj: str) -> tuple[str, ...]:
        return self.obj_sets[obj]

    def on(self, m: str) -> dict[str, str]:
        return self.mor_maps[m]

    def __eq__(self, other):
        return (
            isinstance(other, SetFunctor)
            and self.source == other.source
            and self.obj_sets == other.obj_sets
            and self.mor_maps == other.mor_maps
            and self.contravariant == other.contravariant
        )


def _map_domain(fn: SetFunctor, m: str) -> tuple[str, str]:
    d, c = fn.source.morphisms[m]
    return (c, d) if fn.contravariant else (d, c)


def check_set_functor(fn: SetFunctor) -> CatReport:
    fails = []
    c = fn.source
    for o in c.objects:
        vals = fn.obj_sets.get(o)
        if vals is None or len(set(vals)) != len(vals):
            fails.append(f"object {o} carries no set or duplicate elements")
    for m in c.morphisms:
        if m not in fn.mor_maps:
            fails.append(f"morphism {m} unmapped")
            continue
        d, co = _map_domain(fn, m)
        mp = fn.mor_maps[m]
        if set(mp.keys()) != set(fn.obj_sets.get(d, ())):
            fails.append(f"map for {m} is not total on {d}")
        elif any(v not in fn.obj_sets.get(co, ()) for v in mp.values()):
            fails.append(f"map for {m} lands outside {co}")
    if not fails:
        for o in c.objects:
            ident = fn.mor_maps[c.identities[o]]
            if any(ident[x] != x for x in fn.obj_sets[o]):
                fails.append(f"identity at {o} not the identity map")
        for g, f in c.composable_pairs():
            h = fn.mor_maps[c.compose(g, f)]
            if fn.contravariant:
                expect = {x: fn.mor_maps[f][fn.mor_maps[g][x]] for x in h}
            else:
                expect = {x: fn.mor_maps[g][fn.mor_maps[f][x]] for x in h}
            if h != expect:
                fails.append(f"composition not preserved on ({g},{f})")
    return CatReport(not fails, tuple(fails))


def precompose_set_functor(fn: SetFunctor, via: FiniteFunctor) -> SetFunctor:
    """fn . via, a set functor on via's source."""
    if via.target != fn.source:
        raise ValueError("functors are not composable")
    if via.contravariant:
        raise ValueError("precomposition along contravariant functors unsupported")
    return SetFunctor(
        via.source,
        {o: fn.obj_sets[via.obj_map[o]] for o in via.source.objects},
        {m: dict(fn.mor_maps[via.mor_map[m]]) for m in via.source.morphisms},
        fn.contravariant,
    )


# ---------------------------------------------------------------------------
# natural transformations


@dataclass
class FiniteNatTrans:
    """Components indexed by source-category objects.

    Between category-valued functors the components are target-category
    morphism names; between set-valued functors they are plain maps.
    """

    source: object  # FiniteFunctor | SetFunctor
    target: object
    components: dict[str, object]


def check_nat_trans(nt: FiniteNatTrans) -> CatReport:
    if isinstance(nt.source, SetFunctor):
        return _check_set_nat(nt)
    return _check_cat_nat(nt)


def _check_cat_nat(nt: FiniteNatTrans) -> CatReport:
    f, g = nt.source, nt.target
    fails = []
    if f.source != g.source or f.target != g.target or f.contravariant != g.contravariant:
        return CatReport(False, ("functor endpoints disagree",))
    d = f.target
    for o in f.source.objects:
        comp = nt.components.get(o)
        if comp not in d.morphisms or d.morphisms[comp] != (f.obj_map[o], g.obj_map[o]):
            fails.append(f"component at {o} missing or mistyped")
    if not fails:
        for m, (do, co) in f.source.morphisms.items():
            if f.contravariant:
                lhs = d.compose(nt.components[do], f.mor_map[m])
                rhs = d.compose(g.mor_map[m], nt.components[co])
            else:
                lhs = d.compose(nt.components[co], f.mor_map[m])
                rhs = d.compose(g.mor_map[m], nt.components[do])
            if lhs != rhs:
                fails.append(f"naturality square fails at {m}")
    return CatReport(not fails, tuple(fails))


def _check_set_nat(nt: FiniteNatTrans) -> CatReport:
    f, g = nt.source, nt.target
    fails = []
    if f.source != g.source or f.contravariant != g.contravariant:
        return CatReport(False, ("functor endpoints disagree",))
    for o in f.source.objects:
        comp = nt.components.get(o)
        if not isinstance(comp, Mapping) or set(comp.keys()) != set(f.obj_sets[o]):
            fails.append(f"component at {o} missing or not total")
        elif any(v not in g.obj_sets[o] for v in comp.values()):
            fails.append(f"component at {o} lands outside the target set")
    if not fails:
        for m, (do, co) in f.source.morphisms.items():
            if f.contravariant:
                lhs = {x: nt.components[do][f.mor_maps[m][x]] for x in f.obj_sets[co]}
                rhs = {x: g.mor_maps[m][nt.components[co][x]] for x in f.obj_sets[co]}
            else:
                lhs = {x: nt.components[co][f.mor_maps[m][x]] for x in f.obj_sets[do]}
                rhs = {x: g.mor_maps[m][nt.components[do][x]] for x in f.obj_sets[do]}
            if lhs != rhs:
                fails.append(f"naturality square fails at {m}")
    return CatReport(not fails, tuple(fails))


def identity_nat_trans(fn) -> FiniteNatTrans:
    if isinstance(fn, SetFunctor):
        comps = {o: {x: x for x in fn.obj_sets[o]} for o in fn.source.objects}
    else:
        comps = {o: fn.target.identities[fn.obj_map[o]] for o in fn.source.objects}
    return FiniteNatTrans(fn, fn, comps)


def vertical_compose(nt2: FiniteNatTrans, nt1: FiniteNatTrans) -> FiniteNatTrans:
    if nt1.target != nt2.source:
        raise ValueError("natural transformations are not composable")
    if isinstance(nt1.source, SetFunctor):
        comps = {
            o: {x: nt2.components[o][nt1.components[o][x]] for x in nt1.components[o]}
            for o in nt1.source.source.objects
        }
    else:
        cat = nt1.source.target
        comps = {
            o: cat.compose(nt2.components[o], nt1.components[o])
            for o in nt1.source.source.objects
        }
    return FiniteNatTrans(nt1.source, nt2.target, comps)


def whisker(nt: FiniteNatTrans, via: FiniteFunctor) -> FiniteNatTrans:
    """Restrict a transformation's components along a functor into its
    source category."""
    src = nt.source
    if isinstance(src, SetFunctor):
        new_source = precompose_set_functor(src, via)
        new_target = precompose_set_functor(nt.target, via)
        comps = {
            o: dict(nt.components[via.obj_map[o]]) for o in via.source.objects
        }
    else:
        new_source = compose_functors(src, via)
        new_target = compose_functors(nt.target, via)
        comps = {o: nt.components[via.obj_map[o]] for o in via.source.objects}
    return FiniteNatTrans(new_source, new_target, comps)
