"""Finite algebras as operation tables.

Carriers are index ranges 0..n-1 with optional labels.  Operation tables are
stored flat in mixed-radix order, so every value is hashable and comparable,
and all enumeration output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    MalformedMapError,
    SignatureMismatchError,
    VacuousFamilyError,
)

# A term is either a variable (int) or (symbol, subterm, ...).
Term = Union[int, tuple]


@dataclass(frozen=True)
class Signature:
    """An ordered list of finitary operation symbols."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        for name, arity in self.symbols:
            if arity < 0:
                raise ValueError(f"negative arity for {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, k in self.symbols:
            if n == name:
                return k
        raise SignatureMismatchError(name)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.symbols):
            if n == name:
                return i
        raise SignatureMismatchError(name)

    def has(self, name: str, arity: Optional[int] = None) -> bool:
        return any(n == name and (arity is None or k == arity) for n, k in self.symbols)


def _flat_index(args: Sequence[int], n: int) -> int:
    idx = 0
    for a in args:
        idx = idx * n + a
    return idx


@dataclass(frozen=True)
class FiniteAlgebra:
    """A finite carrier with one flat operation table per signature symbol."""

    signature: Signature
    size: int
    labels: tuple[str, ...]
    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("carrier must be nonempty")
        if len(self.labels) != self.size:
            raise ValueError("label count must match carrier size")
        if len(set(self.labels)) != self.size:
            raise ValueError("element labels must be unique")
        if len(self.tables) != len(self.signature.symbols):
            raise ValueError("one table per symbol required")
        for (name, arity), table in zip(self.signature.symbols, self.tables):
            if len(table) != self.size**arity:
                raise ValueError(f"table for {name!r} is not total")
            if any(not (0 <= v < self.size) for v in table):
                raise ValueError(f"table for {name!r} has out-of-range entries")

    def apply_index(self, symbol_index: int, args: Sequence[int]) -> int:
        return self.tables[symbol_index][_flat_index(args, self.size)]

    def apply(self, name: str, *args: int) -> int:
        return self.apply_index(self.signature.index(name), args)

    def constant(self, name: str) -> int:
        """Value of a nullary symbol."""
        return self.apply(name)

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labeled {label!r}") from None

    def eval_term(self, term: Term, env: Sequence[int]) -> int:
        if isinstance(term, int):
            return env[term]
        name = term[0]
        args = tuple(self.eval_term(t, env) for t in term[1:])
        return self.apply(name, *args)


def make_algebra(
    signature: Signature,
    tables: Mapping[str, Mapping[tuple, int]],
    labels: Optional[Sequence[str]] = None,
    size: Optional[int] = None,
) -> FiniteAlgebra:
    """Build an algebra from per-symbol dicts keyed by argument tuples."""
    if size is None:
        if labels is None:
            raise ValueError("need size or labels")
        size = len(labels)
    if labels is None:
        labels = tuple(f"e{i}" for i in range(size))
    flat = []
    for name, arity in signature.symbols:
        if name not in tables:
            raise SignatureMismatchError(name, "no table supplied")
        t = tables[name]
        row = []
        for args in iproduct(range(size), repeat=arity):
            if args not in t:
                raise ValueError(f"table for {name!r} missing entry {args}")
            row.append(t[args])
        flat.append(tuple(row))
    return FiniteAlgebra(signature, size, tuple(labels), tuple(flat))


# ---------------------------------------------------------------------------
# variety profiles


@dataclass(frozen=True)
class Law:
    """A universally quantified equation lhs = rhs over nvars variables."""

    name: str
    nvars: int
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class VarietyProfile:
    name: str
    required: tuple[tuple[str, int], ...]
    laws: tuple[Law, ...]


def _semilattice_laws(op: str, unit: str) -> tuple[Law, ...]:
    return (
        Law(f"{op}-assoc", 3, (op, (op, 0, 1), 2), (op, 0, (op, 1, 2))),
        Law(f"{op}-comm", 2, (op, 0, 1), (op, 1, 0)),
        Law(f"{op}-idem", 1, (op, 0, 0), 0),
        Law(f"{op}-{unit}-unit", 1, (op, (unit,), 0), 0),
    )


_LATTICE_LAWS = (
    _semilattice_laws("join", "bot")
    + _semilattice_laws("meet", "top")
    + (
        Law("absorb-join", 2, ("join", 0, ("meet", 0, 1)), 0),
        Law("absorb-meet", 2, ("meet", 0, ("join", 0, 1)), 0),
    )
)

_DISTRIB = Law(
    "meet-distributes-over-join",
    3,
    ("meet", 0, ("join", 1, 2)),
    ("join", ("meet", 0, 1), ("meet", 0, 2)),
)

JOIN_SEMILATTICE = VarietyProfile(
    "JoinSemilattice",
    (("join", 2), ("bot", 0)),
    _semilattice_laws("join", "bot"),
)

MEET_SEMILATTICE = VarietyProfile(
    "MeetSemilattice",
    (("meet", 2), ("top", 0)),
    _semilattice_laws("meet", "top"),
)

# Finite surrogate: arbitrary joins/meets are generated by the binary
# operations plus the nullary bounds, and on a finite distributive lattice
# the binary distributive law already gives frame distributivity.
FRAME = VarietyProfile(
    "Frame",
    (("join", 2), ("meet", 2), ("bot", 0), ("top", 0)),
    _LATTICE_LAWS + (_DISTRIB,),
)

COMPLETE_BOOLEAN = VarietyProfile(
    "CompleteBooleanAlgebra",
    (("join", 2), ("meet", 2), ("star", 1), ("bot", 0), ("top", 0)),
    _LATTICE_LAWS
    + (
        _DISTRIB,
        Law("complement-join", 1, ("join", 0, ("star", 0)), ("top",)),
        Law("complement-meet", 1, ("meet", 0, ("star", 0)), ("bot",)),
    ),
)

CLOSURE_SEMILATTICE = VarietyProfile(
    "ClosureSemilattice",
    (("meet", 2), ("top", 0), ("bot", 0)),
    _semilattice_laws("meet", "top")
    + (Law("bot-least", 1, ("meet", ("bot",), 0), ("bot",)),),
)

PROFILES: dict[str, VarietyProfile] = {
    p.name: p
    for p in (
        JOIN_SEMILATTICE,
        MEET_SEMILATTICE,
        FRAME,
        COMPLETE_BOOLEAN,
        CLOSURE_SEMILATTICE,
    )
}


@dataclass(frozen=True)
class LawCheck:
    law: str
    passed: bool
    witness: Optional[tuple[int, ...]]


@dataclass(frozen=True)
class LawReport:
    checks: tuple[LawCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[LawCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def check_laws(algebra: FiniteAlgebra, profile: VarietyProfile) -> LawReport:
    """Exhaustively check every profile law over all variable assignments."""
    for name, arity in profile.required:
        if not algebra.signature.has(name, arity):
            raise SignatureMismatchError(name, f"required by {profile.name}")
    checks = []
    for law in profile.laws:
        witness = None
        for env in iproduct(range(algebra.size), repeat=law.nvars):
            if algebra.eval_term(law.lhs, env) != algebra.eval_term(law.rhs, env):
                witness = env
                break
        checks.append(LawCheck(law.name, witness is None, witness))
    return LawReport(tuple(checks))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition endpoint mismatch")
        return Homomorphism(
            other.source, self.target, tuple(self.mapping[v] for v in other.mapping)
        )

    @property
    def injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    @property
    def surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.size

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def identity_hom(algebra: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(algebra, algebra, tuple(range(algebra.size)))


def _validate_map(source: FiniteAlgebra, target: FiniteAlgebra, mapping) -> tuple[int, ...]:
    mapping = tuple(mapping)
    if len(mapping) != source.size:
        raise MalformedMapError(
            f"mapping has {len(mapping)} entries, carrier has {source.size}"
        )
    for v in mapping:
        if not isinstance(v, int) or not (0 <= v < target.size):
            raise MalformedMapError(f"image {v!r} outside target carrier")
    return mapping


def is_homomorphism(
    source: FiniteAlgebra, target: FiniteAlgebra, mapping: Sequence[int]
) -> tuple[bool, Optional[tuple[str, tuple[int, ...]]]]:
    """Check f(op(args)) == op(f(args)) for every symbol and argument tuple.

    Returns (ok, first failing (symbol, args)).
    """
    if source.signature != target.signature:
        raise SignatureMismatchError(
            "*", "source and target must share a signature"
        )
    f = _validate_map(source, target, mapping)
    for si, (name, arity) in enumerate(source.signature.symbols):
        for args in iproduct(range(source.size), repeat=arity):
            lhs = f[source.apply_index(si, args)]
            rhs = target.apply_index(si, tuple(f[a] for a in args))
            if lhs != rhs:
                return False, (name, args)
    return True, None


def enumerate_homs(
    source: FiniteAlgebra, target: FiniteAlgebra, budget: int = DEFAULT_BUDGET
) -> tuple[Homomorphism, ...]:
    """All homomorphisms source -> target, lexicographic by mapping array.

    Depth-first assignment in element order; each extension is checked
    against every operation tuple whose images are fully determined.
    """
    if source.signature != target.signature:
        raise SignatureMismatchError("*", "source and target must share a signature")
    total = target.size**source.size
    if total > budget:
        raise BudgetExceededError(total, budget, "hom enumeration")

    # constraints[(m)] = tuples whose largest involved element index is m
    constraints: list[list[tuple[int, tuple[int, ...], int]]] = [
        [] for _ in range(source.size)
    ]
    for si, (_, arity) in enumerate(source.signature.symbols):
        for args in iproduct(range(source.size), repeat=arity):
            res = source.apply_index(si, args)
            constraints[max((*args, res))].append((si, args, res))

    out: list[Homomorphism] = []
    f = [0] * source.size

    def consistent(depth: int) -> bool:
        for si, args, res in constraints[depth]:
            if target.apply_index(si, tuple(f[a] for a in args)) != f[res]:
                return False
        return True

    def descend(depth: int):
        if depth == source.size:
            out.append(Homomorphism(source, target, tuple(f)))
            return
        for v in range(target.size):
            f[depth] = v
            if consistent(depth):
                descend(depth + 1)

    descend(0)
    return tuple(out)


# ---------------------------------------------------------------------------
# subalgebras, products, images, congruences


def generate_subalgebra(algebra: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    """Least subset containing the seed, closed under all operations."""
    closed = set(seed)
    for e in closed:
        if not (0 <= e < algebra.size):
            raise ValueError(f"seed element {e} outside carrier")
    work = True
    while work:
        work = False
        for si, (_, arity) in enumerate(algebra.signature.symbols):
            for args in iproduct(sorted(closed), repeat=arity):
                v = algebra.apply_index(si, args)
                if v not in closed:
                    closed.add(v)
                    work = True
    return frozenset(closed)


def subalgebra_on(
    algebra: FiniteAlgebra, elements: Iterable[int]
) -> tuple[FiniteAlgebra, Homomorphism]:
    """Restrict tables to a closed element set; returns (sub, inclusion)."""
    elems = sorted(set(elements))
    pos = {e: i for i, e in enumerate(elems)}
    tables = []
    for si, (name, arity) in enumerate(algebra.signature.symbols):
        row = []
        for args in iproduct(elems, repeat=arity):
            v = algebra.apply_index(si, args)
            if v not in pos:
                raise ValueError(f"element set not closed under {name!r} at {args}")
            row.append(pos[v])
        tables.append(tuple(row))
    sub = FiniteAlgebra(
        algebra.signature,
        len(elems),
        tuple(algebra.labels[e] for e in elems),
        tuple(tables),
    )
    return sub, Homomorphism(sub, algebra, tuple(elems))


def product(
    a: FiniteAlgebra, b: FiniteAlgebra, budget: int = DEFAULT_BUDGET
) -> tuple[FiniteAlgebra, Homomorphism, Homomorphism]:
    """Componentwise product with both projections."""
    if a.signature != b.signature:
        raise SignatureMismatchError("*", "product factors must share a signature")
    n = a.size * b.size
    if n > budget:
        raise BudgetExceededError(n, budget, "product carrier")
    pairs = [(x, y) for x in range(a.size) for y in range(b.size)]
    pos = {p: i for i, p in enumerate(pairs)}
    tables = []
    for si, (_, arity) in enumerate(a.signature.symbols):
        row = []
        for args in iproduct(pairs, repeat=arity):
            va = a.apply_index(si, tuple(p[0] for p in args))
            vb = b.apply_index(si, tuple(p[1] for p in args))
            row.append(pos[(va, vb)])
        tables.append(tuple(row))
    labels = tuple(f"({a.labels[x]},{b.labels[y]})" for x, y in pairs)
    prod = FiniteAlgebra(a.signature, n, labels, tuple(tables))
    p1 = Homomorphism(prod, a, tuple(x for x, _ in pairs))
    p2 = Homomorphism(prod, b, tuple(y for _, y in pairs))
    return prod, p1, p2


@dataclass(frozen=True)
class Congruence:
    """A compatible equivalence, stored as its pair set."""

    algebra: FiniteAlgebra
    pairs: tuple[tuple[int, int], ...]

    def classes(self) -> tuple[frozenset[int], ...]:
        rep: dict[int, set[int]] = {}
        for b1, b2 in self.pairs:
            rep.setdefault(b1, set()).add(b2)
        seen, out = set(), []
        for e in range(self.algebra.size):
            if e not in seen:
                cls = frozenset(rep.get(e, {e}))
                seen |= cls
                out.append(cls)
        return tuple(out)


def kernel_pair(h: Homomorphism) -> Congruence:
    """Pairs identified by h; a subalgebra of source x source."""
    pairs = tuple(
        (b1, b2)
        for b1 in range(h.source.size)
        for b2 in range(h.source.size)
        if h.mapping[b1] == h.mapping[b2]
    )
    return Congruence(h.source, pairs)


def congruence_algebra(
    c: Congruence,
) -> tuple[FiniteAlgebra, Homomorphism, Homomorphism]:
    """The pair set as an algebra, with both projection homomorphisms."""
    a = c.algebra
    pos = {p: i for i, p in enumerate(c.pairs)}
    tables = []
    for si, (name, arity) in enumerate(a.signature.symbols):
        row = []
        for args in iproduct(c.pairs, repeat=arity):
            v = (
                a.apply_index(si, tuple(p[0] for p in args)),
                a.apply_index(si, tuple(p[1] for p in args)),
            )
            if v not in pos:
                raise ValueError(f"pair set not closed under {name!r}")
            row.append(pos[v])
        tables.append(tuple(row))
    labels = tuple(f"({a.labels[x]},{a.labels[y]})" for x, y in c.pairs)
    k = FiniteAlgebra(a.signature, len(c.pairs), labels, tuple(tables))
    p1 = Homomorphism(k, a, tuple(x for x, _ in c.pairs))
    p2 = Homomorphism(k, a, tuple(y for _, y in c.pairs))
    return k, p1, p2


def is_congruence(c: Congruence) -> bool:
    ps = set(c.pairs)
    n = c.algebra.size
    if any((e, e) not in ps for e in range(n)):
        return False
    if any((b, a) not in ps for a, b in ps):
        return False
    if any(
        (a, d) not in ps for a, b in ps for b2, d in ps if b == b2
    ):
        return False
    try:
        congruence_algebra(c)
    except ValueError:
        return False
    return True


@dataclass(frozen=True)
class ImageFactorization:
    sub: FiniteAlgebra
    corestriction: Homomorphism  # source ->> sub
    inclusion: Homomorphism  # sub -> target


def image(h: Homomorphism) -> ImageFactorization:
    """Image subalgebra with the surjection/inclusion factorization of h."""
    elems = sorted(set(h.mapping))
    sub, incl = subalgebra_on(h.target, elems)
    pos = {e: i for i, e in enumerate(elems)}
    core = Homomorphism(h.source, sub, tuple(pos[v] for v in h.mapping))
    return ImageFactorization(sub, core, incl)


def coequalizer_check(
    c: Congruence,
    q: Homomorphism,
    test_targets: Sequence[FiniteAlgebra],
    budget: int = DEFAULT_BUDGET,
) -> tuple[bool, Optional[str]]:
    """Is q a coequalizer of the congruence projections?

    Verified against a finite test family: every hom out of the source that
    coequalizes the projections must factor uniquely through q, for every
    supplied target.
    """
    if not test_targets:
        raise VacuousFamilyError("coequalizer check needs a nonempty test family")
    if q.source != c.algebra:
        raise ValueError("q must start at the congruence's algebra")
    for b1, b2 in c.pairs:
        if q.mapping[b1] != q.mapping[b2]:
            return False, f"q does not coequalize pair ({b1},{b2})"
    for t in test_targets:
        quotient_homs = enumerate_homs(q.target, t, budget)
        for h in enumerate_homs(q.source, t, budget):
            if any(h.mapping[b1] != h.mapping[b2] for b1, b2 in c.pairs):
                continue
            factorizations = [
                u
                for u in quotient_homs
                if all(u.mapping[q.mapping[x]] == h.mapping[x] for x in range(q.source.size))
            ]
            if len(factorizations) != 1:
                return False, (
                    f"hom {h.mapping} into {t.labels} has "
                    f"{len(factorizations)} factorizations"
                )
    return True, None


# ---------------------------------------------------------------------------
# isomorphism search


def find_isomorphism(
    a: FiniteAlgebra, b: FiniteAlgebra, budget: int = DEFAULT_BUDGET
) -> Optional[Homomorphism]:
    """First bijective homomorphism a -> b in canonical order, if any."""
    if a.signature != b.signature or a.size != b.size:
        return None
    for h in enumerate_homs(a, b, budget):
        if h.bijective:
            return h
    return None


def algebras_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> bool:
    return find_isomorphism(a, b, budget) is not None
