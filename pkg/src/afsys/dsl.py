"""Line-oriented specification language (.afs) and its total parser.

The grammar has no expression language: every algebra is an explicit
table, every tuple is written over the declared point order, and each
statement lives on its own line.  Parsing never aborts; problems become
diagnostics with source spans and the offending entity is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import PROFILES, FiniteAlgebra, Homomorphism, Signature
from .cat import FiniteCategory, SetFunctor
from .errors import AfsysError
from .institutions import AffineInstitution, ElementaryInstitution
from .topology import (
    AffineSpace,
    AffineSystem,
    AffineTheory,
    SystemMorphism,
    identity_system_morphism,
)
from .functors import TheoryMorphism

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    line: int  # 1-based
    col: int  # 1-based
    message: str
    witness: Optional[str] = None


# entity payloads keep the names needed to print the declaration back out


@dataclass
class AlgebraDecl:
    algebra: FiniteAlgebra
    variety: str


@dataclass
class SpaceDecl:
    space: AffineSpace
    base_name: str


@dataclass
class SystemDecl:
    system: AffineSystem
    base_name: str
    carrier_name: str


@dataclass
class TheoryMorphismDecl:
    tm: TheoryMorphism
    source_name: str
    target_name: str


@dataclass
class InstitutionDecl:
    institution: ElementaryInstitution


@dataclass
class AfInstitutionDecl:
    institution: AffineInstitution
    base_name: str
    assigns: dict[str, str]  # sign object -> system name


@dataclass
class Entity:
    kind: str
    name: str
    value: object
    line: int = 0

    def __eq__(self, other):
        return (
            isinstance(other, Entity)
            and self.kind == other.kind
            and self.name == other.name
            and self.value == other.value
        )


@dataclass
class Workspace:
    entities: list[Entity] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def __eq__(self, other):
        return isinstance(other, Workspace) and self.entities == other.entities

    def find(self, kind: str, name: str) -> Optional[Entity]:
        for e in self.entities:
            if e.kind == kind and e.name == name:
                return e
        return None

    def of_kind(self, kind: str) -> list[Entity]:
        return [e for e in self.entities if e.kind == kind]

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


KINDS = (
    "algebra",
    "space",
    "system",
    "theorymorphism",
    "institution",
    "afinstitution",
)

# statement keywords that terminate a row list inside a block
_KEYWORDS = {
    "elements:",
    "op",
    "points:",
    "opens:",
    "carrier:",
    "ext:",
    "from",
    "h:",
    "relabel:",
    "sign",
    "sen",
    "mod",
    "sat",
    "action",
    "assign",
    "morphism",
    "objects:",
    "arrow",
    "compose",
    "}",
}


class _Cursor:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.i = 0
        self.diags: list[Diagnostic] = []

    def done(self) -> bool:
        return self.i >= len(self.lines)

    def peek(self) -> Optional[list[str]]:
        """Tokens of the next meaningful line, or None at end of input."""
        while self.i < len(self.lines):
            toks = _tokens(self.lines[self.i])
            if toks:
                return toks
            self.i += 1
        return None

    def take(self) -> list[str]:
        toks = self.peek()
        assert toks is not None
        self.i += 1
        return toks

    def lineno(self) -> int:
        return self.i + 1

    def col_of(self, token: str) -> int:
        if 0 < self.i <= len(self.lines):
            pos = self.lines[self.i - 1].find(token)
            if pos >= 0:
                return pos + 1
        return 1

    def error(self, message: str, witness: Optional[str] = None, token=None):
        col = self.col_of(token) if token else 1
        line = min(max(self.i, 1), len(self.lines)) or 1
        self.diags.append(Diagnostic("error", line, col, message, witness))

    def skip_block(self):
        """Consume lines until the brace depth opened so far closes."""
        depth = 1
        while depth and not self.done():
            toks = self.peek()
            if toks is None:
                return
            self.i += 1
            depth += toks.count("{") - toks.count("}")


def _tokens(line: str) -> list[str]:
    code = line.split("#", 1)[0]
    return code.split()


def _rows(cur: _Cursor) -> list[list[str]]:
    """Indented data rows: lines up to the next statement keyword or brace."""
    out = []
    while True:
        toks = cur.peek()
        if toks is None or toks[0] in _KEYWORDS:
            return out
        out.append(cur.take())


def _map_rows(cur: _Cursor, prefixes: tuple[str, ...]) -> list[list[str]]:
    """Rows of the shape PREFIX X -> Y; the prefix disambiguates them from
    statements spelled with '=' rather than '->'."""
    out = []
    while True:
        toks = cur.peek()
        if toks is None or toks[0] not in prefixes or "->" not in toks:
            return out
        out.append(cur.take())


def _arrow_row(toks: list[str]) -> Optional[tuple[list[str], list[str]]]:
    if "->" not in toks:
        return None
    k = toks.index("->")
    return toks[:k], toks[k + 1 :]


def parse(text: str) -> Workspace:
    cur = _Cursor(text)
    ws = Workspace()
    first = cur.peek()
    if first is None:
        return ws
    if first[:2] == ["afs", str(FORMAT_VERSION)]:
        cur.take()
    else:
        cur.error(f"expected header 'afs {FORMAT_VERSION}'", token=first[0])
    while (toks := cur.peek()) is not None:
        head = toks[0]
        handler = _TOP_LEVEL.get(head)
        if handler is None:
            cur.take()
            cur.error(f"unknown declaration {head!r}", token=head)
            if toks[-1] == "{":
                cur.skip_block()
            continue
        handler(cur, ws)
    ws.diagnostics = cur.diags
    return ws


def _declare(cur: _Cursor, ws: Workspace, kind: str, name: str, value, line: int):
    if ws.find(kind, name) is not None:
        cur.error(f"duplicate {kind} name {name!r}", token=name)
        return
    ws.entities.append(Entity(kind, name, value, line))


def _lookup_algebra(cur: _Cursor, ws: Workspace, name: str) -> Optional[AlgebraDecl]:
    ent = ws.find("algebra", name)
    if ent is None:
        cur.error(f"reference to undeclared algebra {name!r}", token=name)
        return None
    return ent.value


def _theory_of(cur: _Cursor, decl: AlgebraDecl) -> Optional[AffineTheory]:
    try:
        return AffineTheory(decl.algebra, PROFILES[decl.variety])
    except (ValueError, AfsysError) as exc:
        cur.error(str(exc))
        return None


# -- algebra ----------------------------------------------------------------


def _parse_algebra(cur: _Cursor, ws: Workspace):
    line = cur.lineno()
    toks = cur.take()
    if len(toks) != 4 or "=" not in toks[2] or toks[3] != "{":
        cur.error("expected: algebra NAME variety=V {")
        if toks[-1] == "{":
            cur.skip_block()
        return
    name = toks[1]
    vkey, _, variety = toks[2].partition("=")
    if vkey != "variety" or variety not in PROFILES:
        cur.error(f"unknown variety {toks[2]!r}", token=toks[2])
        cur.skip_block()
        return
    labels: list[str] = []
    ops: list[tuple[str, int, list[list[str]]]] = []
    bad = False
    while (t := cur.peek()) is not None and t != ["}"]:
        t = cur.take()
        if t[0] == "elements:":
            labels = t[1:]
        elif t[0] == "op" and len(t) == 2 and t[1].endswith(":") and "/" in t[1]:
            sym, _, ar = t[1][:-1].partition("/")
            if not ar.isdigit():
                cur.error(f"bad arity in {t[1]!r}", token=t[1])
                bad = True
                continue
            ops.append((sym, int(ar), _rows(cur)))
        else:
            cur.error(f"unexpected statement {t[0]!r} in algebra", token=t[0])
            bad = True
    if cur.peek() == ["}"]:
        cur.take()
    if bad:
        return
    if not labels or len(set(labels)) != len(labels):
        cur.error(f"algebra {name!r} needs distinct elements")
        return
    idx = {l: i for i, l in enumerate(labels)}
    n = len(labels)
    tables = []
    for sym, arity, rows in ops:
        table = [None] * n**arity
        for row in rows:
            parts = _arrow_row(row)
            if parts is None or len(parts[0]) != arity or len(parts[1]) != 1:
                cur.error(f"bad table row for {sym!r}", witness=" ".join(row))
                return
            args, (res,) = parts
            if any(a not in idx for a in args) or res not in idx:
                cur.error(f"unknown element in table row for {sym!r}", witness=" ".join(row))
                return
            flat = 0
            for a in args:
                flat = flat * n + idx[a]
            table[flat] = idx[res]
        if any(v is None for v in table):
            cur.error(f"table for {sym!r} in {name!r} is not total")
            return
        tables.append(tuple(table))
    try:
        alg = FiniteAlgebra(
            Signature(tuple((s, a) for s, a, _ in ops)), n, tuple(labels), tuple(tables)
        )
    except (ValueError, AfsysError) as exc:
        cur.error(str(exc))
        return
    decl = AlgebraDecl(alg, variety)
    if _theory_of(cur, decl) is None:
        return
    _declare(cur, ws, "algebra", name, decl, line)


# -- space ------------------------------------------------------------------


def _parse_points_tuple(cur, base: FiniteAlgebra, row: list[str], npoints: int):
    if len(row) != npoints:
        cur.error("tuple length does not match the point count", witness=" ".join(row))
        return None
    try:
        return tuple(base.label_index(v) for v in row)
    except KeyError as exc:
        cur.error(str(exc), witness=" ".join(row))
        return None


def _parse_space(cur: _Cursor, ws: Workspace):
    line = cur.lineno()
    toks = cur.take()
    if len(toks) != 5 or toks[2] != "over" or toks[4] != "{":
        cur.error("expected: space NAME over ALGEBRA {")
        if toks[-1] == "{":
            cur.skip_block()
        return
    name, base_name = toks[1], toks[3]
    decl = _lookup_algebra(cur, ws, base_name)
    points: list[str] = []
    open_rows: list[list[str]] = []
    while (t := cur.peek()) is not None and t != ["}"]:
        t = cur.take()
        if t[0] == "points:":
            points = t[1:]
        elif t[0] == "opens:":
            open_rows = _rows(cur)
        else:
            cur.error(f"unexpected statement {t[0]!r} in space", token=t[0])
    if cur.peek() == ["}"]:
        cur.take()
    if decl is None:
        return
    theory = _theory_of(cur, decl)
    if theory is None:
        return
    opens = []
    for row in open_rows:
        v = _parse_points_tuple(cur, decl.algebra, row, len(points))
        if v is None:
            return
        opens.append(v)
    try:
        space = AffineSpace(theory, tuple(points), tuple(opens))
    except (ValueError, AfsysError) as exc:
        cur.error(str(exc))
        return
    _declare(cur, ws, "space", name, SpaceDecl(space, base_name), line)


# -- system -----------------------------------------------------------------


def _parse_system(cur: _Cursor, ws: Workspace):
    line = cur.lineno()
    toks = cur.take()
    if len(toks) != 5 or toks[2] != "over" or toks[4] != "{":
        cur.error("expected: system NAME over ALGEBRA {")
        if toks[-1] == "{":
            cur.skip_block()
        return
    name, base_name = toks[1], toks[3]
    base_decl = _lookup_algebra(cur, ws, base_name)
    points: list[str] = []
    carrier_name = None
    ext_rows: list[list[str]] = []
    while (t := cur.peek()) is not None and t != ["}"]:
        t = cur.take()
        if t[0] == "points:":
            points = t[1:]
        elif t[0] == "carrier:" and len(t) == 2:
            carrier_name = t[1]
        elif t[0] == "ext:":
            ext_rows = _rows(cur)
        else:
            cur.error(f"unexpected statement {t[0]!r} in system", token=t[0])
    if cur.peek() == ["}"]:
        cur.take()
    if base_decl is None or carrier_name is None:
        if carrier_name is None:
            cur.error(f"system {name!r} declares no carrier")
        return
    carrier_decl = _lookup_algebra(cur, ws, carrier_name)
    if carrier_decl is None:
        return
    theory = _theory_of(cur, base_decl)
    if theory is None:
        return
    carrier = carrier_decl.algebra
    ext: list[Optional[tuple[int, ...]]] = [None] * carrier.size
    for row in ext_rows:
        parts = _arrow_row(row)
        if parts is None or len(parts[0]) != 1:
            cur.error("expected: ELEMENT -> value tuple", witness=" ".join(row))
            return
        (a,), vals = parts
        try:
            ai = carrier.label_index(a)
        except KeyError as exc:
            cur.error(str(exc), witness=a)
            return
        v = _parse_points_tuple(cur, base_decl.algebra, vals, len(points))
        if v is None:
            return
        ext[ai] = v
    if any(v is None for v in ext):
        cur.error(f"ext of system {name!r} is not total on the carrier")
        return
    try:
        system = AffineSystem(theory, tuple(points), carrier, tuple(ext))
    except (ValueError, AfsysError) as exc:
        cur.error(str(exc))
        return
    _declare(
        cur, ws, "system", name, SystemDecl(system, base_name, carrier_name), line
    )


# -- theory morphism ----------------------------------------------------------


def _parse_theorymorphism(cur: _Cursor, ws: Workspace):
    line = cur.lineno()
    toks = cur.take()
    if len(toks) != 3 or toks[2] != "{":
        cur.error("expected: theorymorphism NAME {")
        if toks[-1] == "{":
            cur.skip_block()
        return
    name = toks[1]
    src_name = tgt_name = None
    h_rows: list[list[str]] = []
    relabel_rows: list[list[str]] = []
    while (t := cur.peek()) is not None and t != ["}"]:
        t = cur.take()
        if t[0] == "from" and len(t) == 4 and t[2] == "to":
            src_name, tgt_name = t[1], t[3]
        elif t[0] == "h:":
            h_rows = _rows(cur)
        elif t[0] == "relabel:":
            relabel_rows = _rows(cur)
        else:
            cur.error(f"unexpected statement {t[0]!r} in theorymorphism", token=t[0])
    if cur.peek() == ["}"]:
        cur.take()
    if src_name is None:
        cur.error(f"theorymorphism {name!r} has no 'from ... to ...' line")
        return
    src_decl = _lookup_algebra(cur, ws, src_name)
    tgt_decl = _lookup_algebra(cur, ws, tgt_name)
    if src_decl is None or tgt_decl is None:
        return
    src_t, tgt_t = _theory_of(cur, src_decl), _theory_of(cur, tgt_decl)
    if src_t is None or tgt_t is None:
        return
    mapping: list[Optional[int]] = [None] * src_decl.algebra.size
    for row in h_rows:
        parts = _arrow_row(row)
        if parts is None or len(parts[0]) != 1 or len(parts[1]) != 1:
            cur.error("expected: ELEMENT -> ELEMENT", witness=" ".join(row))
            return
        try:
            mapping[src_decl.algebra.label_index(parts[0][0])] = (
                tgt_decl.algebra.label_index(parts[1][0])
            )
        except KeyError as exc:
            cur.error(str(exc), witness=" ".join(row))
            return
    if any(v is None for v in mapping):
        cur.error(f"h of {name!r} is not total")
        return
    relabel = []
    for row in relabel_rows:
        parts = _arrow_row(row)
        if parts is None or len(parts[0]) != 1 or len(parts[1]) != 1:
            cur.error("expected: LABEL -> LABEL", witness=" ".join(row))
            return
        relabel.append((parts[0][0], parts[1][0]))
    try:
        tm = TheoryMorphism(
            src_t,
            tgt_t,
            Homomorphism(src_decl.algebra, tgt_decl.algebra, tuple(mapping)),
            tuple(relabel),
        )
    except (ValueError, AfsysError) as exc:
        cur.error(str(exc))
        return
    _declare(
        cur, ws, "theorymorphism", name, TheoryMorphismDecl(tm, src_name, tgt_name), line
    )


# -- signature categories (shared by institution forms) -----------------------


def _parse_sign(cur: _Cursor) -> Optional[FiniteCategory]:
    toks = cur.take()
    if toks != ["sign", "{"]:
        cur.error("expected: sign {")
        return None
    objects: list[str] = []
    arrows: dict[str, tuple[str, str]] = {}
    composes: list[tuple[str, str, str]] = []
    while (t := cur.peek()) is not None and t != ["}"]:
        t = cur.take()
        if t[0] == "objects:":
            objects = t[1:]
        elif t[0] == "arrow" and len(t) == 6 and t[2] == ":" and t[4] == "->":
            arrows[t[1]] = (t[3], t[5])
        elif t[0] == "compose" and len(t) == 6 and t[2] == "." and t[4] == "=":
            composes.append((t[1], t[3], t[5]))
        else:
            cur.error(f"unexpected statement {t[0]!r} in sign", token=t[0])
            return None
    if cur.peek() == ["}"]:
        cur.take()
    morphisms = {f"id_{o}": (o, o) for o in objects}
    for m, (d, c) in arrows.items():
        if d not in objects or c not in objects:
            cur.error(f"arrow {m!r} has unknown endpoints", token=m)
            return None
        morphisms[m] = (d, c)
    identities = {o: f"id_{o}" for o in objects}
    composition = {}
    for m, (d, c) in morphisms.items():
        composition[(m, identities[d])] = m
        composition[(identities[c], m)] = m
    for g, f, h in composes:
        if g not in morphisms or f not in morphisms or h not in morphisms:
            cur.error(f"compose line mentions unknown arrow", witness=f"{g} . {f} = {h}")
            return None
        composition[(g, f)] = h
    cat = FiniteCategory(tuple(objects), morphisms, identities, composition)
    for g, f in cat.composable_pairs():
        if (g, f) not in composition:
            cur.error(f"composite of {g!r} after {f!r} is undeclared")
            return None
    return cat


# -- elementary institution ----------------------------------------------------


def _parse_institution(cur: _Cursor, ws: Workspace):
    line = cur.lineno()
    toks = cur.take()
    if len(toks) != 3 or toks[2] != "{":
        cur.error("expected: institution NAME {")
        if toks[-1] == "{":
            cur.skip_block()
        return
    name = toks[1]
    sign: Optional[FiniteCategory] = None
    sen_sets: dict[str, tuple[str, ...]] = {}
    mod_sets: dict[str, tuple[str, ...]] = {}
    sat_rows: dict[str, list[list[str]]] = {}
    actions: dict[str, list[list[str]]] = {}
    bad = False
    while (t := cur.peek()) is not None and t != ["}"]:
        if t[0] == "sign":
            sign = _parse_sign(cur)
            bad = bad or sign is None
            continue
        t = cur.take()
        if t[0] in ("sen", "mod") and len(t) >= 4 and t[2] == "=" and t[3] == "{":
            if t[-1] != "}":
                cur.error(f"unterminated {t[0]} set", witness=" ".join(t))
                bad = True
                continue
            (sen_sets if t[0] == "sen" else mod_sets)[t[1]] = tuple(t[4:-1])
        elif t[0] == "sat" and len(t) == 2 and t[1].endswith(":"):
            sat_rows[t[1][:-1]] = _rows(cur)
        elif t[0] == "action" and len(t) == 2 and t[1].endswith(":"):
            actions[t[1][:-1]] = _map_rows(cur, ("sen", "mod"))
        else:
            cur.error(f"unexpected statement {t[0]!r} in institution", token=t[0])
            bad = True
    if cur.peek() == ["}"]:
        cur.take()
    if bad or sign is None:
        if sign is None and not bad:
            cur.error(f"institution {name!r} has no sign block")
        return
    for obj in sign.objects:
        sen_sets.setdefault(obj, ())
        mod_sets.setdefault(obj, ())
    sat: dict[str, frozenset[tuple[str, str]]] = {}
    for obj in sign.objects:
        pairs = set()
        for row in sat_rows.get(obj, []):
            if ":" not in row:
                cur.error("expected: MODEL : sentences...", witness=" ".join(row))
                return
            k = row.index(":")
            if k != 1:
                cur.error("expected one model before ':'", witness=" ".join(row))
                return
            m = row[0]
            if m not in mod_sets[obj] or any(s not in sen_sets[obj] for s in row[2:]):
                cur.error(f"satisfaction row out of range at {obj}", witness=" ".join(row))
                return
            pairs.update((m, s) for s in row[2:])
        sat[obj] = frozenset(pairs)
    sen_maps: dict[str, dict[str, str]] = {}
    mod_maps: dict[str, dict[str, str]] = {}
    for obj in sign.objects:
        i = sign.identities[obj]
        sen_maps[i] = {s: s for s in sen_sets[obj]}
        mod_maps[i] = {m: m for m in mod_sets[obj]}
    for arrow, rows in actions.items():
        if arrow not in sign.morphisms:
            cur.error(f"action for unknown arrow {arrow!r}", token=arrow)
            return
        d, c = sign.morphisms[arrow]
        smap: dict[str, str] = {}
        mmap: dict[str, str] = {}
        for row in rows:
            parts = _arrow_row(row[1:])
            if row[0] not in ("sen", "mod") or parts is None or len(parts[0]) != 1 or len(parts[1]) != 1:
                cur.error("expected: sen|mod X -> Y", witness=" ".join(row))
                return
            (x,), (y,) = parts
            if row[0] == "sen":
                smap[x] = y  # Sen(arrow): sen(dom) -> sen(cod)
            else:
                mmap[x] = y  # Mod(arrow): mod(cod) -> mod(dom)
        sen_maps[arrow] = smap
        mod_maps[arrow] = mmap
    for m in sign.morphisms:
        if m not in sen_maps:
            cur.error(f"arrow {m!r} has no action block")
            return
    inst = ElementaryInstitution(
        sign,
        SetFunctor(sign, dict(sen_sets), sen_maps, contravariant=False),
        SetFunctor(sign, dict(mod_sets), mod_maps, contravariant=True),
        sat,
    )
    _declare(cur, ws, "institution", name, InstitutionDecl(inst), line)


# -- affine institution ---------------------------------------------------------


def _parse_afinstitution(cur: _Cursor, ws: Workspace):
    line = cur.lineno()
    toks = cur.take()
    if len(toks) != 5 or toks[2] != "over" or toks[4] != "{":
        cur.error("expected: afinstitution NAME over ALGEBRA {")
        if toks[-1] == "{":
            cur.skip_block()
        return
    name, base_name = toks[1], toks[3]
    base_decl = _lookup_algebra(cur, ws, base_name)
    sign: Optional[FiniteCategory] = None
    assigns: dict[str, str] = {}
    mor_rows: dict[str, list[list[str]]] = {}
    bad = False
    while (t := cur.peek()) is not None and t != ["}"]:
        if t[0] == "sign":
            sign = _parse_sign(cur)
            bad = bad or sign is None
            continue
        t = cur.take()
        if t[0] == "assign" and len(t) == 4 and t[2] == "=":
            assigns[t[1]] = t[3]
        elif t[0] == "morphism" and len(t) == 2 and t[1].endswith(":"):
            mor_rows[t[1][:-1]] = _map_rows(cur, ("point", "alg"))
        else:
            cur.error(f"unexpected statement {t[0]!r} in afinstitution", token=t[0])
            bad = True
    if cur.peek() == ["}"]:
        cur.take()
    if bad or sign is None or base_decl is None:
        if sign is None and not bad:
            cur.error(f"afinstitution {name!r} has no sign block")
        return
    theory = _theory_of(cur, base_decl)
    if theory is None:
        return
    systems: dict[str, AffineSystem] = {}
    for obj in sign.objects:
        sys_name = assigns.get(obj)
        ent = ws.find("system", sys_name) if sys_name else None
        if ent is None:
            cur.error(f"object {obj!r} is not assigned a declared system")
            return
        decl: SystemDecl = ent.value
        if decl.system.theory != theory:
            cur.error(f"system {sys_name!r} lives over a different base")
            return
        systems[obj] = decl.system
    arrows: dict[str, SystemMorphism] = {}
    for obj in sign.objects:
        arrows[sign.identities[obj]] = identity_system_morphism(systems[obj])
    for arrow, rows in mor_rows.items():
        if arrow not in sign.morphisms:
            cur.error(f"morphism block for unknown arrow {arrow!r}", token=arrow)
            return
        d, c = sign.morphisms[arrow]
        src, tgt = systems[d], systems[c]
        pmap: dict[int, int] = {}
        amap: dict[int, int] = {}
        for row in rows:
            parts = _arrow_row(row[1:])
            if row[0] not in ("point", "alg") or parts is None or len(parts[0]) != 1 or len(parts[1]) != 1:
                cur.error("expected: point|alg X -> Y", witness=" ".join(row))
                return
            (x,), (y,) = parts
            try:
                if row[0] == "point":
                    pmap[src.points.index(x)] = tgt.points.index(y)
                else:
                    # op-side: the algebra component runs target -> source
                    amap[tgt.algebra.label_index(x)] = src.algebra.label_index(y)
            except (ValueError, KeyError):
                cur.error(f"unknown name in morphism row", witness=" ".join(row))
                return
        if len(pmap) != len(src.points) or len(amap) != tgt.algebra.size:
            cur.error(f"morphism {arrow!r} is not total")
            return
        f = tuple(pmap[i] for i in range(len(src.points)))
        phi = Homomorphism(
            tgt.algebra, src.algebra, tuple(amap[i] for i in range(tgt.algebra.size))
        )
        arrows[arrow] = SystemMorphism(src, tgt, f, phi)
    for m in sign.morphisms:
        if m not in arrows:
            cur.error(f"arrow {m!r} has no morphism block")
            return
    ai = AffineInstitution(sign, theory, systems, arrows)
    _declare(
        cur, ws, "afinstitution", name, AfInstitutionDecl(ai, base_name, assigns), line
    )


_TOP_LEVEL = {
    "algebra": _parse_algebra,
    "space": _parse_space,
    "system": _parse_system,
    "theorymorphism": _parse_theorymorphism,
    "institution": _parse_institution,
    "afinstitution": _parse_afinstitution,
}


def parse_file(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# canonical printing (parse . print == identity on workspaces)


def _print_sign(out: list[str], sign: FiniteCategory):
    out.append("  sign {")
    out.append("    objects: " + " ".join(sign.objects))
    idents = set(sign.identities.values())
    for m, (d, c) in sign.morphisms.items():
        if m not in idents:
            out.append(f"    arrow {m} : {d} -> {c}")
    for (g, f), h in sign.composition.items():
        if g not in idents and f not in idents:
            out.append(f"    compose {g} . {f} = {h}")
    out.append("  }")


def print_workspace(ws: Workspace) -> str:
    out = [f"afs {FORMAT_VERSION}"]
    for ent in ws.entities:
        out.append("")
        v = ent.value
        if ent.kind == "algebra":
            alg = v.algebra
            out.append(f"algebra {ent.name} variety={v.variety} {{")
            out.append("  elements: " + " ".join(alg.labels))
            for si, (sym, arity) in enumerate(alg.signature.symbols):
                out.append(f"  op {sym}/{arity}:")
                from itertools import product as iproduct

                for args in iproduct(range(alg.size), repeat=arity):
                    res = alg.apply_index(si, args)
                    lhs = " ".join(alg.labels[a] for a in args)
                    lhs = lhs + " " if lhs else ""
                    out.append(f"    {lhs}-> {alg.labels[res]}")
            out.append("}")
        elif ent.kind == "space":
            sp = v.space
            base = sp.theory.base
            out.append(f"space {ent.name} over {v.base_name} {{")
            out.append("  points: " + " ".join(sp.points))
            out.append("  opens:")
            for t in sp.opens:
                out.append("    " + " ".join(base.labels[x] for x in t))
            out.append("}")
        elif ent.kind == "system":
            sys = v.system
            base = sys.theory.base
            out.append(f"system {ent.name} over {v.base_name} {{")
            out.append("  points: " + " ".join(sys.points))
            out.append(f"  carrier: {v.carrier_name}")
            out.append("  ext:")
            for a in range(sys.algebra.size):
                vals = " ".join(base.labels[x] for x in sys.ext[a])
                out.append(f"    {sys.algebra.labels[a]} -> {vals}")
            out.append("}")
        elif ent.kind == "theorymorphism":
            tm = v.tm
            out.append(f"theorymorphism {ent.name} {{")
            out.append(f"  from {v.source_name} to {v.target_name}")
            out.append("  h:")
            for a in range(tm.source.base.size):
                out.append(
                    f"    {tm.source.base.labels[a]} -> "
                    f"{tm.target.base.labels[tm.h.mapping[a]]}"
                )
            if tm.relabel:
                out.append("  relabel:")
                for old, new in tm.relabel:
                    out.append(f"    {old} -> {new}")
            out.append("}")
        elif ent.kind == "institution":
            inst = v.institution
            out.append(f"institution {ent.name} {{")
            _print_sign(out, inst.sign)
            for obj in inst.sign.objects:
                out.append(f"  sen {obj} = {{ " + " ".join(inst.sen.at(obj)) + " }")
                out.append(f"  mod {obj} = {{ " + " ".join(inst.mod.at(obj)) + " }")
            for obj in inst.sign.objects:
                out.append(f"  sat {obj}:")
                for m in inst.mod.at(obj):
                    sats = [s for s in inst.sen.at(obj) if (m, s) in inst.sat[obj]]
                    out.append(f"    {m} : " + " ".join(sats))
            idents = set(inst.sign.identities.values())
            for m in inst.sign.morphisms:
                if m in idents:
                    continue
                out.append(f"  action {m}:")
                d, c = inst.sign.morphisms[m]
                for s in inst.sen.at(d):
                    out.append(f"    sen {s} -> {inst.sen.on(m)[s]}")
                for x in inst.mod.at(c):
                    out.append(f"    mod {x} -> {inst.mod.on(m)[x]}")
            out.append("}")
        elif ent.kind == "afinstitution":
            ai = v.institution
            out.append(f"afinstitution {ent.name} over {v.base_name} {{")
            _print_sign(out, ai.sign)
            for obj in ai.sign.objects:
                out.append(f"  assign {obj} = {v.assigns[obj]}")
            idents = set(ai.sign.identities.values())
            for m in ai.sign.morphisms:
                if m in idents:
                    continue
                mor = ai.arrows[m]
                out.append(f"  morphism {m}:")
                for x in range(len(mor.source.points)):
                    out.append(
                        f"    point {mor.source.points[x]} -> "
                        f"{mor.target.points[mor.f[x]]}"
                    )
                for a in range(mor.target.algebra.size):
                    out.append(
                        f"    alg {mor.target.algebra.labels[a]} -> "
                        f"{mor.source.algebra.labels[mor.phi.mapping[a]]}"
                    )
            out.append("}")
    return "\n".join(out) + "\n"
