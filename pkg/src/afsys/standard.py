"""Stock finite algebras used throughout the fixtures and the CLI demo."""

from __future__ import annotations

from itertools import product as iproduct

from .algebra import FiniteAlgebra, Signature

FRAME_SIG = Signature((("join", 2), ("meet", 2), ("bot", 0), ("top", 0)))
CBALG_SIG = Signature(
    (("join", 2), ("meet", 2), ("star", 1), ("bot", 0), ("top", 0))
)
CSL_SIG = Signature((("meet", 2), ("top", 0), ("bot", 0)))


def chain_frame(n: int, labels=None) -> FiniteAlgebra:
    """The n-element chain 0 < 1 < ... < n-1 as a frame."""
    if labels is None:
        if n == 2:
            labels = ("bot", "top")
        elif n == 3:
            labels = ("bot", "m", "top")
        else:
            labels = ("bot",) + tuple(f"m{i}" for i in range(1, n - 1)) + ("top",)
    join = tuple(max(a, b) for a in range(n) for b in range(n))
    meet = tuple(min(a, b) for a in range(n) for b in range(n))
    return FiniteAlgebra(FRAME_SIG, n, tuple(labels), (join, meet, (0,), (n - 1,)))


def two_frame() -> FiniteAlgebra:
    return chain_frame(2)


def _diamond_tables():
    # 0=bot, 1=a, 2=b, 3=top; a and b incomparable
    up = {0: 0b00, 1: 0b01, 2: 0b10, 3: 0b11}
    down = {v: k for k, v in up.items()}
    join = tuple(down[up[a] | up[b]] for a in range(4) for b in range(4))
    meet = tuple(down[up[a] & up[b]] for a in range(4) for b in range(4))
    return join, meet, down, up


def diamond_frame() -> FiniteAlgebra:
    """The four-element Boolean lattice in the frame signature (no star)."""
    join, meet, _, _ = _diamond_tables()
    return FiniteAlgebra(FRAME_SIG, 4, ("bot", "a", "b", "top"), (join, meet, (0,), (3,)))


def diamond_cbalg() -> FiniteAlgebra:
    """The diamond with complement: a* = b, b* = a."""
    join, meet, down, up = _diamond_tables()
    star = tuple(down[up[a] ^ 0b11] for a in range(4))
    return FiniteAlgebra(
        CBALG_SIG, 4, ("bot", "a", "b", "top"), (join, meet, star, (0,), (3,))
    )


def powerset_cbalg(n_atoms: int) -> FiniteAlgebra:
    """The Boolean algebra of subsets of an n_atoms-element set."""
    n = 2**n_atoms
    join = tuple(a | b for a in range(n) for b in range(n))
    meet = tuple(a & b for a in range(n) for b in range(n))
    star = tuple(a ^ (n - 1) for a in range(n))
    labels = tuple(
        "{" + ",".join(str(i) for i in range(n_atoms) if a >> i & 1) + "}"
        for a in range(n)
    )
    return FiniteAlgebra(CBALG_SIG, n, labels, (join, meet, star, (0,), (n - 1,)))


def one_element(signature: Signature) -> FiniteAlgebra:
    tables = tuple((0,) * 1 for _ in signature.symbols)
    return FiniteAlgebra(signature, 1, ("*",), tables)


def chain_csl(n: int) -> FiniteAlgebra:
    """The n-element chain as a closure semilattice."""
    labels = tuple(f"c{i}" for i in range(n))
    meet = tuple(min(a, b) for a in range(n) for b in range(n))
    return FiniteAlgebra(CSL_SIG, n, labels, (meet, (n - 1,), (0,)))


def subset_frame(universe_size: int, subsets) -> FiniteAlgebra:
    """A frame of subsets (given as frozensets) closed under union/intersection."""
    family = sorted(subsets, key=lambda s: (len(s), tuple(sorted(s))))
    pos = {s: i for i, s in enumerate(family)}
    full = frozenset(range(universe_size))
    if frozenset() not in pos or full not in pos:
        raise ValueError("family must contain the empty and full subsets")
    n = len(family)
    join, meet = [], []
    for a, b in iproduct(family, repeat=2):
        join.append(pos[a | b])
        meet.append(pos[a & b])
    labels = tuple(
        "{" + ",".join(str(i) for i in sorted(s)) + "}" for s in family
    )
    return FiniteAlgebra(
        FRAME_SIG, n, labels, (tuple(join), tuple(meet), (pos[frozenset()],), (pos[full],))
    )
