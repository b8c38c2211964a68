"""Constructors and label algebra for the concrete frame families.

Chequered frames are powers of the fork; points carry coordinate labels
over ``0 - +`` and are indexed in base 3 with ``0 < - < +``, leftmost
coordinate most significant. Medvedev frames are the proper subsets of
``{1..n+1}`` under inclusion, indexed by cardinality then element tuple.
Both orders are linear extensions, so the root is always point 0. Neither
is plain lexicographic order on the label strings: character order would
put ``+`` before ``-`` and ``0``, and ``{1,2}`` before ``{2}``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .errors import BadIndexError, LabelError, LengthError, NotAtomError, SizeGuardError
from .poset import Poset, atoms, from_covers, generated_subframe, is_isomorphic, product
from .settings import resolve_point_budget

log = logging.getLogger(__name__)


class Coord(IntEnum):
    ZERO = 0
    MINUS = 1
    PLUS = 2

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def parse(cls, ch: str) -> "Coord":
        try:
            return _BY_SYMBOL[ch]
        except KeyError:
            raise LabelError(f"unknown coordinate symbol {ch!r}") from None


_SYMBOLS = {Coord.ZERO: "0", Coord.MINUS: "-", Coord.PLUS: "+"}
_BY_SYMBOL = {v: k for k, v in _SYMBOLS.items()}


@dataclass(frozen=True)
class CoordLabel:
    coords: Tuple[Coord, ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise LengthError("coordinate label must have at least one coordinate")

    @classmethod
    def parse(cls, text: str) -> "CoordLabel":
        return cls(tuple(Coord.parse(ch) for ch in text.strip()))

    def __str__(self) -> str:
        return "".join(c.symbol for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def nonzero(self) -> List[int]:
        """1-based positions of non-zero coordinates."""
        return [i + 1 for i, c in enumerate(self.coords) if c != Coord.ZERO]

    def is_atom(self) -> bool:
        return len(self.nonzero()) == 1


@dataclass(frozen=True)
class SubsetLabel:
    elems: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *elems: int) -> "SubsetLabel":
        return cls(frozenset(elems))

    @classmethod
    def parse(cls, text: str) -> "SubsetLabel":
        s = text.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise LabelError(f"subset label {text!r} must look like {{1,3}}")
        body = s[1:-1].strip()
        if not body:
            return cls()
        try:
            elems = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise LabelError(f"subset label {text!r} has a non-integer element") from None
        if any(e < 1 for e in elems):
            raise LabelError(f"subset label {text!r} has an element below 1")
        return cls(frozenset(elems))

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in sorted(self.elems)) + "}"

    def is_proper_in(self, n: int) -> bool:
        """Whether this is a point of the Medvedev frame of index n."""
        return all(1 <= e <= n + 1 for e in self.elems) and len(self.elems) < n + 1


def _as_coord(x: Union[CoordLabel, str]) -> CoordLabel:
    return x if isinstance(x, CoordLabel) else CoordLabel.parse(x)


# frames


def singleton(label: str = "*") -> Poset:
    return Poset([label], [1], name="F0")


@lru_cache(maxsize=None)
def _fork() -> Poset:
    return from_covers(["0", "-", "+"], [(0, 1), (0, 2)], name="F1")


def fork() -> Poset:
    """w_0 below the two incomparable tops w_- and w_+."""
    return _fork()


@lru_cache(maxsize=16)
def _chequered(n: int) -> Poset:
    if n == 1:
        return _fork()
    p = product(_chequered(n - 1), _fork(), budget=3 ** n)
    p.name = f"F{n}"
    return p


def _guard(family: str, n: int, points: int, budget: Optional[int]) -> None:
    limit = resolve_point_budget(budget)
    if points > limit:
        raise SizeGuardError(
            f"{family}({n}) has {points} points (budget {limit})", requested=points, budget=limit
        )


def chequered(n: int, budget: Optional[int] = None) -> Poset:
    """F_n, the n-fold power of the fork."""
    if n < 1:
        raise BadIndexError(f"chequered frame index must be >= 1, got {n}")
    _guard("chequered", n, 3 ** n, budget)
    return _chequered(n)


@lru_cache(maxsize=16)
def _medvedev(n: int) -> Poset:
    k = n + 1
    full = (1 << k) - 1
    subsets = sorted(range(full), key=lambda s: (bin(s).count("1"), [e for e in range(k) if s >> e & 1]))
    index = {s: i for i, s in enumerate(subsets)}
    up = [0] * len(subsets)
    for s in reversed(subsets):
        row = 1 << index[s]
        for e in range(k):
            t = s | (1 << e)
            if t != s and t != full:
                row |= up[index[t]]
        up[index[s]] = row
    labels = [str(SubsetLabel(frozenset(e + 1 for e in range(k) if s >> e & 1))) for s in subsets]
    return Poset(labels, up, name=f"M{n}")


def medvedev(n: int, budget: Optional[int] = None) -> Poset:
    """M_n, the proper subsets of {1..n+1} under inclusion."""
    if n < 1:
        raise BadIndexError(f"Medvedev frame index must be >= 1, got {n}")
    _guard("medvedev", n, 2 ** (n + 1) - 1, budget)
    return _medvedev(n)


@lru_cache(maxsize=None)
def frame_h() -> Poset:
    labels = ["r", "a", "b", "c", "d", "e", "f"]
    ix = {lb: i for i, lb in enumerate(labels)}
    pairs = [
        ("r", "a"), ("r", "b"), ("r", "c"), ("r", "d"),
        ("a", "e"), ("b", "e"), ("c", "e"),
        ("b", "f"), ("c", "f"), ("d", "f"),
    ]
    return from_covers(labels, [(ix[a], ix[b]) for a, b in pairs], name="H")


FAMILIES = ("cheq", "medvedev", "fork", "h")


def build_family(family: str, n: int = 0, budget: Optional[int] = None) -> Poset:
    fam = family.lower()
    if fam in ("cheq", "chequered"):
        return chequered(n, budget)
    if fam in ("medvedev", "m"):
        return medvedev(n, budget)
    if fam == "fork":
        return fork()
    if fam == "h":
        return frame_h()
    raise BadIndexError(f"unknown frame family {family!r} (expected one of {', '.join(FAMILIES)})")


# coordinate algebra


def uparrow(x: Union[CoordLabel, str]) -> int:
    """The 1-based coordinate at which an atom label is non-zero."""
    lab = _as_coord(x)
    nz = lab.nonzero()
    if len(nz) != 1:
        raise NotAtomError(f"{lab} has {len(nz)} non-zero coordinates, an atom has exactly one")
    return nz[0]


def drop_left(x: Union[CoordLabel, str], k: int) -> CoordLabel:
    lab = _as_coord(x)
    if not 0 <= k < len(lab):
        raise LengthError(f"cannot drop {k} coordinates from {lab} of length {len(lab)}")
    return CoordLabel(lab.coords[k:])


def drop_right(x: Union[CoordLabel, str], k: int) -> CoordLabel:
    lab = _as_coord(x)
    if not 0 <= k < len(lab):
        raise LengthError(f"cannot drop {k} coordinates from {lab} of length {len(lab)}")
    return CoordLabel(lab.coords[: len(lab) - k])


# structural facts


@dataclass
class CommonSuccessorReport:
    ok: bool
    n: int
    # (u, u') atom labels -> witness atom label, or None where none exists
    table: Dict[Tuple[str, str], Optional[str]]

    @property
    def failures(self) -> List[Tuple[str, str]]:
        return [pair for pair, v in self.table.items() if v is None]


def common_successor_fact(n: int, budget: Optional[int] = None) -> CommonSuccessorReport:
    """For each pair of distinct atoms of F_n, an atom sharing a top with both."""
    p = chequered(n, budget)
    ats = atoms(p)
    table: Dict[Tuple[str, str], Optional[str]] = {}
    for u, w in combinations(ats, 2):
        witness = next((v for v in ats if p.up[v] & p.up[u] and p.up[v] & p.up[w]), None)
        table[(p.labels[u], p.labels[w])] = p.labels[witness] if witness is not None else None
    ok = all(v is not None for v in table.values())
    log.info("common successor fact on F%d: %s over %d pairs", n, ok, len(table))
    return CommonSuccessorReport(ok=ok, n=n, table=table)


@dataclass
class ResemblanceReport:
    ok: bool
    family: str
    n: int
    # point label -> k with up(x) isomorphic to the k-th member (0 = singleton), or None
    ranks: Dict[str, Optional[int]]


def _family_size(family: str, k: int) -> int:
    return 3 ** k if family == "cheq" else 2 ** (k + 1) - 1


def _family_member(family: str, k: int, budget: Optional[int]) -> Poset:
    if k == 0:
        return singleton()
    return chequered(k, budget) if family == "cheq" else medvedev(k, budget)


def self_resemblance_check(family: str, n: int, budget: Optional[int] = None) -> ResemblanceReport:
    """Every rooted generated subframe is isomorphic to an earlier family member."""
    fam = "cheq" if family.lower() in ("cheq", "chequered") else family.lower()
    if fam not in ("cheq", "medvedev"):
        raise BadIndexError(f"self-resemblance is defined for cheq and medvedev, not {family!r}")
    p = build_family(fam, n, budget)
    by_size = {_family_size(fam, k): k for k in range(n + 1)}
    members: Dict[int, Poset] = {}
    ranks: Dict[str, Optional[int]] = {}
    for x in range(p.size):
        sub = generated_subframe(p, [x])
        k = by_size.get(sub.size)
        if k is None:
            ranks[p.labels[x]] = None
            continue
        if k not in members:
            members[k] = _family_member(fam, k, budget)
        ranks[p.labels[x]] = k if is_isomorphic(sub, members[k]) is not None else None
    ok = all(k is not None for k in ranks.values())
    log.info("self-resemblance on %s(%d): %s", fam, n, ok)
    return ResemblanceReport(ok=ok, family=fam, n=n, ranks=ranks)


def coordinatewise_leq(x: Union[CoordLabel, str], y: Union[CoordLabel, str]) -> bool:
    """Fork order read off the labels: each coordinate of x is 0 or equals y's."""
    a, b = _as_coord(x), _as_coord(y)
    if len(a) != len(b):
        raise LengthError(f"labels {a} and {b} have different lengths")
    return all(ca == Coord.ZERO or ca == cb for ca, cb in zip(a.coords, b.coords))

