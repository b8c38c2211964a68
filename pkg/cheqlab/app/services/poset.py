"""Finite posets stored as bit rows.

Point ``x`` of a poset is the integer index ``x``; ``up[x]`` is a Python int
whose bit ``y`` is set iff ``x <= y``. Every order query, upset operation and
closure is whole-int bitwise arithmetic. Labels are for display and lookup
only; nothing compares them.

A ``Poset`` never changes after construction, so derived structure (down
rows, covers, linear extension, heights) is computed lazily and cached.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    CycleError,
    DuplicateLabelError,
    EmptySeedError,
    ForeignUpSetError,
    NotRootedError,
    NotUpwardClosedError,
    PointIndexError,
    SearchBudgetError,
    SizeGuardError,
    UnknownPointError,
)
from .settings import resolve_point_budget

log = logging.getLogger(__name__)


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Poset:
    """A finite reflexive partial order with unique point labels."""

    def __init__(
        self,
        labels: Sequence[str],
        up: Sequence[int],
        *,
        name: str = "",
        origin: Optional[Sequence[int]] = None,
        validate: bool = False,
    ) -> None:
        if len(labels) != len(up):
            raise PointIndexError(f"{len(labels)} labels for {len(up)} order rows")
        self.labels: Tuple[str, ...] = tuple(str(lb) for lb in labels)
        self.up: Tuple[int, ...] = tuple(up)
        self.name = name
        self.origin: Optional[Tuple[int, ...]] = tuple(origin) if origin is not None else None
        if len(set(self.labels)) != len(self.labels):
            seen: Dict[str, int] = {}
            for i, lb in enumerate(self.labels):
                if lb in seen:
                    raise DuplicateLabelError(f"label {lb!r} used by points {seen[lb]} and {i}")
                seen[lb] = i
        if validate and not self.is_partial_order():
            raise CycleError("order rows are not a reflexive antisymmetric transitive relation")

    @classmethod
    def empty(cls) -> "Poset":
        return cls([], [])

    @classmethod
    def from_leq(cls, labels: Sequence[str], leq: np.ndarray, name: str = "") -> "Poset":
        """Build from a square boolean order matrix, ``leq[x, y]`` meaning x <= y."""
        rel = np.asarray(leq, dtype=bool)
        n = len(labels)
        if rel.shape != (n, n):
            raise PointIndexError(f"order matrix of shape {rel.shape} for {n} labels")
        if n:
            if not rel[np.diag_indices_from(rel)].all():
                raise CycleError("order matrix is not reflexive")
            if (rel & rel.T).sum() > n:
                raise CycleError("order matrix is not antisymmetric")
            if ((~rel) & np.matmul(rel, rel)).any():
                raise CycleError("order matrix is not transitive")
        up = []
        for x in range(n):
            row = 0
            for y in np.flatnonzero(rel[x]):
                row |= 1 << int(y)
            up.append(row)
        return cls(labels, up, name=name)

    # basic queries

    @property
    def size(self) -> int:
        return len(self.up)

    def __len__(self) -> int:
        return len(self.up)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.up)) - 1

    def leq(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def check_point(self, x: int) -> int:
        if not 0 <= x < len(self.up):
            raise PointIndexError(f"point {x} out of range 0..{len(self.up) - 1}")
        return x

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {lb: i for i, lb in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownPointError(f"no point labelled {label!r}") from None

    def labels_of(self, mask: int) -> List[str]:
        return [self.labels[x] for x in bits(mask)]

    def mask_of(self, points: Iterable[int]) -> int:
        mask = 0
        for x in points:
            mask |= 1 << self.check_point(x)
        return mask

    # derived structure

    @cached_property
    def down(self) -> Tuple[int, ...]:
        rows = [0] * len(self.up)
        for x, row in enumerate(self.up):
            bit = 1 << x
            for y in bits(row):
                rows[y] |= bit
        return tuple(rows)

    @cached_property
    def upper_covers(self) -> Tuple[int, ...]:
        strict = [row & ~(1 << x) for x, row in enumerate(self.up)]
        rows = []
        for x, s in enumerate(strict):
            above = 0
            for y in bits(s):
                above |= strict[y]
            rows.append(s & ~above)
        return tuple(rows)

    @cached_property
    def lower_covers(self) -> Tuple[int, ...]:
        rows = [0] * len(self.up)
        for x, row in enumerate(self.upper_covers):
            for y in bits(row):
                rows[y] |= 1 << x
        return tuple(rows)

    @cached_property
    def covers(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((x, y) for x, row in enumerate(self.upper_covers) for y in bits(row))

    @cached_property
    def matrix(self) -> np.ndarray:
        n = len(self.up)
        m = np.zeros((n, n), dtype=bool)
        for x, row in enumerate(self.up):
            m[x, list(bits(row))] = True
        m.flags.writeable = False
        return m

    @cached_property
    def linear_extension(self) -> Tuple[int, ...]:
        """Points ordered so that x < y implies x comes first; ties by index."""
        n = len(self.up)
        indeg = [popcount(row) for row in self.lower_covers]
        heap = [x for x in range(n) if indeg[x] == 0]
        heapq.heapify(heap)
        order: List[int] = []
        while heap:
            x = heapq.heappop(heap)
            order.append(x)
            for y in bits(self.upper_covers[x]):
                indeg[y] -= 1
                if indeg[y] == 0:
                    heapq.heappush(heap, y)
        if len(order) != n:
            raise CycleError("order contains a cycle")
        return tuple(order)

    @cached_property
    def position(self) -> Tuple[int, ...]:
        pos = [0] * len(self.up)
        for i, x in enumerate(self.linear_extension):
            pos[x] = i
        return tuple(pos)

    @cached_property
    def maximal(self) -> Tuple[int, ...]:
        return tuple(x for x, row in enumerate(self.up) if row == 1 << x)

    @cached_property
    def minimal(self) -> Tuple[int, ...]:
        return tuple(x for x, row in enumerate(self.down) if row == 1 << x)

    @cached_property
    def height(self) -> Tuple[int, ...]:
        """Length of the longest chain from a minimal point up to x."""
        h = [0] * len(self.up)
        for x in self.linear_extension:
            for y in bits(self.lower_covers[x]):
                h[x] = max(h[x], h[y] + 1)
        return tuple(h)

    @cached_property
    def depth(self) -> Tuple[int, ...]:
        """Length of the longest chain from x up to a maximal point."""
        d = [0] * len(self.up)
        for x in reversed(self.linear_extension):
            for y in bits(self.upper_covers[x]):
                d[x] = max(d[x], d[y] + 1)
        return tuple(d)

    def is_partial_order(self) -> bool:
        down = self.down
        for x, row in enumerate(self.up):
            if not (row >> x) & 1:
                return False
            if row & down[x] != 1 << x:
                return False
            for y in bits(row):
                if self.up[y] & ~row:
                    return False
        return True

    def recompute_covers(self) -> List[Tuple[int, int]]:
        """Transitive reduction recomputed from the order matrix alone."""
        if not self.up:
            return []
        lt = self.matrix.copy()
        lt[np.diag_indices_from(lt)] = False
        red = lt & ~np.matmul(lt, lt)
        return [(int(x), int(y)) for x, y in zip(*np.nonzero(red))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.labels == other.labels and self.up == other.up

    def __hash__(self) -> int:
        return hash((self.labels, self.up))

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<Poset{tag} {len(self.up)} points, {len(self.covers)} covers>"

    def __reduce__(self):
        return (_rebuild, (self.labels, self.up, self.name, self.origin))


def _rebuild(labels, up, name, origin) -> Poset:
    return Poset(labels, up, name=name, origin=origin)


@dataclass(frozen=True)
class UpSet:
    """An upward-closed set of points of one poset.

    The plain constructor trusts ``mask``; use ``from_points`` or
    ``generated_by`` for unchecked input.
    """

    poset: Poset
    mask: int

    @classmethod
    def from_points(cls, poset: Poset, points: Iterable[int]) -> "UpSet":
        mask = poset.mask_of(points)
        for x in bits(mask):
            if poset.up[x] & ~mask:
                missing = poset.labels_of(poset.up[x] & ~mask)
                raise NotUpwardClosedError(
                    f"{poset.labels[x]!r} is in the set but its successors {missing} are not"
                )
        return cls(poset, mask)

    @classmethod
    def generated_by(cls, poset: Poset, points: Iterable[int]) -> "UpSet":
        mask = 0
        for x in points:
            mask |= poset.up[poset.check_point(x)]
        return cls(poset, mask)

    @property
    def members(self) -> List[int]:
        return list(bits(self.mask))

    def labels(self) -> List[str]:
        return self.poset.labels_of(self.mask)

    def is_upward_closed(self) -> bool:
        return all(not (self.poset.up[x] & ~self.mask) for x in bits(self.mask))

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def _same(self, other: "UpSet") -> None:
        if self.poset is not other.poset and self.poset != other.poset:
            raise ForeignUpSetError("upsets belong to different posets")

    def __or__(self, other: "UpSet") -> "UpSet":
        self._same(other)
        return UpSet(self.poset, self.mask | other.mask)

    def __and__(self, other: "UpSet") -> "UpSet":
        self._same(other)
        return UpSet(self.poset, self.mask & other.mask)

    def __le__(self, other: "UpSet") -> bool:
        self._same(other)
        return not (self.mask & ~other.mask)


# constructions


def from_covers(labels: Sequence[str], cover_pairs: Iterable[Tuple[int, int]], name: str = "") -> Poset:
    """Reflexive-transitive closure of ``cover_pairs``; self pairs are ignored."""
    n = len(labels)
    succ: List[List[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in cover_pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise PointIndexError(f"cover ({a}, {b}) out of range 0..{n - 1}")
        if a == b:
            continue
        succ[a].append(b)
        indeg[b] += 1
    heap = [x for x in range(n) if indeg[x] == 0]
    heapq.heapify(heap)
    order: List[int] = []
    while heap:
        x = heapq.heappop(heap)
        order.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(heap, y)
    if len(order) != n:
        stuck = [labels[x] for x in range(n) if indeg[x] > 0]
        raise CycleError(f"cover relation has a directed cycle through {stuck[:5]}")
    up = [0] * n
    for x in reversed(order):
        row = 1 << x
        for y in succ[x]:
            row |= up[y]
        up[x] = row
    return Poset(labels, up, name=name)


def _guard(points: int, budget: Optional[int], what: str) -> None:
    limit = resolve_point_budget(budget)
    if points > limit:
        raise SizeGuardError(f"{what} would have {points} points (budget {limit})", requested=points, budget=limit)


def product(p: Poset, q: Poset, budget: Optional[int] = None) -> Poset:
    """Product order; point ``(a, b)`` has index ``a * |q| + b`` and label ``la + lb``."""
    _guard(p.size * q.size, budget, "product")
    m = q.size
    labels = [la + lb for la in p.labels for lb in q.labels]
    up = []
    for a in range(p.size):
        shifts = [c * m for c in bits(p.up[a])]
        for b in range(m):
            row = 0
            qb = q.up[b]
            for s in shifts:
                row |= qb << s
            up.append(row)
    name = f"{p.name}x{q.name}" if p.name and q.name else ""
    return Poset(labels, up, name=name)


def disjoint_union(p: Poset, q: Poset) -> Poset:
    """Side by side; labels are prefixed ``1:`` and ``2:``. The empty poset is the unit."""
    if q.size == 0:
        return p
    if p.size == 0:
        return q
    shift = p.size
    labels = [f"1:{lb}" for lb in p.labels] + [f"2:{lb}" for lb in q.labels]
    up = list(p.up) + [row << shift for row in q.up]
    name = f"{p.name}+{q.name}" if p.name and q.name else ""
    return Poset(labels, up, name=name)


def _compress(row: int, index: Dict[int, int]) -> int:
    out = 0
    for y in bits(row):
        out |= 1 << index[y]
    return out


def generated_subframe(p: Poset, seeds: Iterable[int]) -> Poset:
    """Restriction of ``p`` to the upward closure of ``seeds``.

    ``origin[i]`` of the result is the index in ``p`` of its point ``i``.
    """
    seeds = list(seeds)
    if not seeds:
        raise EmptySeedError("generated subframe needs at least one seed")
    mask = 0
    for s in seeds:
        mask |= p.up[p.check_point(s)]
    points = list(bits(mask))
    index = {x: i for i, x in enumerate(points)}
    up = [_compress(p.up[x], index) for x in points]
    return Poset([p.labels[x] for x in points], up, origin=points)


def root_of(p: Poset) -> Optional[int]:
    if p.size == 0:
        return None
    mins = p.minimal
    if len(mins) == 1 and p.up[mins[0]] == p.full_mask:
        return mins[0]
    return None


def atoms(p: Poset) -> List[int]:
    r = root_of(p)
    if r is None:
        raise NotRootedError("poset has no least point")
    return list(bits(p.upper_covers[r]))


# upsets


def upset_masks(p: Poset) -> Iterator[int]:
    # Decide points in reverse linear extension, excluding before including.
    # A point may be included only when all its strict successors are, so
    # every branch ends in an upset.
    order = p.linear_extension[::-1]
    n = len(order)
    strict = [row & ~(1 << x) for x, row in enumerate(p.up)]
    stack: List[Tuple[int, int]] = [(0, 0)]
    while stack:
        i, mask = stack.pop()
        if i == n:
            yield mask
            continue
        x = order[i]
        if not (strict[x] & ~mask):
            stack.append((i + 1, mask | (1 << x)))
        stack.append((i + 1, mask))


def count_upsets(p: Poset, limit: Optional[int] = None) -> int:
    """Exact number of upsets; SearchBudgetError once it provably exceeds ``limit``.

    count(S) = count(S minus down(x)) + count(S minus up(x)) for any x in S,
    memoized on S.
    """
    memo: Dict[int, int] = {0: 1}
    stack = [p.full_mask]
    while stack:
        rest = stack[-1]
        if rest in memo:
            stack.pop()
            continue
        x = (rest & -rest).bit_length() - 1
        without = rest & ~p.down[x]
        with_x = rest & ~p.up[x]
        a = memo.get(without)
        b = memo.get(with_x)
        if a is None or b is None:
            if a is None:
                stack.append(without)
            if b is None:
                stack.append(with_x)
            continue
        total = a + b
        if limit is not None and (total > limit or len(memo) > limit):
            raise SearchBudgetError(
                f"poset has more than {limit} upsets", estimate=total, budget=limit
            )
        memo[rest] = total
        stack.pop()
    log.debug("count_upsets: %d upsets over %d points (%d states)", memo[p.full_mask], p.size, len(memo))
    return memo[p.full_mask]


def enumerate_upsets(p: Poset, limit: Optional[int] = None) -> Iterator[UpSet]:
    """Every upset exactly once, in canonical order.

    The order is lexicographic over the points taken in reverse linear
    extension, absent before present. For constructed frames, whose indices
    are already a linear extension, this is ascending order of ``mask``.
    """
    if limit is not None:
        count_upsets(p, limit)
    for mask in upset_masks(p):
        yield UpSet(p, mask)


# isomorphism


def _signatures(p: Poset) -> List[Tuple[int, ...]]:
    return [
        (
            popcount(p.up[x]),
            popcount(p.down[x]),
            p.height[x],
            p.depth[x],
            popcount(p.upper_covers[x]),
            popcount(p.lower_covers[x]),
        )
        for x in range(p.size)
    ]


def is_isomorphic(p: Poset, q: Poset) -> Optional[List[int]]:
    """An order isomorphism as a list ``f`` with ``f[x]`` in ``q``, or None."""
    if p.size != q.size:
        return None
    n = p.size
    if n == 0:
        return []
    sp, sq = _signatures(p), _signatures(q)
    if sorted(sp) != sorted(sq):
        return None
    by_sig: Dict[Tuple[int, ...], List[int]] = {}
    for t, s in enumerate(sq):
        by_sig.setdefault(s, []).append(t)

    order = p.linear_extension
    f = [-1] * n
    assigned = 0
    used = 0

    def fits(x: int, t: int) -> bool:
        want_down = 0
        for y in bits(p.down[x] & assigned):
            want_down |= 1 << f[y]
        if q.down[t] & used != want_down:
            return False
        want_up = 0
        for y in bits(p.up[x] & assigned):
            want_up |= 1 << f[y]
        return q.up[t] & used == want_up

    stack: List[Iterator[int]] = [iter(by_sig[sp[order[0]]])]
    while stack:
        depth = len(stack) - 1
        x = order[depth]
        if f[x] >= 0:
            # undo the previous choice at this depth
            assigned &= ~(1 << x)
            used &= ~(1 << f[x])
            f[x] = -1
        for t in stack[-1]:
            if not (used >> t) & 1 and fits(x, t):
                f[x] = t
                assigned |= 1 << x
                used |= 1 << t
                break
        else:
            stack.pop()
            continue
        if depth + 1 == n:
            return f
        stack.append(iter(by_sig[sp[order[depth + 1]]]))
    return None


def maxima_interchangeable(p: Poset) -> bool:
    """Whether every permutation of the maximal points extends to an automorphism.

    Holds when each point is determined by the set of maximal points above
    it, ``x <= y`` exactly when y's set is contained in x's, and the family
    of these sets is closed under swapping neighbouring maxima (those swaps
    generate every permutation). Medvedev frames are the motivating case.
    """
    tops = p.maximal
    k = len(tops)
    if not 2 <= k < 63:
        return False
    sig = np.zeros((p.size, k), dtype=np.int64)
    for i, m in enumerate(tops):
        sig[list(bits(p.down[m])), i] = 1
    if len(np.unique(sig, axis=0)) != p.size:
        return False
    # contained[x, y]: every maximal point above y is above x
    contained = np.matmul(1 - sig, sig.T) == 0
    if not np.array_equal(contained, p.matrix):
        return False
    family = set((sig @ (1 << np.arange(k, dtype=np.int64))).tolist())
    for i in range(k - 1):
        lo, hi = 1 << i, 1 << (i + 1)
        for s in family:
            a, b = s & lo, s & hi
            swapped = (s & ~(lo | hi)) | (lo if b else 0) | (hi if a else 0)
            if swapped not in family:
                return False
    return True


@dataclass(frozen=True)
class LatticeReport:
    ok: bool
    point: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None


def predecessors_form_lattice(p: Poset) -> LatticeReport:
    """Whether every principal down-set is a lattice.

    A down-set has a top, so it is a lattice once every pair in it has a
    meet; meets inside a down-set are meets in ``p``. Only pairs with a
    common upper bound need checking.
    """
    up, down = p.up, p.down
    for a in range(p.size):
        for b in range(a + 1, p.size):
            above = up[a] & up[b]
            if not above or (up[a] >> b) & 1 or (up[b] >> a) & 1:
                continue
            lower = down[a] & down[b]
            meet = max(bits(lower), key=lambda z: popcount(down[z]), default=None)
            if meet is None or lower & ~down[meet]:
                x = (above & -above).bit_length() - 1
                return LatticeReport(False, x, (a, b))
    return LatticeReport(True)
