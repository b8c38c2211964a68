"""p-morphisms between finite posets.

For a total map ``f`` let ``img_up[x]`` be the image of the upset of ``x``.
``f`` is a p-morphism iff ``img_up[x] == up(f x)`` for every ``x``: the
inclusion one way is the forth condition, the other way the back condition.
``img_up`` is computed bottom-up along covers, so checking a map and
growing a partial map during search use the same recurrence.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BadIndexError, MapError, NotRootedError, SearchBudgetError
from .frames import CoordLabel, SubsetLabel, chequered, drop_left, drop_right, medvedev, uparrow
from .poset import Poset, bits, generated_subframe, is_isomorphic, maxima_interchangeable, popcount, root_of
from .settings import resolve_search_budget, resolve_workers
from .workers import first_hit

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointMap:
    source: Poset
    target: Poset
    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.size:
            raise MapError(f"map has {len(images)} images for {self.source.size} source points")
        for x, t in enumerate(images):
            if not 0 <= t < self.target.size:
                raise MapError(f"image {t} of point {x} is not a target point")

    @classmethod
    def from_pairs(cls, source: Poset, target: Poset, pairs: Sequence[Sequence[int]]) -> "PointMap":
        images: List[Optional[int]] = [None] * source.size
        for pair in pairs:
            if len(pair) != 2:
                raise MapError(f"map entry {list(pair)} is not a [source, target] pair")
            x, t = int(pair[0]), int(pair[1])
            if not 0 <= x < source.size:
                raise MapError(f"map entry {list(pair)}: {x} is not a source point")
            if images[x] is not None and images[x] != t:
                raise MapError(f"source point {x} mapped twice")
            images[x] = t
        missing = [x for x, t in enumerate(images) if t is None]
        if missing:
            raise MapError(f"map is not total; no image for source points {missing[:10]}")
        return cls(source, target, tuple(images))  # type: ignore[arg-type]

    @classmethod
    def from_labels(cls, source: Poset, target: Poset, labels: Mapping[str, str]) -> "PointMap":
        pairs = [(source.index_of(a), target.index_of(b)) for a, b in labels.items()]
        return cls.from_pairs(source, target, pairs)

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def pairs(self) -> List[List[int]]:
        return [[x, t] for x, t in enumerate(self.images)]

    def to_labels(self) -> Dict[str, str]:
        return {self.source.labels[x]: self.target.labels[t] for x, t in enumerate(self.images)}

    def image_mask(self) -> int:
        mask = 0
        for t in self.images:
            mask |= 1 << t
        return mask

    def restrict(self, sub: Poset) -> "PointMap":
        """This map on a generated subframe of the source."""
        if sub.origin is None:
            raise MapError("restriction needs a generated subframe with an origin map")
        return PointMap(sub, self.target, tuple(self.images[o] for o in sub.origin))

    def with_images(self, changes: Mapping[int, int]) -> "PointMap":
        images = list(self.images)
        for x, t in changes.items():
            images[x] = t
        return PointMap(self.source, self.target, tuple(images))


# violations


@dataclass(frozen=True)
class Forth:
    """x <= y in the source but f(x) is not below f(y)."""

    x: int
    y: int
    kind: str = "forth"


@dataclass(frozen=True)
class Back:
    """f(x) <= target, yet no z >= x has f(z) == target."""

    x: int
    target: int
    kind: str = "back"


@dataclass(frozen=True)
class NotOnto:
    target: int
    kind: str = "not_onto"


Violation = Union[Forth, Back, NotOnto]


@dataclass
class MorphismReport:
    ok: bool
    violations: List[Violation] = field(default_factory=list)
    truncated: bool = False

    def describe(self, m: PointMap) -> List[str]:
        src, tgt = m.source.labels, m.target.labels
        out = []
        for v in self.violations:
            if isinstance(v, Forth):
                out.append(
                    f"forth: {src[v.x]} <= {src[v.y]} but {tgt[m[v.x]]} is not below {tgt[m[v.y]]}"
                )
            elif isinstance(v, Back):
                out.append(f"back: {tgt[m[v.x]]} <= {tgt[v.target]} but nothing above {src[v.x]} maps to it")
            else:
                out.append(f"not onto: {tgt[v.target]} is not hit")
        return out


def image_ups(m: PointMap) -> List[int]:
    """``img_up[x]``: target mask of the image of the upset of ``x``."""
    src = m.source
    img = [0] * src.size
    for x in reversed(src.linear_extension):
        row = 1 << m.images[x]
        for c in bits(src.upper_covers[x]):
            row |= img[c]
        img[x] = row
    return img


def check_p_morphism(m: PointMap, require_onto: bool = False, cap: int = 100) -> MorphismReport:
    """Every forth, back and (optionally) surjectivity violation, up to ``cap``."""
    src, tgt = m.source, m.target
    f = m.images
    img = image_ups(m)
    violations: List[Violation] = []
    truncated = False

    def add(v: Violation) -> bool:
        nonlocal truncated
        if len(violations) >= cap:
            truncated = True
            return False
        violations.append(v)
        return True

    for x in range(src.size):
        want = tgt.up[f[x]]
        extra = img[x] & ~want
        if extra:
            for y in bits(src.up[x]):
                if (extra >> f[y]) & 1 and not add(Forth(x, y)):
                    break
        for t in bits(want & ~img[x]):
            if not add(Back(x, t)):
                break
    if require_onto:
        for t in bits(tgt.full_mask & ~m.image_mask()):
            if not add(NotOnto(t)):
                break
    return MorphismReport(ok=not violations, violations=violations, truncated=truncated)


# search


class _MorphismSearch:
    """Depth-first search over source points, maximal points first.

    Once every upper cover of ``x`` is assigned, ``C`` (the union of their
    image upsets) is fixed and ``f(x) = t`` is consistent iff
    ``up(t) == C | {t}``. So ``t`` is either the least element of ``C``
    (when ``C`` is principal) or a point whose strict upset is ``C``.

    Each unassigned point keeps a domain of images still open to it. Until
    its upper covers are all assigned, the domain is the set of targets whose
    upset holds every image assigned above it and whose maximal points are
    exactly the images of the maximal points above it. A node is dropped
    as soon as a domain empties or, for onto maps, the unhit targets cannot
    be matched to distinct unassigned points. When every permutation of the
    source's maxima is an automorphism, their images ascend.
    """

    def __init__(self, source: Poset, target: Poset, require_onto: bool, budget: int) -> None:
        self.src = source
        self.tgt = target
        self.require_onto = require_onto
        self.budget = budget
        self.nodes = 0
        self.order = sorted(range(source.size), key=lambda x: (source.depth[x], x))
        self.principal: Dict[int, int] = {row: t for t, row in enumerate(target.up)}
        self.strict: Dict[int, List[int]] = {}
        for t, row in enumerate(target.up):
            self.strict.setdefault(row & ~(1 << t), []).append(t)
        src_top = source.mask_of(source.maximal)
        tgt_top = target.mask_of(target.maximal)
        self.tops_above = [row & src_top for row in source.up]
        self.top_of = [row & tgt_top for row in target.up]
        # x can only reach t if its upset is at least as deep and as large
        self.compatible: List[int] = []
        for x in range(source.size):
            mask = 0
            for t in range(target.size):
                if source.depth[x] >= target.depth[t] and popcount(source.up[x]) >= popcount(target.up[t]):
                    mask |= 1 << t
            self.compatible.append(mask & tgt_top if (src_top >> x) & 1 else mask)
        self.after: Dict[int, int] = {}
        if maxima_interchangeable(source):
            tops = source.maximal
            self.after = {tops[i]: tops[i - 1] for i in range(1, len(tops))}
        self._exact: Dict[int, int] = {}
        self._reach: Dict[Tuple[int, int], int] = {}

    def exact(self, c: int) -> int:
        mask = self._exact.get(c)
        if mask is None:
            mask = 0
            for t in self.strict.get(c, ()):
                mask |= 1 << t
            t = self.principal.get(c)
            if t is not None:
                mask |= 1 << t
            self._exact[c] = mask
        return mask

    def reach(self, above: int, tops: int) -> int:
        # tops < 0: some maximal point above is still unassigned
        key = (above, tops)
        mask = self._reach.get(key)
        if mask is None:
            mask = 0
            for t, row in enumerate(self.tgt.up):
                if not above & ~row and (tops < 0 or self.top_of[t] == tops):
                    mask |= 1 << t
            self._reach[key] = mask
        return mask

    def candidates(self, x: int, img: List[int]) -> List[int]:
        c = 0
        for y in bits(self.src.upper_covers[x]):
            c |= img[y]
        return list(bits(self.exact(c)))

    def domain(self, x: int, f: List[int], img: List[int], assigned: int) -> int:
        covers = self.src.upper_covers[x]
        c = 0
        for y in bits(covers & assigned):
            c |= img[y]
        if not covers & ~assigned:
            return self.exact(c) & self.compatible[x]
        tops = self.tops_above[x]
        images = -1
        if not tops & ~assigned:
            images = 0
            for y in bits(tops):
                images |= 1 << f[y]
        return self.reach(c, images) & self.compatible[x]

    def feasible(self, f: List[int], img: List[int], assigned: int, hit: int) -> bool:
        doms: Dict[int, int] = {}
        for x in bits(self.src.full_mask & ~assigned):
            d = self.domain(x, f, img, assigned)
            if not d:
                return False
            doms[x] = d
        if not self.require_onto:
            return True
        unhit = self.tgt.full_mask & ~hit
        if popcount(unhit) > len(doms):
            return False
        # every unhit target needs its own unassigned source
        sources = {t: [x for x, d in doms.items() if (d >> t) & 1] for t in bits(unhit)}
        owner: Dict[int, int] = {}

        def augment(t: int, seen: set) -> bool:
            for x in sources[t]:
                if x in seen:
                    continue
                seen.add(x)
                if x not in owner or augment(owner[x], seen):
                    owner[x] = t
                    return True
            return False

        return all(augment(t, set()) for t in bits(unhit))

    def run(self, first: Optional[Sequence[int]] = None) -> Optional[List[int]]:
        n = self.src.size
        if n == 0:
            return [] if not self.require_onto or self.tgt.size == 0 else None
        f = [-1] * n
        img = [0] * n
        hits = [0] * self.tgt.size
        hit = 0
        assigned = 0
        cands: List[Optional[List[int]]] = [None] * n
        pos = [0] * n
        level = 0
        while level >= 0:
            if level == n:
                return f
            x = self.order[level]
            if cands[level] is None:
                dom = self.domain(x, f, img, assigned)
                prev = self.after.get(x)
                if prev is not None:
                    dom &= ~((1 << f[prev]) - 1)
                if level == 0 and first is not None:
                    dom &= sum(1 << t for t in set(first))
                cands[level] = list(bits(dom))
                pos[level] = 0
            elif f[x] >= 0:
                t = f[x]
                hits[t] -= 1
                if not hits[t]:
                    hit &= ~(1 << t)
                assigned &= ~(1 << x)
                f[x] = -1
                img[x] = 0
            cs = cands[level]
            advanced = False
            while pos[level] < len(cs):
                t = cs[pos[level]]
                pos[level] += 1
                self.nodes += 1
                if self.nodes > self.budget:
                    raise SearchBudgetError(
                        f"morphism search gave up after {self.budget} nodes", estimate=self.nodes, budget=self.budget
                    )
                f[x] = t
                img[x] = self.tgt.up[t]
                hits[t] += 1
                hit |= 1 << t
                assigned |= 1 << x
                if not self.feasible(f, img, assigned, hit):
                    hits[t] -= 1
                    if not hits[t]:
                        hit &= ~(1 << t)
                    assigned &= ~(1 << x)
                    f[x] = -1
                    img[x] = 0
                    continue
                advanced = True
                break
            if advanced:
                level += 1
            else:
                cands[level] = None
                level -= 1
        return None


def _search_task(task) -> Optional[List[int]]:
    source, target, require_onto, budget, first = task
    return _MorphismSearch(source, target, require_onto, budget).run(first)


def search_p_morphism(
    source: Poset,
    target: Poset,
    require_onto: bool = True,
    deterministic: bool = True,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
) -> Optional[PointMap]:
    """A verified p-morphism, None when none exists, SearchBudgetError when unsure.

    Deterministic mode returns the first map in (depth, index) variable order
    and ascending value order, among maps whose maxima images ascend when
    the source's maxima are interchangeable. Otherwise the branches of the
    first point are explored by separate worker processes.
    """
    limit = resolve_search_budget(budget)
    if require_onto and target.size > source.size:
        log.info("no onto map %s -> %s: %d < %d points", source.name, target.name, source.size, target.size)
        return None
    procs = 1 if deterministic else resolve_workers(workers)
    if procs > 1 and source.size:
        search = _MorphismSearch(source, target, require_onto, limit)
        roots = search.candidates(search.order[0], [0] * source.size)
        tasks = [(source, target, require_onto, limit, [t]) for t in roots]
        images = first_hit(_search_task, tasks, procs)
    else:
        search = _MorphismSearch(source, target, require_onto, limit)
        images = search.run()
        log.debug("morphism search %s -> %s: %d nodes", source.name, target.name, search.nodes)
    if images is None:
        log.info("no p-morphism %s -> %s (onto=%s)", source.name, target.name, require_onto)
        return None
    m = PointMap(source, target, tuple(images))
    report = check_p_morphism(m, require_onto)
    if not report.ok:
        raise MapError(f"search produced a map failing verification: {report.describe(m)[:3]}")
    log.info("found p-morphism %s -> %s", source.name, target.name)
    return m


# the canonical reduction F_n -> M_n, n = 2^m - 1


@lru_cache(maxsize=None)
def _atom_image(label: str, m: int) -> int:
    """Element mask (bit e-1 for element e) of the image of an atom of F_(2^m - 1)."""
    x = CoordLabel.parse(label)
    n = 2 ** m - 1
    if len(x) != n:
        raise BadIndexError(f"atom {label} does not belong to F_{n}")
    if m == 1:
        return 0b01 if label == "-" else 0b10
    half = 2 ** (m - 1)
    i = uparrow(x)
    if i < half:
        return _atom_image(str(drop_right(x, half)), m - 1)
    if i < n:
        inner = drop_right(drop_left(x, half - 1), 1)
        return _atom_image(str(inner), m - 1) << half
    low = (1 << half) - 1
    return low if label[-1] == "-" else low << half


def atom_image(label: Union[CoordLabel, str], m: int) -> SubsetLabel:
    mask = _atom_image(str(label), m)
    return SubsetLabel(frozenset(e + 1 for e in bits(mask)))


def _exponent(n: int) -> Optional[int]:
    m = (n + 1).bit_length() - 1
    return m if n >= 1 and 2 ** m - 1 == n else None


def canonical_reduction(m: int, budget: Optional[int] = None) -> PointMap:
    """f_n from F_n onto M_n for n = 2^m - 1.

    f_1 sends w_- to {1} and w_+ to {2}. Atoms of F_n are sent by the
    recursive atom rule; any other point goes to the union of the images of
    the atoms below it, so the root goes to the empty set.
    """
    if m < 1:
        raise BadIndexError(f"canonical reduction needs m >= 1, got {m}")
    n = 2 ** m - 1
    src = chequered(n, budget)
    tgt = medvedev(n, budget)
    # (coordinate, sign) -> element mask of the atom with that single non-zero coordinate
    table: Dict[Tuple[int, str], int] = {}
    for i in range(n):
        for sign in "-+":
            label = "0" * i + sign + "0" * (n - i - 1)
            table[(i, sign)] = _atom_image(label, m)
    full = (1 << (n + 1)) - 1
    images = []
    for label in src.labels:
        mask = 0
        for i, ch in enumerate(label):
            if ch != "0":
                mask |= table[(i, ch)]
        if mask == full:
            raise MapError(f"{label} would map to the full set, which is not a point of M_{n}")
        images.append(tgt.index_of(str(SubsetLabel(frozenset(e + 1 for e in bits(mask))))))
    log.info("built f_%d: %d points onto %d", n, src.size, tgt.size)
    return PointMap(src, tgt, tuple(images))


def reduction_for(n: int, budget: Optional[int] = None) -> PointMap:
    m = _exponent(n)
    if m is None:
        raise BadIndexError(f"the canonical reduction is defined for n = 2^m - 1, not n = {n}")
    return canonical_reduction(m, budget)


# reducibility and embeddings


@dataclass
class ReductionWitness:
    seed: int
    subframe: Poset
    map: PointMap


def reducible(big: Poset, small: Poset, budget: Optional[int] = None) -> Optional[ReductionWitness]:
    """A point of ``big`` whose generated subframe maps onto ``small``.

    Seeds are tried by increasing subframe size, then index; subframes
    isomorphic to one already refuted are skipped.
    """
    r = root_of(small)
    if r is None:
        raise NotRootedError("the frame to reduce onto must be rooted")
    need_depth = small.depth[r]
    subs = []
    for x in range(big.size):
        size = popcount(big.up[x])
        if size >= small.size and big.depth[x] >= need_depth:
            subs.append((size, x))
    subs.sort()
    refuted: Dict[Tuple[int, int, int], List[Poset]] = {}
    tried = 0
    for size, x in subs:
        sub = generated_subframe(big, [x])
        key = (size, big.depth[x], popcount(big.upper_covers[x]))
        bucket = refuted.setdefault(key, [])
        if any(is_isomorphic(sub, seen) is not None for seen in bucket):
            continue
        tried += 1
        m = search_p_morphism(sub, small, require_onto=True, budget=budget)
        if m is not None:
            log.info("reducible: seed %s of %s maps onto %s", big.labels[x], big.name, small.name)
            return ReductionWitness(seed=x, subframe=sub, map=m)
        bucket.append(sub)
    log.info("not reducible: %s onto %s (%d subframe classes tried)", big.name, small.name, tried)
    return None


@dataclass
class EmbeddingWitness:
    u: int
    v: int
    iso_a: PointMap
    iso_b: PointMap


def _copies(big: Poset, part: Poset) -> List[Tuple[int, Poset, List[int]]]:
    out = []
    r = root_of(part)
    if r is None:
        return out
    for x in range(big.size):
        if popcount(big.up[x]) != part.size:
            continue
        sub = generated_subframe(big, [x])
        iso = is_isomorphic(sub, part)
        if iso is not None:
            out.append((x, sub, iso))
    return out


def embeds_disjoint_union(big: Poset, part_a: Poset, part_b: Poset) -> Optional[EmbeddingWitness]:
    """Points u, v with disjoint upsets generating copies of ``part_a`` and ``part_b``."""
    copies_a = _copies(big, part_a)
    copies_b = _copies(big, part_b)
    for u, sub_a, iso_a in copies_a:
        for v, sub_b, iso_b in copies_b:
            if not big.up[u] & big.up[v]:
                return EmbeddingWitness(
                    u=u,
                    v=v,
                    iso_a=PointMap(sub_a, part_a, tuple(iso_a)),
                    iso_b=PointMap(sub_b, part_b, tuple(iso_b)),
                )
    return None
