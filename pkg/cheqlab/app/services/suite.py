"""The fixed list of checks behind ``cheqlab verify-paper``.

Each check returns an ``Outcome``; the runner times it and turns budget
exhaustion into ``skipped`` (quick profile) or ``fail`` (full profile); any
other library error fails the check alone.
Witnesses are built from labels only, so reports are reproducible.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..models import CheckRecord, VerificationReport
from .errors import BadIndexError, BudgetError, CheqlabError
from .formulas import AXIOMS
from .frames import (
    SubsetLabel,
    chequered,
    common_successor_fact,
    fork,
    frame_h,
    medvedev,
    self_resemblance_check,
    singleton,
)
from .morphisms import (
    Back,
    PointMap,
    atom_image,
    canonical_reduction,
    check_p_morphism,
    embeds_disjoint_union,
    reducible,
    search_p_morphism,
)
from .poset import (
    Poset,
    atoms,
    bits,
    count_upsets,
    from_covers,
    generated_subframe,
    is_isomorphic,
    predecessors_form_lattice,
    root_of,
    upset_masks,
)
from .semantics import Valuation, check_validity, check_validity_at, truth_set

log = logging.getLogger(__name__)

PROFILES = ("quick", "full")

# p as in the refutation of kp on F_2, with q and r true at one top each
KP_COUNTERMODEL: Dict[str, List[str]] = {
    "p": ["-+", "+-"],
    "q": ["--"],
    "r": ["++"],
}


@dataclass
class Outcome:
    passed: bool
    detail: str = ""
    witness: Optional[Any] = None


@dataclass
class Bounds:
    reductions: Tuple[int, ...]
    reducible_up_to: int
    h_sources: Tuple[int, ...]


BOUNDS: Dict[str, Bounds] = {
    "quick": Bounds(reductions=(1, 2), reducible_up_to=4, h_sources=(2, 3, 4)),
    "full": Bounds(reductions=(1, 2, 3), reducible_up_to=5, h_sources=(2, 3, 4, 5)),
}


@dataclass
class Context:
    profile: str
    deterministic: bool = True
    budget: Optional[int] = None
    workers: Optional[int] = None

    @property
    def bounds(self) -> Bounds:
        return BOUNDS[self.profile]


@dataclass
class Check:
    check_id: str
    theorem_ref: str
    run: Callable[[Context], Outcome]
    profiles: Sequence[str] = field(default_factory=lambda: PROFILES)


def chain(n: int) -> Poset:
    return from_covers([f"c{i}" for i in range(n)], [(i, i + 1) for i in range(n - 1)], name=f"C{n}")


def _countermodel(p: Poset, res) -> Dict[str, Any]:
    return {"point": p.labels[res.point], "valuation": res.valuation.to_labels()}


# frame sizes


def _sizes(ctx: Context) -> Outcome:
    bad = []
    for n in range(1, 8):
        if chequered(n).size != 3 ** n:
            bad.append(f"F{n}")
        if medvedev(n).size != 2 ** (n + 1) - 1:
            bad.append(f"M{n}")
    return Outcome(not bad, "F_n has 3^n and M_n has 2^(n+1)-1 points for n <= 7", bad or None)


# disjoint unions


def _embeddings(ctx: Context) -> Outcome:
    found = {}
    for a, b in ((1, 1), (1, 2), (2, 2)):
        big = chequered(a + b)
        w = embeds_disjoint_union(big, chequered(a), chequered(b))
        key = f"F{a}+F{b} in F{a + b}"
        found[key] = [big.labels[w.u], big.labels[w.v]] if w else None
    missing = [k for k, v in found.items() if v is None]
    return Outcome(not missing, "F_a + F_b is a generated subframe of F_(a+b)", found)


# Scott axiom


def _sa_on_chequered(ctx: Context) -> Outcome:
    results = {}
    for n in (1, 2, 3):
        p = chequered(n)
        res = check_validity(p, AXIOMS["sa"], ctx.budget, ctx.deterministic, ctx.workers)
        results[f"F{n}"] = "valid" if res.valid else _countermodel(p, res)
    ok = all(v == "valid" for v in results.values())
    return Outcome(ok, "sa is valid on F_1, F_2, F_3", results)


def _common_successor(ctx: Context) -> Outcome:
    results = {}
    for n in range(2, 6):
        rep = common_successor_fact(n)
        results[f"F{n}"] = "holds" if rep.ok else [list(pair) for pair in rep.failures[:5]]
    ok = all(v == "holds" for v in results.values())
    return Outcome(ok, "any two atoms have an atom sharing a top with each, n = 2..5", results)


def _sa_below_root(ctx: Context) -> Outcome:
    p = chequered(2)
    r = root_of(p)
    results = {}
    reps: List[Poset] = []
    for x in range(p.size):
        if x == r:
            continue
        sub = generated_subframe(p, [x])
        if any(is_isomorphic(sub, q) is not None for q in reps):
            continue
        reps.append(sub)
        res = check_validity(sub, AXIOMS["sa"], ctx.budget)
        results[p.labels[x]] = "valid" if res.valid else _countermodel(sub, res)
    ok = all(v == "valid" for v in results.values())
    return Outcome(ok, "sa is valid on every proper rooted generated subframe of F_2", results)


# Kreisel-Putnam


def _kp_fails_on_f2(ctx: Context) -> Outcome:
    p = chequered(2)
    res = check_validity(p, AXIOMS["kp"], ctx.budget, ctx.deterministic, ctx.workers)
    if res.valid:
        return Outcome(False, "kp unexpectedly valid on F_2")
    again = check_validity_at(p, AXIOMS["kp"], res.valuation, res.point)
    ok = not again and res.point == root_of(p)
    return Outcome(ok, "kp has a countermodel on F_2 at the root", _countermodel(p, res))


def _kp_explicit(ctx: Context) -> Outcome:
    p = chequered(2)
    v = Valuation.from_labels(p, KP_COUNTERMODEL)
    kp = AXIOMS["kp"]
    failing = p.labels_of(p.full_mask & ~truth_set(p, v, kp).mask)
    root = p.labels[root_of(p)]
    ok = not check_validity_at(p, kp, v, root_of(p)) and failing == [root]
    return Outcome(ok, "the explicit valuation refutes kp at the root and nowhere else", {"failing": failing})


# canonical reduction


def _reductions(ctx: Context) -> Outcome:
    results = {}
    for m in ctx.bounds.reductions:
        f = canonical_reduction(m)
        rep = check_p_morphism(f, require_onto=True)
        n = 2 ** m - 1
        results[f"f{n}"] = "onto p-morphism" if rep.ok else rep.describe(f)[:5]
    ok = all(v == "onto p-morphism" for v in results.values())
    return Outcome(ok, "f_n is a p-morphism of F_n onto M_n", results)


def _image_proper(ctx: Context) -> Outcome:
    results = {}
    for m in ctx.bounds.reductions:
        f = canonical_reduction(m)
        n = 2 ** m - 1
        biggest = max(len(SubsetLabel.parse(f.target.labels[t]).elems) for t in set(f.images))
        results[f"f{n}"] = biggest
    ok = all(v <= 2 ** m - 1 for m, v in zip(ctx.bounds.reductions, results.values()))
    return Outcome(ok, "no point of F_n maps to the full set", results)


def _atom_images(ctx: Context) -> Outcome:
    bad = []
    for m in (2, 3):
        n = 2 ** m - 1
        low = set(range(1, 2 ** (m - 1) + 1))
        for i in range(1, n + 1):
            for sign in "-+":
                label = "0" * (i - 1) + sign + "0" * (n - i)
                meets_low = bool(atom_image(label, m).elems & low)
                allowed = i < 2 ** (m - 1) or i == n
                if meets_low and not allowed:
                    bad.append(label)
    return Outcome(not bad, "atom images meet the lower half only from low or last coordinates", bad or None)


def _mutation(ctx: Context) -> Outcome:
    f = canonical_reduction(2)
    src = f.source
    a, b = src.index_of("-00"), src.index_of("00-")
    broken = f.with_images({a: f[b], b: f[a]})
    rep = check_p_morphism(broken, require_onto=True)
    backs = [v for v in rep.violations if isinstance(v, Back)]
    ok = not rep.ok and bool(backs)
    return Outcome(ok, "swapping two atom images of f_3 is detected", rep.describe(broken)[:3])


def _restrictions(ctx: Context) -> Outcome:
    f = canonical_reduction(2)
    bad = []
    for a in atoms(f.source):
        sub = generated_subframe(f.source, [a])
        if not check_p_morphism(f.restrict(sub)).ok:
            bad.append(f.source.labels[a])
    return Outcome(not bad, "f_3 restricted to the upset of each atom is a p-morphism", bad or None)


def _self_resemblance(ctx: Context) -> Outcome:
    results = {}
    for fam, top in (("cheq", 4), ("medvedev", 5)):
        for n in range(1, top + 1):
            rep = self_resemblance_check(fam, n)
            bad = [lb for lb, k in rep.ranks.items() if k is None]
            results[f"{fam}{n}"] = "holds" if rep.ok else bad[:5]
    ok = all(v == "holds" for v in results.values())
    return Outcome(ok, "rooted generated subframes are earlier family members", results)


def _lattices(ctx: Context) -> Outcome:
    results = {}
    for n in range(1, 5):
        p = chequered(n)
        rep = predecessors_form_lattice(p)
        results[f"F{n}"] = "lattice" if rep.ok else {
            "point": p.labels[rep.point],
            "pair": [p.labels[rep.pair[0]], p.labels[rep.pair[1]]],
        }
    ok = all(v == "lattice" for v in results.values())
    return Outcome(ok, "predecessors of every point of F_n form a lattice, n <= 4", results)


def _sa_on_medvedev(ctx: Context) -> Outcome:
    results = {}
    for n in (1, 2, 3):
        p = medvedev(n)
        res = check_validity(p, AXIOMS["sa"], ctx.budget, ctx.deterministic, ctx.workers)
        results[f"M{n}"] = "valid" if res.valid else _countermodel(p, res)
    ok = all(v == "valid" for v in results.values())
    return Outcome(ok, "sa is valid on M_1, M_2, M_3", results)


# Medvedev logic


def _not_reducible(ctx: Context) -> Outcome:
    f2 = chequered(2)
    results = {}
    for k in range(1, ctx.bounds.reducible_up_to + 1):
        w = reducible(medvedev(k), f2, ctx.budget)
        results[f"M{k}"] = "none" if w is None else medvedev(k).labels[w.seed]
    ok = all(v == "none" for v in results.values())
    return Outcome(ok, "no generated subframe of M_k maps onto F_2", results)


def _wem_fails(ctx: Context) -> Outcome:
    p = fork()
    res = check_validity(p, AXIOMS["wem"], ctx.budget, ctx.deterministic, ctx.workers)
    if res.valid:
        return Outcome(False, "wem unexpectedly valid on the fork")
    return Outcome(True, "wem has a countermodel on the fork", _countermodel(p, res))


def _kp_on_medvedev(ctx: Context) -> Outcome:
    results = {}
    for n in (1, 2):
        p = medvedev(n)
        res = check_validity(p, AXIOMS["kp"], ctx.budget, ctx.deterministic, ctx.workers)
        results[f"M{n}"] = "valid" if res.valid else _countermodel(p, res)
    ok = all(v == "valid" for v in results.values())
    return Outcome(ok, "kp is valid on M_1 and M_2", results)


# the frame H


def _f2_onto_h(ctx: Context) -> Outcome:
    m = search_p_morphism(chequered(2), frame_h(), True, ctx.deterministic, ctx.budget, ctx.workers)
    if m is None:
        return Outcome(False, "no p-morphism of F_2 onto H found")
    ok = check_p_morphism(m, require_onto=True).ok
    return Outcome(ok, "F_2 maps onto H", m.to_labels())


def _kp_on_h(ctx: Context) -> Outcome:
    h = frame_h()
    res = check_validity(h, AXIOMS["kp"], ctx.budget, ctx.deterministic, ctx.workers)
    return Outcome(res.valid, "kp is valid on H", None if res.valid else _countermodel(h, res))


def _h_not_medvedev_image(ctx: Context) -> Outcome:
    h = frame_h()
    results = {}
    for n in ctx.bounds.h_sources:
        m = search_p_morphism(medvedev(n), h, True, ctx.deterministic, ctx.budget, ctx.workers)
        results[f"M{n}"] = "none" if m is None else m.to_labels()
    ok = all(v == "none" for v in results.values())
    return Outcome(ok, "H is not a p-morphic image of M_n", results)


# oracles


def _brute_upsets(p: Poset) -> int:
    count = 0
    for mask in range(1 << p.size):
        if all(not (p.up[x] & ~mask) for x in bits(mask)):
            count += 1
    return count


def _upset_oracle(ctx: Context) -> Outcome:
    results = {}
    for p in (singleton(), fork(), chain(3), chequered(2), frame_h(), medvedev(2), medvedev(3)):
        listed = list(upset_masks(p))
        brute = _brute_upsets(p)
        results[p.name] = [len(listed), brute, count_upsets(p)]
    ok = all(a == b == c for a, b, c in results.values())
    return Outcome(ok, "upset enumeration and count agree with subset filtering", results)


def _morphism_oracle(ctx: Context) -> Outcome:
    pairs = [
        (fork(), chain(2)),
        (fork(), singleton()),
        (chain(3), chain(2)),
        (medvedev(2), fork()),
        (frame_h(), fork()),
        (frame_h(), chain(3)),
        (medvedev(2), chain(3)),
    ]
    results = {}
    for src, tgt in pairs:
        exists = any(
            check_p_morphism(PointMap(src, tgt, images), require_onto=True).ok
            for images in cartesian(range(tgt.size), repeat=src.size)
        )
        found = search_p_morphism(src, tgt, require_onto=True, budget=ctx.budget) is not None
        results[f"{src.name}->{tgt.name}"] = [found, exists]
    ok = all(a == b for a, b in results.values())
    return Outcome(ok, "search verdicts agree with enumerating every map", results)


CHECKS: List[Check] = [
    Check("sizes", "F_n has 3^n points and M_n has 2^(n+1)-1 points", _sizes),
    Check("dp.embeddings", "F_a + F_b is isomorphic to a generated subframe of F_(a+b)", _embeddings),
    Check("sa.chequered", "sa is valid on every chequered frame F_n", _sa_on_chequered),
    Check("sa.common-successor", "any two atoms of F_n have an atom sharing a top with each, n >= 2", _common_successor),
    Check("sa.below-root", "sa holds on every proper rooted generated subframe of F_2", _sa_below_root),
    Check("kp.countermodel", "kp fails on F_2, refuted at the root", _kp_fails_on_f2),
    Check("kp.valuation", "kp fails on F_2 under V(p)={-+,+-}, V(q)={--}, V(r)={++}", _kp_explicit),
    Check("fn.reductions", "f_n is a p-morphism of F_n onto M_n for n = 2^m-1", _reductions),
    Check("fn.image-proper", "f_n never takes the full set {1..n+1}", _image_proper),
    Check("fn.atom-images", "atom images meet the lower half only from low or last coordinates", _atom_images),
    Check("fn.mutation", "a map differing from f_3 on two atoms is not a p-morphism", _mutation),
    Check("fn.restrictions", "f_n restricted to the upset of an atom is a p-morphism onto its image", _restrictions),
    Check("fn.self-resemblance", "rooted generated subframes of F_n and M_n are earlier family members", _self_resemblance),
    Check("fn.lattices", "predecessors of every point of F_n form a lattice", _lattices),
    Check("fn.sa-medvedev", "sa is valid on every Medvedev frame M_n", _sa_on_medvedev),
    Check("ml.not-reducible", "F_2 is not reducible to any M_k, so ML is not the logic of the F_n", _not_reducible),
    Check("ml.wem-fails", "wem fails on the fork, so sa does not entail wem", _wem_fails),
    Check("ml.kp-medvedev", "kp is valid on every Medvedev frame M_n", _kp_on_medvedev),
    Check("h.f2-onto", "H is a p-morphic image of F_2", _f2_onto_h),
    Check("h.kp-valid", "kp is valid on H", _kp_on_h),
    Check("h.not-image", "H is not a p-morphic image of any M_n", _h_not_medvedev_image),
    Check("oracle.upsets", "upset enumeration agrees with filtering all subsets", _upset_oracle),
    Check("oracle.morphisms", "p-morphism search agrees with enumerating every map", _morphism_oracle),
]


def check_ids() -> List[str]:
    return [c.check_id for c in CHECKS]


def run_suite(
    profile: str = "quick",
    deterministic: bool = True,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
    only: Optional[Sequence[str]] = None,
) -> VerificationReport:
    if profile not in BOUNDS:
        raise BadIndexError(f"unknown profile {profile!r} (expected quick or full)")
    ctx = Context(profile, deterministic, budget, workers)
    report = VerificationReport(profile=profile)
    for check in CHECKS:
        if profile not in check.profiles:
            continue
        if only and check.check_id not in only:
            continue
        t0 = time.perf_counter()
        try:
            out = check.run(ctx)
            status = "pass" if out.passed else "fail"
            detail, witness = out.detail, out.witness
        except BudgetError as e:
            status = "skipped" if profile == "quick" else "fail"
            detail, witness = f"budget exhausted: {e}", None
        except CheqlabError as e:
            log.warning("%s raised %s: %s", check.check_id, type(e).__name__, e)
            status = "fail"
            detail, witness = f"{type(e).__name__}: {e}", None
        elapsed = round(time.perf_counter() - t0, 3)
        log.info("%s: %s (%.3fs)", check.check_id, status, elapsed)
        report.checks.append(
            CheckRecord(
                check_id=check.check_id,
                theorem_ref=check.theorem_ref,
                status=status,
                detail=detail,
                witness=witness,
                elapsed=elapsed,
            )
        )
    return report


def render_table(report: VerificationReport) -> str:
    width = max((len(c.check_id) for c in report.checks), default=8)
    lines = [f"verify-paper ({report.profile})", ""]
    for c in report.checks:
        lines.append(f"  {c.check_id:<{width}}  {c.status.upper():<7}  {c.elapsed:7.3f}s  {c.theorem_ref}: {c.detail}")
    counts = report.counts()
    lines.append("")
    lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped")
    return "\n".join(lines) + "\n"

