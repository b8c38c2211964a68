import random
import time
from itertools import product as cartesian

import pytest

from cheqlab.app.services.errors import BadIndexError, MapError, NotRootedError, SearchBudgetError
from cheqlab.app.services.frames import SubsetLabel, chequered, fork, frame_h, medvedev, singleton
from cheqlab.app.services.morphisms import (
    Back,
    Forth,
    NotOnto,
    PointMap,
    atom_image,
    canonical_reduction,
    check_p_morphism,
    embeds_disjoint_union,
    image_ups,
    reducible,
    reduction_for,
    search_p_morphism,
)
from cheqlab.app.services.poset import (
    atoms,
    bits,
    disjoint_union,
    from_covers,
    generated_subframe,
    is_isomorphic,
    maxima_interchangeable,
)


def chain(n):
    return from_covers([f"c{i}" for i in range(n)], [(i, i + 1) for i in range(n - 1)], name=f"C{n}")


def naive_is_p_morphism(src, tgt, images):
    for x in range(src.size):
        for y in range(src.size):
            if src.leq(x, y) and not tgt.leq(images[x], images[y]):
                return False
        for t in range(tgt.size):
            if tgt.leq(images[x], t) and not any(src.leq(x, z) and images[z] == t for z in range(src.size)):
                return False
    return True


def test_identity_is_p_morphism():
    for p in (fork(), chequered(2), frame_h()):
        m = PointMap(p, p, tuple(range(p.size)))
        assert check_p_morphism(m, require_onto=True).ok


def test_back_violation_is_reported():
    p, c = fork(), chain(2)
    m = PointMap.from_labels(p, c, {"0": "c0", "-": "c1", "+": "c0"})
    rep = check_p_morphism(m)
    assert not rep.ok
    assert rep.violations == [Back(x=p.index_of("+"), target=c.index_of("c1"))]
    assert rep.describe(m) == ["back: c0 <= c1 but nothing above + maps to it"]


def test_forth_violation_is_reported():
    p, c = fork(), chain(2)
    m = PointMap.from_labels(p, c, {"0": "c1", "-": "c0", "+": "c1"})
    rep = check_p_morphism(m)
    assert Forth(x=0, y=1) in rep.violations
    assert any(isinstance(v, Back) for v in rep.violations)


def test_not_onto_only_when_required():
    p, c = fork(), chain(2)
    m = PointMap(p, c, (1, 1, 1))
    assert check_p_morphism(m).ok
    rep = check_p_morphism(m, require_onto=True)
    assert rep.violations == [NotOnto(target=0)]


def test_violation_cap_truncates():
    p = chequered(2)
    m = PointMap(p, chain(3), tuple([2] * p.size))
    rep = check_p_morphism(m, require_onto=True, cap=1)
    assert len(rep.violations) == 1
    assert rep.truncated


def test_image_ups_of_constant_map():
    p = fork()
    m = PointMap(p, singleton(), (0, 0, 0))
    assert image_ups(m) == [1, 1, 1]


def test_point_map_validation():
    p, c = fork(), chain(2)
    with pytest.raises(MapError):
        PointMap(p, c, (0, 1))
    with pytest.raises(MapError):
        PointMap(p, c, (0, 1, 5))
    with pytest.raises(MapError):
        PointMap.from_pairs(p, c, [[0, 0], [1, 1]])
    with pytest.raises(MapError):
        PointMap.from_pairs(p, c, [[0, 0], [0, 1], [1, 1], [2, 1]])
    assert PointMap.from_pairs(p, c, [[2, 1], [1, 1], [0, 0]]).images == (0, 1, 1)


def test_search_finds_collapse_of_fork():
    m = search_p_morphism(fork(), chain(2))
    assert m is not None
    assert m.images == (0, 1, 1)


def test_search_projection_of_f2():
    m = search_p_morphism(chequered(2), fork())
    assert m is not None
    assert check_p_morphism(m, require_onto=True).ok


def test_search_reports_none():
    assert search_p_morphism(chain(3), fork()) is None
    assert search_p_morphism(fork(), chequered(2)) is None
    assert search_p_morphism(medvedev(2), frame_h()) is None


def test_search_without_onto_allows_small_images():
    m = search_p_morphism(chain(3), fork(), require_onto=False)
    assert m is not None
    assert check_p_morphism(m).ok


def test_f2_maps_onto_h():
    m = search_p_morphism(chequered(2), frame_h())
    assert m is not None
    assert check_p_morphism(m, require_onto=True).ok
    assert m.to_labels()["00"] == "r"


def test_search_budget_is_enforced():
    with pytest.raises(SearchBudgetError):
        search_p_morphism(medvedev(3), frame_h(), budget=1)


def test_parallel_search_agrees():
    m = search_p_morphism(chequered(2), frame_h(), deterministic=False, workers=2)
    assert m is not None
    assert check_p_morphism(m, require_onto=True).ok
    assert search_p_morphism(medvedev(2), frame_h(), deterministic=False, workers=2) is None


def test_search_matches_enumeration_of_all_maps():
    h = frame_h()
    small = [fork(), chain(2), chain(3), singleton(), medvedev(1)]
    sources = [fork(), chain(3), medvedev(2), generated_subframe(h, [h.index_of("a")]), disjoint_union(fork(), chain(2))]
    for src in sources:
        for tgt in small:
            for onto in (True, False):
                exists = any(
                    naive_is_p_morphism(src, tgt, images) and (not onto or set(images) == set(range(tgt.size)))
                    for images in cartesian(range(tgt.size), repeat=src.size)
                )
                found = search_p_morphism(src, tgt, require_onto=onto)
                assert (found is not None) == exists, (src, tgt, onto)
                if found is not None:
                    assert naive_is_p_morphism(src, tgt, found.images)


def brute_force_exists(src, tgt):
    """Existence of any p-morphism and of an onto one, over every total map."""
    order = list(reversed(src.linear_extension))
    full = tgt.full_mask
    some = False
    for images in cartesian(range(tgt.size), repeat=src.size):
        img = [0] * src.size
        for x in order:
            row = 1 << images[x]
            for y in bits(src.upper_covers[x]):
                row |= img[y]
            img[x] = row
        if all(img[x] == tgt.up[images[x]] for x in range(src.size)):
            some = True
            if sum(1 << t for t in set(images)) == full:
                return True, True
    return some, False


def test_search_matches_brute_force_on_random_posets(random_poset):
    rng = random.Random(59)
    cases = [(medvedev(2), random_poset(rng, m, 0.4)) for m in (3, 4, 4, 5, 5)]
    cases.append((random_poset(rng, 7, 0.35), random_poset(rng, 5, 0.4)))
    for _ in range(30):
        cases.append((random_poset(rng, rng.randint(3, 7), 0.35), random_poset(rng, rng.randint(2, 5), 0.4)))
    for src, tgt in cases:
        some, onto = brute_force_exists(src, tgt)
        for require_onto, exists in ((False, some), (True, onto)):
            found = search_p_morphism(src, tgt, require_onto=require_onto)
            assert (found is not None) == exists, (src.up, tgt.up, require_onto)
            if found is not None:
                assert check_p_morphism(found, require_onto=require_onto).ok


def test_medvedev_maps_with_ordered_maxima():
    assert maxima_interchangeable(medvedev(3))
    assert not maxima_interchangeable(chequered(2))
    for tgt in (fork(), chain(3), medvedev(1)):
        m = search_p_morphism(medvedev(3), tgt)
        assert m is not None, tgt.name
        assert check_p_morphism(m, require_onto=True).ok
        tops = [m[x] for x in m.source.maximal]
        assert tops == sorted(tops)


def test_h_is_not_an_image_of_m5_in_time():
    t0 = time.perf_counter()
    assert search_p_morphism(medvedev(5), frame_h()) is None
    assert time.perf_counter() - t0 < 600


def test_f1_is_the_fork_isomorphism():
    m = canonical_reduction(1)
    assert m.to_labels() == {"0": "{}", "-": "{1}", "+": "{2}"}


def test_f3_atom_images():
    expected = {
        "-00": {1},
        "+00": {2},
        "0-0": {3},
        "0+0": {4},
        "00-": {1, 2},
        "00+": {3, 4},
    }
    for label, elems in expected.items():
        assert atom_image(label, 2) == SubsetLabel(frozenset(elems))


def test_f3_values():
    m = canonical_reduction(2)
    labels = m.to_labels()
    assert labels["000"] == "{}"
    assert labels["--0"] == "{1,3}"
    assert labels["---"] == "{1,2,3}"
    assert m.source.size == 27 and m.target.size == 15


@pytest.mark.parametrize("m", [1, 2])
def test_canonical_reduction_is_onto_p_morphism(m):
    f = canonical_reduction(m)
    assert check_p_morphism(f, require_onto=True).ok
    assert "{" + ",".join(str(e) for e in range(1, 2 ** m + 1)) + "}" not in set(f.to_labels().values())


def test_f7_is_onto_p_morphism():
    f = canonical_reduction(3)
    assert f.source.size == 2187
    assert f.target.size == 255
    assert check_p_morphism(f, require_onto=True).ok


def test_swapping_atom_images_breaks_back_condition():
    f = canonical_reduction(2)
    a, b = f.source.index_of("-00"), f.source.index_of("00-")
    broken = f.with_images({a: f[b], b: f[a]})
    rep = check_p_morphism(broken, require_onto=True)
    assert not rep.ok
    assert any(isinstance(v, Back) for v in rep.violations)


def test_restriction_to_atom_upsets():
    f = canonical_reduction(2)
    for a in atoms(f.source):
        sub = generated_subframe(f.source, [a])
        g = f.restrict(sub)
        assert check_p_morphism(g).ok
        assert g.image_mask() == f.target.up[f[a]]


def test_restrict_needs_generated_subframe():
    with pytest.raises(MapError):
        canonical_reduction(1).restrict(fork())


def test_reduction_for_index_checks():
    assert reduction_for(3).images == canonical_reduction(2).images
    with pytest.raises(BadIndexError):
        reduction_for(2)
    with pytest.raises(BadIndexError):
        canonical_reduction(0)


def test_reducible_f2_onto_fork():
    w = reducible(chequered(2), fork())
    assert w is not None
    assert is_isomorphic(w.subframe, fork()) is not None
    assert check_p_morphism(w.map, require_onto=True).ok


def test_not_reducible_onto_f2():
    f2 = chequered(2)
    for k in (1, 2, 3):
        assert reducible(medvedev(k), f2) is None
    assert reducible(frame_h(), f2) is None


def test_reducible_needs_rooted_target():
    with pytest.raises(NotRootedError):
        reducible(chequered(2), disjoint_union(fork(), fork()))


@pytest.mark.parametrize("a, b", [(1, 1), (1, 2), (2, 2)])
def test_disjoint_union_embeds(a, b):
    big = chequered(a + b)
    w = embeds_disjoint_union(big, chequered(a), chequered(b))
    assert w is not None
    assert not big.up[w.u] & big.up[w.v]
    assert check_p_morphism(w.iso_a, require_onto=True).ok
    assert check_p_morphism(w.iso_b, require_onto=True).ok


def test_disjoint_union_does_not_embed_in_fork():
    assert embeds_disjoint_union(fork(), fork(), fork()) is None
