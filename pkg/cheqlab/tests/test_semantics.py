import random

import pytest

from cheqlab.app.services.errors import (
    ForeignUpSetError,
    NotUpwardClosedError,
    PointIndexError,
    SearchBudgetError,
    UnboundVariableError,
)
from cheqlab.app.services.formulas import And, Bottom, Implies, Or, Var, axiom, parse, variables
from cheqlab.app.services.frames import chequered, fork, frame_h, medvedev
from cheqlab.app.services.morphisms import canonical_reduction, search_p_morphism
from cheqlab.app.services.poset import UpSet, bits, enumerate_upsets, upset_masks
from cheqlab.app.services.semantics import (
    Valuation,
    check_validity,
    check_validity_at,
    compile_formula,
    estimate_space,
    forces,
    run,
    truth_set,
)

KP_COUNTERMODEL = {"p": ["-+", "+-"], "q": ["--"], "r": ["++"]}


def naive_forces(p, v, x, f):
    if isinstance(f, Var):
        return x in v[f.name]
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return naive_forces(p, v, x, f.left) and naive_forces(p, v, x, f.right)
    if isinstance(f, Or):
        return naive_forces(p, v, x, f.left) or naive_forces(p, v, x, f.right)
    return all(
        not naive_forces(p, v, y, f.left) or naive_forces(p, v, y, f.right)
        for y in range(p.size)
        if p.leq(x, y)
    )


def random_upset(rng, p):
    mask = 0
    for x in range(p.size):
        if rng.random() < 0.3:
            mask |= p.up[x]
    return UpSet(p, mask)


def random_formula(rng, size, names="pqr"):
    if size <= 1:
        return rng.choice([Var(n) for n in names] + [Bottom()])
    left = rng.randint(1, size - 1)
    a = random_formula(rng, left, names)
    b = random_formula(rng, size - left, names)
    return rng.choice([And, Or, Implies])(a, b)


def test_wem_fails_on_fork_at_root():
    p = fork()
    res = check_validity(p, axiom("wem"))
    assert not res.valid
    assert res.countermodel
    assert p.labels[res.point] == "0"
    assert res.valuation.to_labels() == {"p": ["-"]}
    assert res.explored == 2
    assert res.space == 5


def test_kp_holds_on_fork_and_fails_on_f2():
    assert check_validity(fork(), axiom("kp")).valid
    p = chequered(2)
    res = check_validity(p, axiom("kp"))
    assert not res.valid
    assert p.labels[res.point] == "00"
    assert not forces(p, res.valuation, res.point, axiom("kp"))


def test_kp_countermodel_valuation():
    p = chequered(2)
    v = Valuation.from_labels(p, KP_COUNTERMODEL)
    assert not check_validity_at(p, axiom("kp"), v, p.index_of("00"))
    t = truth_set(p, v, parse("~p -> q | r"))
    assert p.index_of("00") in t
    assert p.index_of("00") not in truth_set(p, v, parse("~p -> q"))
    assert p.index_of("00") not in truth_set(p, v, parse("~p -> r"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sa_holds_on_chequered(n):
    assert check_validity(chequered(n), axiom("sa")).valid


def test_sa_holds_on_medvedev():
    for n in (1, 2, 3):
        assert check_validity(medvedev(n), axiom("sa")).valid


def test_kp_holds_on_h():
    assert check_validity(frame_h(), axiom("kp")).valid


def test_constant_formulas():
    p = fork()
    res = check_validity(p, Bottom())
    assert not res.valid
    assert res.point == 0
    assert res.valuation.to_labels() == {}
    assert check_validity(p, parse("true")).valid


def test_truth_sets_are_upsets():
    rng = random.Random(17)
    for p in (chequered(2), frame_h(), medvedev(2)):
        for _ in range(50):
            v = Valuation(p, {n: random_upset(rng, p) for n in "pqr"})
            f = random_formula(rng, rng.randint(1, 9))
            assert truth_set(p, v, f).is_upward_closed()


def test_forcing_matches_naive_definition():
    rng = random.Random(23)
    for p in (fork(), chequered(2), frame_h(), medvedev(2)):
        for _ in range(60):
            v = Valuation(p, {n: random_upset(rng, p) for n in "pqr"})
            f = random_formula(rng, rng.randint(1, 8))
            got = truth_set(p, v, f)
            for x in range(p.size):
                assert (x in got) == naive_forces(p, v, x, f)


def test_validity_matches_exhaustive_naive_check():
    p = frame_h()
    f = parse("(p -> q) | (q -> p)")
    res = check_validity(p, f)
    naive = all(
        naive_forces(p, Valuation(p, {"p": a, "q": b}), x, f)
        for a in enumerate_upsets(p)
        for b in enumerate_upsets(p)
        for x in range(p.size)
    )
    assert res.valid == naive
    assert not res.valid


def test_truth_is_preserved_by_p_morphisms():
    m = canonical_reduction(2)
    src, tgt = m.source, m.target
    rng = random.Random(31)
    for _ in range(25):
        sets = {n: random_upset(rng, tgt) for n in "pq"}
        pulled = {}
        for n, s in sets.items():
            mask = 0
            for x in range(src.size):
                if m[x] in s:
                    mask |= 1 << x
            pulled[n] = UpSet(src, mask)
        f = random_formula(rng, rng.randint(1, 7), "pq")
        names = variables(f)
        v_tgt = Valuation(tgt, {k: sets[k] for k in names})
        v_src = Valuation(src, {k: pulled[k] for k in names})
        t_tgt = truth_set(tgt, v_tgt, f)
        t_src = truth_set(src, v_src, f)
        assert all((x in t_src) == (m[x] in t_tgt) for x in range(src.size))


def test_validity_budget():
    with pytest.raises(SearchBudgetError) as exc:
        check_validity(chequered(3), axiom("kp"), budget=1000)
    assert exc.value.budget == 1000
    assert estimate_space(chequered(2), axiom("kp")) == 48 ** 3
    assert estimate_space(fork(), parse("false")) == 1


def test_parallel_validity_returns_a_real_countermodel():
    p = chequered(2)
    f = axiom("wem")
    res = check_validity(p, f, deterministic=False, workers=2)
    assert not res.valid
    assert not forces(p, res.valuation, res.point, f)
    assert check_validity(p, axiom("sa"), deterministic=False, workers=2).valid


def test_valuation_errors():
    p = fork()
    with pytest.raises(NotUpwardClosedError):
        Valuation.from_labels(p, {"p": ["0"]})
    with pytest.raises(ForeignUpSetError):
        Valuation(p, {"p": UpSet(chequered(2), 0)})
    v = Valuation.from_labels(p, {"p": ["-"]})
    with pytest.raises(UnboundVariableError):
        truth_set(p, v, parse("p & q"))
    with pytest.raises(PointIndexError):
        forces(p, v, 7, parse("p"))


def test_compile_shares_subformulas():
    prog = compile_formula(parse("(p -> q) & (p -> q)"))
    assert prog.names == ["p", "q"]
    assert len(prog.code) == 4


def test_deterministic_results_repeat():
    p = chequered(2)
    a = check_validity(p, axiom("kp"))
    b = check_validity(p, axiom("kp"))
    assert a.point == b.point
    assert a.valuation == b.valuation
    assert a.explored == b.explored
    assert [list(bits(a.valuation.mask(n))) for n in "pqr"] == [list(bits(b.valuation.mask(n))) for n in "pqr"]


@pytest.mark.parametrize(
    "frame, name",
    [(chequered(2), "sa"), (frame_h(), "kp"), (medvedev(2), "kp")],
    ids=["sa-F2", "kp-H", "kp-M2"],
)
def test_valid_results_survive_random_valuations(frame, name):
    f = axiom(name)
    assert check_validity(frame, f).valid
    prog = compile_formula(f)
    masks = list(upset_masks(frame))
    rng = random.Random(41)
    for _ in range(10_000):
        values = [rng.choice(masks) for _ in prog.names]
        assert run(frame, prog, values) == frame.full_mask


def test_validity_passes_from_f2_to_h():
    src, tgt = chequered(2), frame_h()
    m = search_p_morphism(src, tgt)
    assert m is not None
    rng = random.Random(43)
    valid_on_f2 = [axiom("sa"), parse("~p | ~~p -> ~p | ~~p")]
    for _ in range(120):
        f = random_formula(rng, rng.randint(2, 8), "pq")
        if check_validity(src, f).valid:
            valid_on_f2.append(f)
    assert len(valid_on_f2) > 5
    for f in valid_on_f2:
        assert check_validity(tgt, f).valid, f
    # the converse fails: kp holds on H but not on F_2
    assert check_validity(tgt, axiom("kp")).valid
    assert not check_validity(src, axiom("kp")).valid
