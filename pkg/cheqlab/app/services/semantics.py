"""Intuitionistic forcing and frame validity.

A formula is compiled once into a post-order program of distinct
subformulas; evaluating it under a valuation yields one truth set (an upset
bitmask) per subformula, so every (subformula, point) pair is decided once.
Implication uses ``[[a -> b]] = complement of the down-closure of ([[a]] - [[b]])``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ForeignUpSetError, SearchBudgetError, UnboundVariableError
from .formulas import And, Bottom, Formula, Or, Var, variables
from .poset import Poset, UpSet, bits, count_upsets, upset_masks
from .settings import resolve_search_budget, resolve_workers
from .workers import chunks, first_hit

log = logging.getLogger(__name__)

VAR, BOT, AND, OR, IMP = range(5)

Instr = Tuple[int, int, int]  # opcode, operand a, operand b


class Valuation:
    """Assignment of upsets of one poset to variable names."""

    def __init__(self, poset: Poset, sets: Mapping[str, UpSet]) -> None:
        for name, s in sets.items():
            if s.poset is not poset and s.poset != poset:
                raise ForeignUpSetError(f"value of {name!r} is an upset of another poset")
        self.poset = poset
        self.sets: Dict[str, UpSet] = dict(sets)

    @classmethod
    def from_masks(cls, poset: Poset, masks: Mapping[str, int]) -> "Valuation":
        return cls(poset, {k: UpSet(poset, m) for k, m in masks.items()})

    @classmethod
    def from_labels(cls, poset: Poset, labels: Mapping[str, Iterable[str]]) -> "Valuation":
        """Valuation from point labels; every set must be upward closed."""
        return cls(
            poset,
            {k: UpSet.from_points(poset, [poset.index_of(lb) for lb in v]) for k, v in labels.items()},
        )

    def to_labels(self) -> Dict[str, List[str]]:
        return {k: s.labels() for k, s in self.sets.items()}

    def mask(self, name: str) -> int:
        try:
            return self.sets[name].mask
        except KeyError:
            raise UnboundVariableError(f"variable {name!r} has no value") from None

    def __getitem__(self, name: str) -> UpSet:
        return self.sets[name]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.poset == other.poset and self.sets == other.sets

    def __repr__(self) -> str:
        return f"Valuation({self.to_labels()})"


@dataclass
class ValidityResult:
    valid: bool
    valuation: Optional[Valuation] = None
    point: Optional[int] = None
    explored: int = 0
    space: int = 0

    @property
    def countermodel(self) -> bool:
        return not self.valid


@dataclass
class Program:
    names: List[str]
    code: List[Instr] = field(default_factory=list)


def compile_formula(f: Formula, names: Optional[Sequence[str]] = None) -> Program:
    """Post-order instruction list of distinct subformulas; the last one is ``f``."""
    names = list(names) if names is not None else variables(f)
    slot = {n: i for i, n in enumerate(names)}
    prog = Program(names)
    index: Dict[Formula, int] = {}
    stack: List[Tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, ready = stack.pop()
        if g in index:
            continue
        if isinstance(g, Var):
            if g.name not in slot:
                raise UnboundVariableError(f"variable {g.name!r} has no value")
            index[g] = len(prog.code)
            prog.code.append((VAR, slot[g.name], 0))
        elif isinstance(g, Bottom):
            index[g] = len(prog.code)
            prog.code.append((BOT, 0, 0))
        elif not ready:
            stack.append((g, True))
            stack.append((g.right, False))
            stack.append((g.left, False))
        else:
            op = AND if isinstance(g, And) else OR if isinstance(g, Or) else IMP
            index[g] = len(prog.code)
            prog.code.append((op, index[g.left], index[g.right]))
    return prog


def run(p: Poset, prog: Program, values: Sequence[int]) -> int:
    """Truth set of the compiled formula given one mask per program variable."""
    full = p.full_mask
    down = p.down
    regs: List[int] = []
    for op, a, b in prog.code:
        if op == VAR:
            regs.append(values[a])
        elif op == BOT:
            regs.append(0)
        elif op == AND:
            regs.append(regs[a] & regs[b])
        elif op == OR:
            regs.append(regs[a] | regs[b])
        else:
            bad = regs[a] & ~regs[b]
            closure = 0
            for x in bits(bad):
                closure |= down[x]
            regs.append(full & ~closure)
    return regs[-1]


def truth_set(p: Poset, v: Valuation, f: Formula) -> UpSet:
    """All points forcing ``f`` under ``v``."""
    prog = compile_formula(f)
    return UpSet(p, run(p, prog, [v.mask(n) for n in prog.names]))


def forces(p: Poset, v: Valuation, x: int, f: Formula) -> bool:
    p.check_point(x)
    return x in truth_set(p, v, f)


def check_validity_at(p: Poset, f: Formula, v: Valuation, x: int) -> bool:
    return forces(p, v, x, f)


def _first_failing(p: Poset, truth: int) -> int:
    # root-first: earliest point of the linear extension outside the truth set
    failing = p.full_mask & ~truth
    return min(bits(failing), key=p.position.__getitem__)


def estimate_space(p: Poset, f: Formula, budget: Optional[int] = None) -> int:
    """Number of valuations a validity check visits; SearchBudgetError above budget."""
    limit = resolve_search_budget(budget)
    k = len(variables(f))
    if k == 0:
        return 1
    ups = count_upsets(p, limit)
    space = ups ** k
    if space > limit:
        raise SearchBudgetError(
            f"{ups}^{k} = {space} valuations exceed the search budget {limit}", estimate=space, budget=limit
        )
    return space


def _scan(task) -> Optional[Tuple[Tuple[int, ...], int, int]]:
    p, prog, masks, lo, hi = task
    full = p.full_mask
    k = len(prog.names)
    explored = 0
    rest = [masks] * (k - 1)
    for first in masks[lo:hi]:
        for tail in cartesian(*rest):
            values = (first,) + tail
            explored += 1
            truth = run(p, prog, values)
            if truth != full:
                return values, _first_failing(p, truth), explored
    return None


def check_validity(
    p: Poset,
    f: Formula,
    budget: Optional[int] = None,
    deterministic: bool = True,
    workers: Optional[int] = None,
) -> ValidityResult:
    """Valid iff every point forces ``f`` under every valuation.

    Deterministic mode walks valuations lexicographically in canonical upset
    order, variables in first-occurrence order, and returns the first
    countermodel. Otherwise the first variable's values are split across
    worker processes and any countermodel may come back.
    """
    space = estimate_space(p, f, budget)
    prog = compile_formula(f)
    if not prog.names:
        truth = run(p, prog, [])
        if truth == p.full_mask:
            return ValidityResult(True, explored=1, space=1)
        return ValidityResult(False, Valuation(p, {}), _first_failing(p, truth), explored=1, space=1)

    masks = list(upset_masks(p))
    procs = 1 if deterministic else resolve_workers(workers)
    tasks = [(p, prog, masks, lo, hi) for lo, hi in chunks(len(masks), procs)]
    hit = first_hit(_scan, tasks, procs)
    if hit is None:
        log.info("%s valid on %d points (%d valuations)", f, p.size, space)
        return ValidityResult(True, explored=space, space=space)
    values, point, explored = hit
    v = Valuation.from_masks(p, dict(zip(prog.names, values)))
    log.info("%s refuted at %s under %s", f, p.labels[point], v.to_labels())
    return ValidityResult(False, v, point, explored=explored, space=space)
