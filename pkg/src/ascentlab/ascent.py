"""Deterministic ascent engines over a landscape, plus independent verifiers.

Engines work against any landscape object that exposes `domains`,
`check_assignment`, `fitness`, and the unchecked `_delta(x, k, s, v)` hook;
both `VcspInstance` and the expanded-landscape oracle qualify.  Engines use
delta evaluation internally; the verifiers re-derive everything from scratch
with full fitness evaluations so they catch delta bugs.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from typing import IO, Sequence

from .model import InvalidAssignmentError, VcspInstance


@dataclass(frozen=True)
class StepRecord:
    """One applied move: variable, source state, target state, fitness after."""

    var: int
    src: int
    dst: int
    fitness_after: int


@dataclass(frozen=True)
class AscentTrace:
    """A start assignment plus the ordered moves an engine applied.

    `steps` is None when the engine ran in summary mode; `length` is always
    the number of applied moves.  `terminal` distinguishes reaching a local
    solution from hitting the step limit.  `tie_steps` counts steps where the
    steepest argmax was not unique; `ambiguous_steps` counts ordered steps
    where the chosen variable had more than one improving state.
    """

    start: tuple[int, ...]
    steps: tuple[StepRecord, ...] | None
    length: int
    terminal: bool
    policy: str
    tie_steps: int
    ambiguous_steps: int
    final: tuple[int, ...]
    final_fitness: int

    def states(self):
        """Replay the visited assignments, start first (needs recorded steps)."""
        if self.steps is None:
            raise ValueError("trace was recorded in summary mode; no steps to replay")
        x = list(self.start)
        yield tuple(x)
        for rec in self.steps:
            x[rec.var] = rec.dst
            yield tuple(x)

    def fitness_values(self) -> list[int]:
        if self.steps is None:
            raise ValueError("trace was recorded in summary mode; no steps to replay")
        return [rec.fitness_after for rec in self.steps]


def _start_state(landscape, start: Sequence[int]) -> tuple[list[int], int]:
    landscape.check_assignment(start)
    x = list(start)
    return x, landscape.fitness(x)


def _check_limit(step_limit: int | None) -> None:
    if step_limit is not None and step_limit < 0:
        raise InvalidAssignmentError(f"step limit must be >= 0, got {step_limit}")


def steepest_ascent(
    landscape,
    start: Sequence[int],
    step_limit: int | None = None,
    record_steps: bool = True,
) -> AscentTrace:
    """Always move to a maximum-fitness improving neighbor.

    Ties break toward the lowest variable id, then the lowest state id, and
    every tied step is counted.  Stops at a local solution (terminal) or when
    the step limit is reached (non-terminal).
    """
    _check_limit(step_limit)
    x, f = _start_state(landscape, start)
    domains = landscape.domains
    n = len(domains)
    steps: list[StepRecord] | None = [] if record_steps else None
    length = 0
    ties = 0
    terminal = True
    while True:
        best_gain = 0
        best = None
        tied = False
        for k in range(n):
            s = x[k]
            for t in domains[k].adjacent(s):
                g = landscape._delta(x, k, s, t)
                if g > best_gain:
                    best_gain = g
                    best = (k, s, t)
                    tied = False
                elif g == best_gain and best is not None and g > 0:
                    tied = True
        if best is None:
            break
        if step_limit is not None and length >= step_limit:
            terminal = False
            break
        k, s, t = best
        x[k] = t
        f += best_gain
        length += 1
        if tied:
            ties += 1
        if steps is not None:
            steps.append(StepRecord(k, s, t, f))
    return AscentTrace(
        start=tuple(start),
        steps=tuple(steps) if steps is not None else None,
        length=length,
        terminal=terminal,
        policy="steepest",
        tie_steps=ties,
        ambiguous_steps=0,
        final=tuple(x),
        final_fitness=f,
    )


def _order_positions(landscape, order: Sequence[int] | None) -> tuple[tuple[int, ...], list[int]]:
    n = len(landscape.domains)
    if order is None:
        order = tuple(range(n))
    else:
        order = tuple(order)
        if sorted(order) != list(range(n)):
            raise InvalidAssignmentError("order must be a permutation of the variables")
    pos = {k: i for i, k in enumerate(order)}
    # After moving k, only variables sharing a constraint with k can change
    # their improving status, so the scan may resume at the earliest of their
    # order positions.  Landscapes without constraint structure rescan fully.
    get_nbrs = getattr(landscape, "var_neighbors", None)
    if callable(get_nbrs):
        back = [min([pos[k]] + [pos[j] for j in get_nbrs(k)]) for k in range(n)]
    else:
        back = [0] * n
    return order, back


def ordered_ascent(
    landscape,
    start: Sequence[int],
    order: Sequence[int] | None = None,
    step_limit: int | None = None,
    record_steps: bool = True,
) -> AscentTrace:
    """Always move the order-minimal variable that has an improving state.

    Among improving states of that variable the engine takes the largest gain
    (lowest state id on a tie) and flags the step as ambiguous when more than
    one improving state existed.
    """
    _check_limit(step_limit)
    order, back = _order_positions(landscape, order)
    if (
        not record_steps
        and isinstance(landscape, VcspInstance)
        and _fast_ordered_applicable(landscape)
    ):
        return _fast_ordered(landscape, start, order, back, step_limit)

    x, f = _start_state(landscape, start)
    domains = landscape.domains
    n = len(domains)
    steps: list[StepRecord] | None = [] if record_steps else None
    length = 0
    ambiguous = 0
    terminal = True
    p = 0
    while p < n:
        k = order[p]
        s = x[k]
        best_gain = 0
        best_t = -1
        improving = 0
        for t in domains[k].adjacent(s):
            g = landscape._delta(x, k, s, t)
            if g > 0:
                improving += 1
                if g > best_gain:
                    best_gain = g
                    best_t = t
        if best_t < 0:
            p += 1
            continue
        if step_limit is not None and length >= step_limit:
            terminal = False
            break
        x[k] = best_t
        f += best_gain
        length += 1
        if improving > 1:
            ambiguous += 1
        if steps is not None:
            steps.append(StepRecord(k, s, best_t, f))
        p = back[k]
    return AscentTrace(
        start=tuple(start),
        steps=tuple(steps) if steps is not None else None,
        length=length,
        terminal=terminal,
        policy="ordered",
        tie_steps=0,
        ambiguous_steps=ambiguous,
        final=tuple(x),
        final_fitness=f,
    )


def first_improvement_ascent(
    landscape,
    start: Sequence[int],
    step_limit: int | None = None,
    seed: int = 0,
    record_steps: bool = True,
) -> AscentTrace:
    """Take the first improving move found in a seeded random scan."""
    _check_limit(step_limit)
    x, f = _start_state(landscape, start)
    domains = landscape.domains
    n = len(domains)
    rng = random.Random(seed)
    steps: list[StepRecord] | None = [] if record_steps else None
    length = 0
    terminal = True
    while True:
        moves = [(k, t) for k in range(n) for t in domains[k].adjacent(x[k])]
        rng.shuffle(moves)
        chosen = None
        for k, t in moves:
            g = landscape._delta(x, k, x[k], t)
            if g > 0:
                chosen = (k, t, g)
                break
        if chosen is None:
            break
        if step_limit is not None and length >= step_limit:
            terminal = False
            break
        k, t, g = chosen
        s = x[k]
        x[k] = t
        f += g
        length += 1
        if steps is not None:
            steps.append(StepRecord(k, s, t, f))
    return AscentTrace(
        start=tuple(start),
        steps=tuple(steps) if steps is not None else None,
        length=length,
        terminal=terminal,
        policy="first",
        tie_steps=0,
        ambiguous_steps=0,
        final=tuple(x),
        final_fitness=f,
    )


# -- fast summary-mode runner -------------------------------------------------

_FAST_BOUND = 2**62


def _fast_ordered_applicable(instance: VcspInstance) -> bool:
    if instance.max_arity > 2:
        return False
    if instance.worst_case_bound() >= _FAST_BOUND:
        return False
    try:
        from . import _fastpath  # noqa: F401
    except Exception:
        return False
    return _fastpath.AVAILABLE


def _fast_ordered(
    instance: VcspInstance,
    start: Sequence[int],
    order: tuple[int, ...],
    back: list[int],
    step_limit: int | None,
) -> AscentTrace:
    from . import _fastpath

    instance.check_assignment(start)
    f0 = instance.fitness(start)
    length, terminal, ambiguous, final, total_gain = _fastpath.run_ordered(
        instance, start, order, back, -1 if step_limit is None else step_limit
    )
    final_fitness = f0 + total_gain
    if instance.fitness(final) != final_fitness:
        raise RuntimeError("fast ordered runner disagrees with exact evaluation")
    return AscentTrace(
        start=tuple(start),
        steps=None,
        length=length,
        terminal=terminal,
        policy="ordered",
        tie_steps=0,
        ambiguous_steps=ambiguous,
        final=final,
        final_fitness=final_fitness,
    )


# -- verifiers ----------------------------------------------------------------


@dataclass(frozen=True)
class AscentViolation:
    """First broken step of a trace: index, reason, optional witness move."""

    step: int
    reason: str
    witness: tuple | None = None


def _replayed_states(landscape, trace: AscentTrace) -> list[tuple[int, ...]] | AscentViolation:
    if trace.steps is None:
        return AscentViolation(-1, "trace has no recorded steps")
    try:
        landscape.check_assignment(trace.start)
    except Exception as exc:
        return AscentViolation(-1, f"invalid start: {exc}")
    states = [tuple(trace.start)]
    x = list(trace.start)
    for i, rec in enumerate(trace.steps):
        if not (0 <= rec.var < len(landscape.domains)):
            return AscentViolation(i, f"variable {rec.var} out of range")
        if x[rec.var] != rec.src:
            return AscentViolation(
                i, f"step source {rec.src} does not match state {x[rec.var]}"
            )
        if not landscape.domains[rec.var].allows(rec.src, rec.dst):
            return AscentViolation(
                i, f"move {rec.src}->{rec.dst} at variable {rec.var} is not permitted"
            )
        x[rec.var] = rec.dst
        states.append(tuple(x))
    return states


def verify_ascent(landscape, trace: AscentTrace) -> AscentViolation | None:
    """Adjacency, permitted moves, strict fitness increase, terminal condition.

    All fitness values are recomputed from scratch.
    """
    states = _replayed_states(landscape, trace)
    if isinstance(states, AscentViolation):
        return states
    prev = landscape.fitness(states[0])
    for i, rec in enumerate(trace.steps or ()):
        f = landscape.fitness(states[i + 1])
        if f != rec.fitness_after:
            return AscentViolation(
                i, f"recorded fitness {rec.fitness_after} != actual {f}"
            )
        if f <= prev:
            return AscentViolation(i, f"fitness did not strictly increase ({prev} -> {f})")
        prev = f
    if trace.final != states[-1]:
        return AscentViolation(len(states) - 2, "final assignment does not match replay")
    if trace.terminal and not landscape.is_local_solution(states[-1]):
        return AscentViolation(
            len(states) - 1, "terminal trace does not end at a local solution"
        )
    return None


def verify_steepest(landscape, trace: AscentTrace) -> AscentViolation | None:
    """Every step must reach the maximum fitness over the full neighborhood."""
    basic = verify_ascent(landscape, trace)
    if basic is not None:
        return basic
    states = list(trace.states())
    for i in range(len(states) - 1):
        x = states[i]
        chosen = landscape.fitness(states[i + 1])
        y = list(x)
        for k, t in landscape.neighbors(x):
            s = y[k]
            y[k] = t
            f = landscape.fitness(y)
            y[k] = s
            if f > chosen:
                return AscentViolation(
                    i,
                    f"neighbor (var {k} -> state {t}) has fitness {f} > chosen {chosen}",
                    witness=(k, t),
                )
    return None


def verify_ordered(
    landscape, trace: AscentTrace, order: Sequence[int] | None = None
) -> AscentViolation | None:
    """No variable earlier in the order may have had an improving move."""
    basic = verify_ascent(landscape, trace)
    if basic is not None:
        return basic
    n = len(landscape.domains)
    order = tuple(order) if order is not None else tuple(range(n))
    pos = {k: i for i, k in enumerate(order)}
    states = list(trace.states())
    for i, rec in enumerate(trace.steps or ()):
        x = states[i]
        fx = landscape.fitness(x)
        y = list(x)
        for j in order:
            if pos[j] >= pos[rec.var]:
                break
            s = y[j]
            for u in landscape.domains[j].adjacent(s):
                y[j] = u
                f = landscape.fitness(y)
                y[j] = s
                if f > fx:
                    return AscentViolation(
                        i,
                        f"earlier variable {j} had an improving move to state {u}",
                        witness=(j, u),
                    )
    return None


# -- trace serialization --------------------------------------------------------

CSV_HEADER = ("step", "var", "from", "to", "fitness")


def trace_to_csv(trace: AscentTrace, landscape, out: IO[str]) -> None:
    """One row per step; variable ids 0-based, states as labels."""
    if trace.steps is None:
        raise ValueError("trace was recorded in summary mode; nothing to export")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for i, rec in enumerate(trace.steps):
        states = landscape.domains[rec.var].states
        writer.writerow((i, rec.var, states[rec.src], states[rec.dst], rec.fitness_after))


def trace_to_json(trace: AscentTrace, landscape) -> dict:
    """JSON mirror of the trace, including policy and the tie/ambiguity flags."""
    steps = None
    if trace.steps is not None:
        steps = []
        for rec in trace.steps:
            states = landscape.domains[rec.var].states
            steps.append(
                {
                    "var": rec.var,
                    "from": states[rec.src],
                    "to": states[rec.dst],
                    "fitness": rec.fitness_after,
                }
            )
    return {
        "start": list(trace.start),
        "steps": steps,
        "length": trace.length,
        "terminal": trace.terminal,
        "policy": trace.policy,
        "tie_steps": trace.tie_steps,
        "ambiguous_steps": trace.ambiguous_steps,
        "final": list(trace.final),
        "final_fitness": trace.final_fitness,
    }
