"""Exact-integer valued-CSP model.

A VCSP here is a list of finite domains (each with an undirected transition
relation restricting single-variable moves) plus a list of integer-valued
constraints over dense tensors.  Fitness of an assignment is the sum of the
constraint values it selects.  All arithmetic uses Python integers, so values
never wrap; an optional environment switch rejects instances whose worst-case
fitness magnitude exceeds the signed 64-bit range.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

INT64_MAX = 2**63 - 1


class ModelError(ValueError):
    """Base class for model construction and validation failures."""


class InvalidAssignmentError(ModelError):
    """Assignment has the wrong length or an out-of-range state."""


class TransitionError(ModelError):
    """Requested single-variable move is not permitted by the relation."""


class BuildError(ModelError):
    """Instance construction failed (bad parameters, range overflow, defects)."""


def int_range_limit() -> int | None:
    """Magnitude cap for instance values, from ASCENTLAB_INT_RANGE.

    "wide" (the default) keeps arbitrary-precision integers uncapped; "64"
    makes builders reject any instance whose worst-case fitness magnitude
    does not fit a signed 64-bit word.
    """
    mode = os.environ.get("ASCENTLAB_INT_RANGE", "wide")
    if mode == "wide":
        return None
    if mode == "64":
        return INT64_MAX
    raise BuildError(f"ASCENTLAB_INT_RANGE must be '64' or 'wide', got {mode!r}")


@dataclass(frozen=True)
class DomainSpec:
    """A variable's ordered state labels plus its undirected move relation.

    Transition pairs are stored normalized as (low, high) state ids.  A domain
    with an empty relation is legal: that variable can never move.
    """

    states: tuple[str, ...]
    transitions: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        states = tuple(str(s) for s in self.states)
        size = len(states)
        pairs: set[tuple[int, int]] = set()
        for pair in self.transitions:
            u, v = pair
            if u == v:
                raise ModelError(f"self-transition ({u},{v}) is not allowed")
            if not (0 <= u < size and 0 <= v < size):
                raise ModelError(f"transition ({u},{v}) out of range for {size} states")
            pairs.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", frozenset(pairs))
        adj: list[list[int]] = [[] for _ in range(size)]
        for u, v in pairs:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adjacent", tuple(tuple(sorted(a)) for a in adj))

    @property
    def size(self) -> int:
        return len(self.states)

    def adjacent(self, state: int) -> tuple[int, ...]:
        """States reachable from `state` in one move, ascending."""
        return self._adjacent[state]  # type: ignore[attr-defined]

    def allows(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.transitions


@dataclass(frozen=True)
class ValuedConstraint:
    """A scope of distinct variables plus a dense integer value tensor.

    The tensor is flattened row-major in scope order: the first scope variable
    has the largest stride, the last scope variable has stride 1.
    """

    scope: tuple[int, ...]
    values: tuple[int, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "scope", tuple(int(v) for v in self.scope))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @property
    def arity(self) -> int:
        return len(self.scope)

    def max_abs(self) -> int:
        return max((abs(v) for v in self.values), default=0)


def check_assignment_against(domains: Sequence[DomainSpec], x: Sequence[int]) -> None:
    """Raise InvalidAssignmentError unless x is a valid assignment."""
    if len(x) != len(domains):
        raise InvalidAssignmentError(
            f"assignment has length {len(x)}, expected {len(domains)}"
        )
    for k, (s, dom) in enumerate(zip(x, domains)):
        if not (0 <= s < dom.size):
            raise InvalidAssignmentError(
                f"state {s} out of range for variable {k} ({dom.size} states)"
            )


def neighbors_of(domains: Sequence[DomainSpec], x: Sequence[int]) -> list[tuple[int, int]]:
    """All permitted single-variable moves (var, new_state), in ascending order."""
    out: list[tuple[int, int]] = []
    for k, dom in enumerate(domains):
        for t in dom.adjacent(x[k]):
            out.append((k, t))
    return out


@dataclass(frozen=True)
class VcspInstance:
    """Immutable VCSP instance: domains, constraints, and family metadata.

    Construction computes evaluation caches but performs only shallow checks;
    `validate()` reports structural defects without raising, and builders are
    expected to reject defective instances at build time.
    """

    domains: tuple[DomainSpec, ...]
    constraints: tuple[ValuedConstraint, ...]
    family: str = ""
    base_n: int = 0
    var_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        domains = tuple(self.domains)
        constraints = tuple(self.constraints)
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "constraints", constraints)
        names = tuple(self.var_names) or tuple(f"x{i + 1}" for i in range(len(domains)))
        object.__setattr__(self, "var_names", names)

        sizes = tuple(d.size for d in domains)
        object.__setattr__(self, "_sizes", sizes)

        strides: list[tuple[int, ...]] = []
        for c in constraints:
            st = [1] * len(c.scope)
            for i in range(len(c.scope) - 2, -1, -1):
                var = c.scope[i + 1]
                size = sizes[var] if 0 <= var < len(sizes) else 1
                st[i] = st[i + 1] * size
            strides.append(tuple(st))
        object.__setattr__(self, "_strides", tuple(strides))

        per_var: list[list[int]] = [[] for _ in range(len(domains))]
        nbrs: list[set[int]] = [set() for _ in range(len(domains))]
        for ci, c in enumerate(constraints):
            in_range = [v for v in c.scope if 0 <= v < len(domains)]
            for v in in_range:
                per_var[v].append(ci)
                for w in in_range:
                    if w != v:
                        nbrs[v].add(w)
        object.__setattr__(self, "_var_constraints", tuple(tuple(v) for v in per_var))
        object.__setattr__(self, "_var_neighbors", tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def n_vars(self) -> int:
        return len(self.domains)

    @property
    def sizes(self) -> tuple[int, ...]:
        return self._sizes  # type: ignore[attr-defined]

    @property
    def max_arity(self) -> int:
        return max((c.arity for c in self.constraints), default=0)

    def worst_case_bound(self) -> int:
        """Sum over constraints of the largest absolute tensor entry."""
        return sum(c.max_abs() for c in self.constraints)

    def var_neighbors(self, k: int) -> tuple[int, ...]:
        """Variables sharing at least one constraint with k."""
        return self._var_neighbors[k]  # type: ignore[attr-defined]

    # -- validation ---------------------------------------------------------

    def validate(self) -> list[str]:
        """Return a list of structural defects; empty means the instance is ok."""
        defects: list[str] = []
        n = self.n_vars
        for ci, c in enumerate(self.constraints):
            who = c.label or f"constraint #{ci}"
            if len(c.scope) == 0:
                defects.append(f"{who}: empty scope")
                continue
            if len(set(c.scope)) != len(c.scope):
                defects.append(f"{who}: scope {c.scope} repeats a variable")
            bad = [v for v in c.scope if not (0 <= v < n)]
            if bad:
                defects.append(f"{who}: scope refers to unknown variable(s) {bad}")
                continue
            expected = 1
            for v in c.scope:
                expected *= self.sizes[v]
            if len(c.values) != expected:
                defects.append(
                    f"{who}: tensor has {len(c.values)} entries, expected {expected}"
                )
        limit = int_range_limit()
        if limit is not None and self.worst_case_bound() > limit:
            defects.append(
                f"worst-case fitness magnitude {self.worst_case_bound()} exceeds "
                f"the declared integer range ({limit})"
            )
        return defects

    def check_assignment(self, x: Sequence[int]) -> None:
        check_assignment_against(self.domains, x)

    # -- evaluation ---------------------------------------------------------

    def fitness(self, x: Sequence[int]) -> int:
        """Sum of all constraint values selected by x."""
        self.check_assignment(x)
        total = 0
        for c, strides in zip(self.constraints, self._strides):  # type: ignore[attr-defined]
            idx = 0
            for var, st in zip(c.scope, strides):
                idx += x[var] * st
            total += c.values[idx]
        return total

    def restricted_fitness(self, k: int, x: Sequence[int]) -> int:
        """Sum over exactly the constraints whose scope contains variable k."""
        self.check_assignment(x)
        if not (0 <= k < self.n_vars):
            raise InvalidAssignmentError(f"variable {k} out of range")
        total = 0
        for ci in self._var_constraints[k]:  # type: ignore[attr-defined]
            c = self.constraints[ci]
            strides = self._strides[ci]  # type: ignore[attr-defined]
            idx = 0
            for var, st in zip(c.scope, strides):
                idx += x[var] * st
            total += c.values[idx]
        return total

    def _delta(self, x: Sequence[int], k: int, s: int, v: int) -> int:
        """Fitness change of moving variable k from state s to v.  No checks."""
        if v == s:
            return 0
        d = 0
        for ci in self._var_constraints[k]:  # type: ignore[attr-defined]
            c = self.constraints[ci]
            strides = self._strides[ci]  # type: ignore[attr-defined]
            base = 0
            stk = 0
            for var, st in zip(c.scope, strides):
                if var == k:
                    stk = st
                else:
                    base += x[var] * st
            d += c.values[base + v * stk] - c.values[base + s * stk]
        return d

    def delta_fitness(self, x: Sequence[int], k: int, v: int) -> int:
        """fitness(x with x_k := v) - fitness(x), touching only constraints on k.

        The move must be permitted by the transition relation (or v == x_k,
        which yields 0).
        """
        self.check_assignment(x)
        if not (0 <= k < self.n_vars):
            raise InvalidAssignmentError(f"variable {k} out of range")
        s = x[k]
        if v == s:
            return 0
        if not (0 <= v < self.sizes[k]):
            raise InvalidAssignmentError(f"state {v} out of range for variable {k}")
        if not self.domains[k].allows(s, v):
            raise TransitionError(f"move {s}->{v} at variable {k} is not permitted")
        return self._delta(x, k, s, v)

    def neighbors(self, x: Sequence[int]) -> list[tuple[int, int]]:
        """Permitted single-variable moves (k, v), ascending by (k, v)."""
        self.check_assignment(x)
        return neighbors_of(self.domains, x)

    def is_local_solution(self, x: Sequence[int]) -> bool:
        """True iff no permitted move strictly increases fitness."""
        self.check_assignment(x)
        for k, dom in enumerate(self.domains):
            s = x[k]
            for t in dom.adjacent(s):
                if self._delta(x, k, s, t) > 0:
                    return False
        return True

    def hypergraph(self) -> list[tuple[frozenset[int], str]]:
        """One labeled hyperedge (scope set) per constraint, duplicates kept."""
        return [(frozenset(c.scope), c.label) for c in self.constraints]

    def all_assignments(self) -> Iterator[tuple[int, ...]]:
        """Iterate the full assignment space in row-major order."""
        import itertools

        return itertools.product(*(range(s) for s in self.sizes))


# -- path decompositions ----------------------------------------------------


@dataclass(frozen=True)
class PathDecomposition:
    """An ordered list of variable bags."""

    bags: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))


@dataclass(frozen=True)
class DecompositionReport:
    """Outcome of checking a path decomposition against an instance.

    `width` is max bag size minus one when the decomposition is valid;
    otherwise `violation` describes the first problem found.
    """

    width: int | None
    violation: str | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def check_path_decomposition(
    instance: VcspInstance, decomposition: PathDecomposition
) -> DecompositionReport:
    """Check bag coverage of every scope and interval contiguity per variable."""
    n = instance.n_vars
    bags = decomposition.bags
    var_bags: dict[int, list[int]] = {}
    for bi, bag in enumerate(bags):
        for v in bag:
            if not (0 <= v < n):
                return DecompositionReport(None, f"bag {bi} contains unknown variable {v}")
            var_bags.setdefault(v, []).append(bi)

    bag_sets = {v: set(bs) for v, bs in var_bags.items()}
    for c in instance.constraints:
        covering: set[int] | None = None
        for v in c.scope:
            s = bag_sets.get(v)
            if not s:
                covering = None
                break
            covering = set(s) if covering is None else covering & s
            if not covering:
                break
        if not covering:
            who = c.label or f"scope {sorted(c.scope)}"
            return DecompositionReport(
                None, f"scope of {who} ({sorted(c.scope)}) is not inside any bag"
            )

    for v, bs in var_bags.items():
        lo, hi = min(bs), max(bs)
        if hi - lo + 1 != len(set(bs)):
            return DecompositionReport(
                None,
                f"variable {v} appears in bags {sorted(set(bs))}, "
                "which is not a contiguous interval",
            )

    width = max((len(b) for b in bags), default=0) - 1
    return DecompositionReport(width)


# -- JSON serialization -----------------------------------------------------

_FORMAT_VERSION = 1


def instance_to_json(instance: VcspInstance) -> dict:
    """Instance as a JSON-ready dict (0-based variable ids)."""
    return {
        "version": _FORMAT_VERSION,
        "meta": {"family": instance.family, "n": instance.base_n},
        "variables": [
            {
                "name": instance.var_names[i],
                "states": list(d.states),
                "transitions": sorted([list(p) for p in d.transitions]),
            }
            for i, d in enumerate(instance.domains)
        ],
        "constraints": [
            {"label": c.label, "scope": list(c.scope), "values": list(c.values)}
            for c in instance.constraints
        ],
    }


def instance_from_json(data: dict) -> VcspInstance:
    if data.get("version") != _FORMAT_VERSION:
        raise BuildError(f"unsupported instance format version {data.get('version')!r}")
    domains = []
    names = []
    for v in data["variables"]:
        names.append(v.get("name", ""))
        domains.append(
            DomainSpec(
                tuple(v["states"]),
                frozenset(tuple(p) for p in v.get("transitions", [])),
            )
        )
    constraints = [
        ValuedConstraint(tuple(c["scope"]), tuple(c["values"]), c.get("label", ""))
        for c in data["constraints"]
    ]
    meta = data.get("meta", {})
    inst = VcspInstance(
        tuple(domains),
        tuple(constraints),
        family=meta.get("family", ""),
        base_n=int(meta.get("n", 0)),
        var_names=tuple(names),
    )
    defects = inst.validate()
    if defects:
        raise BuildError("instance file is defective: " + "; ".join(defects))
    return inst


def save_instance(instance: VcspInstance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_json(instance)), encoding="utf-8")


def load_instance(path: str | Path) -> VcspInstance:
    return instance_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def decomposition_to_json(d: PathDecomposition) -> dict:
    return {"bags": [sorted(b) for b in d.bags]}


def decomposition_from_json(data: dict) -> PathDecomposition:
    return PathDecomposition(tuple(frozenset(b) for b in data["bags"]))
