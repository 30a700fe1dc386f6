from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from gradedkit.core.errors import SizeBoundError

Assignment = Dict[Hashable, Any]


@dataclass
class Variable:
    name: Hashable
    domain: Callable[[Assignment], Iterable[Any]]


@dataclass
class Constraint:
    name: str
    variables: Tuple[Hashable, ...]
    check: Callable[[Assignment], bool]


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0
    pruned_by: Dict[str, int] = field(default_factory=dict)


def solve(
    variables: Sequence[Variable],
    constraints: Sequence[Constraint] = (),
    limit: Optional[int] = None,
    max_nodes: Optional[int] = None,
    stats: Optional[SearchStats] = None,
) -> Iterator[Assignment]:
    """
    Yield every assignment satisfying all constraints, in domain order.
    A constraint is checked as soon as the last of its variables is assigned.
    """
    order = {v.name: i for i, v in enumerate(variables)}
    by_level: List[List[Constraint]] = [[] for _ in variables]
    for c in constraints:
        missing = [n for n in c.variables if n not in order]
        if missing:
            raise KeyError(f"constraint {c.name} mentions unknown variables {missing}")
        level = max((order[n] for n in c.variables), default=0)
        by_level[level].append(c)

    st = stats if stats is not None else SearchStats()
    assignment: Assignment = {}

    def rec(i: int) -> Iterator[Assignment]:
        if i == len(variables):
            st.solutions += 1
            yield dict(assignment)
            return
        var = variables[i]
        for value in var.domain(assignment):
            st.nodes += 1
            if max_nodes is not None and st.nodes > max_nodes:
                raise SizeBoundError(f"search exceeded {max_nodes} nodes")
            assignment[var.name] = value
            bad = None
            for c in by_level[i]:
                if not c.check(assignment):
                    bad = c.name
                    break
            if bad is None:
                yield from rec(i + 1)
            else:
                st.pruned_by[bad] = st.pruned_by.get(bad, 0) + 1
            del assignment[var.name]

    count = 0
    for sol in rec(0):
        yield sol
        count += 1
        if limit is not None and count >= limit:
            return


def solve_all(variables, constraints=(), **kw) -> List[Assignment]:
    return list(solve(variables, constraints, **kw))
