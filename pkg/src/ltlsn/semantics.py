"""Direct path semantics: evaluate formulas on the unique trace.

The path is stationary from the fixed point on, so positions clamp there:
the frame at any i beyond the fixed point is the fixed-point frame, and an
until search never needs to look past it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownAgentError
from .formula import And, Beh, Formula, MajorityGE, Nbr, Next, Not, Top, Until, iter_nodes
from .model import Model, Trace, threshold_met


@dataclass(frozen=True)
class SatSet:
    """Where a formula holds on a trace, finitely described.

    ``prefix_positions`` are the satisfying positions up to the fixed point;
    ``holds_at_tail`` says whether all later positions satisfy the formula
    too (the path repeats there, so they agree with the fixed point).
    """

    prefix_positions: frozenset[int]
    holds_at_tail: bool

    def __str__(self) -> str:
        inner = ",".join(str(i) for i in sorted(self.prefix_positions))
        tail = " (+tail)" if self.holds_at_tail else ""
        return f"{{{inner}}}{tail}"


def require_known_agents(model: Model, f: Formula) -> None:
    """Raise :class:`UnknownAgentError` if ``f`` mentions undeclared agents."""
    unknown: set[str] = set()
    for node in iter_nodes(f):
        if isinstance(node, (Beh, MajorityGE)):
            if node.a not in model.agents:
                unknown.add(node.a)
        elif isinstance(node, Nbr):
            for name in (node.a, node.b):
                if name not in model.agents:
                    unknown.add(name)
    if unknown:
        raise UnknownAgentError(
            "formula mentions undeclared agents: " + ", ".join(sorted(unknown))
        )


def _eval(model: Model, trace: Trace, i: int, f: Formula) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Beh):
        return f.a in trace.frames[i]
    if isinstance(f, Nbr):
        return f.b in model.network[f.a]
    if isinstance(f, MajorityGE):
        nbrs = model.network[f.a]
        return threshold_met(len(nbrs & trace.frames[i]), len(nbrs), model.theta, model.strict)
    if isinstance(f, Not):
        return not _eval(model, trace, i, f.child)
    if isinstance(f, And):
        return _eval(model, trace, i, f.left) and _eval(model, trace, i, f.right)
    fp = trace.fixed_point_index
    if isinstance(f, Next):
        return _eval(model, trace, min(i + 1, fp), f.child)
    if isinstance(f, Until):
        # The frames from fp on are all equal, so a witness past fp would
        # already be a witness at fp.
        for k in range(i, fp + 1):
            if _eval(model, trace, k, f.right):
                return True
            if not _eval(model, trace, k, f.left):
                return False
        return False
    raise TypeError(f"not a formula node: {f!r}")


def eval_at(model: Model, trace: Trace, i: int, f: Formula) -> bool:
    """Truth of ``f`` at path position ``i`` (any natural; clamps to the tail)."""
    if i < 0:
        raise ValueError("path positions are natural numbers")
    require_known_agents(model, f)
    return _eval(model, trace, min(i, trace.fixed_point_index), f)


def satisfaction_set(model: Model, trace: Trace, f: Formula) -> SatSet:
    """Satisfying positions of ``f``: prefix set plus the stationary-tail flag."""
    require_known_agents(model, f)
    fp = trace.fixed_point_index
    prefix = frozenset(i for i in range(fp + 1) if _eval(model, trace, i, f))
    return SatSet(prefix, fp in prefix)
