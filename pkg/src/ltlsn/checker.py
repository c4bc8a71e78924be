"""Labeling model checker: one truth row per subformula over the trace.

Rows are filled children-first.  Atoms come straight from the adoption
positions, boolean connectives are pointwise, next shifts against the
stationary tail (the last position is its own successor), and until needs a
single backward pass because the last position repeats forever.  The work is
therefore |subformulas| x (fixed point + 1) row fills, counted in ``visits``.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from . import _kernel
from .formula import And, Beh, Formula, MajorityGE, Nbr, Next, Not, Top, Until, subformulas
from .model import Model, Trace, adjacency_csr
from .semantics import SatSet, require_known_agents


@dataclass(frozen=True)
class LabelMap:
    """Truth rows, one per labeled formula, across positions 0..f."""

    rows: dict[Formula, bytes]
    positions: int
    visits: int

    def at(self, i: int) -> frozenset[Formula]:
        """The labeled formulas that hold at position ``i``."""
        if not 0 <= i < self.positions:
            raise ValueError(f"position {i} outside 0..{self.positions - 1}")
        return frozenset(f for f, row in self.rows.items() if row[i])

    def holds(self, f: Formula, i: int) -> bool:
        """Truth of a labeled formula at any position (clamps to the tail)."""
        row = self.rows.get(f)
        if row is None:
            raise ValueError("formula was not labeled; pass it through check first")
        if i < 0:
            raise ValueError("path positions are natural numbers")
        return bool(row[min(i, self.positions - 1)])


def _join_array(order: list[str], trace: Trace) -> array:
    index = {a: i for i, a in enumerate(order)}
    join = array("i", [-1]) * len(order)
    prev: frozenset[str] = frozenset()
    for i, frame in enumerate(trace.frames):
        for a in frame - prev:
            join[index[a]] = i
        prev = frame
    return join


def _encode(subs: list[Formula], model: Model, order: list[str]) -> list[tuple[int, int, int]]:
    agent_index = {a: i for i, a in enumerate(order)}
    row_of = {sub: k for k, sub in enumerate(subs)}
    ops = []
    for sub in subs:
        if isinstance(sub, Top):
            ops.append((_kernel.OP_TOP, 0, 0))
        elif isinstance(sub, Nbr):
            truth = 1 if sub.b in model.network[sub.a] else 0
            ops.append((_kernel.OP_CONST, truth, 0))
        elif isinstance(sub, Beh):
            ops.append((_kernel.OP_BEH, agent_index[sub.a], 0))
        elif isinstance(sub, MajorityGE):
            ops.append((_kernel.OP_MAJ, agent_index[sub.a], 0))
        elif isinstance(sub, Not):
            ops.append((_kernel.OP_NOT, row_of[sub.child], 0))
        elif isinstance(sub, Next):
            ops.append((_kernel.OP_NEXT, row_of[sub.child], 0))
        elif isinstance(sub, And):
            ops.append((_kernel.OP_AND, row_of[sub.left], row_of[sub.right]))
        else:  # Until
            ops.append((_kernel.OP_UNTIL, row_of[sub.left], row_of[sub.right]))
    return ops


def check(model: Model, trace: Trace, f: Formula) -> LabelMap:
    """Label every subformula of ``f`` at every position of ``trace``.

    Only the atoms ``f`` mentions get rows, keeping the work linear in the
    formula; :func:`init_labels` is the full-network initialization.
    """
    require_known_agents(model, f)
    order = sorted(model.agents)
    subs = subformulas(f)
    ops = _encode(subs, model, order)
    indptr, indices = adjacency_csr(model, order)
    rows, visits = _kernel.label_rows(
        ops, trace.fixed_point_index + 1, _join_array(order, trace),
        indptr, indices, model.theta.numerator, model.theta.denominator,
        model.strict,
    )
    return LabelMap({sub: bytes(rows[k]) for k, sub in enumerate(subs)},
                    trace.fixed_point_index + 1, visits)


def init_labels(model: Model, trace: Trace, f: Formula) -> LabelMap:
    """The initialization step alone: atom rows for the whole network.

    Every agent's behavior atom gets a row, and so does every true
    neighborhood atom, regardless of what ``f`` mentions; at each position
    the map then holds exactly the true atoms.
    """
    require_known_agents(model, f)
    order = sorted(model.agents)
    join = _join_array(order, trace)
    n_pos = trace.fixed_point_index + 1
    rows: dict[Formula, bytes] = {}
    for k, a in enumerate(order):
        j = join[k]
        rows[Beh(a)] = bytes(
            1 if (j != -1 and j <= i) else 0 for i in range(n_pos)
        )
    ones = bytes([1]) * n_pos
    for a in order:
        for b in sorted(model.network[a]):
            rows[Nbr(a, b)] = ones
    return LabelMap(rows, n_pos, len(rows) * n_pos)


def s_set_from_labels(lm: LabelMap, f: Formula) -> SatSet:
    """Read a formula's satisfaction set out of a label map."""
    row = lm.rows.get(f)
    if row is None:
        raise ValueError("formula was not labeled; pass it through check first")
    prefix = frozenset(i for i in range(lm.positions) if row[i])
    return SatSet(prefix, bool(row[lm.positions - 1]))
