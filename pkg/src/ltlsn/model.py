"""Threshold-diffusion network models: parsing, validation, and evolution.

A model is a finite agent set, a neighborhood network, a uniform rational
adoption threshold, and an initial behaving set.  The one-step update adds
every agent whose behaving-neighbor fraction meets the threshold; adoption is
monotone, so iterating the update reaches a fixed point in fewer steps than
there are agents, and the unique infinite path is finitely representable by
its frames up to that fixed point.
"""

from __future__ import annotations

import re
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from . import _kernel
from .errors import ModelConstraintError, ModelSyntaxError


class Network:
    """Immutable map from each agent to its set of neighbors.

    Construction does not enforce the network axioms (no self-loops,
    symmetry, no isolated agents); :func:`validate` reports violations so
    that deliberately broken networks can be inspected.
    """

    __slots__ = ("_nbrs",)

    def __init__(self, neighbors: Mapping[str, Iterable[str]]):
        object.__setattr__(self, "_nbrs", {a: frozenset(bs) for a, bs in neighbors.items()})

    def __setattr__(self, name, value):
        raise AttributeError("Network is immutable")

    def __getitem__(self, agent: str) -> frozenset[str]:
        return self._nbrs[agent]

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._nbrs))

    def __len__(self) -> int:
        return len(self._nbrs)

    def __contains__(self, agent: str) -> bool:
        return agent in self._nbrs

    def __eq__(self, other: object):
        if not isinstance(other, Network):
            return NotImplemented
        return self._nbrs == other._nbrs

    def __hash__(self) -> int:
        return hash(frozenset(self._nbrs.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{a!r}: {sorted(bs)}" for a, bs in sorted(self._nbrs.items()))
        return f"Network({{{inner}}})"


def threshold_met(count: int, degree: int, theta: Fraction, strict: bool = False) -> bool:
    """Exact test of count/degree against the threshold.

    Cross-multiplied, so only integer arithmetic happens.  An empty
    neighborhood never meets the threshold: the fraction is undefined.
    """
    if degree <= 0:
        return False
    lhs = count * theta.denominator
    rhs = theta.numerator * degree
    return lhs > rhs if strict else lhs >= rhs


@dataclass(frozen=True)
class Model:
    """Agents, network, adoption threshold, and initial behaving set.

    ``strict`` switches the adoption comparison from "fraction meets the
    threshold" (the default, inclusive) to "fraction strictly exceeds it";
    the flag travels with the model so every engine applies the same test.
    """

    agents: frozenset[str]
    network: Network
    theta: Fraction
    initial: frozenset[str]
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "agents", frozenset(self.agents))
        object.__setattr__(self, "initial", frozenset(self.initial))
        if not isinstance(self.network, Network):
            object.__setattr__(self, "network", Network(self.network))
        if isinstance(self.theta, float):
            raise TypeError("theta must be exact; pass a Fraction, int, or string")
        object.__setattr__(self, "theta", Fraction(self.theta))
        if len(self.agents) < 2:
            raise ModelConstraintError("a model needs at least two agents")
        if not 0 <= self.theta <= 1:
            raise ModelConstraintError(f"theta {self.theta} is outside [0, 1]")
        stray = self.initial - self.agents
        if stray:
            raise ModelConstraintError(
                "initial agents not declared: " + ", ".join(sorted(stray))
            )
        if frozenset(self.network) != self.agents:
            raise ModelConstraintError("network must map exactly the declared agents")
        for a in sorted(self.agents):
            stray = self.network[a] - self.agents
            if stray:
                raise ModelConstraintError(
                    f"neighbors of {a} not declared: " + ", ".join(sorted(stray))
                )


@dataclass(frozen=True)
class Violation:
    """One failed network-axiom check; ``agents`` are the witnesses."""

    axiom: str  # "irreflexivity" | "symmetry" | "seriality"
    agents: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.axiom}({','.join(self.agents)})"


@dataclass(frozen=True)
class Trace:
    """The unique path of a model, represented by its frames up to the
    fixed point; every later position repeats ``frames[-1]``."""

    frames: tuple[frozenset[str], ...]
    fixed_point_index: int

    def at(self, i: int) -> frozenset[str]:
        """Behavior set at any path position, clamped into the tail."""
        if i < 0:
            raise ValueError("path positions are natural numbers")
        return self.frames[min(i, self.fixed_point_index)]


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _parse_theta(text: str, lineno: int) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ModelSyntaxError(f"bad threshold {text!r}", lineno) from None
    if not 0 <= value <= 1:
        raise ModelConstraintError(f"theta {text} is outside [0, 1]", lineno)
    return value


def parse_model(text: str) -> Model:
    """Parse the line-oriented model file format.

    ::

        # Lines starting with # (or blank) are ignored; # also starts
        # an end-of-line comment.
        agents a b c      # exactly one such line, at least one name
        theta 1/3         # exactly one: fraction p/q, decimal, or integer
        edge a b          # any number; undirected, both agents declared
        edge b c
        initial a         # exactly one; may list no names at all
        strict            # optional: adopt only strictly above theta

    Agent names are identifiers (letters, digits, underscores, not starting
    with a digit) so formulas can mention them.  Unknown keywords, missing or
    duplicated sections, and malformed values raise
    :class:`~ltlsn.errors.ModelSyntaxError`; structural problems (threshold
    out of range, self-loops, undeclared agents, fewer than two agents) raise
    :class:`~ltlsn.errors.ModelConstraintError`.  Isolated agents parse fine:
    :func:`validate` reports them as seriality violations.
    """
    agents: list[str] | None = None
    theta: Fraction | None = None
    initial: list[str] | None = None
    strict = False
    edges: list[tuple[str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword = parts[0]
        if keyword == "agents":
            if agents is not None:
                raise ModelSyntaxError("duplicate 'agents' line", lineno)
            if len(parts) < 2:
                raise ModelSyntaxError("'agents' needs at least one name", lineno)
            agents = parts[1:]
            for name in agents:
                if not _NAME_RE.match(name):
                    raise ModelSyntaxError(f"bad agent name {name!r}", lineno)
            if len(set(agents)) != len(agents):
                dupes = sorted({n for n in agents if agents.count(n) > 1})
                raise ModelSyntaxError(
                    "duplicate agent names: " + ", ".join(dupes), lineno
                )
        elif keyword == "theta":
            if theta is not None:
                raise ModelSyntaxError("duplicate 'theta' line", lineno)
            if len(parts) != 2:
                raise ModelSyntaxError("'theta' needs exactly one value", lineno)
            theta = _parse_theta(parts[1], lineno)
        elif keyword == "edge":
            if len(parts) != 3:
                raise ModelSyntaxError("'edge' needs exactly two agents", lineno)
            edges.append((parts[1], parts[2], lineno))
        elif keyword == "initial":
            if initial is not None:
                raise ModelSyntaxError("duplicate 'initial' line", lineno)
            initial = parts[1:]
        elif keyword == "strict":
            if len(parts) != 1:
                raise ModelSyntaxError("'strict' takes no arguments", lineno)
            strict = True
        else:
            raise ModelSyntaxError(f"unknown keyword {keyword!r}", lineno)

    if agents is None:
        raise ModelSyntaxError("missing 'agents' line")
    if theta is None:
        raise ModelSyntaxError("missing 'theta' line")
    if initial is None:
        raise ModelSyntaxError("missing 'initial' line")

    declared = set(agents)
    nbrs: dict[str, set[str]] = {a: set() for a in agents}
    for a, b, lineno in edges:
        for name in (a, b):
            if name not in declared:
                raise ModelConstraintError(f"edge mentions undeclared agent {name!r}", lineno)
        if a == b:
            raise ModelConstraintError(f"self-loop edge on {a!r}", lineno)
        nbrs[a].add(b)
        nbrs[b].add(a)
    for name in initial:
        if name not in declared:
            raise ModelConstraintError(f"initial mentions undeclared agent {name!r}")

    return Model(frozenset(agents), Network(nbrs), theta, frozenset(initial), strict)


def validate(model: Model) -> list[Violation]:
    """Report network-axiom violations: self-loops, asymmetric edges,
    isolated agents.  Violations are grouped by axiom, lexicographic
    within each group; an empty list means the model is clean."""
    order = sorted(model.agents)
    out: list[Violation] = []
    for a in order:
        if a in model.network[a]:
            out.append(Violation("irreflexivity", (a,)))
    seen: set[tuple[str, str]] = set()
    for a in order:
        for b in sorted(model.network[a]):
            if a not in model.network[b]:
                pair = (min(a, b), max(a, b))
                if pair not in seen:
                    seen.add(pair)
                    out.append(Violation("symmetry", pair))
    for a in order:
        if not model.network[a]:
            out.append(Violation("seriality", (a,)))
    return out


def adopters(model: Model, b: Iterable[str]) -> frozenset[str]:
    """Agents whose behaving-neighbor fraction meets the threshold at ``b``.

    The result may overlap ``b``; agents with empty neighborhoods never
    qualify.
    """
    bset = frozenset(b)
    out = []
    for a in model.agents:
        nbrs = model.network[a]
        if threshold_met(len(nbrs & bset), len(nbrs), model.theta, model.strict):
            out.append(a)
    return frozenset(out)


def step(model: Model, b: Iterable[str]) -> frozenset[str]:
    """One synchronous update: ``b`` plus its adopters (monotone)."""
    return frozenset(b) | adopters(model, b)


def adjacency_csr(model: Model, order: list[str] | None = None) -> tuple[array, array]:
    """Compressed adjacency over ``order`` (default: lexicographic agents).

    Returns (indptr, indices) arrays as consumed by the kernels.
    """
    if order is None:
        order = sorted(model.agents)
    index = {a: i for i, a in enumerate(order)}
    indptr = array("i", [0])
    indices = array("i")
    for a in order:
        for b in sorted(model.network[a]):
            indices.append(index[b])
        indptr.append(len(indices))
    return indptr, indices


def trace(model: Model) -> Trace:
    """Iterate the update from the initial set to its fixed point.

    Requires a model that validates clean.  The fixed point always lands
    within the agent count (each round before it adds at least one agent);
    the final guard is unreachable and exists as an internal sanity check.
    """
    problems = validate(model)
    if problems:
        raise ModelConstraintError(
            "network axioms violated: " + ", ".join(str(v) for v in problems)
        )
    order = sorted(model.agents)
    indptr, indices = adjacency_csr(model, order)
    initial = bytearray(len(order))
    for i, a in enumerate(order):
        if a in model.initial:
            initial[i] = 1
    join, fixed = _kernel.diffusion(
        indptr, indices, model.theta.numerator, model.theta.denominator,
        model.strict, initial,
    )
    if fixed >= len(order):
        raise RuntimeError("no fixed point within the agent count")
    by_round: list[list[str]] = [[] for _ in range(fixed + 1)]
    for i, a in enumerate(order):
        if join[i] != -1:
            by_round[join[i]].append(a)
    frames = []
    current: set[str] = set()
    for members in by_round:
        current.update(members)
        frames.append(frozenset(current))
    return Trace(tuple(frames), fixed)
