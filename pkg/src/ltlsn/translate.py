"""Reduction to propositional form, and the propositional evaluator.

This is the third evaluation engine.  Two stages:

1. :func:`eliminate_until` unrolls every until into a bounded disjunction of
   step formulas; the bound is the agent count, sound because the path is
   stationary within that many steps.
2. :func:`to_propositional` pushes every next operator down to the atoms and
   eliminates it there: next of a neighborhood atom is the atom (the network
   is static), next of a behavior atom is "already behaving, or enough
   neighbors behave now" (the majority test), next of truth is truth.

The majority test is kept as an atomic :class:`MajorityGE` node wherever
possible; its explicit propositional expansion over all (neighborhood,
behaving-subset) pairs has about 3^n terms and is built only on demand,
behind a size guard.  The one place the expansion is unavoidable is a next
operator meeting a majority atom (from nested nexts over behavior atoms):
the atom is then unfolded one frame, with full subterm sharing.

A cost measure decreases under each elimination clause; the translator
asserts that on every rewrite it performs, which bounds the rewrite count
and makes termination checkable at runtime.  Two caveats, both inherent to
the measure and documented in the assertions' conditions: pushing next over
a negation or conjunction is asserted with the pushed operator costed by its
generic doubling clause (the special behavior-atom leaf value would make the
measure grow on formulas as small as ``X !B(a)``, while the rewrite itself
clearly shrinks the remaining work), and majority unfolds are abbreviation
expansions rather than elimination clauses, so they carry no decrease claim.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable

from .errors import MajorityExpansionError, TranslationError
from .formula import (
    TOP,
    And,
    Beh,
    Formula,
    MajorityGE,
    Nbr,
    Next,
    Not,
    Top,
    Until,
    or_,
)
from .model import Model, Network, Trace, threshold_met
from .semantics import SatSet, require_known_agents

# Rule names as they appear in rewrite logs.
CLAUSE_TRUE = "X-true"
CLAUSE_NEIGHBOR = "X-neighbor"
CLAUSE_BEHAVIOR = "X-behavior"
CLAUSE_NOT = "X-over-not"
CLAUSE_AND = "X-over-and"
CLAUSE_NESTED = "X-over-X"
EVENT_UNFOLD = "majority-unfold"

RewriteLog = list  # of (rule, cost_before, cost_after)


def _subsets(names: tuple[str, ...]) -> list[tuple[str, ...]]:
    subs: list[tuple[str, ...]] = []
    for r in range(len(names) + 1):
        subs.extend(combinations(names, r))
    subs.sort()
    return subs


def _and_chain(items: list[Formula]) -> Formula:
    out = items[0]
    for item in items[1:]:
        out = And(out, item)
    return out


def _or_chain(items: list[Formula]) -> Formula:
    if not items:
        return Not(TOP)
    out = items[0]
    for item in items[1:]:
        out = or_(out, item)
    return out


def _majority_disjunction(
    names: list[str],
    theta: Fraction,
    strict: bool,
    pos_leaf: Callable[[str], Formula],
    neg_leaf: Callable[[str], Formula],
    beh_leaf: Callable[[str], Formula],
) -> Formula:
    """Disjunction over neighborhood guesses and behaving subsets.

    One disjunct per pair (N, G) with G ⊆ N ⊆ names, N nonempty, and
    |G|/|N| meeting the threshold: "the neighborhood is exactly N, and the
    agents of G behave".  Terms are ordered lexicographically by (N, G).
    """
    all_names = tuple(names)
    terms: list[Formula] = []
    for nn in _subsets(all_names):
        if not nn:
            continue
        nn_set = set(nn)
        absent = [b for b in all_names if b not in nn_set]
        for gg in _subsets(nn):
            if not threshold_met(len(gg), len(nn), theta, strict):
                continue
            conj: list[Formula] = [pos_leaf(b) for b in nn]
            conj += [neg_leaf(b) for b in absent]
            conj += [beh_leaf(b) for b in gg]
            terms.append(_and_chain(conj))
    return _or_chain(terms)


def majority_formula(
    agents, a: str, theta: Fraction, *, strict: bool = False, guard: int = 10
) -> Formula:
    """Explicit propositional form of the majority test for agent ``a``.

    True exactly when the behaving fraction of a's neighborhood meets the
    threshold.  The disjunction ranges over all (neighborhood, behaving
    subset) pairs, so it has Θ(3^n) terms; ``guard`` caps the agent count.
    """
    names = sorted(str(x) for x in agents)
    if len(names) > guard:
        raise MajorityExpansionError(
            f"majority expansion over {len(names)} agents exceeds the guard "
            f"({guard}); evaluate the majority atom directly instead"
        )
    return _majority_disjunction(
        names,
        theta,
        strict,
        lambda b: Nbr(a, b),
        lambda b: Not(Nbr(a, b)),
        Beh,
    )


def until_expansion(phi: Formula, psi: Formula, bound: int) -> Formula:
    """Unroll phi-until-psi into its first ``bound``+1 step formulas.

    Step 0 is psi; step i is "phi now, and step i-1 next".  The result is
    their disjunction, left-nested in ascending step order.  Sound whenever
    the trace reaches its fixed point within ``bound`` steps, which the
    agent count guarantees.
    """
    if bound < 0:
        raise ValueError("the expansion bound is a natural number")
    step = psi
    out = psi
    for _ in range(bound):
        step = And(phi, Next(step))
        out = or_(out, step)
    return out


def eliminate_until(f: Formula, bound: int) -> Formula:
    """Replace every until, children first, by its bounded expansion."""
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, (Top, Nbr, Beh, MajorityGE)):
            out = node
        elif isinstance(node, Not):
            out = Not(go(node.child))
        elif isinstance(node, Next):
            out = Next(go(node.child))
        elif isinstance(node, And):
            out = And(go(node.left), go(node.right))
        elif isinstance(node, Until):
            out = until_expansion(go(node.left), go(node.right), bound)
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[id(node)] = out
        return out

    return go(f)


def _cost_into(f: Formula, n: int, memo: dict[int, int], pins: list[Formula]) -> int:
    """Iterative cost walk with an id-keyed memo (callers pin the keys)."""
    nn2 = 2 * n * n
    stack = [f]
    while stack:
        node = stack[-1]
        nid = id(node)
        if nid in memo:
            stack.pop()
            continue
        if isinstance(node, (Top, Nbr, Beh)):
            memo[nid] = 1
            pins.append(node)
            stack.pop()
        elif isinstance(node, MajorityGE):
            memo[nid] = nn2
            pins.append(node)
            stack.pop()
        elif isinstance(node, Not):
            c = memo.get(id(node.child))
            if c is None:
                stack.append(node.child)
            else:
                memo[nid] = 1 + c
                pins.append(node)
                stack.pop()
        elif isinstance(node, And):
            cl = memo.get(id(node.left))
            cr = memo.get(id(node.right))
            if cl is None or cr is None:
                if cl is None:
                    stack.append(node.left)
                if cr is None:
                    stack.append(node.right)
            else:
                memo[nid] = 1 + (cl if cl >= cr else cr)
                pins.append(node)
                stack.pop()
        elif isinstance(node, Next):
            child = node.child
            if isinstance(child, Beh):
                memo[nid] = 4 + nn2
                pins.append(node)
                stack.pop()
            else:
                c = memo.get(id(child))
                if c is None:
                    stack.append(child)
                else:
                    memo[nid] = 2 * c
                    pins.append(node)
                    stack.pop()
        else:
            raise ValueError("the cost measure is defined on until-free formulas")
    return memo[id(f)]


def cost(f: Formula, n_agents: int) -> int:
    """The translation-termination measure.

    Atoms cost 1, except the majority atom at 2·n²; negation adds 1,
    conjunction adds 1 to the larger side; next doubles, except directly on
    a behavior atom where it costs 4 + 2·n².  Until has no defined cost
    (run :func:`eliminate_until` first).
    """
    return _cost_into(f, n_agents, {}, [])


class _Translator:
    """Pushes next operators down and out, one step at a time.

    All structure is shared: every memo is keyed by node identity, and every
    keyed node is pinned so a recycled id can never alias a stale entry.
    """

    def __init__(self, agents, theta, strict, guard, log):
        self.names = sorted(str(a) for a in agents)
        self.n = len(self.names)
        self.theta = theta
        self.strict = strict
        self.guard = guard
        self.log = log
        self._tr: dict[int, Formula] = {}
        self._adv: dict[int, Formula] = {}
        self._costs: dict[int, int] = {}
        self._safe: dict[int, bool] = {}
        self._pins: list[Formula] = []
        self._adv_beh: dict[str, Formula] = {}
        self._unfold: dict[str, Formula] = {}
        self._nbr_pos: dict[tuple[str, str], Formula] = {}
        self._nbr_neg: dict[tuple[str, str], Formula] = {}

    def cost_of(self, f: Formula) -> int:
        return _cost_into(f, self.n, self._costs, self._pins)

    def _note(self, rule: str, before: int, after: int, checked: bool = True) -> None:
        if checked and not before > after:
            raise TranslationError(
                f"cost must decrease under {rule}: {before} -> {after}"
            )
        if self.log is not None:
            self.log.append((rule, before, after))

    def _behavior_free(self, f: Formula) -> bool:
        """No behavior or majority atoms anywhere in ``f``.

        Pushing a next through such a formula never conjures a majority
        atom, so the cost measure honestly decreases along the whole way.
        """
        memo = self._safe
        stack = [f]
        while stack:
            node = stack[-1]
            nid = id(node)
            if nid in memo:
                stack.pop()
                continue
            if isinstance(node, (Beh, MajorityGE)):
                memo[nid] = False
                self._pins.append(node)
                stack.pop()
            elif isinstance(node, (Top, Nbr)):
                memo[nid] = True
                self._pins.append(node)
                stack.pop()
            elif isinstance(node, (Not, Next)):
                got = memo.get(id(node.child))
                if got is None:
                    stack.append(node.child)
                else:
                    memo[nid] = got
                    self._pins.append(node)
                    stack.pop()
            elif isinstance(node, And):
                gl = memo.get(id(node.left))
                gr = memo.get(id(node.right))
                if gl is None or gr is None:
                    if gl is None:
                        stack.append(node.left)
                    if gr is None:
                        stack.append(node.right)
                else:
                    memo[nid] = gl and gr
                    self._pins.append(node)
                    stack.pop()
            else:
                raise TranslationError("until node present; eliminate untils first")
        return memo[id(f)]

    # interned atoms, so repeated unfolds share leaves
    def _pos_nbr(self, a: str, b: str) -> Formula:
        key = (a, b)
        got = self._nbr_pos.get(key)
        if got is None:
            got = self._nbr_pos[key] = Nbr(a, b)
        return got

    def _neg_nbr(self, a: str, b: str) -> Formula:
        key = (a, b)
        got = self._nbr_neg.get(key)
        if got is None:
            got = self._nbr_neg[key] = Not(self._pos_nbr(a, b))
        return got

    def _advanced_beh(self, name: str) -> Formula:
        """One next step over a behavior atom: behaving already, or the
        neighborhood majority test passes now."""
        got = self._adv_beh.get(name)
        if got is None:
            got = self._adv_beh[name] = or_(Beh(name), MajorityGE(name))
        return got

    def _advanced_majority(self, name: str) -> Formula:
        """One next step over a majority atom.

        The neighborhood atoms are frame-independent, so the unfold replaces
        each behaving-subset leaf by its own advanced form.  This is the
        abbreviation's definition applied at the next frame, not an
        elimination clause; no cost decrease is claimed (the atomic majority
        cost is quadratic while the unfold is exponential, which is exactly
        why the atom exists).
        """
        got = self._unfold.get(name)
        if got is not None:
            return got
        if self.n > self.guard:
            raise MajorityExpansionError(
                f"a nested next forces a majority unfold over {self.n} agents, "
                f"beyond the guard ({self.guard})"
            )
        out = _majority_disjunction(
            self.names,
            self.theta,
            self.strict,
            lambda b: self._pos_nbr(name, b),
            lambda b: self._neg_nbr(name, b),
            self._advanced_beh,
        )
        self._note(EVENT_UNFOLD, 2 * self.n * self.n, self.cost_of(out), checked=False)
        self._unfold[name] = out
        return out

    def advance(self, root: Formula) -> Formula:
        """Rewrite next-of-``root`` into a propositional formula.

        ``root`` is already propositional; each clause application is
        asserted to decrease the cost measure as discussed in the module
        docstring.
        """
        memo = self._adv
        pins = self._pins
        stack = [root]
        while stack:
            node = stack[-1]
            nid = id(node)
            if nid in memo:
                stack.pop()
                continue
            if isinstance(node, Top):
                self._note(CLAUSE_TRUE, 2, 1)
                memo[nid] = TOP
                pins.append(node)
                stack.pop()
            elif isinstance(node, Nbr):
                self._note(CLAUSE_NEIGHBOR, 2, 1)
                memo[nid] = node
                pins.append(node)
                stack.pop()
            elif isinstance(node, Beh):
                out = self._advanced_beh(node.a)
                self._note(CLAUSE_BEHAVIOR, 4 + 2 * self.n * self.n, self.cost_of(out))
                memo[nid] = out
                pins.append(node)
                stack.pop()
            elif isinstance(node, MajorityGE):
                memo[nid] = self._advanced_majority(node.a)
                pins.append(node)
                stack.pop()
            elif isinstance(node, Not):
                got = memo.get(id(node.child))
                if got is None:
                    stack.append(node.child)
                else:
                    c = self.cost_of(node.child)
                    self._note(CLAUSE_NOT, 2 * (1 + c), 1 + 2 * c)
                    memo[nid] = Not(got)
                    pins.append(node)
                    stack.pop()
            elif isinstance(node, And):
                gl = memo.get(id(node.left))
                gr = memo.get(id(node.right))
                if gl is None or gr is None:
                    if gl is None:
                        stack.append(node.left)
                    if gr is None:
                        stack.append(node.right)
                else:
                    m = max(self.cost_of(node.left), self.cost_of(node.right))
                    self._note(CLAUSE_AND, 2 * (1 + m), 1 + 2 * m)
                    memo[nid] = And(gl, gr)
                    pins.append(node)
                    stack.pop()
            else:
                raise TranslationError("temporal node in propositional input")
        return memo[id(root)]

    def translate(self, root: Formula) -> Formula:
        memo = self._tr
        pins = self._pins
        stack = [root]
        while stack:
            node = stack[-1]
            nid = id(node)
            if nid in memo:
                stack.pop()
                continue
            if isinstance(node, (Top, Nbr, Beh, MajorityGE)):
                memo[nid] = node
                pins.append(node)
                stack.pop()
            elif isinstance(node, Not):
                got = memo.get(id(node.child))
                if got is None:
                    stack.append(node.child)
                else:
                    memo[nid] = Not(got)
                    pins.append(node)
                    stack.pop()
            elif isinstance(node, And):
                gl = memo.get(id(node.left))
                gr = memo.get(id(node.right))
                if gl is None or gr is None:
                    if gl is None:
                        stack.append(node.left)
                    if gr is None:
                        stack.append(node.right)
                else:
                    memo[nid] = And(gl, gr)
                    pins.append(node)
                    stack.pop()
            elif isinstance(node, Next):
                inner = memo.get(id(node.child))
                if inner is None:
                    stack.append(node.child)
                else:
                    out = self.advance(inner)
                    if isinstance(node.child, Next):
                        # Nested-next clause: rewrite X X phi into X of the
                        # translated inner next.  Its decrease claim is
                        # honest exactly when translating X phi conjures no
                        # majority atom: phi behavior-free, or phi a bare
                        # behavior atom (whose majority atom stays cheap).
                        phi = node.child.child
                        if isinstance(phi, Beh) or self._behavior_free(phi):
                            self._note(
                                CLAUSE_NESTED,
                                self.cost_of(node),
                                self.cost_of(Next(inner)),
                            )
                    memo[nid] = out
                    pins.append(node)
                    stack.pop()
            else:
                raise TranslationError(
                    "until node present; run eliminate_until before translating"
                )
        return memo[id(root)]


def to_propositional(
    f: Formula,
    agents,
    theta: Fraction,
    *,
    strict: bool = False,
    guard: int = 10,
    rewrite_log: RewriteLog | None = None,
) -> Formula:
    """Eliminate every next operator from an until-free formula.

    The result contains only truth, atoms, negation, conjunction, and
    majority atoms.  ``rewrite_log``, when given, collects one
    (rule, cost before, cost after) triple per rewrite performed.
    """
    translator = _Translator(agents, Fraction(theta), strict, guard, rewrite_log)
    return translator.translate(f)


def expand_majority(
    f: Formula, agents, theta: Fraction, *, strict: bool = False, guard: int = 10
) -> Formula:
    """Replace every majority atom by its explicit disjunction."""
    theta = Fraction(theta)
    by_name: dict[str, Formula] = {}
    memo: dict[int, Formula] = {}
    pins: list[Formula] = []

    def expansion(name: str) -> Formula:
        got = by_name.get(name)
        if got is None:
            got = by_name[name] = majority_formula(
                agents, name, theta, strict=strict, guard=guard
            )
        return got

    stack = [f]
    while stack:
        node = stack[-1]
        nid = id(node)
        if nid in memo:
            stack.pop()
            continue
        if isinstance(node, MajorityGE):
            memo[nid] = expansion(node.a)
            pins.append(node)
            stack.pop()
        elif isinstance(node, (Top, Nbr, Beh)):
            memo[nid] = node
            pins.append(node)
            stack.pop()
        elif isinstance(node, (Not, Next)):
            got = memo.get(id(node.child))
            if got is None:
                stack.append(node.child)
            else:
                memo[nid] = Not(got) if isinstance(node, Not) else Next(got)
                pins.append(node)
                stack.pop()
        elif isinstance(node, And):
            gl = memo.get(id(node.left))
            gr = memo.get(id(node.right))
            if gl is None or gr is None:
                if gl is None:
                    stack.append(node.left)
                if gr is None:
                    stack.append(node.right)
            else:
                memo[nid] = And(gl, gr)
                pins.append(node)
                stack.pop()
        elif isinstance(node, Until):
            gl = memo.get(id(node.left))
            gr = memo.get(id(node.right))
            if gl is None or gr is None:
                if gl is None:
                    stack.append(node.left)
                if gr is None:
                    stack.append(node.right)
            else:
                memo[nid] = Until(gl, gr)
                pins.append(node)
                stack.pop()
        else:
            raise TypeError(f"not a formula node: {node!r}")
    return memo[id(f)]


def eval_prop(
    f: Formula, b, network: Network, theta: Fraction, *, strict: bool = False
) -> bool:
    """Classical truth of a propositional formula at behavior set ``b``.

    Majority atoms are evaluated as the exact fraction test against ``b``.
    Iterative with short-circuiting, so machine-built formulas of any depth
    and sharing are fine; temporal nodes raise :class:`TranslationError`.
    """
    theta = Fraction(theta)
    bset = frozenset(b)
    memo: dict[int, bool] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        nid = id(node)
        if nid in memo:
            stack.pop()
            continue
        if isinstance(node, Top):
            memo[nid] = True
            stack.pop()
        elif isinstance(node, Beh):
            memo[nid] = node.a in bset
            stack.pop()
        elif isinstance(node, Nbr):
            memo[nid] = node.b in network[node.a]
            stack.pop()
        elif isinstance(node, MajorityGE):
            nbrs = network[node.a]
            memo[nid] = threshold_met(len(nbrs & bset), len(nbrs), theta, strict)
            stack.pop()
        elif isinstance(node, Not):
            got = memo.get(id(node.child))
            if got is None:
                stack.append(node.child)
            else:
                memo[nid] = not got
                stack.pop()
        elif isinstance(node, And):
            gl = memo.get(id(node.left))
            if gl is None:
                stack.append(node.left)
            elif gl is False:
                memo[nid] = False  # short-circuit: right side never visited
                stack.pop()
            else:
                gr = memo.get(id(node.right))
                if gr is None:
                    stack.append(node.right)
                else:
                    memo[nid] = gr
                    stack.pop()
        elif isinstance(node, (Next, Until)):
            raise TranslationError("temporal node encountered in propositional evaluation")
        else:
            raise TypeError(f"not a formula node: {node!r}")
    return memo[id(f)]


def satisfaction_set_via_translation(
    model: Model, trace: Trace, f: Formula, *, rewrite_log: RewriteLog | None = None
) -> SatSet:
    """Satisfaction set computed through the full translation pipeline."""
    require_known_agents(model, f)
    prop = to_propositional(
        eliminate_until(f, len(model.agents)),
        model.agents,
        model.theta,
        strict=model.strict,
        rewrite_log=rewrite_log,
    )
    fp = trace.fixed_point_index
    prefix = frozenset(
        i
        for i in range(fp + 1)
        if eval_prop(prop, trace.frames[i], model.network, model.theta, strict=model.strict)
    )
    return SatSet(prefix, fp in prefix)
