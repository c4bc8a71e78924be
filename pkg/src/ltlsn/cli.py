"""Command-line surface: validate, trace, check, translate, xcheck."""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stdout
from dataclasses import dataclass

from .checker import check, s_set_from_labels
from .errors import (
    FormulaSyntaxError,
    MajorityExpansionError,
    ModelConstraintError,
    ModelSyntaxError,
    UnknownAgentError,
)
from .formula import parse_formula, render
from .model import parse_model, trace, validate
from .semantics import require_known_agents, satisfaction_set
from .translate import (
    eliminate_until,
    expand_majority,
    satisfaction_set_via_translation,
    to_propositional,
)


@dataclass(frozen=True)
class CommandResult:
    """Exit code plus everything the command wrote to standard out.

    Codes: 0 success (and, for check/xcheck, the formula holds at position
    0); 1 the formula does not hold at 0; 2 usage or parse error; 3 model
    validation error; 4 engine disagreement (xcheck only).
    """

    exit_code: int
    stdout_text: str


def _load_model(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _cmd_validate(args) -> int:
    model = _load_model(args.model)
    problems = validate(model)
    print(f"agents: {len(model.agents)}")
    print(f"theta: {model.theta}")
    for axiom in ("irreflexivity", "symmetry", "seriality"):
        witnesses = ["|".join(v.agents) for v in problems if v.axiom == axiom]
        if witnesses:
            print(f"{axiom}: violated by " + ", ".join(witnesses))
        else:
            print(f"{axiom}: OK")
    return 3 if problems else 0


def _cmd_trace(args) -> int:
    model = _load_model(args.model)
    tr = trace(model)
    for i, frame in enumerate(tr.frames):
        print(f"{i}: {{{','.join(sorted(frame))}}}")
    print(f"fixed point at i={tr.fixed_point_index}")
    return 0


def _cmd_check(args) -> int:
    model = _load_model(args.model)
    f = parse_formula(args.formula)
    tr = trace(model)
    s = s_set_from_labels(check(model, tr, f), f)
    print(f"S = {s}")
    holds = 0 in s.prefix_positions
    print(f"holds at 0: {'yes' if holds else 'no'}")
    return 0 if holds else 1


def _cmd_translate(args) -> int:
    model = _load_model(args.model)
    f = parse_formula(args.formula)
    require_known_agents(model, f)
    prop = to_propositional(
        eliminate_until(f, len(model.agents)),
        model.agents,
        model.theta,
        strict=model.strict,
        guard=args.guard,
    )
    if args.expand_majority:
        prop = expand_majority(
            prop, model.agents, model.theta, strict=model.strict, guard=args.guard
        )
    print(render(prop))
    return 0


def _cmd_xcheck(args) -> int:
    model = _load_model(args.model)
    f = parse_formula(args.formula)
    tr = trace(model)
    s_direct = satisfaction_set(model, tr, f)
    s_label = s_set_from_labels(check(model, tr, f), f)
    s_trans = satisfaction_set_via_translation(model, tr, f)
    print(f"semantics: S = {s_direct}")
    print(f"labeling: S = {s_label}")
    print(f"translation: S = {s_trans}")
    agree = s_direct == s_label == s_trans
    print(f"engines agree: {'yes' if agree else 'no'}")
    if not agree:
        return 4
    holds = 0 in s_direct.prefix_positions
    print(f"holds at 0: {'yes' if holds else 'no'}")
    return 0 if holds else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltlsn",
        description="Temporal logic over threshold-diffusion network models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="report the network axioms of a model file")
    p.add_argument("model")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("trace", help="print the path frames up to the fixed point")
    p.add_argument("model")
    p.set_defaults(handler=_cmd_trace)

    p = sub.add_parser("check", help="evaluate a formula with the labeling engine")
    p.add_argument("model")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("translate", help="print the propositional form of a formula")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument(
        "--expand-majority",
        action="store_true",
        help="expand majority atoms into explicit disjunctions",
    )
    p.add_argument(
        "--guard",
        type=int,
        default=10,
        metavar="N",
        help="agent-count cap for majority expansions (default 10)",
    )
    p.set_defaults(handler=_cmd_translate)

    p = sub.add_parser("xcheck", help="run all three engines and compare them")
    p.add_argument("model")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_xcheck)

    return parser


def run(argv: list[str]) -> CommandResult:
    """Execute one invocation; stdout is captured, errors go to stderr."""
    buf = io.StringIO()
    try:
        with redirect_stdout(buf):
            args = _build_parser().parse_args(argv)
            code = args.handler(args)
    except SystemExit as exc:  # argparse usage or --help
        code = 0 if exc.code in (0, None) else 2
    except (
        ModelSyntaxError,
        FormulaSyntaxError,
        UnknownAgentError,
        MajorityExpansionError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except ModelConstraintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 3
    return CommandResult(code, buf.getvalue())


def main() -> None:
    result = run(sys.argv[1:])
    sys.stdout.write(result.stdout_text)
    sys.stdout.flush()
    raise SystemExit(result.exit_code)
