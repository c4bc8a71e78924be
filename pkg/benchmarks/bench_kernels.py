#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernels on line-topology models.

Both backends run the same two kernels on identical buffers: the adoption
fixed point (diffusion) and the subformula labeling pass (label_rows).
Line models are the worst case for the diffusion frontier: the behavior
front crosses one agent per step, so the fixed point is n-1 and the row
buffers are as long as they get.

Usage::

    python3 benchmarks/bench_kernels.py [n ...] [--repeats R]

Defaults: n in 500, 2000, 8000; best of 5 runs each.
"""

import argparse
import sys
import time
from array import array

sys.path.insert(0, "src")  # allow running from a source checkout

from ltlsn import parse_formula, subformulas
from ltlsn._kernel import implementations
from ltlsn.checker import _encode, _join_array
from ltlsn.formula import And, MajorityGE
from ltlsn.model import adjacency_csr

sys.path.insert(0, "tests")
from gen import line_model


def diffusion_inputs(model):
    order = sorted(model.agents)
    indptr, indices = adjacency_csr(model, order)
    initial = bytearray(len(order))
    for i, a in enumerate(order):
        if a in model.initial:
            initial[i] = 1
    return indptr, indices, initial


def label_inputs(model, join, fixed):
    order = sorted(model.agents)
    first, mid, last = order[0], order[len(order) // 2], order[-1]
    f = And(
        parse_formula(f"(true U B({last})) & X !B({mid}) & !X B({first})"),
        MajorityGE(mid),
    )
    subs = subformulas(f)
    triples = _encode(subs, model, order)
    return (
        array("i", [t[0] for t in triples]),
        array("i", [t[1] for t in triples]),
        array("i", [t[2] for t in triples]),
        len(triples),
        fixed + 1,
    )


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def fmt(seconds):
    return f"{seconds * 1e3:9.2f} ms"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("sizes", nargs="*", type=int, default=[500, 2000, 8000])
    parser.add_argument("--repeats", type=int, default=5, metavar="R")
    args = parser.parse_args()

    impls = implementations()
    if "compiled" not in impls:
        print("note: compiled kernels unavailable; timing the pure backend only")

    for n in args.sizes:
        model = line_model(n)
        num = model.theta.numerator
        den = model.theta.denominator
        indptr, indices, initial = diffusion_inputs(model)

        print(f"\nline model, {n} agents")
        results = {}
        for name, impl in impls.items():
            join = array("i", [0]) * n

            def run_diffusion(impl=impl, join=join):
                return impl.diffusion(
                    indptr, indices, num, den, False, initial, join
                )

            seconds = best_of(args.repeats, run_diffusion)
            fixed = run_diffusion()
            results[name] = seconds
            print(f"  diffusion   {name:9s} {fmt(seconds)}   (fixed point {fixed})")
        if len(results) == 2:
            print(f"  diffusion   speedup   {results['pure'] / results['compiled']:9.1f} x")

        join = array("i", [0]) * n
        fixed = impls["pure"].diffusion(indptr, indices, num, den, False, initial, join)
        op, arg1, arg2, n_rows, n_pos = label_inputs(model, join, fixed)
        results = {}
        for name, impl in impls.items():
            rows = [bytearray(n_pos) for _ in range(n_rows)]

            def run_rows(impl=impl, rows=rows):
                return impl.label_rows(
                    op, arg1, arg2, rows, n_pos, join, indptr, indices,
                    num, den, False,
                )

            seconds = best_of(args.repeats, run_rows)
            visits = run_rows()
            results[name] = seconds
            print(f"  label_rows  {name:9s} {fmt(seconds)}   ({visits} visits)")
        if len(results) == 2:
            print(f"  label_rows  speedup   {results['pure'] / results['compiled']:9.1f} x")


if __name__ == "__main__":
    main()
