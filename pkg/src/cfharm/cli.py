"""Command-line interface.

Exit codes: 0 success (and, for ``audit``, a transitive relation), 1 input or
usage error, 2 intransitivity detected by ``audit``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .audit import AuditReport, Counterfactual, Interventionist, detect_cycles, pairwise_matrix
from .bounds import IntervalBound, benefit_bounds, harm_bounds, objective_bounds, tie_bounds
from .core import parse_rational, render_rational
from .coupling import Coupling, coupling_stats, diagonal_coupling
from .decisions import Decision, Verdict, WeightedRule, benefit_threshold, counterfactual_verdict
from .errors import HarmError, InvalidScenario, InvalidTarget
from .joint import pairwise_from_joint, verify_bounds_contain
from .scenario_io import Comparison, load_joint, load_scenario, read_scenario
from .simulate import sample_population, simulate_rct
from .utility_lab import (
    Infeasible,
    UtilitySearchProblem,
    find_utility_for_ordering,
    rank_by_utility,
    verify_utility_realizes,
)

EXIT_OK, EXIT_INPUT, EXIT_INTRANSITIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _r(q) -> str:
    return render_rational(Fraction(q))


def _interval(b: IntervalBound) -> dict:
    return {
        "lo": _r(b.lo),
        "hi": _r(b.hi),
        "lo_witness": b.lo_witness.as_strings(),
        "hi_witness": b.hi_witness.as_strings(),
    }


def _verdict(v: Verdict) -> dict:
    out: dict[str, Any] = {"decision": str(v.decision), "flags": list(v.flags)}
    if isinstance(v.evidence, IntervalBound):
        out["objective"] = [_r(v.evidence.lo), _r(v.evidence.hi)]
    else:
        out["utility_difference"] = _r(v.evidence)
    return out


def _emit(args, payload: dict, table: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(table.rstrip("\n") + "\n")


def _fmt_interval(lo, hi) -> str:
    return f"[{_r(lo)}, {_r(hi)}]"


def _fmt_coupling(c: Coupling) -> str:
    return ", ".join(f"({r},{n}) {_r(q)}" for (r, n), q in c.nonzero().items())


def _load(path):
    return load_scenario(path)


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = read_scenario(args.scenario)
    for f in doc.findings:
        sys.stderr.write(f"FINDING {f.code} {f.where}: {f.message}\n")
    payload = {
        "valid": doc.valid,
        "findings": [{"code": f.code, "where": f.where, "message": f.message} for f in doc.findings],
    }
    table = "valid" if doc.valid else f"invalid ({len(doc.findings)} finding(s))"
    _emit(args, payload, table)
    return EXIT_OK if doc.valid else EXIT_INPUT


def _bounds_one(scenario, new_id, ref_id, w) -> tuple[dict, str]:
    new, ref = scenario.marginal(new_id), scenario.marginal(ref_id)
    if new_id == ref_id:
        # one potential outcome compared with itself: the diagonal is the only coupling
        diag = diagonal_coupling(new)
        b, h, t = (IntervalBound(x, x, diag, diag) for x in coupling_stats(diag))
    else:
        b, h, t = benefit_bounds(new, ref), harm_bounds(new, ref), tie_bounds(new, ref)
    payload: dict[str, Any] = {
        "new": new_id,
        "ref": ref_id,
        "benefit": _interval(b),
        "harm": _interval(h),
        "tie": _interval(t),
    }
    lines = [
        f"{new_id} (new) vs {ref_id} (ref)",
        f"  benefit P(new > ref)  {_fmt_interval(b.lo, b.hi)}",
        f"  harm    P(new < ref)  {_fmt_interval(h.lo, h.hi)}",
        f"  tie     P(new = ref)  {_fmt_interval(t.lo, t.hi)}",
        f"  benefit lo witness: {_fmt_coupling(b.lo_witness)}",
        f"  benefit hi witness: {_fmt_coupling(b.hi_witness)}",
        f"  harm lo witness:    {_fmt_coupling(h.lo_witness)}",
        f"  harm hi witness:    {_fmt_coupling(h.hi_witness)}",
    ]
    if w is not None:
        rule = WeightedRule(w)
        if new_id == ref_id:
            o = IntervalBound(Fraction(0), Fraction(0), b.lo_witness, b.lo_witness)
            v = Verdict(Decision.RECOMMEND_NEW, o, rule.flags)
        else:
            o = objective_bounds(new, ref, w)
            v = counterfactual_verdict(new, ref, rule)
        thr = benefit_threshold(rule)
        payload["weighted"] = {
            "w": _r(w),
            "objective": _interval(o),
            "verdict": _verdict(v),
            "tie_free_threshold": {"value": _r(thr), "valid_only_if_tie_is": "[0, 0]"},
        }
        lines += [
            f"  P(benefit) - {_r(w)}*P(harm)  {_fmt_interval(o.lo, o.hi)}",
            f"  verdict: {v.decision}" + (f"  flags: {','.join(v.flags)}" if v.flags else ""),
            f"  tie-free shortcut threshold w/(1+w) = {_r(thr)}"
            + ("" if t.hi == 0 else " (not applicable: ties possible)"),
        ]
    return payload, "\n".join(lines)


def cmd_bounds(args) -> int:
    doc = _load(args.scenario)
    scenario = doc.scenario
    w = parse_rational(args.w, where="--w") if args.w is not None else None
    if args.new or args.ref:
        if not (args.new and args.ref):
            raise UsageError("--new and --ref must be given together")
        jobs = [Comparison(args.new, args.ref, w)]
    else:
        if not doc.comparisons:
            raise UsageError("no --new/--ref given and the scenario lists no comparisons")
        jobs = [Comparison(c.new, c.ref, w if w is not None else c.w) for c in doc.comparisons]
    results = [_bounds_one(scenario, c.new, c.ref, c.w) for c in jobs]
    if len(results) == 1:
        payload = results[0][0]
    else:
        payload = {"comparisons": [p for p, _ in results]}
    _emit(args, payload, "\n\n".join(t for _, t in results))
    return EXIT_OK


def cmd_rank(args) -> int:
    scenario = _load(args.scenario).scenario
    utility = scenario.utility(args.utility)
    ranking = rank_by_utility(scenario, utility)
    payload = {
        "utility": args.utility,
        "ranking": [{"treatment": e.treatment, "expected_utility": _r(e.expected), "rank": e.rank} for e in ranking],
    }
    lines = [f"rank  treatment  E[{args.utility}]"]
    lines += [f"{e.rank:>4}  {e.treatment:<9}  {_r(e.expected)}" for e in ranking]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _audit_payload(report: AuditReport) -> dict:
    rel = report.relation
    return {
        "rule": report.rule.describe(),
        "is_transitive": report.is_transitive,
        "cycles": [
            {"members": list(c.members), "verdicts": [_verdict(v) for v in c.verdicts]}
            for c in report.cycles
        ],
        "order": list(report.order) if report.order is not None else None,
        "equivalences": [list(p) for p in report.equivalences],
        "inconclusive": [list(p) for p in report.inconclusive],
        "undetermined": [list(p) for p in report.undetermined],
        "pairs": [
            {"new": b, "ref": a, **_verdict(v)} for (b, a), v in rel.verdicts.items()
        ],
        "notes": list(report.notes),
    }


def _audit_table(report: AuditReport) -> str:
    rel = report.relation
    ids = rel.treatments
    width = max(14, max(len(t) for t in ids) + 2)
    lines = [f"rule: {report.rule.describe()}", "verdict for switching from column (ref) to row (new):"]
    lines.append(" " * width + "".join(f"{a:<{width}}" for a in ids))
    for b in ids:
        row = "".join(
            f"{'-' if a == b else str(rel.verdicts[(b, a)].decision):<{width}}" for a in ids
        )
        lines.append(f"{b:<{width}}{row}")
    if report.cycles:
        for c in report.cycles:
            lines.append(f"CYCLE: {c.b} over {c.a}, {c.c} over {c.b}, {c.a} over {c.c}")
    else:
        order = " > ".join(report.order) if report.order else "(no linear order)"
        lines.append(f"transitive; order: {order}")
    for x, y in report.equivalences:
        lines.append(f"equivalent: {x} ~ {y}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def cmd_audit(args) -> int:
    scenario = _load(args.scenario).scenario
    if args.rule == "counterfactual":
        if args.w is None:
            raise UsageError("--rule counterfactual needs --w")
        rule = Counterfactual(WeightedRule(parse_rational(args.w, where="--w")))
    else:
        if args.utility is None:
            raise UsageError("--rule interventionist needs --utility")
        scenario.utility(args.utility)
        rule = Interventionist(args.utility)
    report = detect_cycles(pairwise_matrix(scenario, rule))
    _emit(args, _audit_payload(report), _audit_table(report))
    return EXIT_OK if report.is_transitive else EXIT_INTRANSITIVE


def _parse_range(text: str) -> tuple[Fraction, Fraction]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"--range must look like LO..HI, got {text!r}")
    return parse_rational(lo, where="--range"), parse_rational(hi, where="--range")


def cmd_search_utility(args) -> int:
    scenario = _load(args.scenario).scenario
    target = [t.strip() for t in args.order.split(",") if t.strip()]
    if len(set(target)) != len(target):
        raise InvalidTarget(f"--order repeats a treatment: {args.order}")
    for tid in target:
        scenario.marginal(tid)
    # an order naming a subset searches over that subset only
    scenario = replace(
        scenario,
        treatments={t: scenario.treatments[t] for t in scenario.treatment_ids if t in target},
    )
    problem = UtilitySearchProblem(
        scenario,
        target,
        min_gap=parse_rational(args.min_gap, where="--min-gap"),
        value_range=_parse_range(args.range),
        monotone_gap=parse_rational(args.monotone_gap, where="--monotone-gap"),
    )
    result = find_utility_for_ordering(problem)
    names = scenario.space.outcomes
    if isinstance(result, Infeasible):
        payload = {
            "feasible": False,
            "certificate": {
                "verified": result.verify(),
                "multipliers": [{"constraint": name, "weight": _r(y)} for name, y in result.active()],
            },
        }
        lines = ["infeasible; Farkas certificate (weight x constraint):"]
        lines += [f"  {_r(y)} x [{name}]" for name, y in result.active()]
        lines.append(f"certificate verified: {result.verify()}")
    else:
        check = verify_utility_realizes(scenario, result, target, problem.min_gap)
        payload = {
            "feasible": True,
            "utility": {o: _r(v) for o, v in zip(names, result.values)},
            "margins": [_r(m) for m in check.margins],
            "verified": check.ok,
        }
        lines = ["feasible; witness utility:"]
        lines += [f"  {o}: {_r(v)}" for o, v in zip(names, result.values)]
        lines.append("consecutive margins: " + ", ".join(_r(m) for m in check.margins))
        lines.append(f"verified: {check.ok}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be a positive integer")
    arms = [a.strip() for a in args.arms.split(",")]
    if len(arms) != 2 or arms[0] == arms[1]:
        raise UsageError("--arms needs two distinct treatment ids, e.g. a1,a2")
    scenario = _load(args.scenario).scenario
    joint = load_joint(args.joint, scenario)
    a, b = arms
    joint.axis(a), joint.axis(b)
    pop = sample_population(joint, args.n, args.seed)
    trial = simulate_rct(pop, a, b, args.seed)

    truth = coupling_stats(pairwise_from_joint(joint, a, b))
    containment = verify_bounds_contain(joint, b, a)
    payload: dict[str, Any] = {
        "generator": trial.generator,
        "seed": args.seed,
        "n": args.n,
        "arms": {
            arm: {
                "size": size,
                "marginal": {o: _r(p) for o, p in zip(scenario.space.outcomes, m.probs) if p}
                if m is not None
                else None,
            }
            for arm, size, m in zip(trial.arms, trial.sizes, trial.marginals)
        },
        "population_benefit": _r(pop.empirical_benefit(a, b)),
        "true_stats": {"benefit": _r(truth.benefit), "harm": _r(truth.harm), "tie": _r(truth.tie)},
        "bounds_from_joint": {
            "benefit": [_r(containment.benefit.lo), _r(containment.benefit.hi)],
            "harm": [_r(containment.harm.lo), _r(containment.harm.hi)],
            "tie": [_r(containment.tie.lo), _r(containment.tie.hi)],
        },
        "containment": containment.ok,
    }
    lines = [
        f"generator {trial.generator}, seed {args.seed}, n {args.n}",
        f"arm sizes: {a}={trial.sizes[0]}, {b}={trial.sizes[1]}",
    ]
    ma, mb = trial.marginals
    if ma is not None and mb is not None:
        eb, eh = benefit_bounds(mb, ma), harm_bounds(mb, ma)
        payload["empirical_bounds"] = {
            "benefit": [_r(eb.lo), _r(eb.hi)],
            "harm": [_r(eh.lo), _r(eh.hi)],
        }
        lines += [
            f"empirical benefit bounds {b} over {a}: [{float(eb.lo):.6f}, {float(eb.hi):.6f}]",
            f"empirical harm bounds    {b} over {a}: [{float(eh.lo):.6f}, {float(eh.hi):.6f}]",
        ]
    lines += [
        f"population share with {b} > {a}: {float(pop.empirical_benefit(a, b)):.6f}",
        f"true stats from joint: benefit {_r(truth.benefit)}, harm {_r(truth.harm)}, tie {_r(truth.tie)}",
        f"bounds from joint marginals: benefit {_fmt_interval(containment.benefit.lo, containment.benefit.hi)}",
        f"containment: {containment.ok}",
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfharm", description="Counterfactual vs interventionist harm toolkit.")
    parser.add_argument("--version", action="version", version=f"cfharm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="scenario JSON file (tb.json refers to the bundled example)")
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check a scenario file")

    p = add("bounds", cmd_bounds, "sharp benefit/harm/tie bounds for a treatment pair")
    p.add_argument("--new")
    p.add_argument("--ref")
    p.add_argument("--w", help="weight on harm; adds the weighted objective and verdict")

    p = add("rank", cmd_rank, "rank treatments by expected utility")
    p.add_argument("--utility", required=True)

    p = add("audit", cmd_audit, "pairwise verdict matrix and cycle detection")
    p.add_argument("--rule", choices=("counterfactual", "interventionist"), required=True)
    p.add_argument("--w")
    p.add_argument("--utility")

    p = add("search-utility", cmd_search_utility, "find an order-preserving utility for an ordering")
    p.add_argument("--order", required=True, help="comma-separated treatment ids, best first")
    p.add_argument("--min-gap", default="1/100")
    p.add_argument("--range", default="0..10")
    p.add_argument("--monotone-gap", default="0")

    p = add("simulate", cmd_simulate, "sample a population from a joint law and run a two-arm trial")
    p.add_argument("--joint", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--arms", required=True, help="two treatment ids, e.g. a1,a2")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
    except InvalidScenario as exc:
        for f in exc.findings:
            sys.stderr.write(f"FINDING {f.code} {f.where}: {f.message}\n")
    except HarmError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
