"""Command-line front end.

Exit codes: 0 success, 1 property refuted (a witness is in the report),
2 malformed input, 3 a budget ran out before an answer was reached.
"""

from __future__ import annotations

import argparse
import os
import random
import statistics
import sys
from pathlib import Path
from typing import Any, Sequence

from . import catalogue, graphs
from .classify import Limits, NO, UNKNOWN, classify_group, ns_ranks
from .fixtures import run_fixtures
from .io import (
    InputError,
    automaton_to_document,
    group_to_document,
    load_automaton,
    load_graph,
    load_group,
    render_report,
)
from .perm import DEFAULT_ELEMENT_CAP, EnumerationCapError, IntransitiveGroupError, PermGroup
from .reset import bound_report, group_automaton, spreading_greedy_reset
from .transform import (
    DEFAULT_SUBSET_CAP,
    Automaton,
    cerny_automaton,
    greedy_reset_word,
    is_synchronizing_automaton,
    random_automaton,
    shortest_reset_word,
)

EXIT_OK, EXIT_REFUTED, EXIT_MALFORMED, EXIT_BUDGET = 0, 1, 2, 3

# flag name -> (environment variable, default, type)
BUDGETS = {
    "element_cap": ("SYNCHRO_ELEMENT_CAP", DEFAULT_ELEMENT_CAP, int),
    "state_cap": ("SYNCHRO_STATE_CAP", DEFAULT_SUBSET_CAP, int),
    "endo_budget": ("SYNCHRO_ENDO_BUDGET", Limits.endo_budget, int),
    "chi_time": ("SYNCHRO_CHI_TIME", Limits.chi_time_budget, float),
}


def _budget_default(name: str):
    env, default, kind = BUDGETS[name]
    raw = os.environ.get(env)
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise InputError(f"environment variable {env}: expected {kind.__name__}, got {raw!r}") from None


def resolve_group(ref: str) -> PermGroup:
    """A group file path, or a catalogue name such as ``cyclic:7``."""
    if Path(ref).is_file():
        return load_group(ref)
    try:
        return catalogue.named_group(ref)
    except (ValueError, TypeError) as e:
        raise InputError(f"{ref}: not a readable file or catalogue group ({e})") from None


def resolve_automaton(ref: str) -> Automaton:
    if Path(ref).is_file():
        return load_automaton(ref)
    if ref.startswith("cerny:"):
        return cerny_automaton(int(ref.split(":", 1)[1]))
    raise InputError(f"{ref}: not a readable automaton file")


def resolve_graph(ref: str) -> graphs.Graph:
    """An edge-list file, or ``family:param:...`` (johnson takes a comma list last)."""
    if Path(ref).is_file():
        return load_graph(ref)
    family, *raw = ref.split(":")
    try:
        params: list[Any] = [[int(x) for x in p.split(",")] for p in raw]
    except ValueError:
        raise InputError(f"{ref}: graph parameters must be integers") from None
    if family == "johnson" and len(params) == 3:
        params = [params[0][0], params[1][0], set(params[2])]
    elif family == "complete_multipartite":
        params = [[x for p in params for x in p]]
    else:
        params = [p[0] for p in params]
    try:
        return graphs.build(family, *params)
    except (ValueError, TypeError) as e:
        raise InputError(f"{ref}: {e}") from None


def _limits(args) -> Limits:
    return Limits(element_cap=args.element_cap, endo_budget=args.endo_budget, chi_time_budget=args.chi_time)


def _word_dict(word) -> dict[str, Any] | None:
    if word is None:
        return None
    return {"letters": list(word.letters), "length": word.length, "image": word.image}


# ---------------------------------------------------------------- commands

def cmd_classify_group(args) -> tuple[int, dict[str, Any]]:
    G = resolve_group(args.group)
    report = classify_group(G, _limits(args), with_ns=not args.no_ns)
    body = {"input": group_to_document(G), "report": report.as_dict()}
    if not args.timing:
        del body["report"]["timing"]
    flags = report.flags
    if flags["synchronizing"] == NO:
        return EXIT_REFUTED, body
    if UNKNOWN in flags.values() or (report.ns_ranks is not None and not report.ns_ranks.exact):
        return EXIT_BUDGET, body
    return EXIT_OK, body


def _automaton_analysis(a: Automaton, state_cap: int) -> tuple[int, dict[str, Any]]:
    check = is_synchronizing_automaton(a)
    body: dict[str, Any] = {"input": automaton_to_document(a), "synchronizing": check.synchronizing}
    if not check.synchronizing:
        stuck = sorted(p for p, ok in check.collapsible.items() if not ok)
        body["non_collapsible_pairs"] = [list(p) for p in stuck]
        return EXIT_REFUTED, body
    res = shortest_reset_word(a, state_cap)
    body["greedy"] = _word_dict(greedy_reset_word(a))
    body["shortest"] = {"status": res.status, "word": _word_dict(res.word), "explored": res.explored}
    body["cerny_bound"] = (a.states - 1) ** 2
    if res.status == "truncated":
        return EXIT_BUDGET, body
    body["within_cerny_bound"] = res.length <= body["cerny_bound"]
    return EXIT_OK, body


def cmd_classify_automaton(args):
    return _automaton_analysis(resolve_automaton(args.automaton), args.state_cap)


def cmd_reset_word(args):
    if args.group:
        G = resolve_group(args.group)
        f = _parse_map(args.map, G.degree)
        a = group_automaton(G, f)
        code, body = _automaton_analysis(a, args.state_cap)
        if code != EXIT_REFUTED:
            sg = spreading_greedy_reset(G, f, args.element_cap)
            body["spreading_greedy"] = {
                "success": sg.success, "f_count": sg.f_count,
                "word": _word_dict(sg.word), "stuck_set": list(sg.stuck_set) if sg.stuck_set else None,
            }
        return code, body
    if not args.automaton:
        raise InputError("reset-word needs an automaton or --group with --map")
    return _automaton_analysis(resolve_automaton(args.automaton), args.state_cap)


def _parse_map(text: str | None, n: int):
    if text is None:
        raise InputError("--map is required with --group")
    try:
        images = [int(x) for x in text.strip("[]").split(",")]
    except ValueError:
        raise InputError(f"--map: expected comma-separated images, got {text!r}") from None
    if len(images) != n or not all(0 <= x < n for x in images):
        raise InputError(f"--map: expected {n} images in 0..{n - 1}")
    if len(set(images)) == n:
        raise InputError("--map: the map must be singular (not a permutation)")
    return images


def cmd_bounds(args):
    G = resolve_group(args.group)
    target = _parse_map(args.map, G.degree) if args.map else None
    rep = bound_report(G, target, cap=args.element_cap, state_cap=args.state_cap)
    body = {"input": group_to_document(G), "bounds": rep.as_dict()}
    if rep.synchronizing is False:
        return EXIT_REFUTED, body
    if rep.d_A_truncated or rep.shortest_status == "truncated":
        return EXIT_BUDGET, body
    return EXIT_OK, body


def cmd_cerny(args):
    if args.n < 2:
        raise InputError("the Cerny family starts at n = 2")
    return _automaton_analysis(cerny_automaton(args.n), args.state_cap)


def cmd_graph(args):
    g = resolve_graph(args.graph)
    clique = graphs.max_clique(g)
    indep = graphs.max_independent_set(g)
    chi = graphs.chromatic_number(g, args.chi_time)
    body: dict[str, Any] = {
        "vertices": g.n, "edges": g.edge_count,
        "clique_number": len(clique), "clique": list(clique),
        "independence_number": len(indep), "independent_set": list(indep),
        "chromatic_number": {"lower": chi.lower, "upper": chi.upper, "colouring": list(chi.colouring)},
    }
    code = EXIT_OK if chi.exact else EXIT_BUDGET
    try:
        c = graphs.core(g, args.endo_budget)
        body["core"] = {"vertices": list(c.vertices), "retraction": list(c.retraction)}
        if not args.no_hull:
            h = graphs.hull(g, args.endo_budget)
            body["hull_edges"] = [list(e) for e in h.edges]
    except graphs.BudgetExhausted as e:
        body["budget_exhausted"] = str(e)
        code = EXIT_BUDGET
    return code, body


def cmd_ns_ranks(args):
    G = resolve_group(args.group)
    res = ns_ranks(G, args.endo_budget)
    body = {
        "input": group_to_document(G),
        "ns_ranks": sorted(res.ranks), "undecided": sorted(res.undecided), "exact": res.exact,
        "witnesses": {str(r): w.as_dict() for r, w in sorted(res.witnesses.items())},
    }
    return (EXIT_OK if res.exact else EXIT_BUDGET), body


def cmd_fixtures(args):
    results = run_fixtures(args.only or None)
    body = {"checks": [r.as_dict() for r in results], "passed": sum(r.ok for r in results), "total": len(results)}
    return (EXIT_OK if all(r.ok for r in results) else EXIT_REFUTED), body


def cmd_random_experiment(args):
    if args.n < 1 or args.k < 1 or args.samples < 1:
        raise InputError("n, k and samples must be positive")
    rng = random.Random(args.seed)
    lengths = []
    sync = truncated = 0
    for _ in range(args.samples):
        a = random_automaton(args.n, args.k, rng)
        if not is_synchronizing_automaton(a).synchronizing:
            continue
        sync += 1
        res = shortest_reset_word(a, args.state_cap)
        if res.status == "found":
            lengths.append(res.length)
        else:
            truncated += 1
    stats = None
    if lengths:
        stats = {"min": min(lengths), "max": max(lengths), "mean": round(statistics.fmean(lengths), 6),
                 "median": statistics.median(lengths)}
    body = {
        "n": args.n, "k": args.k, "samples": args.samples, "seed": args.seed,
        "synchronizing": sync, "fraction_synchronizing": round(sync / args.samples, 6),
        "shortest_reset_length": stats, "truncated": truncated,
    }
    return (EXIT_BUDGET if truncated else EXIT_OK), body


# ------------------------------------------------------------------ parser

def _add_budgets(p: argparse.ArgumentParser, *names: str) -> None:
    for name in names:
        env, _, kind = BUDGETS[name]
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=kind, default=None,
                       help=f"(default from {env} or built in)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="synchro", description="Synchronization of automata and permutation groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify-group", help="place a group in the synchronization hierarchy")
    p.add_argument("group", help="group JSON file or catalogue name (e.g. petersen-aut, subsets:6:2)")
    p.add_argument("--no-ns", action="store_true", help="skip the NS(G) rank search")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (output no longer reproducible)")
    _add_budgets(p, "element_cap", "endo_budget", "chi_time")
    p.set_defaults(func=cmd_classify_group)

    p = sub.add_parser("classify-automaton", help="synchronization status and reset words of an automaton")
    p.add_argument("automaton", help="automaton JSON file or cerny:N")
    _add_budgets(p, "state_cap")
    p.set_defaults(func=cmd_classify_automaton)

    p = sub.add_parser("reset-word", help="reset words for an automaton, or for a group plus one map")
    p.add_argument("automaton", nargs="?", help="automaton JSON file or cerny:N")
    p.add_argument("--group", help="group file or catalogue name; letters are its generators plus --map")
    p.add_argument("--map", help="singular map as comma-separated images")
    _add_budgets(p, "state_cap", "element_cap")
    p.set_defaults(func=cmd_reset_word)

    p = sub.add_parser("bounds", help="rank-based, spreading and Cerny bounds for a group")
    p.add_argument("group")
    p.add_argument("--map", help="singular map to adjoin (comma-separated images)")
    _add_budgets(p, "element_cap", "state_cap")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cerny", help="the n-state Cerny automaton and its analysis")
    p.add_argument("n", type=int)
    _add_budgets(p, "state_cap")
    p.set_defaults(func=cmd_cerny)

    p = sub.add_parser("graph", help="clique, independence and chromatic numbers, core and hull")
    p.add_argument("graph", help="edge-list file or family:params (e.g. petersen, cycle:6, johnson:7:3:1)")
    p.add_argument("--no-hull", action="store_true")
    _add_budgets(p, "chi_time", "endo_budget")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("ns-ranks", help="ranks of maps the group fails to synchronize")
    p.add_argument("group")
    _add_budgets(p, "endo_budget")
    p.set_defaults(func=cmd_ns_ranks)

    p = sub.add_parser("fixtures", help="check every worked example against its known answer")
    p.add_argument("--only", nargs="*", help="fixture names to run")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("random-experiment", help="sample uniform random automata")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_budgets(p, "state_cap")
    p.set_defaults(func=cmd_random_experiment)
    return parser


def _expand_assignments(argv: Sequence[str]) -> list[str]:
    """Accept ``n=8`` as shorthand for ``--n 8``."""
    out = []
    for tok in argv:
        if not tok.startswith("-") and "=" in tok and tok.split("=", 1)[0].isidentifier():
            key, value = tok.split("=", 1)
            out.extend([f"--{key.replace('_', '-')}", value])
        else:
            out.append(tok)
    return out


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(_expand_assignments(sys.argv[1:] if argv is None else argv))
    except SystemExit as e:
        return EXIT_MALFORMED if e.code else EXIT_OK
    try:
        for name in BUDGETS:
            if getattr(args, name, None) is None:
                setattr(args, name, _budget_default(name))
        code, body = args.func(args)
    except (InputError, IntransitiveGroupError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except EnumerationCapError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    out.write(render_report(args.command, body))
    return code


def main() -> None:
    sys.exit(run())
