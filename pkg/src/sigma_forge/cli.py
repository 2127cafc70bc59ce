"""Command-line front end: ``sigma-forge {check,survey,lattice,classify}``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

import numpy as np

from .arith import PrimePartition, parse_sigma
from .catalog import STANDARD_SIGMAS, STANDARD_SUITE, build, parse_group
from .errors import DomainError, ResourceLimitError
from .groups import FiniteGroup
from .harness import Deadline, survey
from .predicates import classify, is_sigma_subnormal
from .subgroups import Subgroup, core, generated, lattice, lattice_limits, normal_closure

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

FLAG_LABELS = {
    "modular": "modular",
    "subnormal": "subnormal",
    "sigma_subnormal": "sigma-subnormal",
    "quasinormal": "quasinormal",
    "sigma_quasinormal": "sigma-quasinormal",
    "seminormal": "seminormal",
    "sigma_seminormal": "sigma-seminormal",
}


# -- subgroup generator input -------------------------------------------------

def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise DomainError("unbalanced brackets in subgroup generators")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise DomainError("unbalanced brackets in subgroup generators")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _cycles_to_images(text: str, degree: int) -> list[int]:
    if not re.fullmatch(r"(\s*\([\d\s,]*\)\s*)+", text):
        raise DomainError(f"cannot read permutation {text!r}")
    img = list(range(degree))
    # cycles compose left to right, matching the group product
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
        if len(set(pts)) != len(pts) or any(p >= degree for p in pts):
            raise DomainError(f"bad cycle ({body}) on {degree} points")
        step = dict(zip(pts, pts[1:] + pts[:1]))
        img = [step.get(v, v) for v in img]
    return img


def parse_subgroup(G: FiniteGroup, text: str) -> Subgroup:
    """Subgroup generated by elements in cycle notation or as image arrays.

    ``"[(0 1), (0 1 2)]"`` and ``"[[1,0,2],[1,2,0]]"`` are both accepted.
    """
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise DomainError("subgroup generators must be given as a bracketed list")
    rows = []
    for item in _split_top_level(text[1:-1]):
        if item.startswith("["):
            try:
                img = [int(v) for v in json.loads(item)]
            except (ValueError, TypeError):
                raise DomainError(f"cannot read image array {item!r}") from None
        else:
            img = _cycles_to_images(item, G.degree)
        if sorted(img) != list(range(G.degree)):
            raise DomainError(f"{item!r} is not a permutation of {G.degree} points")
        rows.append(img)
    if not rows:
        return generated(G, [])
    return generated(G, G.lookup(np.array(rows)).tolist())


# -- commands -------------------------------------------------------------------

def _describe(H: Subgroup) -> dict:
    G = H.parent
    return {"order": H.order, "generators": [G.perms[g].tolist() for g in H.generators()]}


def cmd_check(args, out) -> int:
    G = build(args.group)
    sigma = parse_sigma(args.sigma or "sigma1")
    A = parse_subgroup(G, args.subgroup) if args.subgroup else generated(G, [])
    flags = classify(G, A, sigma)
    _, chain = is_sigma_subnormal(G, A, sigma)
    result = {
        "group": str(parse_group(args.group)), "sigma": sigma.spec(),
        "subgroup": _describe(A), "flags": flags,
        "normal_closure_order": normal_closure(G, A).order,
        "core_order": core(G, A).order,
        "sigma_chain": None if chain is None else [H.order for H in chain.subgroups],
    }
    if args.format == "json":
        print(json.dumps(result, sort_keys=True), file=out)
    else:
        print(f"group: {result['group']} (order {G.order})", file=out)
        print(f"sigma: {result['sigma']}", file=out)
        print(f"subgroup order: {A.order}", file=out)
        for key, label in FLAG_LABELS.items():
            print(f"{label}: {str(flags[key]).lower()}", file=out)
        print(f"normal closure order: {result['normal_closure_order']}", file=out)
        print(f"core order: {result['core_order']}", file=out)
        if chain is not None:
            print("sigma-chain orders: " + " <= ".join(map(str, result["sigma_chain"])), file=out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    G = build(args.group)
    sigma = parse_sigma(args.sigma or "sigma1")
    deadline = Deadline(args.time_budget)
    rows = []
    for i, A in enumerate(lattice(G)):
        deadline.check()
        rows.append({"index": i, "order": A.order, **classify(G, A, sigma)})
    if args.format == "json":
        print(json.dumps({"group": str(parse_group(args.group)), "sigma": sigma.spec(),
                          "subgroups": rows}, sort_keys=True), file=out)
    else:
        heads = ["idx", "order"] + list(FLAG_LABELS.values())
        print("  ".join(heads), file=out)
        for r in rows:
            cells = [str(r["index"]), str(r["order"])] + [
                "yes" if r[k] else "no" for k in FLAG_LABELS]
            print("  ".join(c.rjust(len(h)) for c, h in zip(cells, heads)), file=out)
    return EXIT_OK


def cmd_lattice(args, out) -> int:
    G = build(args.group)
    L = lattice(G)
    normal = [i for i in range(len(L)) if L.normal_flags[i]]
    covers = {}
    for i in normal:
        ups = [j for j in normal if j != i and L.le[i, j]]
        covers[i] = [j for j in ups if not any(k != j and L.le[k, j] for k in ups)]
    by_order: dict[int, int] = {}
    for H in L:
        by_order[H.order] = by_order.get(H.order, 0) + 1
    if args.format == "json":
        print(json.dumps({
            "group": str(parse_group(args.group)), "order": G.order,
            "subgroups": len(L), "by_order": {str(k): v for k, v in sorted(by_order.items())},
            "normal": [{"index": i, "order": L[i].order, "covered_by": covers[i]} for i in normal],
        }, sort_keys=True), file=out)
    else:
        print(f"group: {parse_group(args.group)} (order {G.order})", file=out)
        print(f"subgroups: {len(L)}", file=out)
        print("by order: " + ", ".join(f"{k}:{v}" for k, v in sorted(by_order.items())), file=out)
        print(f"normal subgroups: {len(normal)}", file=out)
        for i in normal:
            ups = ", ".join(f"N{j}" for j in covers[i]) or "-"
            print(f"  N{i} order {L[i].order} < {ups}", file=out)
    return EXIT_OK


def cmd_survey(args, out) -> int:
    if args.suite == "standard":
        suite = list(STANDARD_SUITE)
    elif args.group:
        suite = [str(parse_group(args.group))]
    else:
        raise DomainError("survey needs --suite standard or --group")
    sigmas = [parse_sigma(s) for s in (args.sigma_list or STANDARD_SIGMAS)]
    reports = survey(suite, sigmas, time_budget=args.time_budget)
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in reports], sort_keys=True), file=out)
    else:
        for r in reports:
            counts = {}
            for c in r.claims:
                counts[c.outcome] = counts.get(c.outcome, 0) + 1
            summary = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
            print(f"{r.group:24s} {r.sigma:22s} {summary}", file=out)
            for c in r.claims:
                if c.outcome == "violated":
                    print(f"  VIOLATED {c.id}: {json.dumps(c.witness, sort_keys=True)}", file=out)
                elif c.reason and c.reason.startswith("resource limit"):
                    print(f"  skipped {c.id}: {c.reason}", file=out)
    if any(r.violated for r in reports):
        return EXIT_VIOLATION
    if any(r.resource_skipped for r in reports):
        return EXIT_RESOURCE
    return EXIT_OK


COMMANDS = {"check": cmd_check, "classify": cmd_classify,
            "lattice": cmd_lattice, "survey": cmd_survey}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigma-forge",
        description="Subgroup predicates relative to prime partitions, and their machine checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, group_required: bool = True) -> None:
        p.add_argument("--group", required=group_required, help='group expression, e.g. "S(4)"')
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--max-order", type=int, default=None, help="largest group order for lattices")
        p.add_argument("--max-subgroups", type=int, default=None)
        p.add_argument("--time-budget", type=float, default=None, help="seconds")

    p = sub.add_parser("check", help="predicates of one subgroup")
    common(p)
    p.add_argument("--sigma", default=None, help='sigma spec, e.g. "pi:{2,3}" (default sigma1)')
    p.add_argument("--subgroup", default=None, help='generators, e.g. "[(0 1)]" or "[[1,0,2]]"')

    p = sub.add_parser("classify", help="predicate flags of every subgroup")
    common(p)
    p.add_argument("--sigma", default=None)

    p = sub.add_parser("lattice", help="subgroup counts and the normal-subgroup poset")
    common(p)

    p = sub.add_parser("survey", help="verify all claims over groups and sigmas")
    common(p, group_required=False)
    p.add_argument("--suite", choices=("standard",), default=None)
    p.add_argument("--sigma", dest="sigma_list", action="append", default=None,
                   help="repeatable; default is the five standard partitions")
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        # specs are parsed before any computation starts
        if getattr(args, "group", None):
            parse_group(args.group)
        for s in ([args.sigma] if getattr(args, "sigma", None) else []) + (
                getattr(args, "sigma_list", None) or []):
            parse_sigma(s)
        with lattice_limits(args.max_order, args.max_subgroups):
            return COMMANDS[args.command](args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run())
