"""Command-line toolchain: generate hardware, convert problems, set
embedded parameters, solve exactly, and verify correspondence.

Exit codes: 0 success, 1 verification failed, 2 input error,
3 precondition error, 4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import files
from .embedding import EmbeddingError, classify, greedy_chain_embed, leaf_count, validate
from .graphs import DomainError, IsingProblem, QuboProblem, make_hardware
from .params import (
    EasyBound,
    GapTargeted,
    PreconditionError,
    TightBound,
    compute_C,
    preprocess_fix,
    set_params_easy,
    set_params_tight,
)
from .solve import EnumerationCapError, enumerate_spectrum, verify_correspondence
from .transform import ising_to_qubo, qubo_to_ising
from .wmis import StrictMinPlus, UniformPenalty, WmisInstance, wmis_to_qubo

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_CAP = 4

MAX_PRINTED_GROUND_STATES = 8


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_policy(text: str):
    kind, _, arg = text.partition(":")
    try:
        value = float(arg) if arg else None
    except ValueError:
        raise CliError(f"bad policy argument {arg!r}", EXIT_INPUT) from None
    try:
        if kind == "easy":
            return EasyBound(value if value is not None else 1e-6)
        if kind == "tight":
            return TightBound(value if value is not None else 1e-6)
        if kind == "gap":
            if value is None:
                raise CliError("gap policy needs a value, e.g. gap:0.5", EXIT_INPUT)
            return ("gap", value)
    except DomainError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    raise CliError(f"unknown policy {kind!r}; use easy:M, tight:M, or gap:G", EXIT_INPUT)


def _parse_penalty(text: str):
    kind, _, arg = text.partition(":")
    try:
        if kind == "strict":
            return StrictMinPlus(float(arg))
        if kind == "uniform":
            return UniformPenalty(float(arg))
    except (ValueError, DomainError) as exc:
        raise CliError(f"bad penalty {text!r}: {exc}", EXIT_INPUT) from None
    raise CliError(f"unknown penalty rule {kind!r}; use strict:D or uniform:J", EXIT_INPUT)


def cmd_gen_hardware(args) -> int:
    kind = "square_lattice" if args.kind == "square" else "extended_grid"
    hw = make_hardware(kind, args.rows, args.cols)
    files.dump({"hardware": files.hardware_to_doc(hw)}, args.out)
    print(f"{hw.base.n} vertices, {len(hw.base.edges)} edges, max degree {hw.max_degree}")
    return EXIT_OK


def cmd_convert(args) -> int:
    problem = files.parse_problem(files.load(getattr(args, "in")))
    if isinstance(problem, WmisInstance):
        if args.to != "qubo":
            raise CliError("wmis inputs convert to qubo only", EXIT_INPUT)
        if not args.penalty:
            raise CliError("wmis conversion needs --penalty strict:D or uniform:J", EXIT_INPUT)
        result = wmis_to_qubo(problem, _parse_penalty(args.penalty))
        doc = files.qubo_to_doc(result.qubo)
        doc["strict_penalty"] = result.strict
    elif isinstance(problem, QuboProblem):
        if args.to != "ising":
            raise CliError("qubo inputs convert to ising", EXIT_INPUT)
        ising, link = qubo_to_ising(problem)
        doc = files.ising_to_doc(ising)
        doc["affine"] = {"scale": link.scale, "offset": link.offset, "direction": link.direction.value}
    else:
        if args.to != "qubo":
            raise CliError("ising inputs convert to qubo", EXIT_INPUT)
        qubo, link = ising_to_qubo(problem)
        doc = files.qubo_to_doc(qubo)
        doc["affine"] = {"scale": link.scale, "offset": link.offset, "direction": link.direction.value}
    files.dump(doc, args.out)
    return EXIT_OK


def _load_ising(path: str) -> IsingProblem:
    problem = files.parse_problem(files.load(path))
    if not isinstance(problem, IsingProblem):
        raise CliError("expected an ising problem file (run convert first)", EXIT_INPUT)
    return problem


def cmd_set_params(args) -> int:
    problem = _load_ising(args.problem)
    policy = _parse_policy(args.policy)

    fixed_note = ""
    if any(compute_C(problem, i) < 0 for i in problem.graph.vertices):
        bad = [i for i in problem.graph.vertices if compute_C(problem, i) < 0]
        if not args.preprocess:
            raise CliError(
                f"C_i < 0 on vertices {bad}; rerun with --preprocess to fix them",
                EXIT_PRECONDITION,
            )
        prep = preprocess_fix(problem)
        fixed_note = " ".join(f"{i}={s:+d}" for i, s in sorted(prep.fixed.items()))
        print(f"preprocess fixed: {fixed_note}")
        problem = prep.residual

    emb_doc = files.load(args.embedding)
    try:
        emb = files.parse_embedding(emb_doc, problem.graph)
    except EmbeddingError as exc:
        raise CliError(f"invalid embedding: {exc}", EXIT_INPUT) from None
    report = validate(emb)
    if not report.ok:
        raise CliError("invalid embedding: " + "; ".join(report.violations), EXIT_INPUT)

    if isinstance(policy, EasyBound):
        embedded = set_params_easy(emb, problem, policy.margin)
        policy_name = f"easy:{policy.margin}"
    elif isinstance(policy, TightBound):
        embedded = set_params_tight(emb, problem, policy)
        policy_name = f"tight:{policy.margin}"
    else:
        _, g = policy
        targets = GapTargeted({i: g for i in problem.graph.vertices})
        embedded = set_params_tight(emb, problem, targets)
        policy_name = f"gap:{g}"

    print(f"{'vertex':>6} {'C_i':>12} {'l_i':>4} {'F':>14}")
    for i in problem.graph.vertices:
        fs = embedded.chain_edges.get(i, {})
        f_text = f"{next(iter(fs.values())):.6g}" if fs else "-"
        print(f"{i:>6} {compute_C(problem, i):>12.6g} {leaf_count(embedded.source, i):>4} {f_text:>14}")
    doc = files.embedded_to_doc(embedded, policy_name)
    if fixed_note:
        doc["metadata"]["preprocess_fixed"] = fixed_note
    files.dump(doc, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    problem = files.parse_problem(files.load(args.problem))
    if isinstance(problem, WmisInstance):
        raise CliError("convert wmis inputs to qubo or ising before solving", EXIT_INPUT)
    if isinstance(problem, QuboProblem):
        problem, _ = qubo_to_ising(problem)
        print("note: qubo input converted to its spin form; energies are Ising energies")
    spec = enumerate_spectrum(problem, cap=args.max_n)
    gap = f"{spec.gap:.10g}" if spec.gap is not None else "undefined (single level)"
    print(f"min energy: {spec.min_energy:.10g}")
    print(f"spectral gap: {gap}")
    print(f"ground states: {spec.ground_count} of {spec.state_count} states")
    for s in spec.ground_states[:MAX_PRINTED_GROUND_STATES]:
        text = "".join("+" if s[v] > 0 else "-" for v in problem.graph.vertices)
        print(f"  {text}")
    if spec.ground_count > MAX_PRINTED_GROUND_STATES:
        print(f"  ... {spec.ground_count - MAX_PRINTED_GROUND_STATES} more")
    return EXIT_OK


def cmd_verify(args) -> int:
    original = _load_ising(args.original)
    emb_doc = files.load(args.embedded)
    embedded = files.parse_embedded(emb_doc, original.graph)
    report = verify_correspondence(original, embedded, tol=args.tol)
    print(f"chains_aligned: {report.chains_aligned}")
    print(f"offset_identity: {report.offset_identity}")
    print(f"projected ground states: {len(report.projected_ground_states)}")
    print(f"min embedded: {report.min_embedded:.10g}  min original: {report.min_original:.10g}")
    if report.gap_bound_ok is not None:
        print(f"gap_bound_ok: {report.gap_bound_ok}")
    print(f"ok: {report.ok}")
    if not report.ok:
        print(f"detail: {report.detail}")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_pipeline(args) -> int:
    problem = files.parse_problem(files.load(args.problem))
    if not isinstance(problem, WmisInstance):
        raise CliError("pipeline starts from a wmis problem file", EXIT_INPUT)
    rule = _parse_penalty(args.penalty)
    qubo = wmis_to_qubo(problem, rule)
    print(f"wmis -> qubo: strict penalty condition {'holds' if qubo.strict else 'VIOLATED'}")
    ising, link = qubo_to_ising(qubo.qubo)
    print(f"qubo -> ising: offset {link.offset}, scale {link.scale}")

    prep = preprocess_fix(ising)
    if prep.fixed:
        print("preprocess fixed: " + " ".join(f"{i}={s:+d}" for i, s in sorted(prep.fixed.items())))
    residual = prep.residual

    kind = "square_lattice" if args.hardware == "square" else "extended_grid"
    hw = make_hardware(kind, args.rows, args.cols)
    emb = greedy_chain_embed(residual.graph, hw, seed=args.seed)
    if emb is None:
        raise CliError("greedy embedder failed; try a larger grid or another seed", EXIT_PRECONDITION)
    print(f"embedding: class {classify(emb).value}, {len(emb.used_vertices())} physical qubits")

    policy = _parse_policy(args.policy)
    if isinstance(policy, EasyBound):
        embedded = set_params_easy(emb, residual, policy.margin)
    elif isinstance(policy, TightBound):
        embedded = set_params_tight(emb, residual, policy)
    else:
        _, g = policy
        embedded = set_params_tight(emb, residual, GapTargeted({i: g for i in residual.graph.vertices}))

    report = verify_correspondence(residual, embedded, tol=args.tol)
    print(f"verify: ok={report.ok} chains_aligned={report.chains_aligned} offset_identity={report.offset_identity}")
    if not report.ok:
        print(f"detail: {report.detail}")
        return EXIT_VERIFY_FAILED

    best = link.map_value(report.min_original)
    print(f"recovered qubo maximum: {best:.10g} (wmis weight when the strict condition holds)")
    for proj in report.projected_ground_states[:MAX_PRINTED_GROUND_STATES]:
        chosen = sorted(v for v, s in proj.items() if s > 0)
        chosen += sorted(i for i, s in prep.fixed.items() if s > 0)
        print(f"  independent set: {sorted(chosen)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isingminor",
        description="Compile Ising/QUBO problems onto a hardware graph by minor-embedding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-hardware", help="write a hardware graph file")
    p.add_argument("--kind", choices=("square", "extended"), required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_hardware)

    p = sub.add_parser("convert", help="convert between wmis/qubo/ising forms")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--to", choices=("ising", "qubo"), required=True)
    p.add_argument("--penalty", help="wmis only: strict:D or uniform:J")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("set-params", help="compute embedded biases and chain strengths")
    p.add_argument("--problem", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--policy", required=True, help="easy:MARGIN, tight:MARGIN, or gap:G")
    p.add_argument("--preprocess", action="store_true", help="fix C_i < 0 vertices first")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_set_params)

    p = sub.add_parser("solve", help="exhaustive minimum, gap, and ground states")
    p.add_argument("--problem", required=True)
    p.add_argument("--max-n", type=int, default=24)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check embedded-vs-original correspondence")
    p.add_argument("--original", required=True)
    p.add_argument("--embedded", required=True)
    p.add_argument("--tol", type=float, default=0.0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="wmis -> qubo -> ising -> embed -> params -> verify")
    p.add_argument("--problem", required=True, help="wmis problem file")
    p.add_argument("--penalty", default="strict:0.25")
    p.add_argument("--hardware", choices=("square", "extended"), default="extended")
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", default="tight:0.0625")
    p.add_argument("--tol", type=float, default=0.0)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except files.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EmbeddingError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
