"""Command-line front end.

Vertex and mutation indices on the command line are 1-based; ``--at`` and
``--address`` for triangulations refer to the position of an arc in the
``arcs`` list.  Exit codes: 1 for I/O problems, 2 for invalid input, 3 when a
checked identity fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import invariants as inv
from .cluster import MODES, PRINCIPAL, Seed, exchange_graph_bfs
from .errors import InputError, OrbiclustError, PropertyFailure
from .fixtures import FIXTURES
from .mutation import mutate_decorated, mutate_rep_full
from .orbifold import Triangulation, b_matrix, flip, quiver, require_valid
from .reps import DecoratedRep
from .strings import StringWord, replay_case_table, string_module

EXIT_IO, EXIT_INPUT, EXIT_PROPERTY = 1, 2, 3


class CliIOError(Exception):
    pass


# input helpers

def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def load_seed(path: str, mode: str | None = None) -> Seed:
    data = _read_json(path)
    if isinstance(data, list):
        data = {"B": data}
    if not isinstance(data, dict) or "B" not in data:
        raise InputError("matrix JSON needs a 'B' entry (or a bare list of rows)")
    if mode:
        data = dict(data, mode=mode)
        if "cluster" in data and data.get("mode") != mode:
            data.pop("cluster", None)
    return Seed.from_json(data)


def load_triangulation(source: str) -> Triangulation:
    """A triangulation JSON file or a bundled fixture name."""
    if source in FIXTURES and not Path(source).exists():
        T = FIXTURES[source]()
    else:
        data = _read_json(source)
        if not isinstance(data, dict):
            raise InputError("triangulation JSON must be an object")
        T = Triangulation.from_json(data)
    require_valid(T)
    return T


def load_module(T: Triangulation, path: str) -> DecoratedRep:
    """Module JSON, decorated module JSON, or a string word under the key 'word'."""
    data = _read_json(path)
    Q = quiver(T)
    if isinstance(data, dict) and "word" in data:
        return DecoratedRep(string_module(Q, StringWord.from_json(data["word"], data.get("start"))))
    if isinstance(data, list):
        return DecoratedRep(string_module(Q, StringWord.from_json(data)))
    if not isinstance(data, dict):
        raise InputError("module JSON must be an object")
    return DecoratedRep.from_json(Q, data)


def parse_index(text: str, n: int) -> int:
    try:
        k = int(text)
    except ValueError:
        raise InputError(f"index {text!r} is not an integer") from None
    if not 1 <= k <= n:
        raise InputError(f"index {k} is outside 1..{n}")
    return k - 1


def parse_address(text: str | None, n: int) -> tuple:
    if not text:
        return ()
    return tuple(parse_index(part.strip(), n) for part in text.split(",") if part.strip())


def _steps(args, n: int) -> tuple:
    steps = parse_address(args.address, n)
    if args.at is not None:
        steps += (parse_index(args.at, n),)
    return steps


def _emit(args, payload, text: str | None = None):
    if args.json_out:
        try:
            Path(args.json_out).write_text(json.dumps(payload, indent=2) + "\n")
        except OSError as exc:
            raise CliIOError(f"cannot write {args.json_out}: {exc.strerror or exc}") from None
    print(text if text is not None else json.dumps(payload, indent=2))


# verbs

def cmd_seed_mutate(args):
    seed = load_seed(args.matrix, args.mode)
    for k in _steps(args, seed.n):
        seed = seed.mutate(k)
    _emit(args, seed.to_json())
    return 0


def cmd_flip(args):
    T = load_triangulation(args.triangulation)
    for k in _steps(args, T.n):
        T = flip(T, T.arc_ids[k])
    payload = {"triangulation": T.to_json(), "B": b_matrix(T).to_lists()}
    _emit(args, payload)
    return 0


def cmd_rep_mutate(args):
    T = load_triangulation(args.triangulation)
    MM = load_module(T, args.module)
    steps = _steps(args, T.n)
    if not steps:
        raise InputError("give --at or --address")
    diagnostics = []
    for k in steps:
        diagnostics.append(dict(mutate_rep_full(T, MM.module, k).diagram.diagnostics(), vertex=k + 1))
        T, MM = mutate_decorated(T, MM, k)
    payload = {"triangulation": T.to_json(), "module": MM.to_json(), "diagnostics": diagnostics}
    _emit(args, payload)
    return 0


def cmd_g_vector(args):
    T = load_triangulation(args.triangulation)
    g = inv.g_vector(T, load_module(T, args.module))
    _emit(args, list(g))
    return 0


def cmd_h_vector(args):
    T = load_triangulation(args.triangulation)
    h = inv.h_vector(T, load_module(T, args.module))
    _emit(args, h.to_json())
    return 0


def cmd_f_poly(args):
    T = load_triangulation(args.triangulation)
    MM = load_module(T, args.module)
    address = parse_address(args.address, T.n) if args.address else None
    F = inv.f_polynomial(T, MM, method=args.method, address=address, bound=args.bound)
    _emit(args, str(F), str(F))
    return 0


def cmd_cc(args):
    T = load_triangulation(args.triangulation)
    MM = load_module(T, args.module)
    address = parse_address(args.address, T.n) if args.address else None
    X = inv.cc_function(T, MM, method=args.method, address=address, bound=args.bound)
    _emit(args, str(X), str(X))
    return 0


def cmd_verify(args):
    from . import suites

    T = load_triangulation(args.fixture)
    result = suites.SuiteResult()
    if args.fixture == "c2tilde":
        result.extend(suites.worked_example())
    stats = suites.cluster_vs_modules(T, args.depth)
    result.add(f"cluster and module (g, F) agree on {stats.compared} tower modules "
               f"(addresses up to length {args.depth})", not stats.mismatches,
               f"{stats.oracle} oracle, {stats.recurrence} recurrence, {stats.seconds:.1f}s")
    compared, bad = suites.oracle_vs_recurrence(T, args.depth)
    result.add(f"Grassmannian F equals recurrence F on {compared} modules", not bad)
    result.extend(suites.involution_suite(T, args.involution_depth))
    result.extend(suites.decomposition_suite())
    result.extend(suites.property_suite(T, min(args.depth, 2)))
    result.extend(suites.e_reached_suite(T, args.e_depth))
    result.extend(suites.e_suite(T, seed=args.seed))
    cases = replay_case_table(seed=args.seed)
    result.add(f"{len(cases)} case-table replays", all(c.ok for c in cases))
    result.extend(suites.finite_type_suite())
    for c in result.checks:
        print(c.line())
    if args.json_out:
        _emit(args, [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in result.checks], "")
    return 0 if result.ok else EXIT_PROPERTY


def cmd_bfs(args):
    seed = load_seed(args.matrix, args.mode or PRINCIPAL)
    graph = exchange_graph_bfs(seed, args.depth)
    if args.dot:
        try:
            Path(args.dot).write_text(graph.to_dot())
        except OSError as exc:
            raise CliIOError(f"cannot write {args.dot}: {exc.strerror or exc}") from None
    summary = graph.summary()
    _emit(args, summary)
    return 0 if not graph.collisions else EXIT_PROPERTY


def cmd_replay_tables(args):
    reports = replay_case_table(args.case, seed=args.seed)
    for r in reports:
        print(r.describe())
    return 0 if all(r.ok for r in reports) else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbiclust", description="Cluster algebras from orbifolds and their modules.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized isomorphism searches")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_, aliases=()):
        sp = sub.add_parser(name, help=help_, aliases=list(aliases))
        sp.set_defaults(func=func)
        sp.add_argument("--json-out", help="also write the JSON result to this file")
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        return sp

    sp = verb("seed-mutate", cmd_seed_mutate, "mutate a seed given by its exchange matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--at")
    sp.add_argument("--address", help="comma-separated 1-based indices, applied left to right")
    sp.add_argument("--mode", choices=MODES)

    sp = verb("flip", cmd_flip, "flip a triangulation")
    sp.add_argument("--triangulation", required=True)
    sp.add_argument("--at")
    sp.add_argument("--address")

    for name, aliases in (("rep-mutate", ("mutate-rep",)),):
        sp = verb(name, cmd_rep_mutate, "mutate a decorated module", aliases)
        sp.add_argument("--triangulation", required=True)
        sp.add_argument("--module", required=True)
        sp.add_argument("--at")
        sp.add_argument("--address")

    for name, func, help_ in (("g-vector", cmd_g_vector, "g-vector of a module"),
                              ("h-vector", cmd_h_vector, "h-vector of a module")):
        sp = verb(name, func, help_)
        sp.add_argument("--triangulation", required=True)
        sp.add_argument("--module", required=True)

    for name, func, help_ in (("f-poly", cmd_f_poly, "F-polynomial of a module"),
                              ("cc", cmd_cc, "Caldero-Chapoton function of a module")):
        sp = verb(name, func, help_)
        sp.add_argument("--triangulation", required=True)
        sp.add_argument("--module", required=True)
        sp.add_argument("--method", choices=(inv.ORACLE, inv.RECURRENCE, inv.AUTO), default=inv.AUTO)
        sp.add_argument("--address", help="address taking the module to a negative one (recurrence)")
        sp.add_argument("--bound", type=int, default=12, help="largest module dimension for the oracle")

    sp = verb("verify", cmd_verify, "run the verification suites on a fixture")
    sp.add_argument("--fixture", required=True, help=f"one of {', '.join(FIXTURES)} or a triangulation file")
    sp.add_argument("--depth", type=int, default=4, help="longest address compared with the cluster side")
    sp.add_argument("--involution-depth", type=int, default=5, help="mutation depth for the involution check")
    sp.add_argument("--e-depth", type=int, default=3, help="mutation depth for the E-invariant checks")

    sp = verb("bfs", cmd_bfs, "explore the exchange graph breadth first")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--dot", help="write the graph in DOT format to this file")
    sp.add_argument("--mode", choices=MODES)

    sp = verb("replay-tables", cmd_replay_tables, "replay the mutation case tables")
    sp.add_argument("--case", help="a single case such as 4.a")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PropertyFailure, OrbiclustError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except KeyError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
