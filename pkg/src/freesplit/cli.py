"""Command-line surface: decompose, verify, hunt, enumerate, stats.

One process, one run. Every run logs its full configuration (including
the seed) next to its artifacts so it can be replayed byte-for-byte.
Exit codes: 0 success, 1 bad configuration, 2 verification failure or
counterexample, 3 precondition violation, 4 budget/range exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .decomposition import (
    decomposition_from_record,
    decomposition_record,
    record_to_json,
)
from .decomposer import (
    MAXIMALITY_CHECK_MAX_N,
    clique_split,
    decompose_k,
    decompose_two,
    degenerate_max_split,
    degenerate_split,
)
from .errors import (
    BudgetExhausted,
    ConfigError,
    FallbackExceeded,
    FreesplitError,
    MalformedInput,
    PreconditionViolated,
    RangeExceeded,
    RepairLoopExceeded,
    Stalled,
    UnsupportedCase,
)
from .graphs import Graph, connected_components, degrees, parse_graph, to_graph6
from .maxfree import DEFAULT_NODE_BUDGET
from .oracle import GraphFilters, HuntTask, ParamPoint, enumerate_graphs, hunt
from .patterns import clique_number, degeneracy, spec_from_string
from .verifier import verify_clique_split, verify_degenerate, verify_k, verify_two

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY_FAIL = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4

MODES = ("two", "k", "lemma2", "degenerateA", "degenerateC")


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    input_format: str = "graph6"
    declared_n: int | None = None
    mode: str = "two"
    family: str | None = None
    families: list[str] = field(default_factory=list)
    p: int | None = None
    q: int | None = None
    ps: list[int] = field(default_factory=list)
    decomposition_path: str | None = None
    claim: str | None = None
    n_values: list[int] = field(default_factory=list)
    connected: bool = False
    delta: int | None = None
    delta_min: int | None = None
    delta_max: int | None = None
    kd_free: bool = False
    omega_min: int | None = None
    omega_max: int | None = None
    grid: str | None = None
    dedup: bool = False
    sample: int | None = None
    workers: int = 1
    no_engine: bool = False
    budget_nodes: int = DEFAULT_NODE_BUDGET
    fallback_n: int = 16
    repair_cap: int | None = None
    maximality_n: int = MAXIMALITY_CHECK_MAX_N
    check_maximality: bool = True
    seed: int = 0
    out: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config field")
        return cls(**data)


def _read_graph(config: RunConfig) -> Graph:
    if config.input_path is None:
        raise ConfigError("input", "missing input path")
    if config.input_path == "-":
        text = sys.stdin.read()
    else:
        path = Path(config.input_path)
        if not path.exists():
            raise ConfigError("input", f"no such file: {path}")
        text = path.read_text()
    try:
        return parse_graph(text, config.input_format, config.declared_n)
    except MalformedInput as exc:
        raise ConfigError("input", f"cannot parse graph: {exc}") from exc


def _family(config: RunConfig) -> FreenessSpec:
    if not config.family:
        raise ConfigError("family", "mode requires --family")
    try:
        return spec_from_string(config.family)
    except FreesplitError as exc:
        raise ConfigError("family", str(exc)) from exc


def _families(config: RunConfig) -> list[FreenessSpec]:
    if not config.families:
        raise ConfigError("families", "k mode requires --families")
    try:
        return [spec_from_string(s) for s in config.families]
    except FreesplitError as exc:
        raise ConfigError("families", str(exc)) from exc


def _need_pq(config: RunConfig) -> tuple[int, int]:
    if config.p is None or config.q is None:
        raise ConfigError("p", "mode requires --p and --q")
    return config.p, config.q


def _out_dir(config: RunConfig) -> Path | None:
    if config.out is None:
        return None
    path = Path(config.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(out: Path | None, name: str, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        (out / name).write_text(text)


def _log_config(out: Path | None, config: RunConfig) -> None:
    if out is not None:
        (out / "run_config.json").write_text(config.to_json())


def _run_decompose(config: RunConfig) -> int:
    g = _read_graph(config)
    out = _out_dir(config)
    _log_config(out, config)
    mode = config.mode
    if mode not in MODES:
        raise ConfigError("mode", f"unknown mode {mode!r}")
    trace_summary: dict = {}
    try:
        if mode == "two":
            p, q = _need_pq(config)
            spec = _family(config)
            result = decompose_two(g, spec, p, q, budget=config.budget_nodes,
                                   fallback_bound=config.fallback_n, verify=False)
            if result.counterexample is not None:
                cex = result.counterexample
                _emit(out, "report.json", json.dumps(
                    {"counterexample": {
                        "graph6": cex.graph6, "family": cex.spec, "p": cex.p,
                        "q": cex.q, "optimal_size": cex.optimal_size,
                        "certificates": list(cex.certificates)}},
                    indent=2, sort_keys=True) + "\n")
                return EXIT_VERIFY_FAIL
            d = result.decomposition
            trace_summary = {"steps": len(result.trace),
                             "fallback_used": result.fallback_used}
            check = config.check_maximality and g.n <= config.maximality_n
            report = verify_two(g, d, spec, p, q, check_maximality=check,
                                budget=config.budget_nodes)
        elif mode == "k":
            if not config.ps:
                raise ConfigError("ps", "k mode requires --ps")
            specs = _families(config)
            d = decompose_k(g, specs, config.ps, budget=config.budget_nodes,
                            fallback_bound=config.fallback_n)
            check = config.check_maximality and g.n <= config.maximality_n
            report = verify_k(g, d, specs, config.ps, check_maximality=check,
                              budget=config.budget_nodes)
        elif mode == "lemma2":
            p, q = _need_pq(config)
            d = clique_split(g, p, q, budget=config.budget_nodes,
                             fallback_bound=config.fallback_n)
            report = verify_clique_split(g, d, p, q)
        elif mode == "degenerateA":
            p, q = _need_pq(config)
            d = degenerate_split(g, p, q, repair_cap=config.repair_cap,
                                 fallback_bound=config.fallback_n)
            report = verify_degenerate(g, d, p, q, "lemmaA")
        else:  # degenerateC
            p, q = _need_pq(config)
            d = degenerate_max_split(g, p, q, budget=config.budget_nodes,
                                     fallback_bound=config.fallback_n)
            report = verify_degenerate(g, d, p, q, "theoremC")
    except (PreconditionViolated, UnsupportedCase) as exc:
        _emit(out, "report.json", json.dumps(
            {"error": type(exc).__name__,
             "reason": getattr(exc, "reason", str(exc)),
             "witness": getattr(exc, "witness", None)},
            indent=2, sort_keys=True) + "\n")
        return EXIT_PRECONDITION
    except Stalled as exc:
        _emit(out, "report.json", json.dumps(
            {"error": "Stalled", "reason": exc.reason,
             "definitive": exc.definitive,
             "diagnostics": _plain(exc.diagnostics)},
            indent=2, sort_keys=True) + "\n")
        return EXIT_VERIFY_FAIL if exc.definitive else EXIT_BUDGET
    except (BudgetExhausted, FallbackExceeded, RepairLoopExceeded, RangeExceeded) as exc:
        _emit(out, "report.json", json.dumps(
            {"error": type(exc).__name__, "reason": str(exc)},
            indent=2, sort_keys=True) + "\n")
        return EXIT_BUDGET
    record = decomposition_record(g, d, trace_summary, report.report_id())
    _emit(out, "decomposition.json", record_to_json(record))
    _emit(out, "report.json", json.dumps(report.to_record(), indent=2,
                                         sort_keys=True) + "\n")
    return EXIT_OK if report.overall else EXIT_VERIFY_FAIL


def _plain(value):
    """Best-effort conversion of witness payloads to JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)


def _run_verify(config: RunConfig) -> int:
    g = _read_graph(config)
    if config.decomposition_path is None:
        raise ConfigError("decomposition", "verify requires --decomposition")
    try:
        record = json.loads(Path(config.decomposition_path).read_text())
        d = decomposition_from_record(record, g)
    except (OSError, ValueError, MalformedInput) as exc:
        raise ConfigError("decomposition", f"cannot load decomposition: {exc}") from exc
    out = _out_dir(config)
    _log_config(out, config)
    check = config.check_maximality and g.n <= config.maximality_n
    if config.mode == "two":
        p, q = _need_pq(config)
        report = verify_two(g, d, _family(config), p, q, check_maximality=check,
                            budget=config.budget_nodes)
    elif config.mode == "k":
        if not config.ps:
            raise ConfigError("ps", "k mode requires --ps")
        report = verify_k(g, d, _families(config), config.ps,
                          check_maximality=check, budget=config.budget_nodes)
    elif config.mode == "lemma2":
        p, q = _need_pq(config)
        report = verify_clique_split(g, d, p, q)
    elif config.mode in ("degenerateA", "degenerateC"):
        p, q = _need_pq(config)
        degen_mode = "lemmaA" if config.mode == "degenerateA" else "theoremC"
        report = verify_degenerate(g, d, p, q, degen_mode,
                                   budget=config.budget_nodes)
    else:
        raise ConfigError("mode", f"unknown mode {config.mode!r}")
    _emit(out, "report.json", json.dumps(report.to_record(), indent=2,
                                         sort_keys=True) + "\n")
    return EXIT_OK if report.overall else EXIT_VERIFY_FAIL


def _parse_grid(config: RunConfig) -> tuple[ParamPoint, ...]:
    if not config.grid:
        raise ConfigError("grid", "hunt requires --grid")
    points = []
    for chunk in config.grid.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        kwargs: dict = {}
        for pair in chunk.split(","):
            if "=" not in pair:
                raise ConfigError("grid", f"expected key=value, got {pair!r}")
            key, value = pair.split("=", 1)
            key = key.strip()
            value = value.strip()
            if key in ("p", "q"):
                kwargs[key] = int(value)
            elif key == "ps":
                kwargs["ps"] = tuple(int(x) for x in value.split("|"))
            elif key == "family":
                kwargs["spec"] = spec_from_string(value)
            elif key == "families":
                kwargs["specs"] = tuple(spec_from_string(x) for x in value.split("|"))
            elif key == "family2":
                kwargs["spec2"] = spec_from_string(value)
            elif key == "note":
                kwargs["note"] = value
            else:
                raise ConfigError("grid", f"unknown grid key {key!r}")
        points.append(ParamPoint(**kwargs))
    if not points:
        raise ConfigError("grid", "empty grid")
    return tuple(points)


def _run_hunt(config: RunConfig) -> int:
    if config.claim is None:
        raise ConfigError("claim", "hunt requires --claim")
    if not config.n_values:
        raise ConfigError("n", "hunt requires --n")
    filters = GraphFilters(
        connected=config.connected, delta_exact=config.delta,
        delta_min=config.delta_min, delta_max=config.delta_max,
        kd_minus_e_free=config.kd_free, omega_min=config.omega_min,
        omega_max=config.omega_max)
    grid = _parse_grid(config)
    try:
        task = HuntTask(claim=config.claim, n_values=tuple(config.n_values),
                        filters=filters, grid=grid, dedup=config.dedup,
                        sample=config.sample,
                        seed=config.seed if config.sample is not None else None)
    except RangeExceeded as exc:
        sys.stderr.write(f"range exceeded: {exc}\n")
        return EXIT_BUDGET
    except FreesplitError as exc:
        raise ConfigError("claim", str(exc)) from exc
    out = _out_dir(config)
    _log_config(out, config)
    sink_path = out / "hunt_records.ndjson" if out is not None else None
    if sink_path is not None and sink_path.exists():
        sink_path.unlink()
    summary = hunt(task, parallelism=config.workers, out=sink_path,
                   probe_engine=not config.no_engine)
    _emit(out, "hunt_summary.json", summary.to_json())
    theorem_claims = ("theorem1", "corollary1", "lemma2")
    if config.claim in theorem_claims and (
            summary.counterexample_candidates or summary.engine_gaps):
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def _run_enumerate(config: RunConfig) -> int:
    if not config.n_values:
        raise ConfigError("n", "enumerate requires --n")
    filters = GraphFilters(
        connected=config.connected, delta_exact=config.delta,
        delta_min=config.delta_min, delta_max=config.delta_max,
        kd_minus_e_free=config.kd_free, omega_min=config.omega_min,
        omega_max=config.omega_max)
    out = _out_dir(config)
    _log_config(out, config)
    lines = []
    try:
        for n in config.n_values:
            for g in enumerate_graphs(n, filters, dedup=config.dedup):
                lines.append(to_graph6(g) + "\n")
    except RangeExceeded as exc:
        sys.stderr.write(f"range exceeded: {exc}\n")
        return EXIT_BUDGET
    _emit(out, "graphs.g6", "".join(lines))
    return EXIT_OK


def _run_stats(config: RunConfig) -> int:
    g = _read_graph(config)
    stats: dict = {"n": g.n, "edges": g.edge_count}
    if g.n:
        dmin, dmax, _ = degrees(g)
        stats.update({
            "min_degree": dmin,
            "max_degree": dmax,
            "components": len(connected_components(g)),
            "clique_number": clique_number(g),
            "degeneracy": degeneracy(g)[0],
        })
    out = _out_dir(config)
    _log_config(out, config)
    _emit(out, "stats.json", json.dumps(stats, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Dispatch one run; returns the process exit code."""
    handlers = {
        "decompose": _run_decompose,
        "verify": _run_verify,
        "hunt": _run_hunt,
        "enumerate": _run_enumerate,
        "stats": _run_stats,
    }
    if config.command not in handlers:
        raise ConfigError("command", f"unknown command {config.command!r}")
    return handlers[config.command](config)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; keep 2 for checks
        raise ConfigError("usage", message)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freesplit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="replay a logged run_config.json")
        p.add_argument("--out", help="artifact directory (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget-nodes", type=int, default=DEFAULT_NODE_BUDGET)
        p.add_argument("--fallback-n", type=int, default=16)
        p.add_argument("--repair-cap", type=int, default=None)
        p.add_argument("--maximality-n", type=int, default=MAXIMALITY_CHECK_MAX_N)
        p.add_argument("--no-maximality", action="store_true")

    def add_graph_input(p):
        p.add_argument("--input", required=False, help="graph file or - for stdin")
        p.add_argument("--format", default="graph6",
                       choices=["graph6", "edge-list", "dimacs"])
        p.add_argument("--n", dest="declared_n", type=int, default=None,
                       help="vertex count for edge lists without a header")

    def add_filters(p):
        p.add_argument("--n", dest="n_values", type=_int_list, default=[],
                       help="vertex counts, e.g. 6,7")
        p.add_argument("--connected", action="store_true")
        p.add_argument("--delta", type=int, default=None)
        p.add_argument("--delta-min", type=int, default=None)
        p.add_argument("--delta-max", type=int, default=None)
        p.add_argument("--kd-free", action="store_true",
                       help="keep only hosts with no near-clique on max-degree vertices")
        p.add_argument("--omega-min", type=int, default=None)
        p.add_argument("--omega-max", type=int, default=None)
        p.add_argument("--dedup", action="store_true")

    d = sub.add_parser("decompose", help="run a decomposition pipeline")
    add_graph_input(d)
    d.add_argument("--mode", choices=MODES, default="two")
    d.add_argument("--family", help="clique:k | core:t | cycle-family | file:PATH")
    d.add_argument("--families", type=lambda s: s.split(","), default=[])
    d.add_argument("--p", type=int)
    d.add_argument("--q", type=int)
    d.add_argument("--ps", type=_int_list, default=[])
    add_common(d)

    v = sub.add_parser("verify", help="re-verify a serialized decomposition")
    add_graph_input(v)
    v.add_argument("--decomposition", dest="decomposition_path", required=False)
    v.add_argument("--mode", choices=MODES, default="two")
    v.add_argument("--family")
    v.add_argument("--families", type=lambda s: s.split(","), default=[])
    v.add_argument("--p", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--ps", type=_int_list, default=[])
    add_common(v)

    h = sub.add_parser("hunt", help="probe a claim over filtered hosts")
    h.add_argument("--claim", choices=["theorem1", "corollary1", "lemma2",
                                       "problem1", "problem2"])
    add_filters(h)
    h.add_argument("--grid", help="semicolon-separated points, e.g. "
                                  "'p=3,q=3,family=clique:3;p=2,q=4,family=clique:2'")
    h.add_argument("--exhaustive", action="store_true",
                   help="sweep every filtered host (default)")
    h.add_argument("--sample", type=int, default=None,
                   help="random hosts per n instead of the full sweep")
    h.add_argument("--workers", type=int, default=1)
    h.add_argument("--no-engine", action="store_true",
                   help="record oracle verdicts only")
    add_common(h)

    e = sub.add_parser("enumerate", help="stream filtered labeled graphs as graph6")
    add_filters(e)
    add_common(e)

    s = sub.add_parser("stats", help="basic graph statistics")
    add_graph_input(s)
    add_common(s)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if getattr(args, "config", None):
        data = json.loads(Path(args.config).read_text())
        return RunConfig.from_dict(data)
    fields = RunConfig.__dataclass_fields__
    data = {}
    for key, value in vars(args).items():
        if key == "config":
            continue
        if key == "no_maximality":
            data["check_maximality"] = not value
            continue
        if key == "exhaustive":
            continue
        if key == "input":
            data["input_path"] = value
            continue
        if key == "format":
            data["input_format"] = value
            continue
        if key in fields and value is not None:
            data[key] = value
    return RunConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
        code = run(config)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except FreesplitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    return code


if __name__ == "__main__":
    sys.exit(main())
