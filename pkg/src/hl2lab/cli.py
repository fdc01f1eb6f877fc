"""Command-line entry point: ``hl2lab {lift,walk,coherence,structural,spectrum,report}``.

Exit codes: 0 ok, 2 configuration error, 3 budget exceeded, 4 numerical
failure, 5 lift-spectrum verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

import numpy as np

from hl2lab import __version__
from hl2lab.coherence import CoherenceReport, coherence_report
from hl2lab.config import RunConfig, build_config, parse_base_spec
from hl2lab.ctqw import WalkSeries, default_grid, return_series, series_stats
from hl2lab.errors import (
    BudgetExceeded,
    ConvergenceFailure,
    HL2Error,
    InvalidParams,
    NotNormalized,
    ParseError,
)
from hl2lab.analysis import bfs_sample
from hl2lab.graph import Graph
from hl2lab.graphio import serialize_graph
from hl2lab.lift import TowerSummary, hl2_lift, hl2_tower
from hl2lab.spectral import (
    distinct_eigenvalues,
    full_spectrum,
    predict_lift_spectrum,
    predict_tower_spectrum,
    top_k_eigenpairs,
)
from hl2lab.structural import StructuralReport, structural_report

log = logging.getLogger("hl2lab")

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4, 5
RULE_TOL = 1e-8


class VerificationFailed(HL2Error):
    pass


# -- output helpers ------------------------------------------------------------


class Writer:
    """Writes data files into ``cfg.out`` with a version/config-hash header."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.written: list[Path] = []

    @property
    def stamp(self) -> str:
        return f"hl2lab {__version__} config={self.cfg.digest()}"

    def _put(self, name: str, text: str) -> Path:
        path = self.dir / name
        path.write_bytes(text.encode("utf-8"))
        self.written.append(path)
        return path

    def csv(self, name: str, header: list[str], rows: list[list[Any]]) -> Path:
        lines = [f"# {self.stamp}", ",".join(header)]
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
        return self._put(name, "\n".join(lines) + "\n")

    def text(self, name: str, body: str, comment: str = "#") -> Path:
        close = " -->" if comment == "<!--" else ""
        return self._put(name, f"{comment} {self.stamp}{close}\n{body}")

    def json(self, name: str, payload: Any) -> Path:
        doc = {"meta": {"artifact": "hl2lab", "version": __version__,
                        "config_hash": self.cfg.digest()},
               "data": payload}
        return self._put(name, json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _fmt_eigs(values: list[float]) -> str:
    return ";".join(_cell(int(v)) if float(v).is_integer() else _cell(v) for v in values)


# -- shared steps --------------------------------------------------------------


def _tower(cfg: RunConfig, levels: int) -> tuple[list[Graph], TowerSummary]:
    base = parse_base_spec(cfg.base, cfg.seed)
    return hl2_tower(base, levels, budget=cfg.budget)


def _walk_target(g: Graph, cfg: RunConfig) -> tuple[Graph, int]:
    """Graph and start vertex for a walk, sampling when a cap is requested."""
    if cfg.sample is not None and g.n > cfg.sample:
        sub, _ = bfs_sample(g, cfg.sample, cfg.seed)
        return sub, 0
    if g.n > cfg.walk_budget:
        raise BudgetExceeded(f"{g.n} vertices exceeds walk budget {cfg.walk_budget}; pass --sample N")
    if not 0 <= cfg.start < g.n:
        raise InvalidParams(f"start vertex {cfg.start} outside 0..{g.n - 1}")
    return g, cfg.start


def _grid(cfg: RunConfig, level: int) -> tuple[float, int]:
    T, steps = default_grid(level)
    return (cfg.T if cfg.T is not None else T, cfg.steps if cfg.steps is not None else steps)


def _coherence_rows(cfg: RunConfig, graphs: list[Graph]) -> tuple[list[CoherenceReport], list[WalkSeries]]:
    rows, walks = [], []
    for r, g in enumerate(graphs):
        target, start = _walk_target(g, cfg)
        T, steps = _grid(cfg, r)
        rep = coherence_report(g, cfg.k, level=r, walk=False, threshold=cfg.threshold,
                               tie_break=cfg.tie_break, trace_mode=cfg.trace_mode,
                               lc_divisor=cfg.lc_divisor, dense_cutoff=cfg.dense_cutoff)
        series = return_series(target, start, T, steps)
        rep.walk = series_stats(series, t_min=cfg.t_min)
        rows.append(rep)
        walks.append(series)
        log.info("coherence level %d: n=%d ipr=%.4g rel=%.4g", r, g.n, rep.avg_ipr, rep.rel_entropy)
    return rows, walks


# -- commands ------------------------------------------------------------------


TOWER_HEADER = ["level", "vertices", "edges", "degree", "components", "predicted", "recurrence_ok"]


def _tower_rows(summary: TowerSummary, predicted=()) -> list[list[Any]]:
    rows = [[r[h] for h in TOWER_HEADER] for r in summary.rows()]
    for p in predicted:
        deg = p.degree if p.regular else f"{p.degree_min}-{p.degree_max}"
        rows.append([p.level, p.n, p.m, deg, "", True, True])
    return rows


def cmd_lift(cfg: RunConfig, w: Writer) -> int:
    try:
        graphs, summary = _tower(cfg, cfg.levels)
        predicted = []
        code = EXIT_OK
    except BudgetExceeded as exc:
        graphs, summary = exc.built
        predicted = exc.predicted
        code = EXIT_BUDGET
        print(f"budget exceeded: {exc}", file=sys.stderr)
    for r, g in enumerate(graphs):
        w.text(f"level_{r}.edges", serialize_graph(g))
    rows = _tower_rows(summary, predicted)
    w.csv("tower.csv", TOWER_HEADER, rows)
    for row in rows:
        print("  ".join(f"{h}={_cell(v)}" for h, v in zip(TOWER_HEADER, row)))
    return code


def cmd_walk(cfg: RunConfig, w: Writer) -> int:
    level = cfg.level if cfg.level is not None else 0
    graphs, _ = _tower(cfg, level)
    target, start = _walk_target(graphs[level], cfg)
    T, steps = _grid(cfg, level)
    series = return_series(target, start, T, steps)
    stats = series_stats(series, t_min=cfg.t_min)
    w.text(f"walk_level{level}.csv", series.to_csv())
    w.json(f"walk_level{level}_stats.json",
           {**stats.to_dict(), "level": level, "n": target.n, "graph": graphs[level].label,
            "sampled": target is not graphs[level], "T": T, "steps": steps})
    print(json.dumps(_jsonable(stats.to_dict()), sort_keys=True))
    return EXIT_OK


COHERENCE_HEADER = ["Lift", "Nodes", "IPR", "Purity", "Rel. Entropy", "Mean Return", "Peak", "Std Dev"]
LC_HEADER = ["Lift", "Nodes", "Log Coherence", "Avg IPR", "Rel. Entropy", "Mean Return"]


def _write_coherence(rows: list[CoherenceReport], w: Writer) -> None:
    w.csv("coherence.csv", COHERENCE_HEADER,
          [[r.level, r.n, r.avg_ipr, r.purity, r.rel_entropy, r.walk.mean, r.walk.peak, r.walk.std]
           for r in rows])
    w.csv("log_coherence.csv", LC_HEADER,
          [[r.level, r.n, r.log_coherence, r.avg_ipr, r.rel_entropy, r.walk.mean] for r in rows])
    w.json("coherence.json", [r.to_dict() for r in rows])


def cmd_coherence(cfg: RunConfig, w: Writer) -> int:
    graphs, _ = _tower(cfg, cfg.levels)
    rows, _ = _coherence_rows(cfg, graphs)
    _write_coherence(rows, w)
    for r in rows:
        print(json.dumps(_jsonable(r.to_dict()), sort_keys=True))
    return EXIT_OK


STRUCT_HEADER = ["Lift Level", "Vertices", "Edges", "Tr(A4)", "Tr(A4)/n", "Avg Clust.",
                 "Triangles", "Triangles/Vertex"]


def _struct_rows(graphs: list[Graph]) -> list[StructuralReport]:
    return [structural_report(g) for g in graphs]


def _write_structural(reports: list[StructuralReport], w: Writer) -> None:
    w.csv("structural.csv", STRUCT_HEADER,
          [[r_i, s.n, s.m, s.trace_a4, s.trace_a4_per_vertex, s.avg_clustering,
            s.triangle_count, s.triangles_per_vertex] for r_i, s in enumerate(reports)])
    w.json("structural.json", [{"level": i, **s.to_dict()} for i, s in enumerate(reports)])


def cmd_structural(cfg: RunConfig, w: Writer) -> int:
    graphs, _ = _tower(cfg, cfg.levels)
    reports = _struct_rows(graphs)
    _write_structural(reports, w)
    for i, s in enumerate(reports):
        print(f"level={i} " + " ".join(f"{k}={_cell(v)}" for k, v in s.to_dict().items()
                                        if k != "clustering_convention"))
    return EXIT_OK


SPECTRUM_HEADER = ["level", "distinct_eigenvalues", "min_eig", "max_eig", "integer_spectrum", "source"]


def _spectrum_table(cfg: RunConfig) -> tuple[list[list[Any]], list[list[Any]]]:
    base = parse_base_spec(cfg.base, cfg.seed)
    d = base.regular_degree()
    rows: list[list[Any]] = []
    rule_rows: list[list[Any]] = []

    def add(level: int, values: np.ndarray, source: str) -> None:
        distinct = distinct_eigenvalues(values)
        integer = all(float(v).is_integer() for v in distinct)
        rows.append([level, _fmt_eigs(distinct), float(np.min(values)), float(np.max(values)),
                     integer, source])

    if cfg.predict_only:
        if d is None:
            raise InvalidParams("prediction needs a regular base graph")
        spec = full_spectrum(base, dense_cutoff=cfg.dense_cutoff).values
        add(0, spec, "dense")
        for r, vals in enumerate(predict_tower_spectrum(spec, d, base.n, base.m, cfg.levels), 1):
            add(r, vals, "predicted")
        return rows, rule_rows

    graphs = [base]
    cur = base
    last_dense = None
    for r in range(cfg.levels + 1):
        if r > 0:
            # regular levels beyond the dense cutoff are predicted instead of built
            if 2 * cur.m > cfg.budget or (2 * cur.m > cfg.dense_cutoff and cur.regular_degree() is not None):
                break
            cur = hl2_lift(cur)
            graphs.append(cur)
        if cur.n <= cfg.dense_cutoff:
            last_dense = (r, full_spectrum(cur, dense_cutoff=cfg.dense_cutoff).values)
            add(r, last_dense[1], "dense")
        else:
            es = top_k_eigenpairs(cur, cfg.k, tie_break=cfg.tie_break, dense_cutoff=cfg.dense_cutoff)
            add(r, es.values, f"top-{cfg.k}")
    built = len(rows) - 1
    if built < cfg.levels and last_dense is not None:
        r0, spec = last_dense
        g0 = graphs[r0]
        d0 = g0.regular_degree()
        if d0 is not None:
            for r, vals in enumerate(predict_tower_spectrum(spec, d0, g0.n, g0.m, cfg.levels - r0), r0 + 1):
                if r > built:
                    add(r, vals, "predicted")

    if cfg.verify_rule:
        for r in range(max(cfg.levels, 1)):
            g = graphs[r] if r < len(graphs) else None
            if g is None or g.regular_degree() is None or g.m == 0 or 2 * g.m > cfg.dense_cutoff:
                continue
            lifted = graphs[r + 1] if r + 1 < len(graphs) else hl2_lift(g)
            actual = full_spectrum(lifted, dense_cutoff=cfg.dense_cutoff).values
            spec = full_spectrum(g, dense_cutoff=cfg.dense_cutoff).values
            pred = predict_lift_spectrum(spec, g.regular_degree(), g.n, g.m)
            dev = float(np.max(np.abs(np.sort(pred) - np.sort(actual))))
            row = [r, r + 1, dev, dev <= RULE_TOL]
            if cfg.verbose:
                alt = predict_lift_spectrum(spec, g.regular_degree(), g.n, g.m, variant="displayed")
                row.append(_fmt_eigs(distinct_eigenvalues(alt)))
            rule_rows.append(row)
    return rows, rule_rows


def cmd_spectrum(cfg: RunConfig, w: Writer) -> int:
    rows, rule_rows = _spectrum_table(cfg)
    w.csv("spectrum.csv", SPECTRUM_HEADER, rows)
    for row in rows:
        print(f"level {row[0]} [{row[5]}]: {{{row[1].replace(';', ', ')}}}")
    if cfg.verify_rule:
        header = ["base_level", "lift_level", "max_deviation", "match"]
        if cfg.verbose:
            header.append("displayed_rule_distinct")
        w.csv("spectrum_rule.csv", header, rule_rows)
        worst = max((r[2] for r in rule_rows), default=0.0)
        print(f"lift-spectrum rule: {len(rule_rows)} checks, max deviation {worst:.3e}")
        if any(not r[3] for r in rule_rows):
            raise VerificationFailed(f"lift-spectrum rule mismatch, max deviation {worst:.3e}")
    return EXIT_OK


def cmd_report(cfg: RunConfig, w: Writer) -> int:
    code = cmd_lift(cfg, w)
    if code != EXIT_OK:
        return code
    graphs, summary = _tower(cfg, cfg.levels)
    spec_rows, _ = _spectrum_table(cfg)
    w.csv("spectrum.csv", SPECTRUM_HEADER, spec_rows)
    structs = _struct_rows(graphs)
    _write_structural(structs, w)
    coh, walks = _coherence_rows(cfg, graphs)
    _write_coherence(coh, w)
    for r, series in enumerate(walks):
        w.text(f"walk_level{r}.csv", series.to_csv())

    def table(header: list[str], rows: list[list[Any]]) -> str:
        out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        out += ["| " + " | ".join(_short(v) for v in row) + " |" for row in rows]
        return "\n".join(out)

    md = [f"# HL'2 tower report: `{cfg.base}`", "", f"Config hash `{cfg.digest()}`, hl2lab {__version__}.", "",
          "## Tower sizes", "", table(TOWER_HEADER, _tower_rows(summary)), "",
          "Edge counts follow E = V * d / 2. For the K4 tower this gives 881,280 edges at level 5; "
          "the sometimes quoted 1,762,560 is twice that, which is the vertex count of level 6.", "",
          "## Distinct adjacency eigenvalues", "", table(SPECTRUM_HEADER, spec_rows), "",
          "## Structural indicators", "",
          table(STRUCT_HEADER, [[i, s.n, s.m, s.trace_a4, s.trace_a4_per_vertex, s.avg_clustering,
                                 s.triangle_count, s.triangles_per_vertex] for i, s in enumerate(structs)]),
          "", "## Coherence metrics", "",
          table(COHERENCE_HEADER + ["Log Coherence", "Revival Peak", "Basis Sensitive"],
                [[r.level, r.n, r.avg_ipr, r.purity, r.rel_entropy, r.walk.mean, r.walk.peak, r.walk.std,
                  r.log_coherence, r.walk.revival_peak, r.basis_sensitive] for r in coh]),
          "", f"Density matrices use trace mode `{cfg.trace_mode}` with tie-break `{cfg.tie_break}`; "
          "rows flagged basis sensitive depend on the eigenbasis chosen inside degenerate eigenspaces.",
          f"Peak includes t = 0; revival peak is the maximum over t >= {cfg.t_min:g}.",
          "Return-probability series: `walk_level<r>.csv`.", ""]
    w.text("report.md", "\n".join(md), comment="<!--")
    print(f"report written to {w.dir / 'report.md'}")
    return EXIT_OK


def _short(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.4g}"
    return _cell(v)


COMMANDS = {
    "lift": cmd_lift,
    "walk": cmd_walk,
    "coherence": cmd_coherence,
    "structural": cmd_structural,
    "spectrum": cmd_spectrum,
    "report": cmd_report,
}


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", help="flat key = value config file")
    g.add_argument("--out", help="output directory (default: out)")
    g.add_argument("--seed", type=int)
    g.add_argument("--budget", type=int, help="max vertices for tower construction")
    g.add_argument("--walk-budget", type=int, help="max vertices for an unsampled walk")
    g.add_argument("--dense-cutoff", type=int, help="max vertices for dense eigensolves")
    g.add_argument("--sample", type=int, help="BFS-sample walks down to N vertices")
    g.add_argument("--k", type=int, help="number of top eigenstates")
    g.add_argument("--tie-break", choices=["positive", "negative"])
    g.add_argument("--trace-mode", choices=["paper", "unit"])
    g.add_argument("--t-min", type=float, help="start of the revival-peak window")
    g.add_argument("--base", help="complete:n | petersen | cycle:n | rr:d,n,seed | er:n,p,seed | file:path")
    g.add_argument("--levels", type=int)
    g.add_argument("--level", type=int, help="tower level for walk")
    g.add_argument("--T", type=float, dest="T", help="walk horizon")
    g.add_argument("--steps", type=int, help="walk grid points")
    g.add_argument("--start", type=int, help="walk start vertex")
    g.add_argument("--threshold", type=float, help="support threshold for log coherence")
    g.add_argument("--lc-divisor", choices=["used", "requested"])
    g.add_argument("--verify-rule", action="store_const", const=True)
    g.add_argument("--predict-only", action="store_const", const=True)
    g.add_argument("-v", "--verbose", action="store_const", const=True)

    parser = argparse.ArgumentParser(prog="hl2lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hl2lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "lift": "build a lift tower and write per-level edge lists",
        "walk": "return-probability series for one tower level",
        "coherence": "coherence metric table per tower level",
        "structural": "closed-walk and triangle table per tower level",
        "spectrum": "distinct eigenvalues per level, optional lift-rule check",
        "report": "run everything and write a markdown + CSV bundle",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = build_config(args.config, overrides)
    except (InvalidParams, ParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if cfg.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    w = Writer(cfg)
    try:
        return COMMANDS[args.command](cfg, w)
    except (InvalidParams, ParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        for p in exc.predicted:
            print(f"  predicted level={p.level} vertices={p.n} edges={p.m}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConvergenceFailure, NotNormalized) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
