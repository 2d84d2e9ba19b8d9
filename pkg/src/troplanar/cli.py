"""Command-line interface: ``troplanar <verb> [options]``.

Exit codes: 0 success, 1 error, 2 refused by a resource guard, 64 usage.
Reports are JSON on stdout (NDJSON for streams), validated against the
schemas shipped in ``troplanar/schemas``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

import jsonschema

from . import census as cz
from . import tiling
from .criteria import classify
from .export import export_dot
from .graphs import Multigraph, chain, dumbbell, loop_graph, theta
from .lattice import LatticePolygon, enumerate_maximal_nonhyperelliptic, lattice_width
from .triangulation import (
    Triangulation,
    enumerate_unimodular_triangulations,
    is_regular,
    orbit_counts,
)

log = logging.getLogger("troplanar")

EXIT_OK, EXIT_ERROR, EXIT_GUARD, EXIT_USAGE = 0, 1, 2, 64
MAX_TRIANGULATE_POINTS = 40


class UsageError(Exception):
    pass


@dataclass
class Config:
    genus: Optional[int] = None
    threads: int = 1
    db: Optional[str] = None
    long_run: bool = False
    symmetry_reduction: bool = False
    bounded_only: bool = True
    checkpoint_interval: float = 60.0

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.checkpoint_interval <= 0:
            raise UsageError("--checkpoint-interval must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        return cls(
            genus=getattr(args, "genus", None),
            threads=getattr(args, "threads", 1),
            db=os.environ.get("TROPLANAR_DB") or getattr(args, "db", None),
            long_run=getattr(args, "long_run", False),
            symmetry_reduction=getattr(args, "orbits", False),
            bounded_only=not getattr(args, "all_faces", False),
            checkpoint_interval=getattr(args, "checkpoint_interval", 60.0),
        )


# -- schemas --------------------------------------------------------------------

@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("troplanar").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(name: str, doc: dict) -> dict:
    jsonschema.validate(doc, load_schema(name))
    return doc


def emit(name: str, doc: dict, out) -> None:
    doc = {"schema": f"troplanar/{name}/1", **doc}
    validate(name, doc)
    out.write(json.dumps(doc, sort_keys=True) + "\n")


# -- helpers ----------------------------------------------------------------------

def _database(cfg: Config) -> Optional[cz.CensusDatabase]:
    return cz.CensusDatabase(cfg.db) if cfg.db else None


def _record(g: int, cfg: Config) -> cz.CensusRecord:
    """Census record for genus g, from a complete log when one exists."""
    db = _database(cfg)
    if db is not None:
        try:
            return cz.replay_log(db, g)
        except RuntimeError:
            pass
    return cz.run_census(g, long_run=cfg.long_run, threads=cfg.threads, db=db)


def _records_up_to(g: int, cfg: Config) -> dict[int, cz.CensusRecord]:
    return {h: _record(h, cfg) for h in range(cz.MIN_GENUS, g + 1)}


def parse_points(text: str) -> list[tuple[int, int]]:
    """Points as JSON (``[[0,0],[1,0],...]``) or ``x,y;x,y;...``."""
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["vertices"]
        return [tuple(int(c) for c in p) for p in data]
    return [tuple(int(c) for c in chunk.split(",")) for chunk in text.split(";") if chunk.strip()]


def _polygon_entry(p: LatticePolygon) -> dict:
    return {
        "vertices": [list(v) for v in p.vertices],
        "area2": p.area2,
        "boundary_points": p.boundary_count,
        "interior_points": p.genus,
        "lattice_width": lattice_width(p),
    }


def _graph_arg(args: argparse.Namespace) -> Multigraph:
    if args.named:
        return {"theta": theta, "dumbbell": dumbbell, "loop": loop_graph}[args.named]()
    if args.chain is not None:
        return chain(args.chain)
    if args.graph:
        return Multigraph.from_line(args.graph)
    raise UsageError("give --graph, --chain, --named or --triangulation")


# -- verbs ------------------------------------------------------------------------

def cmd_census(args, cfg: Config, out) -> int:
    g = args.genus
    cz.check_genus(g, cfg.long_run)
    rec = cz.run_census(g, long_run=cfg.long_run, threads=cfg.threads, db=_database(cfg))
    doc = {
        "genus": g,
        "troplanar_count": len(rec),
        "two_edge_connected_count": len(rec.two_edge_connected()),
        "chain_count": cz.chain_count(g),
        "snapshot_sha256": rec.snapshot_hash(),
        "polygons": rec.polygon_stats,
        "hyperelliptic_check": None,
    }
    if args.verify_hyperelliptic:
        found = cz.hyperelliptic_skeletons(g)
        chains = {chain(b).certificate for b in cz.chain_strings(g)}
        doc["hyperelliptic_check"] = {"skeletons": len(found), "chains": len(chains), "equal": found == chains}
    if args.certificates:
        doc["certificates"] = rec.snapshot()["certificates"]
    if args.table:
        out.write(f"genus {g}: troplanar {len(rec)}, 2-edge-connected {doc['two_edge_connected_count']}, "
                  f"chains {doc['chain_count']}\n")
        for st in rec.polygon_stats:
            out.write(f"  {st['polygon']}  lw={st['lattice_width']}  triangulations={st['triangulations']}"
                      f"  skeletons={st['certificates']}\n")
        return EXIT_OK
    emit("census", doc, out)
    return EXIT_OK


def cmd_breakdown(args, cfg: Config, out) -> int:
    g = args.genus
    cz.check_genus(g, cfg.long_run)
    recs = _records_up_to(g, cfg)
    rep = cz.breakdown_report(g, recs[g], recs, cfg.bounded_only)
    doc = rep.to_dict() | {"consistent": rep.consistent(), "bounded_faces_only": cfg.bounded_only}
    if args.table:
        keys = ["total", "troplanar", "nonplanar", "sprawling", "crowded", "both",
                "tie_new", "bridge_del_new", "unresolved"]
        out.write(" ".join(f"{k}={doc[k]}" for k in keys) + "\n")
        return EXIT_OK
    emit("breakdown", doc, out)
    return EXIT_OK


def cmd_stratify(args, cfg: Config, out) -> int:
    cz.check_genus(args.genus, cfg.long_run)
    emit("stratify", cz.stratify_by_lattice_width(_record(args.genus, cfg)), out)
    return EXIT_OK


def cmd_bounds(args, cfg: Config, out) -> int:
    cz.check_genus(args.genus, cfg.long_run)
    emit("bounds", cz.bound_report(_record(args.genus, cfg)), out)
    return EXIT_OK


def cmd_polygons(args, cfg: Config, out) -> int:
    g = args.genus
    if g < 2:
        raise ValueError("genus must be at least 2")
    if args.hyperelliptic:
        polys, kind = cz.hyperelliptic_maximal_polygons(g), "maximal_hyperelliptic"
    else:
        if g > cz.MAX_GENUS + 1:
            raise cz.ResourceGuard(f"polygon enumeration is capped at genus {cz.MAX_GENUS + 1}")
        polys, kind = enumerate_maximal_nonhyperelliptic(g), "maximal_nonhyperelliptic"
    emit("polygons", {"genus": g, "kind": kind, "count": len(polys),
                      "polygons": [_polygon_entry(p) for p in polys]}, out)
    return EXIT_OK


def cmd_triangulate(args, cfg: Config, out) -> int:
    p = LatticePolygon.from_points(parse_points(args.polygon))
    if len(p.lattice_points) > MAX_TRIANGULATE_POINTS:
        raise cz.ResourceGuard(f"polygon has more than {MAX_TRIANGULATE_POINTS} lattice points")
    ts = enumerate_unimodular_triangulations(p, regular_only=args.regular_only, method="placement")
    verts = [list(v) for v in p.vertices]
    if args.count or cfg.symmetry_reduction:
        items = list(ts)
        doc = {"polygon": verts, "count": len(items)}
        if not args.regular_only:
            doc["regular"] = sum(1 for t in items if is_regular(t))
        if cfg.symmetry_reduction:
            doc["orbits"] = orbit_counts(p, [t for t in items if args.regular_only or is_regular(t)])
        emit("triangulation-summary", doc, out)
        return EXIT_OK
    for i, t in enumerate(ts):
        if args.limit is not None and i >= args.limit:
            break
        emit("triangulation", {"index": i, "polygon": verts,
                               "triangles": [[list(q) for q in tri] for tri in t.key],
                               "regular": is_regular(t)}, out)
    return EXIT_OK


def cmd_classify(args, cfg: Config, out) -> int:
    lines = list(args.graph or [])
    if not lines:
        lines = [ln.strip() for ln in sys.stdin if ln.strip()]
    for line in lines:
        g = Multigraph.from_line(line)
        emit("classify", {"graph": g.to_line()} | classify(g, cfg.bounded_only), out)
    return EXIT_OK


def cmd_tiles(args, cfg: Config, out) -> int:
    if args.genus not in tiling.TILE_GENERA:
        raise ValueError("tiles exist in genus 2, 4 and 6")
    ts = tiling.derive_tiles(args.genus // 2)
    emit("tiles", {"genus": args.genus, "count": len(ts),
                   "bridgeless": sum(not t.bridged for t in ts),
                   "bridged": sum(t.bridged for t in ts),
                   "tiles": [t.to_dict() for t in ts]}, out)
    return EXIT_OK


def cmd_lower_bound(args, cfg: Config, out) -> int:
    known = {2: 2, 3: 4, 4: 13, 5: 38}
    rep = tiling.lower_bound_report(args.genus)
    if args.with_census and cz.MIN_GENUS <= args.genus <= cz.MAX_GENUS:
        cz.check_genus(args.genus, cfg.long_run)
        value = len(_record(args.genus, cfg))
        rep = tiling.lower_bound_report(args.genus, value)
    elif args.genus in known:
        rep = tiling.lower_bound_report(args.genus, known[args.genus])
    emit("lower-bound", rep, out)
    return EXIT_OK


def cmd_verify_tiling(args, cfg: Config, out) -> int:
    if args.n > tiling.MAX_VERIFY_N and not cfg.long_run:
        raise cz.ResourceGuard(f"verify-tiling is capped at n = {tiling.MAX_VERIFY_N} without --long-run")
    results = []
    for par in ("odd", "even"):
        r = tiling.verify_distinctness(args.n, par, check_regular=args.check_regular, limit=10 ** 9)
        r.pop("certificates")
        results.append(r)
    cf = tiling.closed_form_check(40)
    cf.pop("reconstruction")
    emit("verify-tiling", {"n": args.n, "results": results, "closed_form": cf}, out)
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_ERROR


def cmd_export_dot(args, cfg: Config, out) -> int:
    if args.triangulation:
        with open(args.triangulation, encoding="utf-8") as fh:
            text = fh.read().strip().splitlines()[0]
        data = json.loads(text)
        p = LatticePolygon.from_points(tuple(map(tuple, data["polygon"])))
        t = Triangulation.from_triangles(p, [tuple(map(tuple, tri)) for tri in data["triangles"]])
        out.write(export_dot(t, "T"))
        return EXIT_OK
    out.write(export_dot(_graph_arg(args)))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse's default exit code is 2, which we reserve
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--db", help="database directory (TROPLANAR_DB takes precedence)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--long-run", action="store_true", help="allow the genus-7 census")
    common.add_argument("--checkpoint-interval", type=float, default=60.0)
    common.add_argument("--log-level", default="WARNING")

    p = _Parser(prog="troplanar", description="Census of tropically planar graphs.")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("census", parents=[common], help="troplanar graphs of one genus")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--certificates", action="store_true", help="include the certificate list")
    s.add_argument("--verify-hyperelliptic", action="store_true")
    s.add_argument("--table", action="store_true", help="plain-text summary instead of JSON")

    s = sub.add_parser("breakdown", parents=[common], help="classify every trivalent graph")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--all-faces", action="store_true", help="count the outer face when testing crowdedness")
    s.add_argument("--table", action="store_true")

    for verb in ("stratify", "bounds"):
        s = sub.add_parser(verb, parents=[common])
        s.add_argument("--genus", type=int, required=True)

    s = sub.add_parser("polygons", parents=[common], help="maximal polygons of one genus")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--hyperelliptic", action="store_true")

    s = sub.add_parser("triangulate", parents=[common], help="unimodular triangulations of a polygon")
    s.add_argument("--polygon", required=True, help="'x,y;x,y;...' or a JSON list of points")
    s.add_argument("--regular-only", action="store_true")
    s.add_argument("--count", action="store_true")
    s.add_argument("--orbits", action="store_true", help="count orbits under the polygon's symmetries")
    s.add_argument("--limit", type=int)

    s = sub.add_parser("classify", parents=[common], help="run the obstruction tests on graphs")
    s.add_argument("--graph", action="append", help="graph line 'n m : u-v ...' (stdin if omitted)")
    s.add_argument("--all-faces", action="store_true")

    s = sub.add_parser("tiles", parents=[common])
    s.add_argument("--genus", type=int, required=True)

    s = sub.add_parser("lower-bound", parents=[common])
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--with-census", action="store_true", help="compare against a fresh census")

    s = sub.add_parser("verify-tiling", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--check-regular", action="store_true")

    s = sub.add_parser("export-dot", parents=[common])
    s.add_argument("--graph")
    s.add_argument("--chain", help="binary chain string")
    s.add_argument("--named", choices=["theta", "dumbbell", "loop"])
    s.add_argument("--triangulation", help="file holding one triangulation JSON line")
    return p


VERBS = {
    "census": cmd_census,
    "breakdown": cmd_breakdown,
    "stratify": cmd_stratify,
    "bounds": cmd_bounds,
    "polygons": cmd_polygons,
    "triangulate": cmd_triangulate,
    "classify": cmd_classify,
    "tiles": cmd_tiles,
    "lower-bound": cmd_lower_bound,
    "verify-tiling": cmd_verify_tiling,
    "export-dot": cmd_export_dot,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = Config.from_args(args)
        return VERBS[args.verb](args, cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"troplanar: {exc}\n")
        return EXIT_USAGE
    except cz.ResourceGuard as exc:
        sys.stderr.write(f"troplanar: refused: {exc}\n")
        return EXIT_GUARD
    except (ValueError, KeyError, OSError, RuntimeError, jsonschema.ValidationError) as exc:
        sys.stderr.write(f"troplanar: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
