"""The census of troplanar graphs of a given genus.

For every maximal nonhyperelliptic polygon of genus g the kernel walks all
unimodular triangulations and reports each new embedded skeleton code; the
code is turned into an isomorphism certificate, and the first triangulation
of each certificate that passes the regularity test is recorded as its
provenance for that polygon.  Chains (the lattice-width-2 contribution) are
added directly.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from ._geometry import prepare
from ._kernels import kernel
from .criteria import (
    fails_bridge_deletion,
    is_crowded,
    is_planar,
    is_sprawling,
    is_tie_fighter,
)
from .graphs import Multigraph, chain, chain_count, chain_strings, enumerate_trivalent
from .lattice import (
    LatticePolygon,
    canonical_form,
    enumerate_maximal_nonhyperelliptic,
    lattice_width,
)
from .skeleton import code_to_graph
from .triangulation import Triangulation, is_regular

log = logging.getLogger(__name__)

MIN_GENUS, MAX_GENUS, LONG_RUN_GENUS = 2, 7, 7


class ResourceGuard(RuntimeError):
    """Raised when a request exceeds the configured limits."""


@dataclass
class Provenance:
    polygon: tuple  # canonical vertex tuple, or () for the chain construction
    triangulation_id: int  # leaf index in the kernel's enumeration order; -1 for chains
    lattice_width: int

    def to_dict(self) -> dict:
        return {
            "polygon": [list(v) for v in self.polygon],
            "triangulation_id": self.triangulation_id,
            "lattice_width": self.lattice_width,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        return cls(tuple(tuple(v) for v in d["polygon"]), d["triangulation_id"], d["lattice_width"])


@dataclass
class PolygonResult:
    polygon: tuple
    lattice_width: int
    triangulations: int
    found: dict[str, int]  # certificate -> triangulation id
    graphs: dict[str, str]  # certificate -> graph line
    lp_calls: int = 0
    seconds: float = 0.0


@dataclass
class CensusRecord:
    genus: int
    provenance: dict[str, list[Provenance]] = field(default_factory=dict)
    graphs: dict[str, Multigraph] = field(default_factory=dict)
    polygon_stats: list[dict] = field(default_factory=list)

    @property
    def certificates(self) -> list[str]:
        return sorted(self.provenance)

    def __len__(self) -> int:
        return len(self.provenance)

    def __contains__(self, cert: str) -> bool:
        return cert in self.provenance

    def add(self, cert: str, graph: Multigraph, prov: Provenance) -> None:
        self.graphs.setdefault(cert, graph)
        lst = self.provenance.setdefault(cert, [])
        if prov not in lst:
            lst.append(prov)

    def two_edge_connected(self) -> list[str]:
        return [c for c in self.certificates if not self.graphs[c].bridges]

    def from_hyperelliptic(self, cert: str) -> bool:
        return any(p.lattice_width == 2 for p in self.provenance.get(cert, []))

    def snapshot(self) -> dict:
        return {
            "genus": self.genus,
            "troplanar_count": len(self),
            "certificates": [
                {
                    "certificate": c,
                    "graph": self.graphs[c].to_line(),
                    "two_edge_connected": not self.graphs[c].bridges,
                    "from_hyperelliptic": self.from_hyperelliptic(c),
                    "provenance": [p.to_dict() for p in sorted(
                        self.provenance[c], key=lambda p: (p.polygon, p.triangulation_id))],
                }
                for c in self.certificates
            ],
        }

    def snapshot_bytes(self) -> bytes:
        return (json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":")) + "\n").encode()

    def snapshot_hash(self) -> str:
        return hashlib.sha256(self.snapshot_bytes()).hexdigest()


# -- per-polygon scan ---------------------------------------------------------

def scan_polygon(p: LatticePolygon, code_cache: Optional[dict] = None) -> PolygonResult:
    """Certificates realized by regular unimodular triangulations of ``p``."""
    t0 = time.time()
    cfg = prepare(p)
    cache = code_cache if code_cache is not None else {}
    found: dict[str, int] = {}
    graphs: dict[str, str] = {}
    lp_calls = 0

    def callback(code: bytes, tris, index: int) -> bool:
        nonlocal lp_calls
        entry = cache.get(code)
        if entry is None:
            g = code_to_graph(code)
            entry = cache[code] = (g.certificate, g.to_line())
        cert = entry[0]
        if cert in found:
            return True
        lp_calls += 1
        if is_regular(Triangulation.from_indices(p, cfg.points, tris)):
            found[cert] = index
            graphs[cert] = entry[1]
            return True
        return False

    n = kernel.scan_skeletons(cfg, set(), None, callback)
    return PolygonResult(p.vertices, lattice_width(p), n, found, graphs, lp_calls, time.time() - t0)


def _scan_worker(vertices: tuple) -> PolygonResult:
    return scan_polygon(LatticePolygon(vertices))


def replay(polygon: Iterable, triangulation_id: int) -> Triangulation:
    """Reproduce a stored provenance triangulation."""
    p = LatticePolygon(tuple(tuple(v) for v in polygon))
    cfg = prepare(p)
    hit: list = []

    def visit(tris):
        if len(hit) == triangulation_id:
            hit.append(tris)
            return False
        hit.append(None)
        return True

    kernel.enumerate_triangulations(cfg, visit)
    if len(hit) <= triangulation_id or hit[triangulation_id] is None:
        raise IndexError(f"triangulation {triangulation_id} does not exist")
    return Triangulation.from_indices(p, cfg.points, hit[triangulation_id])


# -- database -----------------------------------------------------------------

class CensusDatabase:
    """Append-only event log plus content-addressed snapshots.

    Layout under ``root``: ``events-g{g}.ndjson`` and
    ``snapshot-g{g}-{sha256[:16]}.json``.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def log_path(self, g: int) -> Path:
        return self.root / f"events-g{g}.ndjson"

    def append(self, g: int, event: dict) -> None:
        with open(self.log_path(g), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def events(self, g: int) -> list[dict]:
        path = self.log_path(g)
        if not path.exists():
            return []
        out = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    out.append(json.loads(line))
                except json.JSONDecodeError:
                    break  # torn final write from an interrupted run
        return out

    def finished_polygons(self, g: int) -> dict[tuple, PolygonResult]:
        """Completed polygon results recovered from the log."""
        pending: dict[tuple, PolygonResult] = {}
        done: dict[tuple, PolygonResult] = {}
        for ev in self.events(g):
            key = tuple(tuple(v) for v in ev.get("polygon", []))
            kind = ev["event"]
            if kind == "polygon_started":
                pending[key] = PolygonResult(key, ev["lattice_width"], 0, {}, {})
            elif kind == "certificate" and key in pending:
                pending[key].found[ev["certificate"]] = ev["triangulation_id"]
                pending[key].graphs[ev["certificate"]] = ev["graph"]
            elif kind == "polygon_finished" and key in pending:
                res = pending.pop(key)
                res.triangulations = ev["triangulations"]
                res.lp_calls = ev.get("lp_calls", 0)
                done[key] = res
        return done

    def record_polygon(self, g: int, res: PolygonResult) -> None:
        key = [list(v) for v in res.polygon]
        self.append(g, {"event": "polygon_started", "polygon": key, "lattice_width": res.lattice_width})
        for cert in sorted(res.found):
            self.append(g, {"event": "certificate", "polygon": key, "certificate": cert,
                            "graph": res.graphs[cert], "triangulation_id": res.found[cert]})
        self.append(g, {"event": "polygon_finished", "polygon": key,
                        "triangulations": res.triangulations, "lp_calls": res.lp_calls})

    def write_snapshot(self, rec: CensusRecord) -> Path:
        data = rec.snapshot_bytes()
        digest = hashlib.sha256(data).hexdigest()
        path = self.root / f"snapshot-g{rec.genus}-{digest[:16]}.json"
        path.write_bytes(data)
        return path


# -- the census ---------------------------------------------------------------

def check_genus(g: int, long_run: bool = False) -> None:
    if g < MIN_GENUS:
        raise ValueError(f"genus must be at least {MIN_GENUS}, got {g}")
    if g > MAX_GENUS:
        raise ResourceGuard(f"census supports genus {MIN_GENUS}..{MAX_GENUS}, got {g}")
    if g >= LONG_RUN_GENUS and not long_run:
        raise ResourceGuard(f"genus {g} is a long run; pass --long-run to proceed")


def _assemble(g: int, results: list[PolygonResult]) -> CensusRecord:
    rec = CensusRecord(g)
    for res in sorted(results, key=lambda r: r.polygon):
        for cert in sorted(res.found):
            rec.add(cert, Multigraph.from_line(res.graphs[cert]),
                    Provenance(res.polygon, res.found[cert], res.lattice_width))
        rec.polygon_stats.append({
            "polygon": [list(v) for v in res.polygon],
            "lattice_width": res.lattice_width,
            "triangulations": res.triangulations,
            "certificates": len(res.found),
            "lp_calls": res.lp_calls,
        })
    for bits in chain_strings(g):
        h = chain(bits)
        rec.add(h.certificate, h, Provenance((), -1, 2))
    return rec


def run_census(
    g: int,
    long_run: bool = False,
    threads: int = 1,
    db: Optional[CensusDatabase] = None,
    progress: Optional[Callable[[PolygonResult], None]] = None,
) -> CensusRecord:
    check_genus(g, long_run)
    polygons = [canonical_form(p).vertices for p in enumerate_maximal_nonhyperelliptic(g)]
    results: dict[tuple, PolygonResult] = {}
    if db is not None:
        results.update({k: v for k, v in db.finished_polygons(g).items() if k in set(polygons)})
    todo = [v for v in polygons if v not in results]

    def finish(res: PolygonResult) -> None:
        results[res.polygon] = res
        if db is not None:
            db.record_polygon(g, res)
        log.info("genus %d polygon %s: %d triangulations, %d certificates, %.1fs",
                 g, res.polygon, res.triangulations, len(res.found), res.seconds)
        if progress is not None:
            progress(res)

    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for res in pool.map(_scan_worker, todo):
                finish(res)
    else:
        cache: dict = {}
        for v in todo:
            finish(scan_polygon(LatticePolygon(v), cache))
    rec = _assemble(g, [results[v] for v in polygons])
    if db is not None:
        db.write_snapshot(rec)
    return rec


def replay_log(db: CensusDatabase, g: int) -> CensusRecord:
    """Rebuild the record from the event log alone."""
    polygons = [canonical_form(p).vertices for p in enumerate_maximal_nonhyperelliptic(g)]
    done = db.finished_polygons(g)
    missing = [v for v in polygons if v not in done]
    if missing:
        raise RuntimeError(f"log for genus {g} is incomplete: {len(missing)} polygons missing")
    return _assemble(g, [done[v] for v in polygons])


_RECORDS: dict[int, CensusRecord] = {}


def census(g: int, **kw) -> CensusRecord:
    """Memoized :func:`run_census` (for in-process reuse by reports)."""
    if g not in _RECORDS:
        _RECORDS[g] = run_census(g, **kw)
    return _RECORDS[g]


# -- hyperelliptic cross-check --------------------------------------------------

def hyperelliptic_maximal_polygons(g: int) -> list[LatticePolygon]:
    """Height-2 polygons with interior points (1,1)..(g,1), up to shear and flip."""
    out = []
    for t in range(0, g + 2):
        b0, b2 = g + 1 + t, g + 1 - t
        pts = [(0, 0), (b0, 0), (0, 2)]
        if b2 > 0:
            pts.append((b2, 2))
        p = LatticePolygon.from_points(pts)
        assert p.genus == g
        out.append(p)
    return out


def hyperelliptic_skeletons(g: int) -> set[str]:
    """Skeleton certificates over all triangulations of the polygons above."""
    certs: set[str] = set()
    for p in hyperelliptic_maximal_polygons(g):
        cfg = prepare(p)

        def cb(code, tris, index):
            certs.add(code_to_graph(code).certificate)
            return True

        kernel.scan_skeletons(cfg, set(), None, cb)
    return certs


# -- reports --------------------------------------------------------------------

def stratify_by_lattice_width(rec: CensusRecord) -> dict:
    strata = {"2": set(), "3": set(), ">=4": set()}
    minimum: dict[str, int] = {}
    for cert, provs in rec.provenance.items():
        widths = {p.lattice_width for p in provs}
        minimum[cert] = min(widths)
        for w in widths:
            strata["2" if w == 2 else "3" if w == 3 else ">=4"].add(cert)
    hist: dict[int, int] = {}
    for w in minimum.values():
        hist[w] = hist.get(w, 0) + 1
    counts = {k: len(v) for k, v in strata.items()}
    return {
        "genus": rec.genus,
        "troplanar_count": len(rec),
        "strata": counts,
        "strata_sum": sum(counts.values()),
        "minimum_width_histogram": {str(k): hist[k] for k in sorted(hist)},
        "chain_count": chain_count(rec.genus),
        "chains_also_nonhyperelliptic": sum(
            1 for c in strata["2"] if any(p.lattice_width > 2 for p in rec.provenance[c])),
    }


@dataclass
class BreakdownReport:
    genus: int
    total: int = 0
    troplanar: int = 0
    nonplanar: int = 0
    sprawling: int = 0
    crowded: int = 0
    both: int = 0
    tie_new: int = 0
    bridge_del_new: int = 0
    unresolved: int = 0
    unresolved_graphs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "genus", "total", "troplanar", "nonplanar", "sprawling", "crowded", "both",
            "tie_new", "bridge_del_new", "unresolved")} | {"unresolved_graphs": list(self.unresolved_graphs)}

    def consistent(self) -> bool:
        ruled = self.nonplanar + self.sprawling + self.crowded - self.both + self.tie_new + self.bridge_del_new
        return self.troplanar + ruled + self.unresolved == self.total


def breakdown_report(g: int, rec: CensusRecord, lower: dict[int, CensusRecord],
                     bounded_only: bool = True) -> BreakdownReport:
    """Classify every trivalent graph of genus g; ``lower`` holds records for smaller genera."""
    rep = BreakdownReport(g)

    def troplanar(h: Multigraph) -> Optional[bool]:
        r = lower.get(h.genus)
        return None if r is None else h.certificate in r

    for h in enumerate_trivalent(g):
        rep.total += 1
        if h.certificate in rec:
            rep.troplanar += 1
            continue
        if not is_planar(h):
            rep.nonplanar += 1
            continue
        s = is_sprawling(h)
        c = is_crowded(h, bounded_only)
        if s or c:
            rep.sprawling += s
            rep.crowded += c
            rep.both += s and c
            continue
        if is_tie_fighter(h):
            rep.tie_new += 1
        elif fails_bridge_deletion(h, troplanar):
            rep.bridge_del_new += 1
        else:
            rep.unresolved += 1
            rep.unresolved_graphs.append(h.to_line())
    return rep


def bound_report(rec: CensusRecord) -> dict:
    g = rec.genus
    t2 = len(rec.two_edge_connected())
    per_polygon = []
    for st in rec.polygon_stats:
        p = LatticePolygon(tuple(tuple(v) for v in st["polygon"]))
        bound = 2 ** (3 * g + p.boundary_count - 3)
        per_polygon.append({
            "polygon": st["polygon"],
            "r": p.boundary_count,
            "triangulations": st["triangulations"],
            "bound_2^(3g+r-3)": bound,
            "ok": st["triangulations"] <= bound,
        })
    strata = stratify_by_lattice_width(rec)["strata"]
    return {
        "genus": g,
        "troplanar_count": len(rec),
        "two_edge_connected_count": t2,
        "bridge_bound_2^(g-1)*T2": 2 ** (g - 1) * t2,
        "bridge_bound_ok": len(rec) <= 2 ** (g - 1) * t2,
        "triangulation_bounds": per_polygon,
        "stratified_sum": sum(strata.values()),
        "stratified_ok": sum(strata.values()) >= len(rec),
        "width3_strip_central_binomial": math.comb(g - 2, (g - 2) // 2),
    }
