"""Pure-Python enumeration kernel.

Direct placement: keep a set of open triangle slots (a side of a segment
that still needs a triangle), always fill the most recently opened slot,
and branch over the unimodular third points that do not cross an existing
edge.  Every partial state is completable, so the search has no dead ends
and each leaf is a distinct unimodular triangulation.

The compiled kernel in ``_kernel.pyx`` implements the same algorithm and
the same skeleton code; the two must agree leaf for leaf.
"""

from __future__ import annotations

from typing import Callable, Optional

from ._geometry import PointConfiguration

Triangle = tuple[int, int, int]


class _Search:
    def __init__(self, cfg: PointConfiguration) -> None:
        self.cfg = cfg
        nseg = len(cfg.segments)
        self.present = [False] * nseg
        self.owner = [-1] * (2 * nseg)
        self.filled = [False] * (2 * nseg)
        self.cross_sets = [set(c) for c in cfg.crossings]
        self.open: list[int] = []
        self.triangles: list[Triangle] = []
        self.tri_slots: list[tuple[int, int, int]] = []
        seg_id = cfg.seg_id
        for slot in cfg.boundary_slots:
            s = slot >> 1
            self.present[s] = True
            outside = slot ^ 1
            self.filled[outside] = True
            self.open.append(slot)
        self.seg_id = seg_id
        self.target = cfg.polygon.area2

    def slot(self, a: int, b: int) -> int:
        if a < b:
            return 2 * self.seg_id[(a, b)]
        return 2 * self.seg_id[(b, a)] + 1

    def _crosses(self, s: int) -> bool:
        present = self.present
        return any(present[t] for t in self.cross_sets[s])

    def run(self, leaf: Callable[[], bool]) -> bool:
        """Depth-first search; ``leaf`` returns False to abort."""
        open_ = self.open
        stale = []
        while open_ and self.filled[open_[-1]]:
            stale.append(open_.pop())
        if not open_:
            result = leaf()
            open_.extend(reversed(stale))
            return result
        slot = open_.pop()
        cfg = self.cfg
        segs = cfg.segments
        s = slot >> 1
        i, j = segs[s]
        a, b = (i, j) if slot & 1 == 0 else (j, i)
        for c in cfg.thirds[slot]:
            s_bc = self.slot(b, c)
            s_ca = self.slot(c, a)
            new_edges = []
            ok = True
            for sl in (s_bc, s_ca):
                seg = sl >> 1
                if self.present[seg]:
                    if self.filled[sl]:
                        ok = False
                        break
                else:
                    if self._crosses(seg):
                        ok = False
                        break
                    new_edges.append(sl)
            if not ok:
                continue
            # apply
            t = len(self.triangles)
            self.triangles.append((a, b, c))
            self.tri_slots.append((slot, s_bc, s_ca))
            for sl in (slot, s_bc, s_ca):
                self.filled[sl] = True
                self.owner[sl] = t
            mark = len(open_)
            for sl in new_edges:
                self.present[sl >> 1] = True
                open_.append(sl ^ 1)
            cont = self.run(leaf)
            # undo
            del open_[mark:]
            for sl in new_edges:
                self.present[sl >> 1] = False
            for sl in (slot, s_bc, s_ca):
                self.filled[sl] = False
                self.owner[sl] = -1
            self.triangles.pop()
            self.tri_slots.pop()
            if not cont:
                break
        else:
            cont = True
        open_.append(slot)
        open_.extend(reversed(stale))
        return cont

    # -- skeleton ---------------------------------------------------------
    def neighbours(self) -> list[list[int]]:
        owner = self.owner
        return [[owner[sl ^ 1] for sl in slots] for slots in self.tri_slots]


def skeleton_code(nbrs: list[list[int]]) -> bytes:
    """Canonical code of the embedded skeleton of a triangulation's dual.

    ``nbrs[t]`` lists the triangles across the three edges of triangle t in
    counterclockwise order (-1 on the boundary).  The code is the
    lexicographically least breadth-first map code over all starting darts
    and both orientations, so mirror images coincide.  Genus 0 gives b"",
    genus 1 gives b"\\x00".
    """
    n = len(nbrs)
    alive = [True] * n
    deg = [sum(1 for u in row if u >= 0) for row in nbrs]
    stack = [t for t in range(n) if deg[t] <= 1]
    while stack:
        t = stack.pop()
        if not alive[t]:
            continue
        alive[t] = False
        for u in nbrs[t]:
            if u >= 0 and alive[u]:
                deg[u] -= 1
                if deg[u] <= 1:
                    stack.append(u)
    branch = [t for t in range(n) if alive[t] and deg[t] == 3]
    if not any(alive):
        return b""
    if not branch:
        return b"\x00"
    label = {t: i for i, t in enumerate(branch)}
    nv = len(branch)
    twin = [0] * (3 * nv)
    for v, t in enumerate(branch):
        for k in range(3):
            prev, cur = t, nbrs[t][k]
            while cur not in label:
                row = nbrs[cur]
                nxt = -1
                for u in row:
                    if u >= 0 and alive[u] and u != prev:
                        nxt = u
                        break
                prev, cur = cur, nxt
            # position of the arriving edge at the branch triangle
            kw = nbrs[cur].index(prev)
            twin[3 * v + k] = 3 * label[cur] + kw
    return map_code(nv, twin)


def map_code(nv: int, twin: list[int]) -> bytes:
    best: Optional[list[int]] = None
    for orient in (1, 2):
        for d0 in range(3 * nv):
            lab = [-1] * nv
            first = [0] * nv
            v0 = d0 // 3
            lab[v0] = 0
            first[v0] = d0
            order = [v0]
            code: list[int] = []
            qi = 0
            worse = False
            while qi < len(order):
                v = order[qi]
                qi += 1
                d = first[v]
                for _ in range(3):
                    e = twin[d]
                    w = e // 3
                    if lab[w] < 0:
                        lab[w] = len(order)
                        first[w] = e
                        order.append(w)
                    pos = ((e % 3 - first[w] % 3) * (1 if orient == 1 else -1)) % 3
                    code.append(lab[w])
                    code.append(pos)
                    d = 3 * v + (d % 3 + orient) % 3
                if best is not None and not worse:
                    pre = best[: len(code)]
                    if code > pre:
                        worse = True
                        break
            if worse:
                continue
            if best is None or code < best:
                best = code
    assert best is not None
    return bytes([nv] + best)


def count(cfg: PointConfiguration) -> int:
    search = _Search(cfg)
    total = 0

    def leaf() -> bool:
        nonlocal total
        total += 1
        return True

    search.run(leaf)
    return total


def enumerate_triangulations(
    cfg: PointConfiguration, visit: Callable[[list[Triangle]], Optional[bool]]
) -> int:
    search = _Search(cfg)
    total = 0

    def leaf() -> bool:
        nonlocal total
        total += 1
        return visit(list(search.triangles)) is not False

    search.run(leaf)
    return total


def scan_skeletons(
    cfg: PointConfiguration,
    done: set,
    counts: Optional[dict],
    callback: Callable[[bytes, list[Triangle], int], bool],
) -> int:
    """Visit every triangulation, keyed by its skeleton code.

    ``callback(code, triangles, index)`` runs only for codes not yet in
    ``done``; a truthy return adds the code to ``done``.
    """
    search = _Search(cfg)
    total = 0

    def leaf() -> bool:
        nonlocal total
        code = skeleton_code(search.neighbours())
        if counts is not None:
            counts[code] = counts.get(code, 0) + 1
        if code not in done:
            if callback(code, list(search.triangles), total):
                done.add(code)
        total += 1
        return True

    search.run(leaf)
    return total
