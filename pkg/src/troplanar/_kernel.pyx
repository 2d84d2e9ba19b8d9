# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel.

Same algorithm and same skeleton code as ``_kernel_py``; see there for the
description.  State lives in fixed C arrays sized for polygons with at most
40 lattice points.
"""

from libc.stdint cimport uint64_t
from libc.string cimport memset, memcpy

DEF MAXP = 40
DEF MAXSEG = 1024
DEF WORDS = 16
DEF MAXT = 128
DEF MAXTHIRD = 65536
DEF MAXB = 64


cdef class _Search:
    cdef int npts, nseg, words, ntri, nopen
    cdef int seg_id[MAXP][MAXP]
    cdef int seg_a[MAXSEG]
    cdef int seg_b[MAXSEG]
    cdef uint64_t crossing[MAXSEG][WORDS]
    cdef uint64_t present[WORDS]
    cdef int third_start[2 * MAXSEG + 1]
    cdef int third_pts[MAXTHIRD]
    cdef char filled[2 * MAXSEG]
    cdef int owner[2 * MAXSEG]
    cdef int open_stack[4 * MAXSEG]
    cdef int tri[MAXT][3]
    cdef int tri_slot[MAXT][3]
    cdef long long leaves
    # skeleton scratch
    cdef int nb[MAXT][3]
    cdef int deg[MAXT]
    cdef char alive[MAXT]
    cdef int label[MAXT]
    cdef int branch[MAXB]
    cdef int twin[3 * MAXB]
    cdef int code_best[6 * MAXB]
    cdef int code_cur[6 * MAXB]
    cdef int nv
    cdef unsigned char codebuf[6 * MAXB + 1]
    cdef int codelen
    # callbacks
    cdef object visit
    cdef object done
    cdef object counts
    cdef object callback
    cdef int mode
    cdef bint stop

    def __init__(self, cfg):
        cdef int i, j, s, k, t
        self.npts = len(cfg.points)
        self.nseg = len(cfg.segments)
        if self.npts > MAXP or self.nseg > MAXSEG:
            raise ValueError("configuration too large for the compiled kernel")
        self.words = (self.nseg + 63) // 64
        for i in range(MAXP):
            for j in range(MAXP):
                self.seg_id[i][j] = -1
        for s, (i, j) in enumerate(cfg.segments):
            self.seg_id[i][j] = s
            self.seg_id[j][i] = s
            self.seg_a[s] = i
            self.seg_b[s] = j
        memset(self.crossing, 0, sizeof(self.crossing))
        for s in range(self.nseg):
            for t in cfg.crossings[s]:
                self.crossing[s][t >> 6] |= (<uint64_t>1) << (t & 63)
        k = 0
        for s in range(2 * self.nseg):
            self.third_start[s] = k
            for c in cfg.thirds[s]:
                if k >= MAXTHIRD:
                    raise ValueError("too many third points")
                self.third_pts[k] = c
                k += 1
        self.third_start[2 * self.nseg] = k
        memset(self.present, 0, sizeof(self.present))
        memset(self.filled, 0, sizeof(self.filled))
        for s in range(2 * self.nseg):
            self.owner[s] = -1
        self.nopen = 0
        for sl in cfg.boundary_slots:
            s = sl >> 1
            self.present[s >> 6] |= (<uint64_t>1) << (s & 63)
            self.filled[sl ^ 1] = 1
            self.open_stack[self.nopen] = sl
            self.nopen += 1
        self.ntri = 0
        self.leaves = 0
        self.stop = False

    cdef inline int slot_of(self, int a, int b):
        cdef int s = self.seg_id[a][b]
        if a < b:
            return 2 * s
        return 2 * s + 1

    cdef inline bint is_present(self, int s):
        return (self.present[s >> 6] >> (s & 63)) & 1

    cdef inline bint crosses(self, int s):
        cdef int w
        for w in range(self.words):
            if self.crossing[s][w] & self.present[w]:
                return True
        return False

    cdef int run(self) except -1:
        cdef int stale[256]
        cdef int nstale = 0
        cdef int slot, s, a, b, c, k, s_bc, s_ca, sl, seg, t, mark, nnew, q
        cdef int newe[2]
        cdef int three[3]
        cdef int two[2]
        cdef bint ok
        while self.nopen > 0 and self.filled[self.open_stack[self.nopen - 1]]:
            stale[nstale] = self.open_stack[self.nopen - 1]
            nstale += 1
            self.nopen -= 1
        if self.nopen == 0:
            self.leaf()
            for q in range(nstale - 1, -1, -1):
                self.open_stack[self.nopen] = stale[q]
                self.nopen += 1
            return 0
        self.nopen -= 1
        slot = self.open_stack[self.nopen]
        s = slot >> 1
        if slot & 1:
            a = self.seg_b[s]
            b = self.seg_a[s]
        else:
            a = self.seg_a[s]
            b = self.seg_b[s]
        for k in range(self.third_start[slot], self.third_start[slot + 1]):
            c = self.third_pts[k]
            s_bc = self.slot_of(b, c)
            s_ca = self.slot_of(c, a)
            nnew = 0
            ok = True
            two[0] = s_bc
            two[1] = s_ca
            for q in range(2):
                sl = two[q]
                seg = sl >> 1
                if self.is_present(seg):
                    if self.filled[sl]:
                        ok = False
                        break
                else:
                    if self.crosses(seg):
                        ok = False
                        break
                    newe[nnew] = sl
                    nnew += 1
            if not ok:
                continue
            t = self.ntri
            self.tri[t][0] = a
            self.tri[t][1] = b
            self.tri[t][2] = c
            self.tri_slot[t][0] = slot
            self.tri_slot[t][1] = s_bc
            self.tri_slot[t][2] = s_ca
            self.ntri += 1
            three[0] = slot
            three[1] = s_bc
            three[2] = s_ca
            for q in range(3):
                self.filled[three[q]] = 1
                self.owner[three[q]] = t
            mark = self.nopen
            for q in range(nnew):
                seg = newe[q] >> 1
                self.present[seg >> 6] |= (<uint64_t>1) << (seg & 63)
                self.open_stack[self.nopen] = newe[q] ^ 1
                self.nopen += 1
            self.run()
            self.nopen = mark
            for q in range(nnew):
                seg = newe[q] >> 1
                self.present[seg >> 6] &= ~((<uint64_t>1) << (seg & 63))
            for q in range(3):
                self.filled[three[q]] = 0
                self.owner[three[q]] = -1
            self.ntri -= 1
            if self.stop:
                break
        self.open_stack[self.nopen] = slot
        self.nopen += 1
        for q in range(nstale - 1, -1, -1):
            self.open_stack[self.nopen] = stale[q]
            self.nopen += 1
        return 0

    cdef list triangles(self):
        cdef int t
        return [(self.tri[t][0], self.tri[t][1], self.tri[t][2]) for t in range(self.ntri)]

    cdef int leaf(self) except -1:
        cdef bytes code
        if self.mode == 0:
            self.leaves += 1
            return 0
        if self.mode == 1:
            if self.visit(self.triangles()) is False:
                self.stop = True
            self.leaves += 1
            return 0
        self.skeleton_code()
        code = bytes(self.codebuf[:self.codelen])
        if self.counts is not None:
            self.counts[code] = self.counts.get(code, 0) + 1
        if code not in self.done:
            if self.callback(code, self.triangles(), self.leaves):
                self.done.add(code)
        self.leaves += 1
        return 0

    cdef void skeleton_code(self):
        cdef int n = self.ntri
        cdef int t, k, u, top, v, prev, cur, nxt, kw, anyalive
        cdef int stack[MAXT]
        for t in range(n):
            self.deg[t] = 0
            self.alive[t] = 1
            self.label[t] = -1
            for k in range(3):
                u = self.owner[self.tri_slot[t][k] ^ 1]
                self.nb[t][k] = u
                if u >= 0:
                    self.deg[t] += 1
        top = 0
        for t in range(n):
            if self.deg[t] <= 1:
                stack[top] = t
                top += 1
        while top > 0:
            top -= 1
            t = stack[top]
            if not self.alive[t]:
                continue
            self.alive[t] = 0
            for k in range(3):
                u = self.nb[t][k]
                if u >= 0 and self.alive[u]:
                    self.deg[u] -= 1
                    if self.deg[u] <= 1:
                        stack[top] = u
                        top += 1
        anyalive = 0
        self.nv = 0
        for t in range(n):
            if self.alive[t]:
                anyalive = 1
                if self.deg[t] == 3:
                    self.label[t] = self.nv
                    self.branch[self.nv] = t
                    self.nv += 1
        if not anyalive:
            self.codelen = 0
            return
        if self.nv == 0:
            self.codebuf[0] = 0
            self.codelen = 1
            return
        for v in range(self.nv):
            t = self.branch[v]
            for k in range(3):
                prev = t
                cur = self.nb[t][k]
                while self.label[cur] < 0:
                    nxt = -1
                    for kw in range(3):
                        u = self.nb[cur][kw]
                        if u >= 0 and self.alive[u] and u != prev:
                            nxt = u
                            break
                    prev = cur
                    cur = nxt
                kw = 0
                while self.nb[cur][kw] != prev:
                    kw += 1
                self.twin[3 * v + k] = 3 * self.label[cur] + kw
        map_code_c(self.nv, self.twin, self.code_best, self.code_cur)
        self.codebuf[0] = self.nv
        for k in range(6 * self.nv):
            self.codebuf[k + 1] = self.code_best[k]
        self.codelen = 6 * self.nv + 1


cdef void map_code_c(int nv, int* twin, int* best, int* cur) nogil:
    cdef int orient, d0, v0, qi, nq, v, d, i, e, w, pos, L, step, sign
    cdef int lab[MAXB]
    cdef int first[MAXB]
    cdef int order[MAXB]
    cdef bint have = False
    cdef int cmp
    for orient in range(1, 3):
        sign = 1 if orient == 1 else -1
        for d0 in range(3 * nv):
            for v in range(nv):
                lab[v] = -1
            v0 = d0 // 3
            lab[v0] = 0
            first[v0] = d0
            order[0] = v0
            nq = 1
            qi = 0
            L = 0
            cmp = 0  # -1: cur < best so far, 0: equal prefix
            while qi < nq:
                v = order[qi]
                qi += 1
                d = first[v]
                for i in range(3):
                    e = twin[d]
                    w = e // 3
                    if lab[w] < 0:
                        lab[w] = nq
                        first[w] = e
                        order[nq] = w
                        nq += 1
                    pos = (((e % 3) - (first[w] % 3)) * sign) % 3
                    if pos < 0:
                        pos += 3
                    cur[L] = lab[w]
                    cur[L + 1] = pos
                    if have and cmp == 0:
                        if cur[L] != best[L]:
                            cmp = -1 if cur[L] < best[L] else 1
                        elif cur[L + 1] != best[L + 1]:
                            cmp = -1 if cur[L + 1] < best[L + 1] else 1
                    L += 2
                    d = 3 * v + ((d % 3) + orient) % 3
                if cmp == 1:
                    break
            if cmp == 1:
                continue
            if not have or cmp == -1:
                for i in range(6 * nv):
                    best[i] = cur[i]
                have = True


def count(cfg):
    cdef _Search s = _Search(cfg)
    s.mode = 0
    s.run()
    return s.leaves


def enumerate_triangulations(cfg, visit):
    cdef _Search s = _Search(cfg)
    s.mode = 1
    s.visit = visit
    s.run()
    return s.leaves


def scan_skeletons(cfg, done, counts, callback):
    cdef _Search s = _Search(cfg)
    s.mode = 2
    s.done = done
    s.counts = counts
    s.callback = callback
    s.run()
    return s.leaves


def map_code(int nv, twin):
    cdef int tw[3 * MAXB]
    cdef int best[6 * MAXB]
    cdef int cur[6 * MAXB]
    cdef int i
    for i in range(3 * nv):
        tw[i] = twin[i]
    map_code_c(nv, tw, best, cur)
    return bytes([nv] + [best[i] for i in range(6 * nv)])
