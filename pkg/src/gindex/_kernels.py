"""Hot kernels for the grammar index.

This file is written in Cython pure-Python mode. The build compiles it into
an extension module; without a compiler it is imported as ordinary Python
(see ``gindex._backend``). Both paths run the same source, so the fallback
cannot drift from the compiled core.

Conventions inside this module are 0-based unless a name says otherwise.
Node identifiers are positions of opening parentheses; preorders and leaf
or internal-node ranks are 1-based, matching the public API.
"""
import heapq

import cython
import numpy as np

MASK64 = cython.declare(cython.ulonglong, 0xFFFFFFFFFFFFFFFF)
BLK_LOG = cython.declare(cython.int, 8)  # rmM block = 256 parentheses
BIG = cython.declare(cython.longlong, 1 << 62)
# popcount masks; typed so the compiled code keeps them in registers
M1 = cython.declare(cython.ulonglong, 0x5555555555555555)
M2 = cython.declare(cython.ulonglong, 0x3333333333333333)
M4 = cython.declare(cython.ulonglong, 0x0F0F0F0F0F0F0F0F)
H01 = cython.declare(cython.ulonglong, 0x0101010101010101)


def _buf(arr, dtype):
    a = np.ascontiguousarray(arr, dtype=dtype)
    if cython.compiled:
        return a
    return a.tolist()


def is_compiled():
    return bool(cython.compiled)


@cython.cfunc
@cython.inline
@cython.exceptval(check=False)
def _popcount(x: cython.ulonglong) -> cython.int:
    x = x - ((x >> 1) & M1)
    x = (x & M2) + ((x >> 2) & M2)
    x = (x + (x >> 4)) & M4
    return cython.cast(cython.int, ((x * H01) & MASK64) >> 56)


@cython.cfunc
@cython.inline
@cython.exceptval(check=False)
def _lowmask(r: cython.int) -> cython.ulonglong:
    if r >= 64:
        return MASK64
    return (cython.cast(cython.ulonglong, 1) << r) - 1


@cython.cfunc
@cython.exceptval(check=False)
def _select_in_word(x: cython.ulonglong, j: cython.int) -> cython.int:
    # position of the j-th (1-based) set bit of x
    pos: cython.int = 0
    c: cython.int
    while True:
        c = _popcount(x & 0xFF)
        if c >= j:
            break
        j -= c
        x >>= 8
        pos += 8
    while True:
        if x & 1:
            j -= 1
            if j == 0:
                return pos
        x >>= 1
        pos += 1


def pack_bits(bits):
    """Pack a 0/1 array (LSB-first) into uint64 words."""
    b = np.ascontiguousarray(bits, dtype=np.uint8)
    by = np.packbits(b, bitorder="little")
    nb = len(by)
    pad = 8 if nb == 0 else (8 - nb % 8) % 8
    if pad:
        by = np.concatenate([by, np.zeros(pad, dtype=np.uint8)])
    return by.view(np.uint64).copy()


def unpack_bits(words, n):
    by = np.ascontiguousarray(words, dtype=np.uint64).view(np.uint8)
    return np.unpackbits(by, bitorder="little")[:n]


def pack_ints(values, width):
    v = np.ascontiguousarray(values, dtype=np.uint64)
    if width == 0 or len(v) == 0:
        return np.zeros(1, dtype=np.uint64)
    shifts = np.arange(width, dtype=np.uint64)
    mat = ((v[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
    words = pack_bits(mat.reshape(-1))
    return np.concatenate([words, np.zeros(1, dtype=np.uint64)])


def unpack_ints(words, width, n):
    if width == 0 or n == 0:
        return np.zeros(n, dtype=np.int64)
    bits = unpack_bits(words, n * width).reshape(n, width).astype(np.uint64)
    shifts = np.arange(width, dtype=np.uint64)
    return (bits << shifts[None, :]).sum(axis=1).astype(np.int64)


@cython.final
@cython.cclass
class Bits:
    """Plain bitvector with a two-level rank directory and sampled select."""

    words: cython.ulonglong[:]
    sb: cython.longlong[:]
    sel1: cython.longlong[:]
    sel0: cython.longlong[:]
    n = cython.declare(cython.longlong, visibility="readonly")
    nwords = cython.declare(cython.longlong, visibility="readonly")
    nsb = cython.declare(cython.longlong, visibility="readonly")
    ones = cython.declare(cython.longlong, visibility="readonly")

    def __init__(self, words, n):
        n = int(n)
        nwords = (n + 63) >> 6
        w = np.zeros(max(nwords, 1), dtype=np.uint64)
        src = np.ascontiguousarray(words, dtype=np.uint64)[:nwords]
        w[: len(src)] = src
        if n & 63:
            w[nwords - 1] &= np.uint64((1 << (n & 63)) - 1)
        pc = np.bitwise_count(w).astype(np.int64)
        nsb = (nwords + 7) >> 3
        padded = np.zeros(max(nsb, 1) * 8, dtype=np.int64)
        padded[: len(pc)] = pc
        per = padded.reshape(-1, 8).sum(axis=1)[:nsb]
        sb = np.zeros(nsb + 1, dtype=np.int64)
        sb[1:] = np.cumsum(per)
        ones = int(sb[-1])
        s1 = np.searchsorted(sb, np.arange(1, ones + 1, 512), side="left") - 1
        zb = np.arange(nsb + 1, dtype=np.int64) * 512 - sb
        s0 = np.searchsorted(zb, np.arange(1, n - ones + 1, 512), side="left") - 1
        self.words = _buf(w, np.uint64)
        self.sb = _buf(sb, np.int64)
        self.sel1 = _buf(np.append(s1, nsb), np.int64)
        self.sel0 = _buf(np.append(s0, nsb), np.int64)
        self.n = n
        self.nwords = nwords
        self.nsb = nsb
        self.ones = ones

    def raw_words(self):
        return np.asarray(self.words, dtype=np.uint64)[: self.nwords].copy()

    def size_bits(self):
        return 64 * (self.nwords + len(self.sb) + len(self.sel1) + len(self.sel0))

    @cython.ccall
    @cython.exceptval(check=False)
    def access(self, i: cython.longlong) -> cython.int:
        return cython.cast(cython.int, (self.words[i >> 6] >> (i & 63)) & 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def rank1(self, i: cython.longlong) -> cython.longlong:
        # ones in [0, i)
        s: cython.longlong = i >> 9
        r: cython.longlong = self.sb[s]
        w: cython.longlong = s << 3
        wi: cython.longlong = i >> 6
        while w < wi:
            r += _popcount(self.words[w])
            w += 1
        if i & 63:
            r += _popcount(self.words[wi] & _lowmask(cython.cast(cython.int, i & 63)))
        return r

    @cython.ccall
    @cython.exceptval(check=False)
    def rank0(self, i: cython.longlong) -> cython.longlong:
        return i - self.rank1(i)

    @cython.ccall
    @cython.exceptval(check=False)
    def select1(self, k: cython.longlong) -> cython.longlong:
        # position of the k-th one, 1 <= k <= ones
        t: cython.longlong = (k - 1) >> 9
        lo: cython.longlong = self.sel1[t]
        hi: cython.longlong = self.sel1[t + 1]
        mid: cython.longlong
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self.sb[mid] < k:
                lo = mid
            else:
                hi = mid - 1
        r: cython.longlong = k - self.sb[lo]
        w: cython.longlong = lo << 3
        c: cython.int
        while True:
            c = _popcount(self.words[w])
            if c >= r:
                return (w << 6) + _select_in_word(self.words[w], cython.cast(cython.int, r))
            r -= c
            w += 1

    @cython.ccall
    @cython.exceptval(check=False)
    def select0(self, k: cython.longlong) -> cython.longlong:
        # position of the k-th zero, 1 <= k <= n - ones
        t: cython.longlong = (k - 1) >> 9
        lo: cython.longlong = self.sel0[t]
        hi: cython.longlong = self.sel0[t + 1]
        mid: cython.longlong
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if mid * 512 - self.sb[mid] < k:
                lo = mid
            else:
                hi = mid - 1
        r: cython.longlong = k - (lo * 512 - self.sb[lo])
        w: cython.longlong = lo << 3
        c: cython.int
        x: cython.ulonglong
        while True:
            x = self.words[w] ^ MASK64
            c = _popcount(x)
            if c >= r:
                return (w << 6) + _select_in_word(x, cython.cast(cython.int, r))
            r -= c
            w += 1


@cython.final
@cython.cclass
class Packed:
    """Fixed-width integer array packed into 64-bit words."""

    words: cython.ulonglong[:]
    width = cython.declare(cython.int, visibility="readonly")
    n = cython.declare(cython.longlong, visibility="readonly")

    def __init__(self, values=None, width=None, words=None, n=None):
        if words is None:
            v = np.ascontiguousarray(values, dtype=np.int64)
            if width is None:
                width = int(v.max()).bit_length() if len(v) else 0
            n = len(v)
            words = pack_ints(v, width)
        self.words = _buf(words, np.uint64)
        self.width = int(width)
        self.n = int(n)

    def raw_words(self):
        return np.asarray(self.words, dtype=np.uint64).copy()

    def to_numpy(self):
        return unpack_ints(np.asarray(self.words, dtype=np.uint64), self.width, self.n)

    def size_bits(self):
        return self.n * self.width

    @cython.ccall
    @cython.exceptval(check=False)
    def get(self, i: cython.longlong) -> cython.longlong:
        if self.width == 0:
            return 0
        bit: cython.longlong = i * self.width
        w: cython.longlong = bit >> 6
        o: cython.int = cython.cast(cython.int, bit & 63)
        v: cython.ulonglong = self.words[w] >> o
        if o + self.width > 64:
            v |= self.words[w + 1] << (64 - o)
        return cython.cast(cython.longlong, v & _lowmask(self.width))


@cython.final
@cython.cclass
class EliasFano:
    """Sparse bitvector: upper bits unary-coded in a Bits, lower bits packed."""

    high = cython.declare(Bits, visibility="readonly")
    low = cython.declare(Packed, visibility="readonly")
    u = cython.declare(cython.longlong, visibility="readonly")
    m = cython.declare(cython.longlong, visibility="readonly")
    l = cython.declare(cython.int, visibility="readonly")

    def __init__(self, positions, universe):
        p = np.ascontiguousarray(positions, dtype=np.int64)
        u = int(universe)
        m = len(p)
        if m and (p[0] < 0 or p[-1] >= u or np.any(np.diff(p) <= 0)):
            raise ValueError("positions must be strictly increasing within the universe")
        lw = max(0, (u // m).bit_length() - 1) if m and u > m else 0
        hn = m + (u >> lw) + 1
        hb = np.zeros(hn, dtype=np.uint8)
        if m:
            hb[(p >> lw) + np.arange(m)] = 1
        self.high = Bits(pack_bits(hb), hn)
        self.low = Packed(p & ((1 << lw) - 1), width=lw)
        self.u = u
        self.m = m
        self.l = lw

    def positions(self):
        out = np.empty(self.m, dtype=np.int64)
        for k in range(self.m):
            out[k] = self.select1(k + 1)
        return out

    def size_bits(self):
        return self.high.size_bits() + self.low.size_bits() + 3 * 64

    @cython.ccall
    @cython.exceptval(check=False)
    def select1(self, k: cython.longlong) -> cython.longlong:
        return ((self.high.select1(k) - (k - 1)) << self.l) | self.low.get(k - 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def rank1(self, i: cython.longlong) -> cython.longlong:
        # ones in [0, i)
        if i >= self.u:
            return self.m
        if i <= 0 or self.m == 0:
            return 0
        h: cython.longlong = i >> self.l
        ll: cython.longlong = i & cython.cast(cython.longlong, _lowmask(self.l))
        pos: cython.longlong = 0
        if h > 0:
            pos = self.high.select0(h) + 1
        cnt: cython.longlong = pos - h
        while pos < self.high.n and self.high.access(pos) and self.low.get(cnt) < ll:
            cnt += 1
            pos += 1
        return cnt

    @cython.ccall
    @cython.exceptval(check=False)
    def access(self, i: cython.longlong) -> cython.int:
        return cython.cast(cython.int, self.rank1(i + 1) - self.rank1(i))

    @cython.ccall
    @cython.exceptval(check=False)
    def select0(self, r: cython.longlong) -> cython.longlong:
        # r-th zero (1-based); binary search over the ones preceding it
        lo: cython.longlong = 0
        hi: cython.longlong = self.m
        mid: cython.longlong
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self.select1(mid) - (mid - 1) < r:
                lo = mid
            else:
                hi = mid - 1
        return r - 1 + lo


@cython.final
@cython.cclass
class Perm:
    """Permutation of [0, M) with back-pointers every ``t`` steps on each cycle."""

    p = cython.declare(Packed, visibility="readonly")
    mark = cython.declare(Bits, visibility="readonly")
    back = cython.declare(Packed, visibility="readonly")
    m = cython.declare(cython.longlong, visibility="readonly")
    t = cython.declare(cython.longlong, visibility="readonly")

    def __init__(self, perm, t=32):
        perm = np.ascontiguousarray(perm, dtype=np.int64)
        m = len(perm)
        t = int(t)
        if t < 1:
            raise ValueError("sampling step must be >= 1")
        if m and not np.array_equal(np.sort(perm), np.arange(m)):
            raise ValueError("not a permutation")
        mark = np.zeros(m, dtype=np.uint8)
        backs = {}
        seen = np.zeros(m, dtype=bool)
        pl = perm.tolist()
        for start in range(m):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = pl[x]
            c = len(cyc)
            for k in range(0, c, t):
                mark[cyc[k]] = 1
                backs[cyc[k]] = cyc[(k - t + c * t) % c]
        order = np.flatnonzero(mark)
        self.p = Packed(perm, width=max(1, (m - 1).bit_length()) if m else 0)
        self.mark = Bits(pack_bits(mark), m)
        self.back = Packed(np.array([backs[i] for i in order.tolist()], dtype=np.int64),
                           width=self.p.width)
        self.m = m
        self.t = t

    def to_numpy(self):
        return self.p.to_numpy()

    def size_bits(self):
        return self.p.size_bits() + self.mark.size_bits() + self.back.size_bits()

    @cython.ccall
    @cython.exceptval(check=False)
    def apply(self, i: cython.longlong) -> cython.longlong:
        return self.p.get(i)

    @cython.ccall
    @cython.exceptval(check=False)
    def inverse(self, j: cython.longlong) -> cython.longlong:
        x: cython.longlong = j
        y: cython.longlong
        jumped: cython.bint = False
        while True:
            if not jumped and self.mark.access(x):
                x = self.back.get(self.mark.rank1(x))
                jumped = True
                continue
            y = self.p.get(x)
            if y == j:
                return x
            x = y

    def inverse_steps(self, j):
        """Number of applications of the permutation used by ``inverse(j)``."""
        x = j
        steps = 0
        jumped = False
        while True:
            if not jumped and self.mark.access(x):
                x = self.back.get(self.mark.rank1(x))
                jumped = True
                continue
            y = self.p.get(x)
            steps += 1
            if y == j:
                return steps
            x = y


@cython.final
@cython.cclass
class BP:
    """Balanced parentheses with pattern directories and a range min-max tree."""

    bits = cython.declare(Bits, visibility="readonly")
    p10 = cython.declare(Bits, visibility="readonly")
    p11 = cython.declare(Bits, visibility="readonly")
    n = cython.declare(cython.longlong, visibility="readonly")
    nblk = cython.declare(cython.longlong, visibility="readonly")
    size = cython.declare(cython.longlong, visibility="readonly")
    tmin: cython.longlong[:]
    tcnt: cython.longlong[:]

    def __init__(self, parens):
        b = np.ascontiguousarray(parens, dtype=np.uint8)
        n = len(b)
        nxt = np.zeros(n, dtype=np.uint8)
        nxt[:-1] = b[1:]
        self.bits = Bits(pack_bits(b), n)
        self.p10 = Bits(pack_bits(b & (1 - nxt)), n)
        self.p11 = Bits(pack_bits(b & nxt), n)
        self.n = n
        exc = np.cumsum(np.where(b == 1, 1, -1).astype(np.int64))
        nblk = max(1, (n + 255) >> 8)
        size = 1
        while size < nblk:
            size <<= 1
        pad = np.full(nblk * 256, BIG, dtype=np.int64)
        pad[:n] = exc
        blocks = pad.reshape(nblk, 256)
        bmin = blocks.min(axis=1)
        bcnt = (blocks == bmin[:, None]).sum(axis=1).astype(np.int64)
        tmin = np.full(2 * size, BIG, dtype=np.int64)
        tcnt = np.zeros(2 * size, dtype=np.int64)
        tmin[size:size + nblk] = bmin
        tcnt[size:size + nblk] = bcnt
        for v in range(size - 1, 0, -1):
            a, c = tmin[2 * v], tmin[2 * v + 1]
            if a < c:
                tmin[v], tcnt[v] = a, tcnt[2 * v]
            elif c < a:
                tmin[v], tcnt[v] = c, tcnt[2 * v + 1]
            else:
                tmin[v], tcnt[v] = a, tcnt[2 * v] + tcnt[2 * v + 1]
        self.nblk = nblk
        self.size = size
        self.tmin = _buf(tmin, np.int64)
        self.tcnt = _buf(tcnt, np.int64)

    def raw_bits(self):
        return unpack_bits(self.bits.raw_words(), self.n)

    def size_bits(self):
        return (self.bits.size_bits() + self.p10.size_bits() + self.p11.size_bits()
                + 2 * 64 * self.size)

    @cython.ccall
    @cython.exceptval(check=False)
    def bit(self, i: cython.longlong) -> cython.int:
        return self.bits.access(i)

    @cython.ccall
    @cython.exceptval(check=False)
    def excess(self, i: cython.longlong) -> cython.longlong:
        # opens minus closes in [0, i]; excess(-1) = 0
        return 2 * self.bits.rank1(i + 1) - (i + 1)

    @cython.cfunc
    @cython.exceptval(check=False)
    def _first_le(self, bl: cython.longlong, target: cython.longlong) -> cython.longlong:
        if bl >= self.nblk:
            return -1
        v: cython.longlong = bl + self.size
        if self.tmin[v] <= target:
            return bl
        found: cython.bint = False
        while v > 1:
            if (v & 1) == 0 and self.tmin[v + 1] <= target:
                v += 1
                found = True
                break
            v >>= 1
        if not found:
            return -1
        while v < self.size:
            v = 2 * v
            if self.tmin[v] > target:
                v += 1
        return v - self.size

    @cython.cfunc
    @cython.exceptval(check=False)
    def _last_le(self, br: cython.longlong, target: cython.longlong) -> cython.longlong:
        if br < 0:
            return -1
        v: cython.longlong = br + self.size
        if self.tmin[v] <= target:
            return br
        found: cython.bint = False
        while v > 1:
            if (v & 1) == 1 and self.tmin[v - 1] <= target:
                v -= 1
                found = True
                break
            v >>= 1
        if not found:
            return -1
        while v < self.size:
            v = 2 * v + 1
            if self.tmin[v] > target:
                v -= 1
        return v - self.size

    @cython.ccall
    @cython.exceptval(check=False)
    def fwd_search(self, i: cython.longlong, d: cython.longlong) -> cython.longlong:
        # smallest j > i with excess(j) = excess(i) + d (d < 0); -1 if none
        e: cython.longlong = self.excess(i)
        target: cython.longlong = e + d
        j: cython.longlong = i + 1
        end: cython.longlong = ((i >> BLK_LOG) + 1) << BLK_LOG
        if end > self.n:
            end = self.n
        while j < end:
            if (self.bits.words[j >> 6] >> (j & 63)) & 1:
                e += 1
            else:
                e -= 1
            if e == target:
                return j
            j += 1
        b: cython.longlong = self._first_le((i >> BLK_LOG) + 1, target)
        if b < 0:
            return -1
        j = b << BLK_LOG
        e = self.excess(j - 1)
        end = j + (1 << BLK_LOG)
        if end > self.n:
            end = self.n
        while j < end:
            if (self.bits.words[j >> 6] >> (j & 63)) & 1:
                e += 1
            else:
                e -= 1
            if e == target:
                return j
            j += 1
        return -1

    @cython.ccall
    @cython.exceptval(check=False)
    def bwd_search(self, i: cython.longlong, d: cython.longlong) -> cython.longlong:
        # largest j < i with excess(j) = excess(i) + d; -1 stands for the
        # virtual position before the sequence (excess 0); -2 if none
        e: cython.longlong = self.excess(i)
        target: cython.longlong = e + d
        j: cython.longlong = i
        start: cython.longlong = (i >> BLK_LOG) << BLK_LOG
        while j > start:
            if (self.bits.words[j >> 6] >> (j & 63)) & 1:
                e -= 1
            else:
                e += 1
            j -= 1
            if e == target:
                return j
        b: cython.longlong = self._last_le((i >> BLK_LOG) - 1, target)
        if b < 0:
            return -1 if target == 0 else -2
        start = b << BLK_LOG
        j = start + (1 << BLK_LOG) - 1
        e = self.excess(j)
        while j >= start:
            if e == target:
                return j
            if (self.bits.words[j >> 6] >> (j & 63)) & 1:
                e -= 1
            else:
                e += 1
            j -= 1
        return -2

    @cython.ccall
    @cython.exceptval(check=False)
    def findclose(self, i: cython.longlong) -> cython.longlong:
        return self.fwd_search(i, -1)

    @cython.ccall
    @cython.exceptval(check=False)
    def findopen(self, i: cython.longlong) -> cython.longlong:
        return self.bwd_search(i, 0) + 1

    @cython.ccall
    @cython.exceptval(check=False)
    def parent(self, v: cython.longlong) -> cython.longlong:
        if v == 0:
            return -1
        return self.bwd_search(v, -2) + 1

    @cython.ccall
    @cython.exceptval(check=False)
    def level_ancestor(self, v: cython.longlong, k: cython.longlong) -> cython.longlong:
        r: cython.longlong = self.bwd_search(v, -k - 1)
        if r < -1:
            return -1
        return r + 1

    @cython.ccall
    @cython.exceptval(check=False)
    def depth(self, v: cython.longlong) -> cython.longlong:
        return self.excess(v) - 1

    @cython.ccall
    @cython.exceptval(check=False)
    def is_leaf(self, v: cython.longlong) -> cython.bint:
        return self.bits.access(v + 1) == 0

    @cython.ccall
    @cython.exceptval(check=False)
    def preorder(self, v: cython.longlong) -> cython.longlong:
        return self.bits.rank1(v + 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def node(self, p: cython.longlong) -> cython.longlong:
        return self.bits.select1(p)

    @cython.ccall
    @cython.exceptval(check=False)
    def leafrank(self, v: cython.longlong) -> cython.longlong:
        return self.p10.rank1(v)

    @cython.ccall
    @cython.exceptval(check=False)
    def leafselect(self, j: cython.longlong) -> cython.longlong:
        return self.p10.select1(j)

    @cython.ccall
    @cython.exceptval(check=False)
    def intrank(self, v: cython.longlong) -> cython.longlong:
        return self.p11.rank1(v)

    @cython.ccall
    @cython.exceptval(check=False)
    def intselect(self, j: cython.longlong) -> cython.longlong:
        return self.p11.select1(j)

    @cython.ccall
    @cython.exceptval(check=False)
    def numleaves(self, v: cython.longlong) -> cython.longlong:
        return self.p10.rank1(self.findclose(v)) - self.p10.rank1(v)

    @cython.ccall
    @cython.exceptval(check=False)
    def nextsibling(self, v: cython.longlong) -> cython.longlong:
        c: cython.longlong = self.findclose(v) + 1
        if c >= self.n or not self.bits.access(c):
            return -1
        return c

    @cython.ccall
    @cython.exceptval(check=False)
    def prevsibling(self, v: cython.longlong) -> cython.longlong:
        if v <= 0 or self.bits.access(v - 1):
            return -1
        return self.findopen(v - 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def lastchild(self, v: cython.longlong) -> cython.longlong:
        if self.bits.access(v + 1) == 0:
            return -1
        return self.findopen(self.findclose(v) - 1)

    @cython.cfunc
    @cython.exceptval(check=False)
    def _cnt_if(self, node: cython.longlong, val: cython.longlong) -> cython.longlong:
        if self.tmin[node] == val:
            return self.tcnt[node]
        return 0

    @cython.cfunc
    def _scan_count(self, a: cython.longlong, b: cython.longlong, e: cython.longlong,
                    val: cython.longlong, t: cython.longlong, res: cython.longlong[:]):
        # scans positions a..b (inclusive) starting with e = excess(a - 1);
        # res[0] = count of val seen; stops at the t-th hit (t > 0) and
        # stores its position in res[1]
        j: cython.longlong = a
        c: cython.longlong = 0
        while j <= b:
            if (self.bits.words[j >> 6] >> (j & 63)) & 1:
                e += 1
            else:
                e -= 1
            if e == val:
                c += 1
                if t > 0 and c == t:
                    res[0] = c
                    res[1] = j
                    return
            j += 1
        res[0] = c
        res[1] = -1

    @cython.ccall
    def _select_val(self, a: cython.longlong, b: cython.longlong,
                    val: cython.longlong, t: cython.longlong) -> cython.longlong:
        # position of the t-th j in [a, b] with excess(j) == val, where val is
        # the minimum excess over [a, b]; returns -1 if fewer than t
        # (t == 0 returns the count encoded as -(count) - 2)
        res = np.zeros(2, dtype=np.int64) if cython.compiled else [0, 0]
        rv: cython.longlong[:] = res
        ba: cython.longlong
        bb: cython.longlong
        total: cython.longlong = 0
        endb: cython.longlong
        lo: cython.longlong
        hi: cython.longlong
        node: cython.longlong
        c: cython.longlong
        rem: cython.longlong
        blk: cython.longlong
        if a > b:
            return -2 if t == 0 else -1
        ba = a >> BLK_LOG
        bb = b >> BLK_LOG
        if ba == bb:
            self._scan_count(a, b, self.excess(a - 1), val, t, rv)
            if t == 0:
                return -rv[0] - 2
            return rv[1]
        endb = ((ba + 1) << BLK_LOG) - 1
        self._scan_count(a, endb, self.excess(a - 1), val, t, rv)
        if t > 0 and rv[1] >= 0:
            return rv[1]
        total = rv[0]
        # canonical segment-tree nodes covering full blocks ba+1 .. bb-1
        left = []
        right = []
        lo = ba + 1 + self.size
        hi = bb + self.size
        while lo < hi:
            if lo & 1:
                left.append(lo)
                lo += 1
            if hi & 1:
                hi -= 1
                right.append(hi)
            lo >>= 1
            hi >>= 1
        right.reverse()
        nodes = left + right
        rem = t - total
        for nd in nodes:
            node = nd
            c = self._cnt_if(node, val)
            if t == 0 or c < rem:
                total += c
                rem -= c
                continue
            while node < self.size:
                node = 2 * node
                c = self._cnt_if(node, val)
                if c < rem:
                    rem -= c
                    node += 1
            blk = node - self.size
            self._scan_count(blk << BLK_LOG, ((blk + 1) << BLK_LOG) - 1,
                             self.excess((blk << BLK_LOG) - 1), val, rem, rv)
            return rv[1]
        self._scan_count(bb << BLK_LOG, b, self.excess((bb << BLK_LOG) - 1), val,
                         rem if t > 0 else 0, rv)
        if t == 0:
            return -(total + rv[0]) - 2
        return rv[1]

    @cython.ccall
    def degree(self, v: cython.longlong) -> cython.longlong:
        if self.bits.access(v + 1) == 0:
            return 0
        c: cython.longlong = self.findclose(v)
        return -self._select_val(v + 1, c - 1, self.excess(v), 0) - 2

    @cython.ccall
    def child(self, v: cython.longlong, k: cython.longlong) -> cython.longlong:
        # k-th child (1-based); -1 if it does not exist
        if k < 1 or self.bits.access(v + 1) == 0:
            return -1
        if k == 1:
            return v + 1
        c: cython.longlong = self.findclose(v)
        p: cython.longlong = self._select_val(v + 1, c - 1, self.excess(v), k - 1)
        if p < 0 or p + 1 >= c:
            return -1
        return p + 1


@cython.final
@cython.cclass
class WaveletMatrix:
    """Integer sequence with access/rank/select and 2-d range reporting."""

    bits = cython.declare(Bits, visibility="readonly")
    zeros: cython.longlong[:]
    base1: cython.longlong[:]
    n = cython.declare(cython.longlong, visibility="readonly")
    nlev = cython.declare(cython.int, visibility="readonly")

    def __init__(self, values, nlev=None):
        v = np.ascontiguousarray(values, dtype=np.int64)
        n = len(v)
        if nlev is None:
            nlev = max(1, int(v.max()).bit_length() if n else 1)
        allbits = np.zeros(nlev * n, dtype=np.uint8)
        zeros = np.zeros(nlev, dtype=np.int64)
        cur = v
        for lev in range(nlev):
            b = ((cur >> (nlev - 1 - lev)) & 1).astype(np.uint8)
            allbits[lev * n:(lev + 1) * n] = b
            zeros[lev] = n - int(b.sum())
            cur = np.concatenate([cur[b == 0], cur[b == 1]])
        self.bits = Bits(pack_bits(allbits), nlev * n)
        base1 = np.array([self.bits.rank1(lev * n) for lev in range(nlev)], dtype=np.int64)
        self.zeros = _buf(zeros, np.int64)
        self.base1 = _buf(base1, np.int64)
        self.n = n
        self.nlev = nlev

    def to_numpy(self):
        return np.array([self.access(i) for i in range(self.n)], dtype=np.int64)

    def size_bits(self):
        return self.bits.size_bits() + 128 * self.nlev

    @cython.cfunc
    @cython.inline
    @cython.exceptval(check=False)
    def _r1(self, lev: cython.int, i: cython.longlong) -> cython.longlong:
        return self.bits.rank1(lev * self.n + i) - self.base1[lev]

    @cython.ccall
    @cython.exceptval(check=False)
    def access(self, i: cython.longlong) -> cython.longlong:
        val: cython.longlong = 0
        lev: cython.int
        r1: cython.longlong
        for lev in range(self.nlev):
            if self.bits.access(lev * self.n + i):
                r1 = self._r1(lev, i)
                i = self.zeros[lev] + r1
                val = (val << 1) | 1
            else:
                i = i - self._r1(lev, i)
                val = val << 1
        return val

    @cython.ccall
    @cython.exceptval(check=False)
    def rank(self, a: cython.longlong, i: cython.longlong) -> cython.longlong:
        # occurrences of a in [0, i)
        if a < 0 or (a >> self.nlev) != 0:
            return 0
        p: cython.longlong = 0
        lev: cython.int
        for lev in range(self.nlev):
            if (a >> (self.nlev - 1 - lev)) & 1:
                p = self.zeros[lev] + self._r1(lev, p)
                i = self.zeros[lev] + self._r1(lev, i)
            else:
                p = p - self._r1(lev, p)
                i = i - self._r1(lev, i)
        return i - p

    @cython.ccall
    @cython.exceptval(check=False)
    def count(self, a: cython.longlong) -> cython.longlong:
        return self.rank(a, self.n)

    @cython.cfunc
    @cython.exceptval(check=False)
    def _up(self, p: cython.longlong, val: cython.longlong) -> cython.longlong:
        # map a bottom-level position back to the original sequence
        lev: cython.int = self.nlev - 1
        while lev >= 0:
            if (val >> (self.nlev - 1 - lev)) & 1:
                p = self.bits.select1(p - self.zeros[lev] + 1 + self.base1[lev]) - lev * self.n
            else:
                p = self.bits.select0(p + 1 + (lev * self.n - self.base1[lev])) - lev * self.n
            lev -= 1
        return p

    @cython.ccall
    @cython.exceptval(check=False)
    def select(self, a: cython.longlong, j: cython.longlong) -> cython.longlong:
        # position of the j-th occurrence of a (j >= 1); -1 if none
        if j < 1 or a < 0 or (a >> self.nlev) != 0:
            return -1
        p: cython.longlong = 0
        e: cython.longlong = self.n
        lev: cython.int
        for lev in range(self.nlev):
            if (a >> (self.nlev - 1 - lev)) & 1:
                p = self.zeros[lev] + self._r1(lev, p)
                e = self.zeros[lev] + self._r1(lev, e)
            else:
                p = p - self._r1(lev, p)
                e = e - self._r1(lev, e)
        if p + j - 1 >= e:
            return -1
        return self._up(p + j - 1, a)

    @cython.cfunc
    def _report(self, lev: cython.int, s: cython.longlong, e: cython.longlong,
                prefix: cython.longlong, lo: cython.longlong, hi: cython.longlong,
                out: list):
        if s >= e:
            return
        rem: cython.int = self.nlev - lev
        vlo: cython.longlong = prefix << rem
        vhi: cython.longlong = ((prefix + 1) << rem) - 1
        if vhi < lo or vlo > hi:
            return
        p: cython.longlong
        if lev == self.nlev:
            for p in range(s, e):
                out.append(self._up(p, prefix))
                out.append(prefix)
            return
        s1: cython.longlong = self._r1(lev, s)
        e1: cython.longlong = self._r1(lev, e)
        self._report(lev + 1, s - s1, e - e1, prefix << 1, lo, hi, out)
        self._report(lev + 1, self.zeros[lev] + s1, self.zeros[lev] + e1,
                     (prefix << 1) | 1, lo, hi, out)

    @cython.ccall
    def report(self, c1: cython.longlong, c2: cython.longlong,
               lo: cython.longlong, hi: cython.longlong) -> list:
        """Flat [pos, value, ...] for positions in [c1, c2) with values in [lo, hi]."""
        out = []
        if c1 < 0:
            c1 = 0
        if c2 > self.n:
            c2 = self.n
        if c1 < c2 and lo <= hi:
            self._report(0, c1, c2, 0, lo, hi, out)
        return out


@cython.final
@cython.cclass
class TrieCore:
    """Tree of leftmost (or rightmost) derivation paths plus its label permutation."""

    bp = cython.declare(BP, visibility="readonly")
    xs = cython.declare(Perm, visibility="readonly")

    def __init__(self, bp, xs):
        self.bp = bp
        self.xs = xs


@cython.final
@cython.cclass
class IndexCore:
    """Query engine over the succinct components of a grammar index."""

    tree = cython.declare(BP, visibility="readonly")
    xp = cython.declare(WaveletMatrix, visibility="readonly")
    y = cython.declare(EliasFano, visibility="readonly")
    pi = cython.declare(Perm, visibility="readonly")
    lmap = cython.declare(EliasFano, visibility="readonly")
    alpha: cython.uchar[:]
    alphabet = cython.declare(bytes, visibility="readonly")
    rows = cython.declare(WaveletMatrix, visibility="readonly")
    labels = cython.declare(Packed, visibility="readonly")
    tsl = cython.declare(TrieCore, visibility="readonly")
    tsr = cython.declare(TrieCore, visibility="readonly")
    n = cython.declare(cython.longlong, visibility="readonly")
    g = cython.declare(cython.longlong, visibility="readonly")
    ncols = cython.declare(cython.longlong, visibility="readonly")
    nleaves = cython.declare(cython.longlong, visibility="readonly")

    def __init__(self, tree, xp, y, pi, lmap, alphabet, rows, labels, n, g,
                 tsl=None, tsr=None):
        self.tree = tree
        self.xp = xp
        self.y = y
        self.pi = pi
        self.lmap = lmap
        self.alphabet = bytes(alphabet)
        if cython.compiled:
            self.alpha = bytearray(alphabet)
        else:
            self.alpha = list(bytearray(alphabet))
        self.rows = rows
        self.labels = labels
        self.n = n
        self.g = g
        self.ncols = labels.n
        self.nleaves = tree.p10.ones
        self.tsl = tsl
        self.tsr = tsr

    # -- symbols and nodes -------------------------------------------------

    @cython.ccall
    @cython.exceptval(check=False)
    def is_term(self, x: cython.longlong) -> cython.bint:
        return self.y.access(x - 1) == 1

    @cython.ccall
    @cython.exceptval(check=False)
    def term_char(self, x: cython.longlong) -> cython.int:
        return self.alpha[self.y.rank1(x) - 1]

    @cython.ccall
    @cython.exceptval(check=False)
    def def_node(self, x: cython.longlong) -> cython.longlong:
        r: cython.longlong = x - self.y.rank1(x)
        return self.tree.intselect(self.pi.apply(r - 1) + 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def label(self, v: cython.longlong) -> cython.longlong:
        if self.tree.bits.access(v + 1) == 0:
            return self.xp.access(self.tree.leafrank(v))
        r: cython.longlong = self.pi.inverse(self.tree.intrank(v)) + 1
        return self.y.select0(r) + 1

    @cython.ccall
    @cython.exceptval(check=False)
    def node_start(self, v: cython.longlong) -> cython.longlong:
        return self.lmap.select1(self.tree.leafrank(v) + 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def node_end(self, v: cython.longlong) -> cython.longlong:
        k: cython.longlong = self.tree.p10.rank1(self.tree.findclose(v))
        if k >= self.nleaves:
            return self.n
        return self.lmap.select1(k + 1)

    @cython.ccall
    @cython.exceptval(check=False)
    def sym_len(self, x: cython.longlong) -> cython.longlong:
        if self.is_term(x):
            return 1
        v: cython.longlong = self.def_node(x)
        return self.node_end(v) - self.node_start(v)

    # -- leaf-sequence walkers ---------------------------------------------

    @cython.cfunc
    def _walk_fwd(self, k: cython.longlong, hi: cython.longlong, stack: list,
                  limit: cython.longlong, buf: cython.uchar[:], pat: cython.uchar[:],
                  plen: cython.longlong, ctr: cython.longlong[:]) -> cython.longlong:
        # emits up to `limit` bytes from leaves k..hi (1-based), resuming
        # outer frames from `stack`; stops early at the first byte that
        # differs from `pat` when plen > 0
        count: cython.longlong = 0
        visits: cython.longlong = 0
        x: cython.longlong
        v: cython.longlong
        ch: cython.int
        while count < limit:
            if k > hi:
                if len(stack) == 0:
                    break
                hi = stack.pop()
                k = stack.pop()
                continue
            x = self.xp.access(k - 1)
            visits += 1
            if self.y.access(x - 1):
                ch = self.alpha[self.y.rank1(x) - 1]
                buf[count] = ch
                count += 1
                k += 1
                if plen > 0 and ch != pat[count - 1]:
                    break
            else:
                stack.append(k + 1)
                stack.append(hi)
                v = self.def_node(x)
                visits += 1
                k = self.tree.p10.rank1(v) + 1
                hi = self.tree.p10.rank1(self.tree.findclose(v))
        ctr[0] += visits
        return count

    @cython.cfunc
    def _walk_bwd(self, k: cython.longlong, lo: cython.longlong, stack: list,
                  limit: cython.longlong, buf: cython.uchar[:], pat: cython.uchar[:],
                  plen: cython.longlong, ctr: cython.longlong[:]) -> cython.longlong:
        # mirror of _walk_fwd: emits bytes right to left from leaves k..lo
        count: cython.longlong = 0
        visits: cython.longlong = 0
        x: cython.longlong
        v: cython.longlong
        ch: cython.int
        while count < limit:
            if k < lo:
                if len(stack) == 0:
                    break
                lo = stack.pop()
                k = stack.pop()
                continue
            x = self.xp.access(k - 1)
            visits += 1
            if self.y.access(x - 1):
                ch = self.alpha[self.y.rank1(x) - 1]
                buf[count] = ch
                count += 1
                k -= 1
                if plen > 0 and ch != pat[count - 1]:
                    break
            else:
                stack.append(k - 1)
                stack.append(lo)
                v = self.def_node(x)
                visits += 1
                lo = self.tree.p10.rank1(v) + 1
                k = self.tree.p10.rank1(self.tree.findclose(v))
        ctr[0] += visits
        return count

    # -- path-trie walkers ---------------------------------------------------

    @cython.cfunc
    def _trie_run(self, fwd: cython.bint, items: list, limit: cython.longlong,
                  buf: cython.uchar[:], pat: cython.uchar[:], plen: cython.longlong,
                  ctr: cython.longlong[:]) -> cython.longlong:
        # work items are triples (kind, a, b):
        #   0: expand symbol a
        #   1: path node of trie node a at depth b
        #   2: grammar-tree node a followed by its remaining siblings
        ts: TrieCore = self.tsl if fwd else self.tsr
        tb: BP = ts.bp
        count: cython.longlong = 0
        visits: cython.longlong = 0
        kind: cython.longlong
        a: cython.longlong
        b: cython.longlong
        x: cython.longlong
        tv: cython.longlong
        d: cython.longlong
        u: cython.longlong
        gx: cython.longlong
        c: cython.longlong
        ch: cython.int
        while count < limit and len(items) > 0:
            b = items.pop()
            a = items.pop()
            kind = items.pop()
            visits += 1
            if kind == 2:
                if fwd:
                    c = self.tree.nextsibling(a)
                else:
                    c = self.tree.prevsibling(a)
                if c >= 0:
                    items.append(2)
                    items.append(c)
                    items.append(0)
                x = self.label(a)
                kind = 0
                a = x
            elif kind == 1:
                d = tb.depth(a)
                u = tb.level_ancestor(a, d - b)
                if b < d:
                    items.append(1)
                    items.append(a)
                    items.append(b + 1)
                x = ts.xs.apply(tb.preorder(u) - 2) + 1
                gx = self.def_node(x)
                if fwd:
                    c = self.tree.nextsibling(gx + 1)
                else:
                    c = self.tree.lastchild(gx)
                    if c >= 0:
                        c = self.tree.prevsibling(c)
                if c >= 0:
                    items.append(2)
                    items.append(c)
                    items.append(0)
                continue
            # kind == 0: expand symbol a
            x = a
            if self.y.access(x - 1):
                ch = self.alpha[self.y.rank1(x) - 1]
            else:
                tv = tb.node(ts.xs.inverse(x - 1) + 2)
                d = tb.depth(tv)
                u = tb.level_ancestor(tv, d - 1)
                ch = self.alpha[self.y.rank1(ts.xs.apply(tb.preorder(u) - 2) + 1) - 1]
                if d >= 2:
                    items.append(1)
                    items.append(tv)
                    items.append(2)
            buf[count] = ch
            count += 1
            if plen > 0 and ch != pat[count - 1]:
                break
        ctr[0] += visits
        return count

    # -- byte-string producers ---------------------------------------------

    @cython.cfunc
    def _sym_stream(self, x: cython.longlong, fwd: cython.bint, trie: cython.bint,
                    limit: cython.longlong, buf: cython.uchar[:], pat: cython.uchar[:],
                    plen: cython.longlong, ctr: cython.longlong[:]) -> cython.longlong:
        if limit <= 0:
            return 0
        if self.y.access(x - 1):
            buf[0] = self.alpha[self.y.rank1(x) - 1]
            ctr[0] += 1
            return 1
        if trie:
            return self._trie_run(fwd, [0, x, 0], limit, buf, pat, plen, ctr)
        v: cython.longlong = self.def_node(x)
        lo: cython.longlong = self.tree.p10.rank1(v) + 1
        hi: cython.longlong = self.tree.p10.rank1(self.tree.findclose(v))
        ctr[0] += 1
        if fwd:
            return self._walk_fwd(lo, hi, [], limit, buf, pat, plen, ctr)
        return self._walk_bwd(hi, lo, [], limit, buf, pat, plen, ctr)

    @cython.cfunc
    def _col_stream(self, lab: cython.longlong, trie: cython.bint, limit: cython.longlong,
                    buf: cython.uchar[:], pat: cython.uchar[:], plen: cython.longlong,
                    ctr: cython.longlong[:]) -> cython.longlong:
        if limit <= 0:
            return 0
        w: cython.longlong = self.tree.node(lab)
        if trie:
            return self._trie_run(True, [2, w, 0], limit, buf, pat, plen, ctr)
        u: cython.longlong = self.tree.parent(w)
        k: cython.longlong = self.tree.p10.rank1(w) + 1
        hi: cython.longlong = self.tree.p10.rank1(self.tree.findclose(u))
        return self._walk_fwd(k, hi, [], limit, buf, pat, plen, ctr)

    @cython.ccall
    def expand_prefix(self, x: cython.longlong, l: cython.longlong, trie: cython.bint,
                      ctr: cython.longlong[:]) -> bytes:
        buf = bytearray(max(l, 0))
        c: cython.longlong = self._sym_stream(x, True, trie, l, buf, buf, 0, ctr)
        return bytes(buf[:c])

    @cython.ccall
    def expand_suffix(self, x: cython.longlong, l: cython.longlong, trie: cython.bint,
                      ctr: cython.longlong[:]) -> bytes:
        buf = bytearray(max(l, 0))
        c: cython.longlong = self._sym_stream(x, False, trie, l, buf, buf, 0, ctr)
        return bytes(buf[:c][::-1])

    @cython.ccall
    def column_prefix(self, lab: cython.longlong, l: cython.longlong, trie: cython.bint,
                      ctr: cython.longlong[:]) -> bytes:
        buf = bytearray(max(l, 0))
        c: cython.longlong = self._col_stream(lab, trie, l, buf, buf, 0, ctr)
        return bytes(buf[:c])

    @cython.ccall
    def extract(self, p: cython.longlong, l: cython.longlong, by_rank: cython.bint,
                ctr: cython.longlong[:]) -> bytes:
        buf = bytearray(max(l, 0))
        if l <= 0:
            return b""
        stack = []
        k: cython.longlong
        hi: cython.longlong = self.nleaves
        off: cython.longlong
        x: cython.longlong
        v: cython.longlong
        u: cython.longlong
        p2: cython.longlong
        lo_c: cython.longlong
        hi_c: cython.longlong
        mid: cython.longlong
        if by_rank:
            k = self.lmap.rank1(p + 1)
            off = p - self.lmap.select1(k)
            while True:
                x = self.xp.access(k - 1)
                ctr[0] += 1
                if self.y.access(x - 1):
                    break
                stack.append(k + 1)
                stack.append(hi)
                v = self.def_node(x)
                k = self.tree.p10.rank1(v) + 1
                hi = self.tree.p10.rank1(self.tree.findclose(v))
                p2 = self.lmap.select1(k) + off
                k = self.lmap.rank1(p2 + 1)
                off = p2 - self.lmap.select1(k)
        else:
            v = 0
            while True:
                ctr[0] += 1
                if self.tree.bits.access(v + 1) == 0:
                    k = self.tree.p10.rank1(v) + 1
                    x = self.xp.access(k - 1)
                    if self.y.access(x - 1):
                        break
                    stack.append(k + 1)
                    stack.append(hi)
                    u = self.def_node(x)
                    hi = self.tree.p10.rank1(self.tree.findclose(u))
                    p = p - self.node_start(v) + self.node_start(u)
                    v = u
                    continue
                # binary search the children of v for the one covering p
                lo_c = 1
                hi_c = self.tree.degree(v)
                while lo_c < hi_c:
                    mid = (lo_c + hi_c + 1) >> 1
                    if self.node_start(self.tree.child(v, mid)) <= p:
                        lo_c = mid
                    else:
                        hi_c = mid - 1
                v = self.tree.child(v, lo_c)
        c: cython.longlong = self._walk_fwd(k, hi, stack, l, buf, buf, 0, ctr)
        return bytes(buf[:c])

    # -- comparisons and interval searches -----------------------------------

    @cython.cfunc
    @cython.exceptval(check=False)
    def _cmp_result(self, c: cython.longlong, buf: cython.uchar[:], pat: cython.uchar[:],
                    plen: cython.longlong) -> cython.int:
        if c > 0 and buf[c - 1] != pat[c - 1]:
            return -1 if buf[c - 1] < pat[c - 1] else 1
        if c < plen:
            return -1
        return 0

    @cython.ccall
    def cmp_row(self, x: cython.longlong, prev: bytearray, trie: cython.bint,
                ctr: cython.longlong[:]) -> cython.int:
        """Compare reversed F(x), truncated, against `prev` (already reversed)."""
        plen: cython.longlong = len(prev)
        buf = bytearray(plen)
        c: cython.longlong = self._sym_stream(x, False, trie, plen, buf, prev, plen, ctr)
        return self._cmp_result(c, buf, prev, plen)

    @cython.ccall
    def cmp_col(self, col: cython.longlong, pat: bytearray, trie: cython.bint,
                ctr: cython.longlong[:]) -> cython.int:
        plen: cython.longlong = len(pat)
        buf = bytearray(plen)
        c: cython.longlong = self._col_stream(self.labels.get(col - 1), trie, plen, buf,
                                              pat, plen, ctr)
        return self._cmp_result(c, buf, pat, plen)

    @cython.ccall
    def row_bound(self, prev: bytearray, lo: cython.longlong, hi: cython.longlong,
                  strict: cython.bint, trie: cython.bint,
                  ctr: cython.longlong[:]) -> cython.longlong:
        # first row in [lo, hi) whose comparison is >= 0 (> 0 when strict)
        mid: cython.longlong
        r: cython.int
        while lo < hi:
            mid = (lo + hi) >> 1
            r = self.cmp_row(mid, prev, trie, ctr)
            if r > 0 or (r == 0 and not strict):
                hi = mid
            else:
                lo = mid + 1
        return lo

    @cython.ccall
    def col_bound(self, pat: bytearray, lo: cython.longlong, hi: cython.longlong,
                  strict: cython.bint, trie: cython.bint,
                  ctr: cython.longlong[:]) -> cython.longlong:
        mid: cython.longlong
        r: cython.int
        while lo < hi:
            mid = (lo + hi) >> 1
            r = self.cmp_col(mid, pat, trie, ctr)
            if r > 0 or (r == 0 and not strict):
                hi = mid
            else:
                lo = mid + 1
        return lo

    @cython.ccall
    def primary_seeds(self, pat: bytearray, trie: cython.bint,
                      ctr: cython.longlong[:]) -> list:
        """Flat [node, offset, ...] over all splits, via binary searches."""
        m: cython.longlong = len(pat)
        out = []
        i: cython.longlong
        a1: cython.longlong
        a2: cython.longlong
        b1: cython.longlong
        b2: cython.longlong
        q: cython.longlong
        for i in range(1, m):
            prev = bytearray(pat[:i])
            prev.reverse()
            a1 = self.row_bound(prev, 1, self.g + 1, False, trie, ctr)
            a2 = self.row_bound(prev, a1, self.g + 1, True, trie, ctr)
            if a1 >= a2:
                continue
            p2 = bytearray(pat[i:])
            b1 = self.col_bound(p2, 1, self.ncols + 1, False, trie, ctr)
            b2 = self.col_bound(p2, b1, self.ncols + 1, True, trie, ctr)
            if b1 >= b2:
                continue
            self.grid_seeds(a1, a2 - 1, b1, b2 - 1, i, out)
        return out

    @cython.ccall
    def grid_seeds(self, a1: cython.longlong, a2: cython.longlong, b1: cython.longlong,
                   b2: cython.longlong, plen1: cython.longlong, out: list):
        pts = self.rows.report(b1 - 1, b2, a1, a2)
        q: cython.longlong
        for q in range(0, len(pts), 2):
            out.append(self.tree.node(self.labels.get(pts[q])))
            out.append(-plen1)

    @cython.ccall
    def terminal_seeds(self, x: cython.longlong) -> list:
        out = []
        cnt: cython.longlong = self.xp.count(x)
        j: cython.longlong
        for j in range(1, cnt + 1):
            out.append(self.tree.leafselect(self.xp.select(x, j) + 1))
            out.append(0)
        return out

    @cython.ccall
    def track(self, seeds: list, ctr: cython.longlong[:]) -> list:
        """Report text positions for all seeds, following copies of every ancestor."""
        out = []
        cap: cython.Py_ssize_t = max(64, len(seeds))
        arr = np.zeros(cap, dtype=np.int64)
        stack: cython.longlong[:] = _buf(arr, np.int64)
        top: cython.Py_ssize_t = 0
        k: cython.Py_ssize_t
        for k in range(len(seeds)):
            stack[k] = seeds[k]
        top = len(seeds)
        v: cython.longlong
        u: cython.longlong
        l: cython.longlong
        x: cython.longlong
        sv: cython.longlong
        su: cython.longlong
        cnt: cython.longlong
        j: cython.longlong
        steps: cython.longlong = 0
        while top > 0:
            l = stack[top - 1]
            v = stack[top - 2]
            top -= 2
            sv = self.node_start(v)
            while v != 0:
                u = self.tree.parent(v)
                su = self.node_start(u)
                l += sv - su
                v = u
                sv = su
                steps += 1
                if v != 0:
                    x = self.label(v)
                    cnt = self.xp.count(x)
                    if top + 2 * cnt > cap:
                        cap = 2 * (top + 2 * cnt)
                        if cython.compiled:
                            arr = np.resize(arr, cap)
                        else:
                            arr = stack + [0] * (cap - len(stack))
                        stack = arr
                    for j in range(1, cnt + 1):
                        stack[top] = self.tree.leafselect(self.xp.select(x, j) + 1)
                        stack[top + 1] = l
                        top += 2
            out.append(l)
        ctr[1] += steps
        return out


# -- construction helpers -----------------------------------------------------

@cython.cfunc
def _occ_remove(occ: dict, key: cython.longlong, pos: cython.longlong):
    s = occ.get(key)
    if s is not None:
        s.discard(pos)
        if not s:
            del occ[key]


@cython.cfunc
def _occ_add(occ: dict, key: cython.longlong, pos: cython.longlong):
    s = occ.get(key)
    if s is None:
        s = set()
        occ[key] = s
    s.add(pos)


def repair(text):
    """RePair over a byte string.

    Returns ``(pairs, seq)``: the right-hand sides of the created rules in
    creation order (rule k gets id 256 + k) and the final sequence.
    Ties among the most frequent pairs go to the smallest (left, right).
    """
    data = bytes(text)
    n: cython.longlong = len(data)
    sym_a = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    nxt_a = np.arange(1, n + 1, dtype=np.int64)
    prv_a = np.arange(-1, n - 1, dtype=np.int64)
    if n:
        nxt_a[n - 1] = -1
    sym: cython.longlong[:] = _buf(sym_a, np.int64)
    nxt: cython.longlong[:] = _buf(nxt_a, np.int64)
    prv: cython.longlong[:] = _buf(prv_a, np.int64)
    occ = {}
    i: cython.longlong
    j: cython.longlong
    p: cython.longlong
    q: cython.longlong
    key: cython.longlong
    k2: cython.longlong
    a: cython.longlong
    b: cython.longlong
    z: cython.longlong
    t: cython.longlong
    last: cython.longlong
    for i in range(n - 1):
        _occ_add(occ, (sym[i] << 32) | sym[i + 1], i)
    heap = [(-len(s), k) for k, s in occ.items() if len(s) >= 2]
    heapq.heapify(heap)
    pairs = []
    nid: cython.longlong = 256
    while heap:
        negc, pkey = heapq.heappop(heap)
        key = pkey
        s = occ.get(key)
        if s is None:
            continue
        a = key >> 32
        b = key & 0xFFFFFFFF
        if a != b:
            t = len(s)
        else:
            t = 0
            last = -1
            for pp in sorted(s):
                if pp == last:
                    continue
                t += 1
                last = nxt[pp]
        if t != -negc:
            if t < -negc and t >= 2:
                heapq.heappush(heap, (-t, key))
            continue
        if t < 2:
            continue
        positions = sorted(s)
        del occ[key]
        z = nid
        nid += 1
        pairs.append((a, b))
        touched = set()
        for pp in positions:
            i = pp
            if sym[i] != a:
                continue
            j = nxt[i]
            if j < 0 or sym[j] != b:
                continue
            p = prv[i]
            q = nxt[j]
            if p >= 0:
                _occ_remove(occ, (sym[p] << 32) | a, p)
            if q >= 0:
                _occ_remove(occ, (b << 32) | sym[q], j)
            sym[i] = z
            sym[j] = -1
            nxt[i] = q
            if q >= 0:
                prv[q] = i
            if p >= 0:
                k2 = (sym[p] << 32) | z
                _occ_add(occ, k2, p)
                touched.add(k2)
            if q >= 0:
                k2 = (z << 32) | sym[q]
                _occ_add(occ, k2, i)
                touched.add(k2)
        for tk in touched:
            s2 = occ.get(tk)
            if s2 is not None and len(s2) >= 2:
                heapq.heappush(heap, (-len(s2), tk))
    seq = []
    i = 0 if n else -1
    while i >= 0:
        seq.append(sym[i])
        i = nxt[i]
    return pairs, seq


def interval_starts(lcp_prev, qrank, qlen):
    """For each query (rank r, length L) over a suffix array, the first rank
    of the block of suffixes sharing the first L symbols with suffix r.

    ``lcp_prev[r]`` is the LCP of the suffixes at ranks r-1 and r.
    Queries must be sorted by rank.
    """
    lp_a = np.ascontiguousarray(lcp_prev, dtype=np.int64)
    qr_a = np.ascontiguousarray(qrank, dtype=np.int64)
    ql_a = np.ascontiguousarray(qlen, dtype=np.int64)
    n: cython.longlong = len(lp_a)
    nq: cython.longlong = len(qr_a)
    res_a = np.zeros(nq, dtype=np.int64)
    sidx_a = np.zeros(max(n, 1), dtype=np.int64)
    sval_a = np.zeros(max(n, 1), dtype=np.int64)
    lp: cython.longlong[:] = _buf(lp_a, np.int64)
    qr: cython.longlong[:] = _buf(qr_a, np.int64)
    ql: cython.longlong[:] = _buf(ql_a, np.int64)
    res: cython.longlong[:] = _buf(res_a, np.int64)
    sidx: cython.longlong[:] = _buf(sidx_a, np.int64)
    sval: cython.longlong[:] = _buf(sval_a, np.int64)
    top: cython.longlong = 0
    qi: cython.longlong = 0
    r: cython.longlong
    v: cython.longlong
    lo: cython.longlong
    hi: cython.longlong
    mid: cython.longlong
    L: cython.longlong
    for r in range(n):
        v = lp[r]
        while top > 0 and sval[top - 1] >= v:
            top -= 1
        sidx[top] = r
        sval[top] = v
        top += 1
        while qi < nq and qr[qi] == r:
            L = ql[qi]
            lo = 0
            hi = top - 1
            while lo < hi:
                mid = (lo + hi + 1) >> 1
                if sval[mid] < L:
                    lo = mid
                else:
                    hi = mid - 1
            res[qi] = sidx[lo]
            qi += 1
    return np.asarray(res, dtype=np.int64)
