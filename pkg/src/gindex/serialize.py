"""On-disk index format.

Layout (all integers little-endian)::

    magic "GCIX" | u16 version | header | u16 nsections | sections | u32 crc

The header holds n, g, sigma, G_tree, flags, the Patricia sample rate and
depth, the permutation step, the grammar height, grammar sizes and the
alphabet. Each section is ``tag[4] | u64 count | u8 width | u64 nbytes |
payload`` where the payload is ``count`` integers of ``width`` bits packed
LSB-first. Only defining arrays are stored; rank/select directories,
min-max trees and Patricia trees are rebuilt on load. The CRC-32 covers
everything between the version field and the checksum.
"""
from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .index_build import GrammarIndex, GridParts, IndexOptions, TreeParts, assemble

__all__ = ["FORMAT_VERSION", "IndexFormatError", "dumps", "loads", "save", "load"]

MAGIC = b"GCIX"
FORMAT_VERSION = 1

_F_TRIE = 1
_F_PATRICIA = 2

_HEAD = struct.Struct("<QQHQHIIIIQQ")
_SEC = struct.Struct("<4sQBQ")


class IndexFormatError(ValueError):
    """The file is not a readable index (bad magic, version, checksum or layout)."""


def _pack(values, width: int) -> bytes:
    v = np.ascontiguousarray(values, dtype=np.uint64)
    if width == 0 or len(v) == 0:
        return b""
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((v[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.reshape(-1), bitorder="little").tobytes()


def _unpack(payload: bytes, width: int, count: int) -> np.ndarray:
    if width == 0 or count == 0:
        return np.zeros(count, dtype=np.int64)
    need = (count * width + 7) // 8
    if len(payload) != need:
        raise IndexFormatError("section length does not match its declared size")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    mat = bits[:count * width].reshape(count, width).astype(np.uint64)
    shifts = np.arange(width, dtype=np.uint64)
    return (mat << shifts[None, :]).sum(axis=1).astype(np.int64)


def _section(tag: bytes, values) -> bytes:
    arr = np.asarray(values, dtype=np.int64)
    width = int(arr.max()).bit_length() if arr.size else 0
    payload = _pack(arr, width)
    return _SEC.pack(tag, len(arr), width, len(payload)) + payload


def dumps(ix: GrammarIndex) -> bytes:
    c = ix.core
    o = ix.options
    flags = (_F_TRIE if ix.has_trie else 0) | (_F_PATRICIA if o.sample_rate else 0)
    head = _HEAD.pack(ix.n, ix.g, ix.sigma, ix.G_tree, flags, o.sample_rate or 0,
                      o.patricia_depth, o.perm_step, max(ix.height, 0),
                      ix.info.get("G_raw", ix.G_tree), ix.info.get("G_proc", ix.G_tree))
    secs = [
        _section(b"PARN", c.tree.raw_bits()),
        _section(b"XPRM", c.xp.to_numpy()),
        _section(b"YPOS", c.y.positions()),
        _section(b"PIPM", c.pi.to_numpy()),
        _section(b"LPOS", c.lmap.positions()),
        _section(b"GROW", c.rows.to_numpy()),
        _section(b"GLAB", c.labels.to_numpy()),
    ]
    if ix.has_trie:
        for tag, ts in ((b"TL", c.tsl), (b"TR", c.tsr)):
            secs.append(_section(tag + b"PN", ts.bp.raw_bits()))
            secs.append(_section(tag + b"LB", ts.xs.to_numpy() + 1))
    body = head + ix.alphabet + struct.pack("<H", len(secs)) + b"".join(secs)
    return MAGIC + struct.pack("<H", FORMAT_VERSION) + body + struct.pack("<I", zlib.crc32(body))


def loads(data: bytes) -> GrammarIndex:
    data = bytes(data)
    if len(data) < 6 or data[:4] != MAGIC:
        raise IndexFormatError("not an index file (bad magic)")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"unsupported format version {version} (expected {FORMAT_VERSION})")
    if len(data) < 6 + _HEAD.size + 4:
        raise IndexFormatError("truncated index file")
    body = data[6:-4]
    (crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(body) != crc:
        raise IndexFormatError("checksum mismatch: the index file is corrupted")
    try:
        return _decode(body)
    except (struct.error, ValueError, IndexError) as e:
        if isinstance(e, IndexFormatError):
            raise
        raise IndexFormatError(f"malformed index file: {e}") from e


def _decode(body: bytes) -> GrammarIndex:
    (n, g, sigma, g_tree, flags, rate, depth, step, h, g_raw, g_proc) = _HEAD.unpack_from(body, 0)
    off = _HEAD.size
    alphabet = body[off:off + sigma]
    off += sigma
    (nsec,) = struct.unpack_from("<H", body, off)
    off += 2
    secs = {}
    for _ in range(nsec):
        tag, count, width, nbytes = _SEC.unpack_from(body, off)
        off += _SEC.size
        payload = body[off:off + nbytes]
        if len(payload) != nbytes:
            raise IndexFormatError("truncated section")
        off += nbytes
        secs[tag] = _unpack(payload, width, count)
    if off != len(body):
        raise IndexFormatError("trailing bytes after the last section")
    need = [b"PARN", b"XPRM", b"YPOS", b"PIPM", b"LPOS", b"GROW", b"GLAB"]
    if flags & _F_TRIE:
        need += [b"TLPN", b"TLLB", b"TRPN", b"TRLB"]
    missing = [t.decode() for t in need if t not in secs]
    if missing:
        raise IndexFormatError(f"missing sections: {', '.join(missing)}")
    parens = secs[b"PARN"].astype(np.uint8)
    if len(parens) != 2 * (g_tree + 1) or len(secs[b"YPOS"]) != sigma:
        raise IndexFormatError("section sizes disagree with the header")
    parts = TreeParts(parens=parens, xprime=secs[b"XPRM"], y_ones=secs[b"YPOS"],
                      pi=secs[b"PIPM"], l_ones=secs[b"LPOS"], alphabet=bytes(alphabet),
                      n=n, g=g)
    grid = GridParts(secs[b"GROW"], secs[b"GLAB"])
    tries = None
    if flags & _F_TRIE:
        tries = ((secs[b"TLPN"].astype(np.uint8), secs[b"TLLB"]),
                 (secs[b"TRPN"].astype(np.uint8), secs[b"TRLB"]))
    options = IndexOptions(sample_rate=rate if flags & _F_PATRICIA else None,
                           with_trie=bool(flags & _F_TRIE), perm_step=step,
                           patricia_depth=depth)
    info = {"h": h, "G_raw": g_raw, "G_proc": g_proc}
    return assemble(parts, grid, options, info, tries)


def save(ix: GrammarIndex, path) -> int:
    """Write ``ix`` to ``path``; returns the number of bytes written."""
    data = dumps(ix)
    Path(path).write_bytes(data)
    return len(data)


def load(path) -> GrammarIndex:
    return loads(Path(path).read_bytes())
