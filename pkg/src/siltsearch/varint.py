"""Unsigned LEB128 variable-length integers, scalar and vectorized.

Each value is written 7 bits at a time, least significant group first; the
high bit of a byte is set when more bytes follow.
"""

from __future__ import annotations

import numpy as np


def encode(value: int, out: bytearray | None = None) -> bytearray:
    if value < 0:
        raise ValueError(f"cannot encode negative value {value}")
    if out is None:
        out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return out


def decode(buf, pos: int = 0) -> tuple[int, int]:
    """Decode one value starting at ``pos``; return ``(value, next_pos)``."""
    result = 0
    shift = 0
    while True:
        try:
            byte = buf[pos]
        except IndexError:
            raise ValueError("truncated varint") from None
        pos += 1
        result |= (byte & 0x7F) << shift
        if byte < 0x80:
            return result, pos
        shift += 7


def encoded_lengths(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.uint64)
    lengths = np.ones(values.shape, dtype=np.int64)
    rest = values >> np.uint64(7)
    while rest.any():
        nz = rest != 0
        lengths += nz
        rest = rest >> np.uint64(7)
    return lengths


def encode_array(values) -> bytes:
    values = np.asarray(values)
    if values.size and values.min() < 0:
        raise ValueError("cannot encode negative values")
    values = values.astype(np.uint64, copy=False)
    lengths = encoded_lengths(values)
    total = int(lengths.sum())
    if total == 0:
        return b""
    owner = np.repeat(np.arange(values.size), lengths)
    starts = np.cumsum(lengths) - lengths
    group = np.arange(total) - starts[owner]
    out = (values[owner] >> (np.uint64(7) * group.astype(np.uint64))) & np.uint64(0x7F)
    more = group < (lengths[owner] - 1)
    out = out | (more.astype(np.uint64) << np.uint64(7))
    return out.astype(np.uint8).tobytes()


def decode_array(buf) -> np.ndarray:
    """Decode a buffer holding only complete varints into a uint64 array."""
    data = np.frombuffer(buf, dtype=np.uint8)
    if data.size == 0:
        return np.zeros(0, dtype=np.uint64)
    if data[-1] & 0x80:
        raise ValueError("truncated varint")
    ends = np.flatnonzero(data < 0x80)
    starts = np.empty_like(ends)
    starts[0] = 0
    starts[1:] = ends[:-1] + 1
    owner = np.repeat(np.arange(ends.size), ends - starts + 1)
    group = np.arange(data.size) - starts[owner]
    if group.max() > 9:
        raise ValueError("varint longer than 64 bits")
    payload = (data & 0x7F).astype(np.uint64) << (np.uint64(7) * group.astype(np.uint64))
    return np.add.reduceat(payload, starts)
