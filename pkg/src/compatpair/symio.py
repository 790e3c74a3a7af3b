"""File containers for symbols, block symbols, group functions, and matrices.

Layout (bit-exact):

    line 1   magic: b"CPSYM 1\\n" or b"CPMAT 1\\n"
    line 2   JSON header, UTF-8, single line, sorted keys, newline-terminated
    payload  raw little-endian complex128, C order

Symbol headers carry {"kind": "phase", "n": N, "box": L, "layout": tag}
with layout in {"scalar", "quad", "mat2"}; block payloads concatenate the
four component planes.  Group-function headers carry the group name and
per-axis [lo, hi, n].  Matrix headers carry {"kind": "matrix", "rows": r,
"cols": c, "basis": [...]}.
"""

from __future__ import annotations

import json

import numpy as np

from .actions import BlockSymbol
from .errors import StructureError
from .groups import GROUPS, GroupFunction
from .symbols import PhaseGrid, PhaseSymbol
from .weyl import LinearOperatorMatrix

_SYM_MAGIC = b"CPSYM 1\n"
_MAT_MAGIC = b"CPMAT 1\n"


def _pack(magic: bytes, header: dict, payload: np.ndarray) -> bytes:
    head = json.dumps(header, sort_keys=True).encode() + b"\n"
    return magic + head + np.ascontiguousarray(payload, dtype="<c16").tobytes()


def _unpack(raw: bytes, magic: bytes):
    if not raw.startswith(magic):
        raise StructureError("bad magic; not a container of the expected kind")
    rest = raw[len(magic):]
    nl = rest.index(b"\n")
    header = json.loads(rest[:nl].decode())
    payload = np.frombuffer(rest[nl + 1:], dtype="<c16")
    return header, payload


def write_symbol(path, sym) -> None:
    if isinstance(sym, PhaseSymbol):
        header = {"kind": "phase", "layout": "scalar", "n": sym.grid.n,
                  "box": sym.grid.half_width}
        payload = sym.samples
    elif isinstance(sym, BlockSymbol):
        header = {"kind": "phase", "layout": sym.layout, "n": sym.grid.n,
                  "box": sym.grid.half_width}
        payload = np.stack([b.samples for b in sym.blocks])
    elif isinstance(sym, GroupFunction):
        header = {"kind": "group", "group": sym.group.name,
                  "axes": [[float(ax[0]), float(ax[-1]), len(ax)] for ax in sym.axes]}
        payload = sym.samples
    else:
        raise StructureError(f"cannot serialize {type(sym).__name__}")
    with open(path, "wb") as fh:
        fh.write(_pack(_SYM_MAGIC, header, payload))


def read_symbol(path):
    with open(path, "rb") as fh:
        header, payload = _unpack(fh.read(), _SYM_MAGIC)
    if header.get("kind") == "phase":
        grid = PhaseGrid(int(header["n"]), float(header["box"]))
        n = grid.n
        if header["layout"] == "scalar":
            if payload.size != n * n:
                raise StructureError("payload size does not match the header")
            return PhaseSymbol(grid, payload.reshape(n, n))
        if header["layout"] in ("quad", "mat2"):
            if payload.size != 4 * n * n:
                raise StructureError("payload size does not match the header")
            blocks = tuple(PhaseSymbol(grid, payload[k * n * n:(k + 1) * n * n]
                                       .reshape(n, n)) for k in range(4))
            return BlockSymbol(header["layout"], blocks)
        raise StructureError(f"unknown layout {header['layout']!r}")
    if header.get("kind") == "group":
        gname = header["group"]
        if gname not in GROUPS:
            raise StructureError(f"unknown group {gname!r}")
        axes = [np.linspace(lo, hi, int(cnt)) for lo, hi, cnt in header["axes"]]
        shape = tuple(len(ax) for ax in axes)
        if payload.size != int(np.prod(shape)):
            raise StructureError("payload size does not match the header")
        return GroupFunction(GROUPS[gname](), axes, payload.reshape(shape))
    raise StructureError(f"unknown container kind {header.get('kind')!r}")


def write_matrix(path, mat: LinearOperatorMatrix) -> None:
    basis = list(mat.basis)
    header = {"kind": "matrix", "rows": mat.entries.shape[0],
              "cols": mat.entries.shape[1], "basis": basis}
    with open(path, "wb") as fh:
        fh.write(_pack(_MAT_MAGIC, header, mat.entries))


def read_matrix(path) -> LinearOperatorMatrix:
    with open(path, "rb") as fh:
        header, payload = _unpack(fh.read(), _MAT_MAGIC)
    r, c = int(header["rows"]), int(header["cols"])
    if payload.size != r * c:
        raise StructureError("payload size does not match the header")
    return LinearOperatorMatrix(payload.reshape(r, c), tuple(header["basis"]))


def write_named_matrices(path, mats: dict) -> None:
    """Several named operators in one container (used by the rep command)."""
    names = sorted(mats)
    first = mats[names[0]]
    header = {"kind": "matrix-set", "names": names,
              "rows": first.entries.shape[0], "cols": first.entries.shape[1],
              "basis": list(first.basis)}
    payload = np.stack([mats[n].entries for n in names])
    with open(path, "wb") as fh:
        fh.write(_pack(_MAT_MAGIC, header, payload))


def read_named_matrices(path) -> dict:
    with open(path, "rb") as fh:
        header, payload = _unpack(fh.read(), _MAT_MAGIC)
    names = header["names"]
    r, c = int(header["rows"]), int(header["cols"])
    mats = payload.reshape(len(names), r, c)
    basis = tuple(header["basis"])
    return {n: LinearOperatorMatrix(mats[i], basis) for i, n in enumerate(names)}
