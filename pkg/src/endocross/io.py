"""JSON files for systems, elements and representations.

Complex entries are written as ``[re, im]`` pairs; plain numbers are read as
real. Schema violations raise :class:`~endocross.errors.ValidationError`
whose ``pointer`` is the JSON pointer of the offending value.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from .algebra import BlockIdeal, FdAlgebra
from .endo import Endomorphism
from .errors import ValidationError
from .matcalc import MatElement

_SCHEMAS = ("common", "system", "element", "rep")


@lru_cache(maxsize=None)
def _load_schemas():
    root = resources.files("endocross") / "schemas"
    docs = {name: json.loads((root / f"{name}.json").read_text(encoding="utf-8")) for name in _SCHEMAS}
    registry = Registry().with_resources(
        (doc["$id"], Resource.from_contents(doc)) for doc in docs.values())
    return docs, registry


def _pointer(path):
    return "/" + "/".join(str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate(doc, kind):
    """Validate ``doc`` against schema ``kind``; raises on the first error in path order."""
    docs, registry = _load_schemas()
    validator = Draft202012Validator(docs[kind], registry=registry)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise ValidationError(err.message, pointer=_pointer(err.absolute_path))


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})", pointer="") from exc
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", pointer="") from exc


# -- scalars and matrices ----------------------------------------------------------

def _scalar(v):
    if isinstance(v, list):
        return complex(v[0], v[1])
    return complex(v)


def decode_matrix(rows, pointer, shape=None):
    arr = np.array([[_scalar(v) for v in row] for row in rows], dtype=complex)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValidationError("rows have different lengths", pointer=pointer)
    if not rows:
        arr = arr.reshape(0, 0)
    if shape is not None and arr.shape != tuple(shape):
        raise ValidationError(f"expected a {shape[0]}x{shape[1]} matrix, got {arr.shape[0]}x"
                              f"{arr.shape[1] if arr.ndim == 2 else 0}", pointer=pointer)
    return arr


def encode_scalar(z, digits=12):
    z = complex(z)
    re = float(f"{z.real:.{digits}g}")
    im = float(f"{z.imag:.{digits}g}")
    return [re + 0.0, im + 0.0]


def encode_matrix(m, digits=12):
    return [[encode_scalar(z, digits) for z in row] for row in np.asarray(m)]


# -- systems -----------------------------------------------------------------------

def system_from_dict(doc):
    """Returns ``(endo, J or None)``."""
    validate(doc, "system")
    dims = doc["blocks"]
    B = len(dims)
    A = FdAlgebra(dims)
    spec = doc["endomorphism"]
    m = spec["multiplicity"]
    if len(m) != B:
        raise ValidationError(f"expected {B} rows", pointer="/endomorphism/multiplicity")
    for c, row in enumerate(m):
        if len(row) != B:
            raise ValidationError(f"expected {B} entries", pointer=f"/endomorphism/multiplicity/{c}")
    vs = None
    if "unitaries" in spec:
        if len(spec["unitaries"]) != B:
            raise ValidationError(f"expected {B} entries", pointer="/endomorphism/unitaries")
        vs = [None if v is None else decode_matrix(v, f"/endomorphism/unitaries/{c}", (dims[c], dims[c]))
              for c, v in enumerate(spec["unitaries"])]
    pad = spec.get("pad")
    if pad is not None and len(pad) != B:
        raise ValidationError(f"expected {B} entries", pointer="/endomorphism/pad")
    try:
        endo = Endomorphism(A, m, vs, pad)
    except ValidationError as exc:
        if exc.pointer is None:
            exc.pointer = "/endomorphism"
        raise
    J = None
    if "ideal_J" in doc:
        for i, b in enumerate(doc["ideal_J"]):
            if b >= B:
                raise ValidationError(f"block index {b} out of range (B = {B})", pointer=f"/ideal_J/{i}")
        J = BlockIdeal(A, doc["ideal_J"])
    return endo, J


def system_to_dict(endo, J=None, digits=12):
    A = endo.algebra
    out = {
        "blocks": list(A.dims),
        "endomorphism": {
            "multiplicity": endo.multiplicity.tolist(),
            "pad": [int(p) for p in endo.pad],
        },
    }
    if any(not np.allclose(v, np.eye(v.shape[0]), atol=0.0) for v in endo.unitaries):
        out["endomorphism"]["unitaries"] = [encode_matrix(v, digits) for v in endo.unitaries]
    if J is not None:
        out["ideal_J"] = J.sorted()
    out["labels"] = [f"b{b + 1}" for b in range(A.num_blocks)]
    return out


def load_system(path):
    return system_from_dict(read_json(path))


# -- elements ------------------------------------------------------------------------

def element_from_dict(doc, endo):
    validate(doc, "element")
    A = endo.algebra
    entries = {}
    for e, item in enumerate(doc["entries"]):
        ptr = f"/entries/{e}/blocks"
        if len(item["blocks"]) != A.num_blocks:
            raise ValidationError(f"expected {A.num_blocks} blocks", pointer=ptr)
        mats = [decode_matrix(m, f"{ptr}/{b}", (A.dims[b], A.dims[b])) for b, m in enumerate(item["blocks"])]
        key = (item["row"], item["col"])
        val = A.element(mats).data
        entries[key] = entries[key] + val if key in entries else val
    return MatElement(endo, entries)


def element_to_dict(a, digits=12):
    A = a.algebra
    out = []
    for (i, j), x in sorted(a.entries().items()):
        data = getattr(x, "data", x)
        out.append({
            "row": int(i),
            "col": int(j),
            "blocks": [encode_matrix(data[A.block_slice(b)].reshape(n, n), digits)
                       for b, n in enumerate(A.dims)],
        })
    return {"entries": out}


def load_element(path, endo):
    return element_from_dict(read_json(path), endo)


# -- representations ---------------------------------------------------------------------

def rep_from_dict(doc, endo):
    """Representation from images of matrix units and ``U``.

    ``pi_blocks[b][i][j]`` is the image of the matrix unit ``E_ij`` of block
    ``b``. The window is either an explicit projection ``window`` or, with a
    per-vector ``levels`` list, the levels below ``window_levels``.
    """
    from .reps import Representation
    validate(doc, "rep")
    A = endo.algebra
    U = decode_matrix(doc["U"], "/U")
    H = U.shape[0]
    if U.shape != (H, H):
        raise ValidationError("U must be square", pointer="/U")
    if len(doc["pi_blocks"]) != A.num_blocks:
        raise ValidationError(f"expected {A.num_blocks} blocks", pointer="/pi_blocks")
    images = np.zeros((A.size, H, H), dtype=complex)
    for b, i, j, idx in A.matrix_units():
        ptr = f"/pi_blocks/{b}"
        blk = doc["pi_blocks"][b]
        if len(blk) != A.dims[b] or len(blk[i]) != A.dims[b]:
            raise ValidationError(f"expected {A.dims[b]}x{A.dims[b]} images", pointer=ptr)
        images[idx] = decode_matrix(blk[i][j], f"{ptr}/{i}/{j}", (H, H))
    window = levels = depth = None
    if "window" in doc:
        window = decode_matrix(doc["window"], "/window", (H, H))
    if "levels" in doc:
        levels = np.array(doc["levels"], dtype=int)
        if levels.shape != (H,):
            raise ValidationError(f"expected {H} levels", pointer="/levels")
    if "window_levels" in doc:
        if levels is None:
            raise ValidationError("window_levels needs a levels list", pointer="/window_levels")
        if window is not None:
            raise ValidationError("give either window or window_levels", pointer="/window_levels")
        depth = int(doc["window_levels"])
        window = np.diag((levels < depth).astype(complex))
    return Representation.from_unit_images(endo, images, U, window, levels, depth, name="file")


def rep_to_dict(rep, digits=12):
    A = rep.endo.algebra
    imgs = rep.unit_images()
    pi_blocks = []
    for b, n in enumerate(A.dims):
        off = A.block_slice(b).start
        pi_blocks.append([[encode_matrix(imgs[off + i * n + j], digits) for j in range(n)] for i in range(n)])
    out = {"pi_blocks": pi_blocks, "U": encode_matrix(rep.U, digits)}
    if rep.levels is not None and rep.depth is not None:
        out["levels"] = rep.levels.tolist()
        out["window_levels"] = int(rep.depth)
    elif not rep.exact:
        out["window"] = encode_matrix(rep.window, digits)
    return out


def load_rep(path, endo):
    return rep_from_dict(read_json(path), endo)
