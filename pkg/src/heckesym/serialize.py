"""JSON encodings of fields, matrices, operators and parameter triples.

Field elements are always strings ("3", "-1/2" over Q; residues in [0, p)
over F_p) so that values survive a round trip exactly.
"""

from __future__ import annotations

from .errors import FieldMismatch, MalformedSpec, ZeroParameter
from .field import FieldDescriptor
from .hecke import HeckeSymmetry, ParamTriple
from .linalg import Matrix


def elem_to_json(f: FieldDescriptor, x) -> str:
    return f.format(x)


def elem_from_json(f: FieldDescriptor, obj, what: str = "value"):
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise MalformedSpec(f"{what}: expected a string or integer, got {obj!r}")
    try:
        return f.parse(str(obj))
    except MalformedSpec as e:
        raise MalformedSpec(f"{what}: {e}") from None


def field_from_json(obj, expected: FieldDescriptor | None = None, what: str = "field") -> FieldDescriptor:
    f = FieldDescriptor.from_json(obj)
    if expected is not None and f != expected:
        raise FieldMismatch(f"{what} is {f} but {expected} was requested")
    return f


def matrix_to_json(m: Matrix) -> dict:
    f = m.field
    return {"field": f.to_json(), "rows": [[f.format(x) for x in row] for row in m.to_lists()]}


def matrix_from_json(obj, f: FieldDescriptor | None = None, shape: tuple[int, int] | None = None, what: str = "matrix") -> Matrix:
    """Accepts {"field": ..., "rows": [...]} or a bare list of rows (then ``f`` is required)."""
    if isinstance(obj, dict):
        if "rows" not in obj:
            raise MalformedSpec(f"{what}: missing 'rows'")
        if "field" in obj:
            f = field_from_json(obj["field"], f, what=f"{what}.field")
        rows = obj["rows"]
    else:
        rows = obj
    if f is None:
        raise MalformedSpec(f"{what}: no field given")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MalformedSpec(f"{what}: rows must be a non-empty list of lists")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MalformedSpec(f"{what}: ragged rows")
    m = Matrix(f, [[elem_from_json(f, x, f"{what}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])
    if shape is not None and m.shape != shape:
        raise MalformedSpec(f"{what}: expected shape {shape}, got {m.shape}")
    return m


def hecke_to_json(h: HeckeSymmetry) -> dict:
    f = h.field
    return {"field": f.to_json(), "q": f.format(h.q), "R": matrix_to_json(h.R)}


def hecke_from_json(obj, f: FieldDescriptor | None = None, checked: bool = True) -> HeckeSymmetry:
    """With ``checked=False`` the rank of q*Id - R is not enforced (only q != 0)."""
    if not isinstance(obj, dict) or "R" not in obj or "q" not in obj:
        raise MalformedSpec("operator file needs 'R' and 'q'")
    if "field" in obj:
        f = field_from_json(obj["field"], f)
    R = matrix_from_json(obj["R"], f, (9, 9), what="R")
    q = elem_from_json(R.field, obj["q"], "q")
    if checked:
        return HeckeSymmetry.checked(R, q)
    if not q:
        raise ZeroParameter("Hecke parameter q must be nonzero")
    return HeckeSymmetry(R, q)


def triple_to_json(tr: ParamTriple) -> dict:
    f = tr.field
    return {
        "field": f.to_json(),
        "t": [f.format(x) for x in tr.t],
        "g": [[f.format(x) for x in row] for row in tr.g.to_lists()],
        "q": f.format(tr.q),
    }


def triple_from_json(obj, f: FieldDescriptor | None = None) -> ParamTriple:
    if not isinstance(obj, dict) or not {"t", "g", "q"} <= set(obj):
        raise MalformedSpec("triple file needs 't', 'g' and 'q'")
    if "field" in obj:
        f = field_from_json(obj["field"], f)
    g = matrix_from_json(obj["g"], f, (3, 3), what="g")
    f = g.field
    t = obj["t"]
    if not isinstance(t, list) or len(t) != 3:
        raise MalformedSpec("t must list the three coordinates t12, t13, t23")
    tr = ParamTriple.make(f, [elem_from_json(f, x, f"t[{i}]") for i, x in enumerate(t)], g, elem_from_json(f, obj["q"], "q"))
    return tr


def zeta_to_json(zeta: Matrix) -> dict:
    return {"zeta": matrix_to_json(zeta)}


def zeta_from_json(obj, f: FieldDescriptor | None = None) -> Matrix:
    if not isinstance(obj, dict) or "zeta" not in obj:
        raise MalformedSpec("twist file needs 'zeta'")
    return matrix_from_json(obj["zeta"], f, (3, 3), what="zeta")
