"""JSON schemas for modules, algebras, complexes and certificates.

All files are JSON objects with a ``kind`` field.  Serialization is
canonical: sorted keys, two-space indent, ASCII, LF line endings; equal
inputs give byte-identical outputs.

module.json
    kind "module"; degrees {lo, hi}; basis {degree: [names]}; sq as
    sparse quadruples [j, degree, row, col] (col indexes the basis of
    ``degree``, row the basis of ``degree + j``).
algebra.json
    the module fields plus unit (degree-0 basis index) and products as
    sparse triples [[da, ia], [db, ib], [dc, ic]] with dc = da + db.
complex.json
    kind "complex"; generators [{name, grading, action}]; incidence
    [[x, y], ...] (presence = 1).
certificate.json
    kind "certificate"; n; bound; chains [{start_degree, start
    (basis indices), exponents, end_degree}].
cap.json
    kind "cap-action"; algebra (nested algebra object); space (nested
    module object); action as sparse quintuples [da, ia, d, row, col].
"""

from __future__ import annotations

import json
from typing import Any

from .bounds import BoundCertificate, CapAction, SqChain, indices_to_vec
from .f2core import F2Matrix, GradedMap
from .stmod import GradedAlgebra, UnstableModule, algebra, module


class SchemaError(ValueError):
    """A JSON document failed schema validation."""

    def __init__(self, code: str, message: str, witness: Any = None):
        super().__init__(message)
        self.code = code
        self.witness = witness

    def to_json(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _require(obj: dict, key: str, types, code: str):
    if key not in obj:
        raise SchemaError(code, f"missing field {key!r}", key)
    val = obj[key]
    if not isinstance(val, types):
        raise SchemaError(code, f"field {key!r} has wrong type", key)
    return val


def check_degree_cap(lo: int, hi: int, max_degree: int | None) -> None:
    if max_degree is not None and (abs(lo) > max_degree or abs(hi) > max_degree):
        raise SchemaError(
            "degree-cap",
            f"degree range [{lo}, {hi}] exceeds the cap {max_degree} "
            f"(set FLOERBOUND_MAX_DEGREE to raise it)",
            [lo, hi],
        )


# --- modules -----------------------------------------------------------------


def module_to_json(m: UnstableModule) -> dict:
    sq = []
    for (j, d), mat in sorted(m.sq.items()):
        for r in range(mat.rows):
            for c in range(mat.cols):
                if mat.entry(r, c):
                    sq.append([j, d, r, c])
    return {
        "kind": "module",
        "degrees": {"lo": m.lo, "hi": m.hi},
        "basis": {str(d): list(names) for d, names in sorted(m.basis.items())},
        "sq": sq,
    }


def module_from_json(obj: Any, max_degree: int | None = 64) -> UnstableModule:
    if not isinstance(obj, dict) or obj.get("kind") != "module":
        raise SchemaError("bad-kind", "expected an object with kind 'module'",
                          obj.get("kind") if isinstance(obj, dict) else None)
    degrees = _require(obj, "degrees", dict, "bad-degrees")
    lo = _require(degrees, "lo", int, "bad-degrees")
    hi = _require(degrees, "hi", int, "bad-degrees")
    check_degree_cap(lo, hi, max_degree)
    basis_raw = _require(obj, "basis", dict, "bad-basis")
    basis: dict[int, tuple[str, ...]] = {}
    for key, names in basis_raw.items():
        try:
            d = int(key)
        except ValueError:
            raise SchemaError("bad-basis", f"basis key {key!r} is not an integer", key)
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise SchemaError("bad-basis", f"basis[{key}] must be a list of names", key)
        if len(set(names)) != len(names):
            raise SchemaError("bad-basis", f"duplicate names in degree {d}", names)
        if names:
            basis[d] = tuple(names)
    sq_raw = _require(obj, "sq", list, "bad-sq")
    entries: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for quad in sq_raw:
        if (not isinstance(quad, list) or len(quad) != 4
                or not all(isinstance(x, int) for x in quad)):
            raise SchemaError("bad-sq", "sq entries must be [j, degree, row, col]", quad)
        j, d, r, c = quad
        if j < 1:
            raise SchemaError("bad-sq", f"sq exponent {j} must be >= 1", quad)
        dim_src = len(basis.get(d, ()))
        dim_dst = len(basis.get(d + j, ()))
        if not (0 <= c < dim_src and 0 <= r < dim_dst):
            raise SchemaError(
                "bad-sq",
                f"entry {quad} outside the {dim_dst}x{dim_src} matrix of "
                f"Sq^{j} on degree {d}",
                quad,
            )
        entries.setdefault((j, d), []).append((r, c))
    sq = {
        (j, d): F2Matrix.from_entries(len(basis.get(d + j, ())), len(basis.get(d, ())), ent)
        for (j, d), ent in entries.items()
    }
    try:
        return module(lo, hi, basis, sq)
    except ValueError as e:
        raise SchemaError("bad-module", str(e))


# --- algebras ----------------------------------------------------------------


def algebra_to_json(a: GradedAlgebra) -> dict:
    out = module_to_json(a.module)
    out["kind"] = "algebra"
    out["unit"] = a.unit
    triples = []
    for (da, ia, db, ib), vec in sorted(a.products.items()):
        if (da, ia) > (db, ib):
            continue  # one orientation; the loader symmetrizes
        if da == 0 and ia == a.unit:
            continue  # unit products are implied
        if db == 0 and ib == a.unit:
            continue
        v = vec
        while v:
            low = v & -v
            triples.append([[da, ia], [db, ib], [da + db, low.bit_length() - 1]])
            v ^= low
    out["products"] = triples
    return out


def algebra_from_json(obj: Any, max_degree: int | None = 64) -> GradedAlgebra:
    if not isinstance(obj, dict) or obj.get("kind") != "algebra":
        raise SchemaError("bad-kind", "expected an object with kind 'algebra'",
                          obj.get("kind") if isinstance(obj, dict) else None)
    m = module_from_json({**obj, "kind": "module"}, max_degree)
    unit = _require(obj, "unit", int, "bad-unit")
    if not 0 <= unit < m.dim(0):
        raise SchemaError("bad-unit", f"unit index {unit} is not a degree-0 basis index", unit)
    triples = _require(obj, "products", list, "bad-products")
    products: dict[tuple[int, int, int, int], int] = {}
    for t in triples:
        if (not isinstance(t, list) or len(t) != 3
                or not all(isinstance(p, list) and len(p) == 2
                           and all(isinstance(x, int) for x in p) for p in t)):
            raise SchemaError("bad-products",
                              "products must be [[da,ia],[db,ib],[dc,ic]] triples", t)
        (da, ia), (db, ib), (dc, ic) = t
        if dc != da + db:
            raise SchemaError("bad-products",
                              f"product triple {t} has dc != da + db", t)
        for d, i in ((da, ia), (db, ib), (dc, ic)):
            if not 0 <= i < m.dim(d):
                raise SchemaError("bad-products",
                                  f"basis reference [{d},{i}] out of range", t)
        key = (da, ia, db, ib)
        products[key] = products.get(key, 0) ^ (1 << ic)
    try:
        return algebra(m, unit, products)
    except ValueError as e:
        raise SchemaError("bad-algebra", str(e))


# --- complexes ---------------------------------------------------------------


def complex_to_json(generators, incidence) -> dict:
    return {
        "kind": "complex",
        "generators": [
            {"name": n, "grading": g, "action": a} for n, g, a in generators
        ],
        "incidence": [[x, y] for x, y in sorted(incidence)],
    }


def complex_from_json(obj: Any, max_degree: int | None = 64):
    """Raw (generators, incidence) lists; validation happens in morse."""
    if not isinstance(obj, dict) or obj.get("kind") != "complex":
        raise SchemaError("bad-kind", "expected an object with kind 'complex'",
                          obj.get("kind") if isinstance(obj, dict) else None)
    gens_raw = _require(obj, "generators", list, "bad-generators")
    generators = []
    for g in gens_raw:
        if not isinstance(g, dict):
            raise SchemaError("bad-generators", "generators must be objects", g)
        name = _require(g, "name", str, "bad-generators")
        grading = _require(g, "grading", int, "bad-generators")
        action = _require(g, "action", (int, float), "bad-generators")
        if max_degree is not None and abs(grading) > max_degree:
            raise SchemaError("degree-cap",
                              f"grading {grading} exceeds the cap {max_degree}", name)
        generators.append((name, grading, float(action)))
    inc_raw = _require(obj, "incidence", list, "bad-incidence")
    incidence = []
    for pair in inc_raw:
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, str) for x in pair)):
            raise SchemaError("bad-incidence", "incidence entries must be [x, y]", pair)
        incidence.append((pair[0], pair[1]))
    return generators, incidence


# --- certificates ------------------------------------------------------------


def certificate_from_json(obj: Any) -> BoundCertificate:
    if not isinstance(obj, dict) or obj.get("kind") != "certificate":
        raise SchemaError("bad-kind", "expected an object with kind 'certificate'",
                          obj.get("kind") if isinstance(obj, dict) else None)
    n = _require(obj, "n", int, "bad-certificate")
    bound = _require(obj, "bound", int, "bad-certificate")
    chains = []
    for ch in _require(obj, "chains", list, "bad-certificate"):
        if not isinstance(ch, dict):
            raise SchemaError("bad-certificate", "chains must be objects", ch)
        start_degree = _require(ch, "start_degree", int, "bad-certificate")
        start = _require(ch, "start", list, "bad-certificate")
        exponents = _require(ch, "exponents", list, "bad-certificate")
        if not all(isinstance(x, int) for x in start + exponents):
            raise SchemaError("bad-certificate", "chain entries must be integers", ch)
        if any(i < 0 for i in start):
            raise SchemaError("bad-certificate", "negative basis index", ch)
        chains.append(SqChain(start_degree, indices_to_vec(start), tuple(exponents)))
    return BoundCertificate(n, bound, tuple(chains))


# --- cap actions -------------------------------------------------------------


def cap_action_to_json(c: CapAction) -> dict:
    action = []
    for (da, ia, d), mat in sorted(c.action.items()):
        for r in range(mat.rows):
            for col in range(mat.cols):
                if mat.entry(r, col):
                    action.append([da, ia, d, r, col])
    return {
        "kind": "cap-action",
        "algebra": algebra_to_json(c.algebra),
        "space": module_to_json(c.space),
        "action": action,
    }


def cap_action_from_json(obj: Any, max_degree: int | None = 64) -> CapAction:
    if not isinstance(obj, dict) or obj.get("kind") != "cap-action":
        raise SchemaError("bad-kind", "expected an object with kind 'cap-action'",
                          obj.get("kind") if isinstance(obj, dict) else None)
    alg = algebra_from_json(_require(obj, "algebra", dict, "bad-cap"), max_degree)
    space = module_from_json(_require(obj, "space", dict, "bad-cap"), max_degree)
    entries: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
    for quint in _require(obj, "action", list, "bad-cap"):
        if (not isinstance(quint, list) or len(quint) != 5
                or not all(isinstance(x, int) for x in quint)):
            raise SchemaError("bad-cap", "action entries must be [da, ia, d, row, col]", quint)
        da, ia, d, r, c = quint
        if not 0 <= ia < alg.module.dim(da):
            raise SchemaError("bad-cap", f"algebra basis [{da},{ia}] out of range", quint)
        if not (0 <= c < space.dim(d) and 0 <= r < space.dim(d + da)):
            raise SchemaError("bad-cap", f"action entry {quint} out of range", quint)
        entries.setdefault((da, ia, d), []).append((r, c))
    action = {
        key: F2Matrix.from_entries(space.dim(key[2] + key[0]), space.dim(key[2]), ent)
        for key, ent in entries.items()
    }
    return CapAction(alg, space, action)


# --- graded maps (report rendering) -------------------------------------------


def graded_map_to_json(g: GradedMap) -> dict:
    blocks = {}
    for d, mat in sorted(g.blocks.items()):
        ones = [[r, c] for r in range(mat.rows) for c in range(mat.cols) if mat.entry(r, c)]
        if ones:
            blocks[str(d)] = ones
    return {
        "shift": g.shift,
        "source_dims": {str(d): v for d, v in sorted(g.source_dims.items())},
        "target_dims": {str(d): v for d, v in sorted(g.target_dims.items())},
        "blocks": blocks,
    }
