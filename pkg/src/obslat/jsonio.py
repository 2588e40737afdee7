"""JSON readers and writers for every on-disk object: lattices, spectral
families, observable tables, matrices, finite topologies, context diagrams,
sections, and presheaf descriptions.

File references resolve in order: absolute path, the directory of the
referring file, the working directory, then the directory named by the
OBS_CORPUS_DIR environment variable.  A bare name with no .json suffix may
also pick one of the built-in lattices.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .classical import FiniteTopSpace
from .context import ContextDiagram, diagram
from .corpus import standard_lattices
from .errors import InputError
from .lattice import FiniteOrthoLattice
from .observables import ObservableFunction, observable
from .presheaf import (LatticePresheaf, function_presheaf, spectral_presheaf)
from .spectral import SpectralFamily, spectral_family
from .stone import principal
from .vn import Tolerances, TOL, as_matrix

CORPUS_ENV = "OBS_CORPUS_DIR"


def resolve_path(ref: str, referrer: Path | None = None) -> Path:
    p = Path(ref)
    if p.is_absolute():
        if p.is_file():
            return p
        raise InputError("no such file", witness=str(p))
    candidates = []
    if referrer is not None:
        candidates.append(Path(referrer).parent / p)
    candidates.append(Path.cwd() / p)
    env = os.environ.get(CORPUS_ENV)
    if env:
        candidates.append(Path(env) / p)
    for c in candidates:
        if c.is_file():
            return c
    raise InputError("no such file",
                     witness={"ref": ref,
                              "searched": [str(c) for c in candidates]})


def load_json(path: Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError("malformed JSON",
                         witness={"file": str(path), "error": str(exc)})


def save_json(path, data) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _dereference(ref, referrer: Path | None) -> tuple[object, Path | None]:
    """A ref may be inline data or a filename; returns (data, its path)."""
    if isinstance(ref, str):
        path = resolve_path(ref, referrer)
        return load_json(path), path
    return ref, referrer


# -- lattices ---------------------------------------------------------------------

def load_lattice(ref, referrer: Path | None = None) -> FiniteOrthoLattice:
    if isinstance(ref, str) and not ref.endswith(".json"):
        builtin = standard_lattices()
        if ref in builtin:
            return builtin[ref]
    data, _ = _dereference(ref, referrer)
    if isinstance(data, FiniteOrthoLattice):
        return data
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError("a lattice file needs an 'elements' list")
    names = [str(x) for x in data["elements"]]
    pairs = [(str(a), str(b)) for a, b in data.get("leq", [])]
    ortho = {str(k): str(v) for k, v in data.get("ortho", {}).items()} or None
    return FiniteOrthoLattice.from_relation(names, pairs, ortho_pairs=ortho)


def lattice_to_json(lattice: FiniteOrthoLattice) -> dict:
    return lattice.to_dict()


# -- spectral families -------------------------------------------------------------

def load_family(ref, referrer: Path | None = None) -> SpectralFamily:
    data, path = _dereference(ref, referrer)
    if not isinstance(data, dict) or "breakpoints" not in data:
        raise InputError("a family file needs 'lattice' and 'breakpoints'")
    lat = load_lattice(data.get("lattice"), path)
    pairs = []
    for item in data["breakpoints"]:
        lam, name = item
        pairs.append((float(lam), lat.index(str(name))))
    top = lat.index(str(data["top"])) if "top" in data else None
    return spectral_family(lat, pairs, top=top)


def family_to_json(family: SpectralFamily,
                   lattice_ref: str | None = None) -> dict:
    lat = family.lattice
    out = {"lattice": lattice_ref or lat.to_dict(),
           "breakpoints": [[lam, lat.names[e]]
                           for lam, e in family.breakpoints]}
    if family.top != lat.one:
        out["top"] = lat.names[family.top]
    return out


# -- observable tables --------------------------------------------------------------

def split_ideal_key(key: str) -> list[str]:
    """Split a comma-joined member list, ignoring commas inside braces (the
    powerset lattices put commas in their element names)."""
    parts, depth, cur = [], 0, []
    for ch in key:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise InputError("unbalanced braces in ideal key",
                                 witness=key)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    out = [p.strip() for p in parts if p.strip()]
    if not out:
        raise InputError("empty ideal key", witness=key)
    return out


def ideal_key(lattice: FiniteOrthoLattice, generator: int) -> str:
    members = sorted(principal(lattice, generator).members())
    return ",".join(lattice.names[m] for m in members)


def load_table(ref, referrer: Path | None = None) -> ObservableFunction:
    data, path = _dereference(ref, referrer)
    if not isinstance(data, dict) or "values" not in data:
        raise InputError("a table file needs 'lattice' and 'values'")
    lat = load_lattice(data.get("lattice"), path)
    vals: dict[int, float] = {}
    for key, v in data["values"].items():
        names = split_ideal_key(str(key))
        members = [lat.index(nm) for nm in names]
        gen = lat.meet_of(members)
        if gen == lat.zero:
            raise InputError("key meets down to bottom, no dual ideal there",
                             witness={"key": key})
        if len(names) > 1:
            listed = set(members)
            actual = set(principal(lat, gen).members())
            if listed != actual:
                raise InputError(
                    "key does not list the members of a dual ideal",
                    witness={"key": key, "generator": lat.names[gen]})
        if gen in vals and vals[gen] != float(v):
            raise InputError("conflicting values for one ideal",
                             witness={"key": key})
        vals[gen] = float(v)
    top = lat.index(str(data["top"])) if "top" in data else None
    return observable(lat, vals, top=top,
                      checked=bool(data.get("checked", True)))


def table_to_json(f: ObservableFunction,
                  lattice_ref: str | None = None) -> dict:
    lat = f.lattice
    out = {"lattice": lattice_ref or lat.to_dict(),
           "values": {ideal_key(lat, a): f.values[a] for a in f.domain()}}
    if f.top != lat.one:
        out["top"] = lat.names[f.top]
    return out


# -- matrices ------------------------------------------------------------------------

def _entry(e) -> complex:
    if isinstance(e, (list, tuple)):
        if len(e) != 2:
            raise InputError("a complex entry is a [re, im] pair", witness=e)
        return complex(float(e[0]), float(e[1]))
    return complex(float(e))


def load_matrix(ref, referrer: Path | None = None) -> np.ndarray:
    data, _ = _dereference(ref, referrer)
    if isinstance(data, dict):
        data = data.get("matrix")
    if not isinstance(data, list) or not data:
        raise InputError("a matrix file is a nonempty list of rows")
    rows = [[_entry(e) for e in row] for row in data]
    return as_matrix(rows)


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(e.real), float(e.imag)] for e in row] for row in m]


# -- finite topologies ----------------------------------------------------------------

def load_space(ref, referrer: Path | None = None) -> FiniteTopSpace:
    data, _ = _dereference(ref, referrer)
    if not isinstance(data, dict) or "points" not in data:
        raise InputError("a space file needs a 'points' list")
    points = [str(p) for p in data["points"]]
    index = {p: i for i, p in enumerate(points)}

    def mask(names) -> int:
        out = 0
        for nm in names:
            nm = str(nm)
            if nm not in index:
                raise InputError("unknown point", witness=nm)
            out |= 1 << index[nm]
        return out

    if "opens" in data:
        return FiniteTopSpace(points, opens=[mask(u) for u in data["opens"]])
    if "min_neighborhoods" in data:
        nb = [0] * len(points)
        for nm, u in data["min_neighborhoods"].items():
            if str(nm) not in index:
                raise InputError("unknown point", witness=str(nm))
            nb[index[str(nm)]] = mask(u)
        return FiniteTopSpace(points, nb_masks=nb)
    raise InputError("a space file needs 'opens' or 'min_neighborhoods'")


def space_to_json(space: FiniteTopSpace, max_opens: int = 1024) -> dict:
    """Prefer the opens list; fall back to minimal neighborhoods when the
    open-set lattice is too large to enumerate."""
    out: dict = {"points": list(space.points)}
    try:
        opens = space.opens(cap=max_opens)
    except Exception:
        opens = None
    if opens is not None:
        out["opens"] = [space.set_names(u) for u in opens]
    else:
        out["min_neighborhoods"] = {
            p: space.set_names(space.nb_masks[i])
            for i, p in enumerate(space.points)}
    return out


def load_top_family(ref, referrer: Path | None = None):
    """A topological family file: {"space": ..., "breakpoints": [[lam,
    [points...]], ...], "base": [points...], "unbounded_above": bool}."""
    from .classical import top_spectral_family
    data, path = _dereference(ref, referrer)
    if not isinstance(data, dict) or "breakpoints" not in data:
        raise InputError("a family file needs 'space' and 'breakpoints'")
    space = load_space(data.get("space"), path)
    pairs = [(float(lam), space.mask_of([str(p) for p in names]))
             for lam, names in data["breakpoints"]]
    base = space.mask_of([str(p) for p in data.get("base", [])])
    return top_spectral_family(
        space, pairs, base=base,
        unbounded_above=bool(data.get("unbounded_above", False)))


def top_family_to_json(family, space_ref: str | None = None) -> dict:
    space = family.space
    out: dict = {"space": space_ref or space_to_json(space),
                 "breakpoints": [[lam, space.set_names(mask)]
                                 for lam, mask in family.breakpoints]}
    if family.base:
        out["base"] = space.set_names(family.base)
    if family.unbounded_above:
        out["unbounded_above"] = True
    return out


def load_point_values(ref, referrer: Path | None = None) -> dict[str, float]:
    """A point-function file: {"values": {"point": v, ...}} or the bare
    mapping."""
    data, _ = _dereference(ref, referrer)
    if isinstance(data, dict) and "values" in data:
        data = data["values"]
    if not isinstance(data, dict):
        raise InputError("a function file maps point names to numbers")
    return {str(k): float(v) for k, v in data.items()}


# -- context diagrams and sections ------------------------------------------------------

def load_diagram(ref, referrer: Path | None = None,
                 tol: Tolerances = TOL) -> ContextDiagram:
    data, path = _dereference(ref, referrer)
    if not isinstance(data, dict) or "contexts" not in data:
        raise InputError("a diagram file needs a 'contexts' mapping")
    dim = data.get("ambient_dim")
    named = {}
    for name, gens in data["contexts"].items():
        named[str(name)] = [load_matrix(g, path) for g in gens]
    return diagram(named, dim=int(dim) if dim is not None else None, tol=tol)


def load_generators(ref, referrer: Path | None = None
                    ) -> tuple[list[np.ndarray], int | None]:
    """An algebra file: either a list of matrices (or matrix refs) or a dict
    {"generators": [...], "dim": n}."""
    data, path = _dereference(ref, referrer)
    dim = None
    if isinstance(data, dict):
        dim = data.get("dim")
        data = data.get("generators")
    if not isinstance(data, list):
        raise InputError("an algebra file needs a 'generators' list")
    gens = [load_matrix(g, path) for g in data]
    return gens, int(dim) if dim is not None else None


def load_section(ref, referrer: Path | None = None,
                 tol: Tolerances = TOL,
                 dia: ContextDiagram | None = None
                 ) -> tuple[ContextDiagram, dict]:
    data, path = _dereference(ref, referrer)
    if not isinstance(data, dict) or "values" not in data:
        raise InputError("a section file needs 'diagram' and 'values'")
    if dia is None:
        if "diagram" not in data:
            raise InputError("a section file needs 'diagram' and 'values'")
        dia = load_diagram(data.get("diagram"), path, tol=tol)
    section: dict[str, dict[int, float]] = {}
    for cname, table in data["values"].items():
        ctx = dia.context_named(str(cname))
        vals: dict[int, float] = {}
        for elem_name, v in table.items():
            vals[ctx.lattice.index(str(elem_name))] = float(v)
        section[str(cname)] = vals
    return dia, section


def section_to_json(dia: ContextDiagram, section,
                    diagram_ref: str | None = None) -> dict:
    values = {}
    for c in dia.contexts:
        values[c.name] = {c.lattice.names[e]: v
                          for e, v in section[c.name].items()}
    out: dict = {"values": values}
    if diagram_ref is not None:
        out["diagram"] = diagram_ref
    return out


# -- presheaf descriptions ----------------------------------------------------------------

def load_presheaf(ref, referrer: Path | None = None
                  ) -> tuple[LatticePresheaf, dict]:
    """Returns the presheaf plus a meta dict describing what was built."""
    data, path = _dereference(ref, referrer)
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("a presheaf file needs a 'kind'")
    kind = str(data["kind"])
    if kind == "spectral":
        lat = load_lattice(data.get("lattice"), path)
        grid = [float(g) for g in data.get("grid", [])]
        ps = spectral_presheaf(lat, grid)
        return ps, {"kind": kind, "lattice": lat, "grid": grid}
    if kind == "functions":
        space = load_space(data.get("space"), path)
        values = list(data.get("values", []))
        if not values:
            raise InputError("a function presheaf needs a 'values' list")
        ps, lat, opens = function_presheaf(space, values)
        return ps, {"kind": kind, "space": space, "lattice": lat,
                    "opens": opens, "values": values}
    raise InputError("unknown presheaf kind", witness=kind)
