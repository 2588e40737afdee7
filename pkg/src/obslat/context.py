"""Contexts (abelian operator subalgebras with their Boolean projection
lattices), diagrams of contexts closed under intersection, partial sections
over a diagram, and the gluing report with an operator-extendability verdict.

A section assigns one real value to every nonzero projection of every
context.  Values live on lattice elements; the bridge to matrices goes
through the minimal projections of each context.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .corpus import boolean_algebra
from .errors import InputError, PreconditionError, ResourceError
from .lattice import FiniteOrthoLattice, bits
from .vn import (TOL, Tolerances, VNSubalgebra, as_matrix, check_hermitian,
                 family_from_steps, minimal_projections, projection_join,
                 projection_leq, rank_of_projection, spectral_family_of,
                 subalgebra, trivial_algebra)

MAX_MINIMAL = 6
MAX_CONTEXTS = 24
FULL_SCAN_POOL = 12


@dataclass(frozen=True)
class Context:
    """An abelian subalgebra with its projection lattice realized as the
    powerset of its minimal projections (bit i of an element's mask selects
    minimal[i])."""
    name: str
    algebra: VNSubalgebra = field(compare=False)
    lattice: FiniteOrthoLattice = field(compare=False)
    minimal: tuple = field(compare=False, default=())

    def projection_of(self, element: int) -> np.ndarray:
        d = self.algebra.dim
        out = np.zeros((d, d), dtype=complex)
        for i in bits(element):
            out = out + self.minimal[i]
        return out

    def element_of(self, p, tol: Tolerances = TOL) -> int:
        p = as_matrix(p)
        mask = 0
        for i, q in enumerate(self.minimal):
            if projection_leq(q, p, tol):
                mask |= 1 << i
        if float(np.linalg.norm(self.projection_of(mask) - p)) > tol.proj:
            raise PreconditionError(
                "projection does not belong to the context",
                witness={"context": self.name})
        return mask

    def nonzero_elements(self) -> list[int]:
        return [e for e in range(self.lattice.n) if e != self.lattice.zero]


def context_from_generators(name: str, gens, dim: int | None = None,
            tol: Tolerances = TOL) -> Context:
    alg = subalgebra(gens, dim=dim, tol=tol)
    return context_from_algebra(name, alg, tol)


def context_from_algebra(name: str, alg: VNSubalgebra,
                         tol: Tolerances = TOL) -> Context:
    if not alg.is_abelian(tol):
        raise InputError("context algebras must be abelian",
                         witness={"context": name})
    mins = minimal_projections(alg, tol)
    if len(mins) > MAX_MINIMAL:
        raise ResourceError(
            "too many minimal projections for the lattice bridge",
            witness={"context": name, "count": len(mins)})
    return Context(name, alg, boolean_algebra(len(mins)), tuple(mins))


def _same_algebra(a: VNSubalgebra, b: VNSubalgebra,
                  tol: Tolerances) -> bool:
    return (a.linear_dim == b.linear_dim
            and all(b.contains(x, tol) for x in a.basis))


@dataclass(frozen=True)
class ContextDiagram:
    """Contexts closed under pairwise intersection (the scalars always end
    up present), with a deduplicated pool of every projection that occurs in
    any member lattice."""
    dim: int
    contexts: tuple = ()
    pool: tuple = ()                 # distinct projections, index order
    pool_labels: tuple = ()
    element_pool: dict = field(default_factory=dict, compare=False)
    tol: Tolerances = field(default=TOL, compare=False)

    def context_named(self, name: str) -> Context:
        for c in self.contexts:
            if c.name == name:
                return c
        raise InputError("no such context", witness={"context": name})

    def pool_index_of(self, p) -> int | None:
        p = as_matrix(p)
        for i, q in enumerate(self.pool):
            if float(np.linalg.norm(q - p)) <= self.tol.proj:
                return i
        return None


def diagram(named_generators: dict[str, list], dim: int | None = None,
            tol: Tolerances = TOL) -> ContextDiagram:
    """Build contexts from generator lists, then close under pairwise
    intersection; a scalars context is appended when no intersection already
    produced it."""
    if not named_generators:
        raise InputError("need at least one context")
    ctxs: list[Context] = []
    for name, gens in named_generators.items():
        if any(c.name == name for c in ctxs):
            raise InputError("duplicate context name", witness={"context": name})
        c = context_from_generators(name, gens, dim=dim, tol=tol)
        if ctxs and c.algebra.dim != ctxs[0].algebra.dim:
            raise InputError("ambient dimension mismatch",
                             witness={"context": name})
        ctxs.append(c)
    ambient = ctxs[0].algebra.dim

    from .vn import algebra_intersection
    changed = True
    while changed:
        changed = False
        for a, b in combinations(list(ctxs), 2):
            inter = algebra_intersection(a.algebra, b.algebra, tol)
            if any(_same_algebra(inter, c.algebra, tol) for c in ctxs):
                continue
            # name independent of the order the contexts were given in
            ctxs.append(context_from_algebra(
                "&".join(sorted((a.name, b.name))), inter, tol))
            changed = True
            if len(ctxs) > MAX_CONTEXTS:
                raise ResourceError("intersection closure grew too large",
                                    witness={"cap": MAX_CONTEXTS})
    triv = trivial_algebra(ambient, tol)
    if not any(_same_algebra(triv, c.algebra, tol) for c in ctxs):
        ctxs.append(context_from_algebra("scalars", triv, tol))

    pool: list[np.ndarray] = []
    labels: list[str] = []
    element_pool: dict[tuple[str, int], int] = {}
    for c in ctxs:
        for e in c.nonzero_elements():
            p = c.projection_of(e)
            idx = None
            for i, q in enumerate(pool):
                if float(np.linalg.norm(q - p)) <= tol.proj:
                    idx = i
                    break
            if idx is None:
                pool.append(p)
                labels.append(f"{c.name}:{c.lattice.names[e]}")
                idx = len(pool) - 1
            element_pool[(c.name, e)] = idx
    return ContextDiagram(ambient, tuple(ctxs), tuple(pool), tuple(labels),
                          element_pool, tol)


# -- sections ---------------------------------------------------------------------

def section_from_operator(dia: ContextDiagram, a) -> dict[str, dict[int, float]]:
    """Restrict a selfadjoint operator to every context: the value at a
    projection is the first spectral breakpoint whose eigenspace contains
    its range."""
    a = check_hermitian(a, dia.tol)
    if a.shape[0] != dia.dim:
        raise InputError("operator dimension mismatch",
                         witness=[int(a.shape[0]), dia.dim])
    fam = spectral_family_of(a, dia.tol)
    out: dict[str, dict[int, float]] = {}
    for c in dia.contexts:
        vals: dict[int, float] = {}
        for e in c.nonzero_elements():
            p = c.projection_of(e)
            for mu, proj in zip(fam.breakpoints, fam.projections):
                if projection_leq(p, proj, dia.tol):
                    vals[e] = float(mu)
                    break
        out[c.name] = vals
    return out


def _validate_section(dia: ContextDiagram, section) -> None:
    names = {c.name for c in dia.contexts}
    if set(section) != names:
        raise InputError("section must cover exactly the diagram's contexts",
                         witness={"missing": sorted(names - set(section)),
                                  "extra": sorted(set(section) - names)})
    for c in dia.contexts:
        want = set(c.nonzero_elements())
        got = set(section[c.name])
        if got != want:
            raise InputError(
                "section must value every nonzero element of the context",
                witness={"context": c.name})
        for v in section[c.name].values():
            if not isinstance(v, (int, float)) or not np.isfinite(v):
                raise InputError("section values must be finite reals",
                                 witness={"context": c.name})


def is_global_section(dia: ContextDiagram, section
                      ) -> tuple[bool, dict | None]:
    """Inside each context the values must increase jointly (value at a join
    is the largest member value); across contexts the same projection must
    get the same value."""
    _validate_section(dia, section)
    for c in dia.contexts:
        vals = section[c.name]
        lat = c.lattice
        for x, y in combinations(c.nonzero_elements(), 2):
            j = lat.join(x, y)
            expect = max(vals[x], vals[y])
            if vals[j] != expect:
                return False, {
                    "kind": "not-increasing-in-context",
                    "context": c.name,
                    "family": [lat.names[x], lat.names[y]],
                    "join": lat.names[j],
                    "value": vals[j], "sup_of_values": expect}
    by_pool: dict[int, tuple[str, int, float]] = {}
    for c in dia.contexts:
        for e in c.nonzero_elements():
            i = dia.element_pool[(c.name, e)]
            v = section[c.name][e]
            if i in by_pool and by_pool[i][2] != v:
                prev = by_pool[i]
                return False, {
                    "kind": "inconsistent-across-contexts",
                    "projection": dia.pool_labels[i],
                    "contexts": [prev[0], c.name],
                    "values": [prev[2], v]}
            by_pool.setdefault(i, (c.name, e, v))
    return True, None


def pool_values(dia: ContextDiagram, section) -> list[float]:
    """One value per pool projection; needs a globally consistent section."""
    ok, w = is_global_section(dia, section)
    if not ok:
        raise PreconditionError("section is not a global section", witness=w)
    out: list[float | None] = [None] * len(dia.pool)
    for c in dia.contexts:
        for e in c.nonzero_elements():
            out[dia.element_pool[(c.name, e)]] = section[c.name][e]
    return [float(v) for v in out]


@dataclass(frozen=True)
class GlueReport:
    pool_labels: tuple = ()
    values: tuple = ()
    commuting_ok: bool = True
    commuting_witness: dict | None = None
    increasing_ok: bool = True
    increasing_witness: dict | None = None
    extendable: str = "undetermined"    # "yes" | "no" | "undetermined"
    certificate: dict = field(default_factory=dict)
    operator: object = None             # ndarray when extendable == "yes"

    def summary(self) -> dict:
        return {"commuting_ok": self.commuting_ok,
                "commuting_witness": self.commuting_witness,
                "increasing_ok": self.increasing_ok,
                "increasing_witness": self.increasing_witness,
                "extendable": self.extendable,
                "certificate": self.certificate}


def _commutes(p, q, tol: Tolerances) -> bool:
    return float(np.linalg.norm(p @ q - q @ p)) <= tol.sub


def glue_section(dia: ContextDiagram, section) -> GlueReport:
    """Check the two join laws over the projection pool and decide whether a
    single selfadjoint operator induces the whole section.

    The commuting check covers families whose members pairwise commute; the
    increasing check covers arbitrary pairs.  Either is only decidable when
    the join again lies in the pool, so both skip joins that escape it."""
    values = pool_values(dia, section)
    tol = dia.tol
    n = len(dia.pool)

    commuting_ok, commuting_witness = True, None
    if n <= FULL_SCAN_POOL:
        subsets: list[tuple[int, ...]] = []
        for size in range(2, n + 1):
            subsets.extend(combinations(range(n), size))
    else:
        subsets = list(combinations(range(n), 2))
        subsets += list(combinations(range(n), 3))
    for sub in subsets:
        if not all(_commutes(dia.pool[i], dia.pool[j], tol)
                   for i, j in combinations(sub, 2)):
            continue
        j = dia.pool_index_of(projection_join([dia.pool[i] for i in sub],
                                              tol))
        if j is None:
            continue
        expect = max(values[i] for i in sub)
        if abs(values[j] - expect) > 1e-9:
            commuting_ok = False
            commuting_witness = {
                "members": [dia.pool_labels[i] for i in sub],
                "join": dia.pool_labels[j],
                "value": values[j], "sup_of_values": expect}
            break

    increasing_ok, increasing_witness = True, None
    for i, k in combinations(range(n), 2):
        j = dia.pool_index_of(projection_join([dia.pool[i], dia.pool[k]],
                                              tol))
        if j is None:
            continue
        expect = max(values[i], values[k])
        if abs(values[j] - expect) > 1e-9:
            increasing_ok = False
            increasing_witness = {
                "members": [dia.pool_labels[i], dia.pool_labels[k]],
                "join": dia.pool_labels[j],
                "value": values[j], "sup_of_values": expect}
            break

    extendable, certificate, operator = _extendability(dia, values)
    return GlueReport(tuple(dia.pool_labels), tuple(values),
                      commuting_ok, commuting_witness,
                      increasing_ok, increasing_witness,
                      extendable, certificate, operator)


def _extendability(dia: ContextDiagram, values: list[float]
                   ) -> tuple[str, dict, object]:
    """Sound certificates first, then the minimal candidate.

    Any inducing operator satisfies value(P) <= value(I), has at most dim
    many distinct values, and its spectral projection at a level below the
    top is proper, so it must contain every pool range valued at or below
    that level without filling the space.  The minimal candidate takes those
    joins as the spectral steps; if it reproduces the section it is a
    witness.  Failure is conclusive only in dimension two, where the
    candidate is the unique possibility."""
    tol = dia.tol
    eye_idx = dia.pool_index_of(np.eye(dia.dim))
    top = values[eye_idx]
    for i, v in enumerate(values):
        if v > top + 1e-9:
            return "no", {"reason": "value-above-top",
                          "projection": dia.pool_labels[i],
                          "value": v, "top": top}, None
    distinct = sorted(set(values))
    if len(distinct) > dia.dim:
        return "no", {"reason": "more-values-than-dimension",
                      "values": distinct}, None
    steps: list[tuple[float, np.ndarray]] = []
    for v in distinct:
        if v >= top:
            continue
        members = [dia.pool[i] for i in range(len(values))
                   if values[i] <= v + 1e-9]
        j = projection_join(members, tol)
        if rank_of_projection(j) == dia.dim:
            return "no", {"reason": "full-span-below-top", "level": v}, None
        steps.append((v, j))
    steps.append((top, np.eye(dia.dim, dtype=complex)))
    try:
        fam = family_from_steps([s[0] for s in steps],
                                [s[1] for s in steps], tol)
        candidate = fam.synthesize()
        induced = section_from_operator(dia, candidate)
        exact = all(abs(induced[c.name][e] - v) <= 1e-9
                    for c in dia.contexts
                    for e, v in _context_values(dia, values, c).items())
    except (InputError, PreconditionError):
        exact, candidate = False, None
    if exact:
        return "yes", {"reason": "verified-candidate"}, candidate
    if dia.dim == 2:
        return "no", {"reason": "unique-candidate-fails"}, None
    return "undetermined", {"reason": "candidate-not-conclusive"}, None


def _context_values(dia: ContextDiagram, values: list[float],
                    c: Context) -> dict[int, float]:
    return {e: values[dia.element_pool[(c.name, e)]]
            for e in c.nonzero_elements()}
