"""Presheaves of finite sets on a finite lattice, the gluing condition,
stalks over the maximal dual ideals, and the associated sheaf of sections.

Sections are opaque hashable values; restriction maps are explicit dicts for
every comparable pair.  The gluing scan is exhaustive over join-covers and
compatible families, so it is guarded by a work cap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product as iproduct

from .corpus import boolean_algebra
from .errors import InputError, PreconditionError, ResourceError
from .lattice import FiniteOrthoLattice, bits, mask_from
from .spectral import SpectralFamily, restrict_family, spectral_family
from .stone import DualIdeal

WORK_CAP = 200_000


@dataclass(frozen=True)
class LatticePresheaf:
    """Finite value set per element plus a restriction map per comparable
    pair (small index to large: restrict(a, b) maps S(b) into S(a))."""
    lattice: FiniteOrthoLattice = field(compare=False)
    sections: tuple = ()          # tuple of tuples, indexed by element
    restrictions: dict = field(default_factory=dict, compare=False)
    describe: object = field(compare=False, default=None)

    def values_at(self, a: int) -> tuple:
        return self.sections[a]

    def section_repr(self, value):
        """A JSON-friendly description of a section value for witnesses."""
        if self.describe is not None:
            return self.describe(value)
        return repr(value)

    def restrict(self, a: int, b: int, value):
        """Map a section over b down to a (needs a <= b)."""
        if not self.lattice.le(a, b):
            raise PreconditionError(
                "restriction runs downward only",
                witness=[self.lattice.names[a], self.lattice.names[b]])
        if a == b:
            return value
        table = self.restrictions.get((a, b))
        if table is None or value not in table:
            raise InputError(
                "missing restriction entry",
                witness={"from": self.lattice.names[b],
                         "to": self.lattice.names[a], "value": repr(value)})
        return table[value]


def lattice_presheaf(lattice: FiniteOrthoLattice, sections: dict[int, list],
             restrictions: dict[tuple[int, int], dict],
             describe=None) -> LatticePresheaf:
    secs = []
    for a in range(lattice.n):
        if a not in sections:
            raise InputError("section set missing",
                             witness=lattice.names[a])
        vals = list(sections[a])
        if len(set(vals)) != len(vals):
            raise InputError("duplicate section values",
                             witness=lattice.names[a])
        secs.append(tuple(vals))
    return LatticePresheaf(lattice, tuple(secs), dict(restrictions), describe)


def check_presheaf(ps: LatticePresheaf) -> tuple[bool, dict | None]:
    """Totality of every downward map, identity on equal endpoints, and
    composition along all chains a <= b <= c."""
    lat = ps.lattice
    for b in range(lat.n):
        for a in range(lat.n):
            if a == b or not lat.le(a, b):
                continue
            table = ps.restrictions.get((a, b))
            if table is None:
                return False, {"kind": "missing-map",
                               "from": lat.names[b], "to": lat.names[a]}
            for v in ps.values_at(b):
                if v not in table:
                    return False, {"kind": "partial-map",
                                   "from": lat.names[b], "to": lat.names[a],
                                   "value": repr(v)}
                if table[v] not in ps.values_at(a):
                    return False, {"kind": "map-leaves-sections",
                                   "from": lat.names[b], "to": lat.names[a],
                                   "value": repr(v)}
    for c in range(lat.n):
        for b in range(lat.n):
            if not lat.le(b, c):
                continue
            for a in range(lat.n):
                if not lat.le(a, b):
                    continue
                for v in ps.values_at(c):
                    direct = ps.restrict(a, c, v)
                    stepped = ps.restrict(a, b, ps.restrict(b, c, v))
                    if direct != stepped:
                        return False, {
                            "kind": "composition",
                            "chain": [lat.names[a], lat.names[b],
                                      lat.names[c]],
                            "value": repr(v),
                            "direct": repr(direct), "stepped": repr(stepped)}
    return True, None


def check_sheaf_condition(ps: LatticePresheaf, work_cap: int = WORK_CAP
                          ) -> dict:
    """Scan every join-cover (two or more nonzero elements below a with join
    a, in (size, index) order) and every compatible family over it; a family
    is compatible when its members agree after restriction to each nonzero
    pairwise meet.  Reports the first existence failure and the first
    uniqueness failure separately; ok means neither occurred."""
    lat = ps.lattice
    work = 0
    first_existence = None
    first_uniqueness = None
    nonzero = [a for a in range(lat.n) if a != lat.zero]
    for a in range(lat.n):
        if a == lat.zero:
            continue
        below = [b for b in nonzero if lat.le(b, a)]
        for size in range(2, len(below) + 1):
            for cover in combinations(below, size):
                if lat.join_of(cover) != a:
                    continue
                sets = [ps.values_at(b) for b in cover]
                count = 1
                for s in sets:
                    count *= len(s)
                work += count
                if work > work_cap:
                    raise ResourceError(
                        "gluing scan exceeded the work cap",
                        witness={"cap": work_cap})
                for family in iproduct(*sets):
                    if not _compatible(ps, cover, family):
                        continue
                    glue = [v for v in ps.values_at(a)
                            if all(ps.restrict(b, a, v) == fv
                                   for b, fv in zip(cover, family))]
                    if not glue and first_existence is None:
                        first_existence = _witness(ps, a, cover, family, glue)
                    if len(glue) > 1 and first_uniqueness is None:
                        first_uniqueness = _witness(ps, a, cover, family,
                                                    glue)
                    if first_existence and first_uniqueness:
                        return {"ok": False, "existence": first_existence,
                                "uniqueness": first_uniqueness}
    return {"ok": first_existence is None and first_uniqueness is None,
            "existence": first_existence, "uniqueness": first_uniqueness}


def _compatible(ps: LatticePresheaf, cover, family) -> bool:
    lat = ps.lattice
    for (b1, v1), (b2, v2) in combinations(zip(cover, family), 2):
        m = lat.meet(b1, b2)
        if m == lat.zero:
            continue
        if ps.restrict(m, b1, v1) != ps.restrict(m, b2, v2):
            return False
    return True


def _witness(ps, a, cover, family, glue) -> dict:
    lat = ps.lattice
    return {"element": lat.names[a],
            "cover": [lat.names[b] for b in cover],
            "family": [ps.section_repr(v) for v in family],
            "gluings": [ps.section_repr(v) for v in glue]}


def stalk(ps: LatticePresheaf, quasipoint: DualIdeal) -> tuple[int, tuple]:
    """Direct limit of the sections over the members of a maximal dual
    ideal.  The ideal is the up-set of an atom, which is its minimum, so the
    limit is the section set there; the germ of a section over any member is
    its restriction to that atom."""
    t = quasipoint.generator()
    return t, ps.values_at(t)


def germ(ps: LatticePresheaf, quasipoint: DualIdeal, a: int, value):
    t = quasipoint.generator()
    if not quasipoint.contains(a):
        raise PreconditionError(
            "the element does not belong to the quasipoint",
            witness=ps.lattice.names[a])
    return ps.restrict(t, a, value)


def sheafify(ps: LatticePresheaf, cap: int = 4096
             ) -> tuple[LatticePresheaf, FiniteOrthoLattice, list[int]]:
    """The presheaf of sections of the germ bundle over the (discrete,
    finite) space of maximal dual ideals: on a set of quasipoints, a section
    is one germ per member, and restriction forgets components.  Returned
    over the powerset lattice of the quasipoints, whose element index is the
    subset bitmask."""
    from .stone import enumerate_quasipoints
    lat = ps.lattice
    qs = enumerate_quasipoints(lat)
    base = boolean_algebra(len(qs))
    total = 1
    for q in qs:
        total *= max(1, len(stalk(ps, q)[1]))
        if total > cap:
            raise ResourceError("sheafification exceeds the size cap",
                                witness={"cap": cap})
    sections: dict[int, list] = {}
    for mask in range(base.n):
        members = bits(mask)
        stalks = [stalk(ps, qs[i])[1] for i in members]
        sections[mask] = [tuple(zip(members, combo))
                          for combo in iproduct(*stalks)]
    restrictions: dict[tuple[int, int], dict] = {}
    for big in range(base.n):
        for small in range(base.n):
            if small == big or (small & big) != small:
                continue
            keep = set(bits(small))
            table = {}
            for v in sections[big]:
                table[v] = tuple((i, g) for i, g in v if i in keep)
            restrictions[(small, big)] = table
    atom_names = [lat.names[q.generator()] for q in qs]

    def describe(v):
        return [[atom_names[i], ps.section_repr(g)] for i, g in v]

    sheaf = lattice_presheaf(base, sections, restrictions, describe)
    return sheaf, base, [q.mask for q in qs]


# -- concrete presheaves ---------------------------------------------------------

_ZERO_SENTINEL = ("*",)


def spectral_presheaf(lattice: FiniteOrthoLattice, grid,
                      cap: int = 4096) -> LatticePresheaf:
    """Sections over a: bounded families with top a and breakpoints drawn
    from the grid; restriction is the pointwise meet.  The bottom element
    carries a one-point sentinel set (there are no families over it)."""
    grid = sorted(set(float(g) for g in grid))
    if not grid:
        raise InputError("need a nonempty breakpoint grid")
    sections: dict[int, list] = {}
    for a in range(lattice.n):
        if a == lattice.zero:
            sections[a] = [_ZERO_SENTINEL]
            continue
        fams = _families_with_top(lattice, a, grid, cap)
        sections[a] = fams
    restrictions: dict[tuple[int, int], dict] = {}
    for b in range(lattice.n):
        for a in range(lattice.n):
            if a == b or not lattice.le(a, b):
                continue
            table = {}
            for fam in sections[b]:
                if a == lattice.zero:
                    table[fam] = _ZERO_SENTINEL
                else:
                    table[fam] = _restrict_key(lattice, fam, a)
            restrictions[(a, b)] = table

    def describe(fam):
        if fam == _ZERO_SENTINEL:
            return "*"
        return [[lam, lattice.names[e]] for lam, e in fam]

    return lattice_presheaf(lattice, sections, restrictions, describe)


def _families_with_top(lattice, top, grid, cap) -> list:
    """All canonical (value, element) breakpoint tuples with the given top."""
    chains = []

    def descend(chain):
        chains.append(tuple(chain))
        last = chain[-1]
        for e in range(lattice.n):
            if e != lattice.zero and e != last and lattice.le(e, last):
                descend(chain + [e])

    descend([top])
    out = []
    for chain in chains:
        if len(chain) > len(grid):
            continue
        for vals in combinations(grid, len(chain)):
            # chain descends from the top; values ascend with the elements
            fam = tuple(zip(vals, reversed(chain)))
            out.append(fam)
            if len(out) > cap:
                raise ResourceError("too many sections; shrink the grid",
                                    witness={"cap": cap})
    return out


def _restrict_key(lattice, fam_key, a):
    fam = spectral_family(lattice, list(fam_key),
                          top=fam_key[-1][1])
    sub = restrict_family(fam, a)
    return tuple(sub.breakpoints)


def family_key(family: SpectralFamily) -> tuple:
    return tuple(family.breakpoints)


def function_presheaf(space, values) -> tuple[LatticePresheaf,
                                              FiniteOrthoLattice, list[int]]:
    """Sections over an open set: all maps from its points into the value
    list, restriction by forgetting points.  A genuine sheaf."""
    from .classical import open_set_lattice
    lat, opens = open_set_lattice(space)
    values = list(values)
    sections: dict[int, list] = {}
    for i, u in enumerate(opens):
        pts = bits(u)
        sections[i] = [tuple(zip(pts, combo))
                       for combo in iproduct(values, repeat=len(pts))]
    restrictions: dict[tuple[int, int], dict] = {}
    for bi in range(lat.n):
        for ai in range(lat.n):
            if ai == bi or not lat.le(ai, bi):
                continue
            keep = set(bits(opens[ai]))
            restrictions[(ai, bi)] = {
                v: tuple((p, g) for p, g in v if p in keep)
                for v in sections[bi]}

    def describe(v):
        return [[space.points[p], g] for p, g in v]

    ps = lattice_presheaf(lat, sections, restrictions, describe)
    return ps, lat, opens
