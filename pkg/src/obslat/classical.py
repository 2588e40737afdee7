"""Spectral families valued in the open sets of a finite topological space.

Point sets are bitmasks.  A finite topology is determined by the minimal open
neighborhood of each point (every finite collection of opens closed under
union and intersection arises this way), so the space stores one neighborhood
mask per point; interior, closure and openness are mask scans.  The full list
of opens is enumerated only on demand, with a cap, since a near-discrete
space has exponentially many.

A family carries an explicit base value: the open set it sits at below the
first breakpoint.  The base is normally empty; a nonempty base models maps
whose induced function is undefined on part of the space, and the admissible
domain is the complement of the base.  Families may also be flagged unbounded
above (final value short of the whole space) for demonstration purposes;
statements that need boundedness skip those with a notice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InputError, PreconditionError, ResourceError
from .lattice import FiniteOrthoLattice, bits, mask_from

OPENS_CAP = 4096


class FiniteTopSpace:
    """Finite topological space; subsets of points are bitmasks."""

    def __init__(self, points, opens=None, nb_masks=None):
        self.points = tuple(str(p) for p in points)
        n = len(self.points)
        if n == 0:
            raise InputError("a space needs at least one point")
        if len(set(self.points)) != n:
            raise InputError("duplicate point names")
        self.full = (1 << n) - 1
        if (opens is None) == (nb_masks is None):
            raise InputError("give exactly one of opens or nb_masks")
        if opens is not None:
            opens = sorted(set(int(u) for u in opens))
            if 0 not in opens or self.full not in opens:
                raise InputError(
                    "opens must contain the empty set and the whole space")
            oset = set(opens)
            for u, v in combinations(opens, 2):
                if u | v not in oset:
                    return self._fail_closure("union", u, v)
                if u & v not in oset:
                    return self._fail_closure("intersection", u, v)
            self.nb_masks = []
            for x in range(n):
                m = self.full
                for u in opens:
                    if u >> x & 1:
                        m &= u
                self.nb_masks.append(m)
            self._opens = opens
        else:
            self.nb_masks = [int(m) for m in nb_masks]
            for x, m in enumerate(self.nb_masks):
                if not m >> x & 1:
                    raise InputError(
                        f"minimal neighborhood of {self.points[x]} must "
                        f"contain it")
            # consistency: the neighborhood assignment must itself be open
            for x, m in enumerate(self.nb_masks):
                if self.interior(m) != m:
                    raise InputError(
                        f"neighborhood of {self.points[x]} is not a union of "
                        f"neighborhoods", witness=self.set_names(m))
            self._opens = None

    def _fail_closure(self, kind, u, v):
        raise InputError(f"opens are not closed under {kind}",
                         witness=[self.set_names(u), self.set_names(v)])

    # -- mask utilities ------------------------------------------------------

    def mask_of(self, names) -> int:
        idx = {p: i for i, p in enumerate(self.points)}
        m = 0
        for s in names:
            if str(s) not in idx:
                raise InputError(f"unknown point {s!r}", witness=str(s))
            m |= 1 << idx[str(s)]
        return m

    def set_names(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    # -- topology ------------------------------------------------------------

    def is_open(self, mask: int) -> bool:
        return all(self.nb_masks[x] & mask == self.nb_masks[x]
                   for x in bits(mask))

    def interior(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            if self.nb_masks[x] & mask == self.nb_masks[x]:
                out |= 1 << x
        return out

    def closure(self, mask: int) -> int:
        out = 0
        for x in range(len(self.points)):
            if self.nb_masks[x] & mask:
                out |= 1 << x
        return out

    def opens(self, cap: int = OPENS_CAP) -> list[int]:
        """All open sets (enumerated once, ascending as integers)."""
        if self._opens is None:
            found = {0}
            frontier = [0]
            while frontier:
                u = frontier.pop()
                for nb in self.nb_masks:
                    v = u | nb
                    if v not in found:
                        if len(found) >= cap:
                            raise ResourceError(
                                f"more than {cap} open sets")
                        found.add(v)
                        frontier.append(v)
            self._opens = sorted(found)
        return self._opens

    def nb_classes(self) -> list[int]:
        """Partition masks: points sharing constancy constraints.

        Two points are linked when one lies in the other's minimal
        neighborhood; continuous real functions are exactly the functions
        constant on the connected classes of that linkage.
        """
        n = len(self.points)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for x in range(n):
            for y in bits(self.nb_masks[x]):
                parent[find(x)] = find(y)
        groups: dict[int, int] = {}
        for x in range(n):
            groups.setdefault(find(x), 0)
            groups[find(x)] |= 1 << x
        return sorted(groups.values())

    def __repr__(self):
        return f"<FiniteTopSpace {len(self.points)} points>"


def discrete_space(points) -> FiniteTopSpace:
    return FiniteTopSpace(points, nb_masks=[1 << i for i in range(len(points))])


def sierpinski3() -> FiniteTopSpace:
    """Three points with opens {}, {1}, {1,2}, {1,2,3}."""
    return FiniteTopSpace(["1", "2", "3"], opens=[0b000, 0b001, 0b011, 0b111])


def digital_line(n: int) -> FiniteTopSpace:
    """Alternating open cells u_i and boundary vertices v_i on a line.

    Cell points u_0..u_n are open; each vertex v_i (i = 1..n) sticks to its
    two neighboring cells: its minimal neighborhood is {u_{i-1}, v_i, u_i}.
    A connected finite model of the real line.
    """
    if n < 1:
        raise InputError("digital line needs at least one vertex")
    points = []
    for i in range(n + 1):
        points.append(f"u{i}")
        if i < n:
            points.append(f"v{i + 1}")
    idx = {p: k for k, p in enumerate(points)}
    nb = []
    for p in points:
        if p.startswith("u"):
            nb.append(1 << idx[p])
        else:
            i = int(p[1:])
            nb.append((1 << idx[f"u{i - 1}"]) | (1 << idx[p])
                      | (1 << idx[f"u{i}"]))
    return FiniteTopSpace(points, nb_masks=nb)


def is_continuous_function(space: FiniteTopSpace, values: dict[str, float]
                           ) -> tuple[bool, dict | None]:
    """Real function continuity: constant on every minimal neighborhood."""
    vals = _total_values(space, values)
    for x in range(len(space.points)):
        for y in bits(space.nb_masks[x]):
            if vals[y] != vals[x]:
                return False, {"point": space.points[x],
                               "neighbor": space.points[y],
                               "values": [vals[x], vals[y]]}
    return True, None


def _total_values(space: FiniteTopSpace, values: dict[str, float]
                  ) -> list[float]:
    missing = [p for p in space.points if p not in values]
    if missing:
        raise InputError("function must be total", witness=missing)
    return [float(values[p]) for p in space.points]


# -- spectral families over the open-set lattice --------------------------------

@dataclass(frozen=True)
class TopSpectralFamily:
    space: FiniteTopSpace = field(compare=False)
    base: int = 0
    breakpoints: tuple[tuple[float, int], ...] = ()
    unbounded_above: bool = False

    def value_at(self, lam: float) -> int:
        out = self.base
        for lam_i, u in self.breakpoints:
            if lam_i <= lam:
                out = u
            else:
                break
        return out

    def admissible_domain(self) -> int:
        """Complement of the intersection of all values (= of the base)."""
        return self.space.full & ~self.base

    def to_pairs(self) -> list[tuple[float, list[str]]]:
        return [(lam, self.space.set_names(u)) for lam, u in self.breakpoints]


def top_spectral_family(space: FiniteTopSpace,
                        pairs, base: int = 0,
                        unbounded_above: bool = False) -> TopSpectralFamily:
    """Validate and canonicalize: all values open, increasing with the base
    below everything; entries equal to their predecessor (or to the base, at
    the front) are dropped; the last value must be the whole space unless the
    family is flagged unbounded above."""
    if not space.is_open(base):
        raise InputError("base value must be open",
                         witness=space.set_names(base))
    raw = sorted(((float(lam), int(u)) for lam, u in pairs),
                 key=lambda p: p[0])
    if not raw and not unbounded_above:
        raise InputError("a bounded family needs at least one breakpoint")
    for lam, u in raw:
        if not math.isfinite(lam):
            raise InputError("breakpoints must be finite reals", witness=lam)
        if not space.is_open(u):
            raise InputError("family values must be open",
                             witness=space.set_names(u))
    for (l1, u1), (l2, u2) in zip(raw, raw[1:]):
        if l1 == l2 and u1 != u2:
            raise InputError(f"two different values at breakpoint {l1:g}")
        if u1 & u2 != u1:
            raise InputError(
                "family is not increasing",
                witness=[space.set_names(u1), space.set_names(u2)])
    canon = []
    for lam, u in raw:
        if base & u != base:
            raise InputError("base must lie below every value",
                             witness=space.set_names(u))
        if not canon and u == base:
            continue
        if canon and canon[-1][1] == u:
            continue
        canon.append((lam, u))
    if not unbounded_above:
        if not canon or canon[-1][1] != space.full:
            raise InputError("family must reach the whole space")
    return TopSpectralFamily(space, base, tuple(canon), unbounded_above)


def sigma_from_function(space: FiniteTopSpace, values: dict[str, float]
                        ) -> TopSpectralFamily:
    """The canonical family of a total function: at each function value, the
    interior of the corresponding sublevel set."""
    vals = _total_values(space, values)
    pairs = []
    for v in sorted(set(vals)):
        sub = mask_from(i for i, fv in enumerate(vals) if fv <= v)
        pairs.append((v, space.interior(sub)))
    return top_spectral_family(space, pairs, base=0)


def induced_function(family: TopSpectralFamily, point: str) -> float:
    """Smallest breakpoint whose value contains the point; defined on the
    admissible domain only."""
    x = family.space.mask_of([point])
    if not x & family.admissible_domain():
        raise PreconditionError(
            f"{point} lies outside the admissible domain", witness=point)
    for lam, u in family.breakpoints:
        if u & x:
            return lam
    raise PreconditionError(
        f"the family never reaches {point}; it is unbounded above there",
        witness=point)


def spectrum_and_resolvent(family: TopSpectralFamily
                           ) -> tuple[list[float], list[tuple]]:
    """Breakpoints of the canonical form, plus the complementary open
    intervals (None marks an infinite end)."""
    sp = [lam for lam, _ in family.breakpoints]
    res = []
    prev = None
    for lam in sp:
        res.append((prev, lam))
        prev = lam
    res.append((prev, None))
    return sp, res


def image_of_induced(family: TopSpectralFamily) -> list[float]:
    dom = family.admissible_domain()
    out = set()
    for x in bits(dom):
        out.add(induced_function(family, family.space.points[x]))
    return sorted(out)


def is_continuous_family(family: TopSpectralFamily
                         ) -> tuple[bool, dict | None, dict]:
    """The closure of every earlier value must lie inside every later value.

    Step families are constant between breakpoints, so the binding instances
    are pairs inside one step: the closure of each value (the base included)
    must lie in the value itself, i.e. every value is closed as well as open.
    The witness names a failing pair (lambda, lambda + half gap).  When the
    verdict is true the report also confirms each value is regular open and
    the admissible domain is open.
    """
    space = family.space
    sp = [lam for lam, _ in family.breakpoints]
    gaps = [b - a for a, b in zip(sp, sp[1:])]
    eps = min(gaps) / 2 if gaps else 0.5
    levels = [(sp[0] - 1.0 if sp else 0.0, family.base)]
    levels += list(family.breakpoints)
    for lam, u in levels:
        if space.closure(u) != u:
            return False, {
                "lambda": lam, "mu": lam + eps,
                "value": space.set_names(u),
                "closure": space.set_names(space.closure(u))}, {}
    report = {
        "regular_open": all(space.interior(space.closure(u)) == u
                            for _, u in levels),
        "admissible_domain_open": space.is_open(family.admissible_domain()),
    }
    return True, None, report


def sublevel_regularization_gap(space: FiniteTopSpace,
                                values: dict[str, float]) -> list[float]:
    """Breakpoints where the interior of the strict-sublevel intersection
    over later cuts differs from the interior of the closed sublevel set
    (empty for every total function on a finite space; kept as a checkable
    identity)."""
    vals = _total_values(space, values)
    distinct = sorted(set(vals))
    eps = min((b - a for a, b in zip(distinct, distinct[1:])), default=1.0) / 2
    bad = []
    for v in distinct:
        cuts = [m for m in distinct if m > v] + [v + eps]
        inter = space.full
        for mu in cuts:
            inter &= mask_from(i for i, fv in enumerate(vals) if fv < mu)
        if space.interior(inter) != space.interior(
                mask_from(i for i, fv in enumerate(vals) if fv <= v)):
            bad.append(v)
    return bad


# -- bridges and corpora ---------------------------------------------------------

def open_set_lattice(space: FiniteTopSpace, cap: int = 64
                     ) -> tuple[FiniteOrthoLattice, list[int]]:
    """The lattice of open sets (no orthocomplement), with the open mask per
    lattice element."""
    opens = space.opens()
    if len(opens) > cap:
        raise ResourceError(
            f"{len(opens)} open sets exceed the lattice cap {cap}")
    opens = sorted(opens, key=lambda u: (u.bit_count(), u))
    names = ["{" + ",".join(space.set_names(u)) + "}" for u in opens]
    size = len(opens)
    leq = np.zeros((size, size), dtype=bool)
    for i, u in enumerate(opens):
        for j, v in enumerate(opens):
            leq[i, j] = u & v == u
    return FiniteOrthoLattice(names, leq, ortho=None, cap=cap), opens


def lattice_family_of(family: TopSpectralFamily, cap: int = 64):
    """The same family as a lattice-valued one over the open-set lattice."""
    from .spectral import spectral_family
    if family.unbounded_above:
        raise PreconditionError("lattice form needs a bounded family")
    if family.base != 0:
        raise PreconditionError(
            "lattice form models empty-based families only",
            witness=family.space.set_names(family.base))
    lat, opens = open_set_lattice(family.space, cap)
    pos = {u: i for i, u in enumerate(opens)}
    return spectral_family(
        lat, [(lam, pos[u]) for lam, u in family.breakpoints]), lat, opens


def all_topologies(n: int) -> list[list[int]]:
    """Every topology on n labeled points (n <= 4), as sorted open lists."""
    if not 1 <= n <= 4:
        raise ResourceError("exhaustive enumeration is for 1..4 points")
    full = (1 << n) - 1
    middles = [m for m in range(1, full)]
    out = []
    for picks in range(1 << len(middles)):
        fam = [0, full] + [m for k, m in enumerate(middles)
                           if picks >> k & 1]
        sfam = set(fam)
        ok = True
        for u in fam:
            for v in fam:
                if u | v not in sfam or u & v not in sfam:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(sorted(sfam))
    return out


def grid_coordinates(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0 or hi <= lo:
        raise InputError("need lo < hi and a positive step")
    count = int(round((hi - lo) / step))
    out = [round(lo + k * step, 10) for k in range(count + 1)]
    if len(out) > 48:
        raise ResourceError("grid too fine; at most 48 points")
    return out


def _coord_label(x: float) -> str:
    return f"{x:g}"


DEMO_KINDS = ("id", "abs", "ln", "step", "step-line", "id-unbounded")


def demo_family(kind: str, lo: float = -2.0, hi: float = 2.0,
                step: float = 0.25) -> dict:
    """The worked families on a finite trace of the real line.

    id, abs and step come from their defining functions on the discrete grid
    trace; ln is built directly with the grid point 0 as the base value (its
    induced function is defined away from 0 only); id-unbounded chops the
    last step off id and flags the family; step-line realizes the floor
    function on a connected line model, where it genuinely fails the
    continuity property.
    """
    if kind not in DEMO_KINDS:
        raise InputError(f"unknown demo family {kind!r}",
                         witness=sorted(DEMO_KINDS))
    notes: list[str] = []
    if kind == "step-line":
        n = max(1, int(round(hi - lo)))
        space = digital_line(n)
        coords = {}
        for p in space.points:
            if p.startswith("u"):
                coords[p] = lo + int(p[1:]) + 0.5
            else:
                coords[p] = lo + float(int(p[1:]))
        values = {p: float(math.floor(c)) for p, c in coords.items()}
        family = sigma_from_function(space, values)
        targets = values
    else:
        xs = grid_coordinates(lo, hi, step)
        space = discrete_space([_coord_label(x) for x in xs])
        coord = {_coord_label(x): x for x in xs}
        if kind == "ln":
            targets = {p: math.log(abs(x)) for p, x in coord.items()
                       if x != 0.0}
            if len(targets) == len(coord):
                notes.append("grid misses 0; base value is empty")
                base = 0
            else:
                base = space.mask_of([_coord_label(0.0)])
                notes.append("0 sits in every value; the admissible domain "
                             "drops it")
            pairs = []
            for v in sorted(set(targets.values())):
                pairs.append((v, base | space.mask_of(
                    [p for p, t in targets.items() if t <= v])))
            family = top_spectral_family(space, pairs, base=base)
        else:
            fn = {"id": lambda x: x, "abs": abs,
                  "step": lambda x: float(math.floor(x)),
                  "id-unbounded": lambda x: x}[kind]
            values = {p: float(fn(x)) for p, x in coord.items()}
            family = sigma_from_function(space, values)
            targets = values
            if kind == "id-unbounded":
                family = top_spectral_family(
                    space, family.breakpoints[:-1], base=0,
                    unbounded_above=True)
                cut = max(v for v, _ in family.breakpoints)
                targets = {p: v for p, v in values.items() if v <= cut}
                notes.append("flagged unbounded above; boundedness checks "
                             "are skipped with this notice")
    return {"kind": kind, "space": space, "family": family,
            "targets": targets, "notes": notes}


def continuous_functions(space: FiniteTopSpace, values: list[float]
                         ) -> list[dict[str, float]]:
    """All assignments from the given value list that are constant on the
    linkage classes (exactly the continuous real functions up to the choice
    of value set)."""
    classes = space.nb_classes()
    out = []
    for k in range(len(values) ** len(classes)):
        x = k
        assign = {}
        for cls in classes:
            v = values[x % len(values)]
            x //= len(values)
            for i in bits(cls):
                assign[space.points[i]] = v
        out.append(assign)
    return out
