"""Observable functions on dual ideals and their reconstruction.

An observable function assigns a real to every dual ideal, subject to two
axioms: the intersection condition (the value of an intersection of dual
ideals is the supremum of the values) and upper semicontinuity (equivalently,
the function is decreasing under inclusion and every value is the minimum of
the values at the principal up-sets of the ideal's members).

Since every dual ideal of a finite lattice is the principal up-set of its
generator, a table is stored as one real per nonzero element.  The dual
picture (completely increasing element functions) and the translation in both
directions live here too, as does the rebuild of the unique spectral family
from a valid table.

Values are compared exactly as 64-bit floats; reconstruction partitions the
table by value equality, so tables should stick to exactly representable
decimals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import CheckFailure, InputError, PreconditionError
from .lattice import FiniteOrthoLattice, bits, mask_from
from .spectral import SpectralFamily, spectral_family
from .stone import (DualIdeal, dual_ideal_violation, enumerate_dual_ideals,
                    enumerate_quasipoints, cone, principal)


@dataclass(frozen=True)
class ObservableFunction:
    """Total real table on the dual ideals of (the down-set under top of) a
    finite lattice, keyed by the ideal's generator."""
    lattice: FiniteOrthoLattice = field(compare=False)
    values: tuple[float | None, ...] = ()    # indexed by element; None off-domain
    top: int = 0

    def domain(self) -> list[int]:
        return [a for a in range(self.lattice.n) if self.values[a] is not None]

    def at_element(self, a: int) -> float:
        v = self.values[a]
        if v is None:
            raise PreconditionError(
                f"no value at {self.lattice.names[a]}",
                witness=self.lattice.names[a])
        return v

    def at_ideal(self, ideal: DualIdeal) -> float:
        """f of a dual ideal: the value at its generator (= min over members)."""
        return self.at_element(ideal.generator())

    def image(self) -> list[float]:
        return sorted(set(self.values[a] for a in self.domain()))

    def table_by_name(self) -> dict[str, float]:
        return {self.lattice.names[a]: self.values[a] for a in self.domain()}


def observable(lattice: FiniteOrthoLattice, values: dict[int, float],
               top: int | None = None, checked: bool = True
               ) -> ObservableFunction:
    """Build a table from per-generator values; verify both axioms unless
    ``checked`` is False (the escape hatch for deliberately broken tables)."""
    if top is None:
        top = lattice.one
    cells: list[float | None] = [None] * lattice.n
    for a, v in values.items():
        a = int(a)
        if not 0 <= a < lattice.n:
            raise InputError("value keyed by unknown element", witness=a)
        if a == lattice.zero or not lattice.le(a, top):
            raise InputError(
                f"values may only sit at nonzero elements under the top "
                f"{lattice.names[top]}", witness=lattice.names[a])
        cells[a] = float(v)
    missing = [lattice.names[a] for a in range(lattice.n)
               if a != lattice.zero and lattice.le(a, top) and cells[a] is None]
    if missing:
        raise InputError("table is not total", witness=missing)
    f = ObservableFunction(lattice, tuple(cells), top)
    if checked:
        ok, witness = check_intersection_condition(f)
        if not ok:
            raise CheckFailure("intersection condition fails", witness=witness)
        ok, witness = check_upper_semicontinuous(f)
        if not ok:
            raise CheckFailure("upper semicontinuity fails", witness=witness)
    return f


def observable_from_spectral(family: SpectralFamily, ideal: DualIdeal) -> float:
    """inf of the breakpoints whose element lies in the ideal."""
    for lam, e in family.breakpoints:
        if ideal.contains(e):
            return lam
    raise PreconditionError(
        "the family never enters the ideal; it is not bounded above inside it",
        witness=ideal.names())


def observable_table(family: SpectralFamily) -> ObservableFunction:
    """The full table of a bounded family, one value per principal up-set."""
    lat = family.lattice
    vals: dict[int, float] = {}
    for a in range(lat.n):
        if a == lat.zero or not lat.le(a, family.top):
            continue
        vals[a] = next(lam for lam, e in family.breakpoints if lat.le(a, e))
    return observable(lat, vals, top=family.top, checked=False)


def _ideals(f: ObservableFunction) -> list[DualIdeal]:
    lat = f.lattice
    if f.top == lat.one:
        return enumerate_dual_ideals(lat)
    sub_mask = mask_from(f.domain())
    out = [DualIdeal(lat, principal(lat, a).mask & sub_mask) for a in f.domain()]
    out.sort(key=lambda j: (j.size(), tuple(j.members())))
    return out


def check_intersection_condition(f: ObservableFunction
                                 ) -> tuple[bool, dict | None]:
    """f(J intersect K) == max(f(J), f(K)) over all pairs of dual ideals.

    Pairs decide all finite families: intersecting one ideal at a time turns
    any family into a chain of binary steps, so a pairwise pass is exact.
    """
    lat = f.lattice
    ideals = _ideals(f)
    for ja in ideals:
        for jb in ideals:
            inter = ja.mask & jb.mask
            expected = max(f.at_ideal(ja), f.at_ideal(jb))
            # in a bounded-from-above table the intersection always contains top
            got = f.at_ideal(DualIdeal(lat, inter))
            if got != expected:
                return False, {
                    "family": [ja.names(), jb.names()],
                    "intersection": DualIdeal(lat, inter).names(),
                    "value": got, "sup_of_values": expected}
    return True, None


def check_upper_semicontinuous(f: ObservableFunction
                               ) -> tuple[bool, dict | None]:
    """Decreasing under inclusion, and every value is the min over the
    ideal's principal values.  On a finite lattice these two together are the
    upper-semicontinuity of the table."""
    ideals = _ideals(f)
    for ja in ideals:
        for jb in ideals:
            if (ja.mask & jb.mask) == ja.mask and ja.mask != jb.mask:
                if f.at_ideal(ja) < f.at_ideal(jb):
                    return False, {
                        "kind": "not-decreasing",
                        "smaller": ja.names(), "larger": jb.names(),
                        "values": [f.at_ideal(ja), f.at_ideal(jb)]}
    for j in ideals:
        low = min(f.at_element(p) for p in j.members())
        if f.at_ideal(j) != low:
            return False, {
                "kind": "not-min-of-principal-values",
                "ideal": j.names(), "value": f.at_ideal(j),
                "min_over_members": low}
    return True, None


def usc_epsilon_witness(f: ObservableFunction, ideal: DualIdeal,
                        epsilon: float) -> int | None:
    """A member P of the ideal with f within epsilon of f(ideal) on every
    dual ideal containing P; None when no member works."""
    ideals = _ideals(f)
    base = f.at_ideal(ideal)
    for p in ideal.members():
        spread = [f.at_ideal(j) for j in ideals if j.contains(p)]
        if all(v <= base + epsilon for v in spread):
            return p
    return None


def reconstruct(f: ObservableFunction) -> SpectralFamily:
    """The unique bounded spectral family whose table is f.

    Refuses tables that fail either axiom.  For each value v in the image,
    the candidate projection is the generator of the intersection of all
    ideals with value <= v; the breakpoints are exactly the image values.
    """
    ok, witness = check_intersection_condition(f)
    if not ok:
        raise CheckFailure("reconstruction refused: intersection condition "
                           "fails", witness=witness)
    ok, witness = check_upper_semicontinuous(f)
    if not ok:
        raise CheckFailure("reconstruction refused: upper semicontinuity "
                           "fails", witness=witness)
    lat = f.lattice
    ideals = _ideals(f)
    pairs = []
    for v in f.image():
        inter = None
        for j in ideals:
            if f.at_ideal(j) <= v:
                inter = j.mask if inter is None else inter & j.mask
        bad = dual_ideal_violation(lat, inter)
        if bad is not None:
            raise CheckFailure(
                "minimal preimage is not a dual ideal", witness=bad)
        pairs.append((v, DualIdeal(lat, inter).generator()))
    return spectral_family(lat, pairs, top=f.top)


# -- completely increasing element functions --------------------------------

@dataclass(frozen=True)
class CompletelyIncreasingFunction:
    """Real values on nonzero elements meant to turn joins into maxima."""
    lattice: FiniteOrthoLattice = field(compare=False)
    values: tuple[float | None, ...] = ()
    top: int = 0

    def domain(self) -> list[int]:
        return [a for a in range(self.lattice.n) if self.values[a] is not None]

    def at(self, a: int) -> float:
        v = self.values[a]
        if v is None:
            raise PreconditionError(
                f"no value at {self.lattice.names[a]}",
                witness=self.lattice.names[a])
        return v

    def table_by_name(self) -> dict[str, float]:
        return {self.lattice.names[a]: self.values[a] for a in self.domain()}


def increasing_function(lattice: FiniteOrthoLattice, values: dict[int, float],
                        top: int | None = None) -> CompletelyIncreasingFunction:
    f = observable(lattice, values, top=top, checked=False)
    return CompletelyIncreasingFunction(lattice, f.values, f.top)


def check_completely_increasing(r: CompletelyIncreasingFunction
                                ) -> tuple[bool, dict | None]:
    """r(a join b) == max(r(a), r(b)) on all pairs; pairs decide all finite
    joins by the same chaining argument as the intersection condition."""
    lat = r.lattice
    dom = r.domain()
    for a in dom:
        for b in dom:
            j = lat.join(a, b)
            if not lat.le(j, r.top):
                continue
            if r.at(j) != max(r.at(a), r.at(b)):
                return False, {
                    "family": [lat.names[a], lat.names[b]],
                    "join": lat.names[j],
                    "value": r.at(j),
                    "sup_of_values": max(r.at(a), r.at(b))}
    return True, None


def r_from_f(f: ObservableFunction) -> CompletelyIncreasingFunction:
    """The element picture: r(P) = f(up-set of P)."""
    return CompletelyIncreasingFunction(f.lattice, f.values, f.top)


def f_from_r(r: CompletelyIncreasingFunction, ideal: DualIdeal) -> float:
    """min of r over the ideal's members (the ideal is nonempty)."""
    members = ideal.members()
    if not members:
        raise PreconditionError("dual ideals are nonempty")
    return min(r.at(p) for p in members)


def observable_from_increasing(r: CompletelyIncreasingFunction
                               ) -> tuple[ObservableFunction, bool, dict | None]:
    """Full table of f_r plus the completely-increasing verdict.

    The table is computed either way; the flag tells whether r satisfies the
    join condition (when it does, f_r is an observable function).
    """
    lat = r.lattice
    ok, witness = check_completely_increasing(r)
    vals: dict[int, float] = {}
    for a in r.domain():
        up = [b for b in bits(lat.upset_mask(a)) if lat.le(b, r.top)]
        vals[a] = min(r.at(b) for b in up)
    f = observable(lat, vals, top=r.top, checked=False)
    return f, ok, witness


def observability_criterion(lattice: FiniteOrthoLattice,
                            quasipoint_values: dict[int, float]
                            ) -> tuple[bool, dict | None, SpectralFamily | None]:
    """Decide whether a real table on the quasipoints extends to an
    observable function.

    The candidate element function takes at P the max over the quasipoints
    containing P (finite, so the sup is attained); the verdict is whether
    that candidate is completely increasing.  On success the reconstructed
    spectral family is returned as the witness of observability.
    """
    qs = enumerate_quasipoints(lattice)
    atoms = {q.generator(): q for q in qs}
    if set(quasipoint_values) != set(atoms):
        raise InputError(
            "need exactly one value per quasipoint, keyed by its atom",
            witness=sorted(lattice.names[t] for t in
                           set(atoms) ^ set(quasipoint_values)))
    vals: dict[int, float] = {}
    for a in range(lattice.n):
        if a == lattice.zero:
            continue
        under = [t for t in atoms if lattice.le(t, a)]
        if not under:
            raise InputError(
                f"element {lattice.names[a]} lies over no atom",
                witness=lattice.names[a])
        vals[a] = max(quasipoint_values[t] for t in under)
    r = increasing_function(lattice, vals)
    ok, witness = check_completely_increasing(r)
    if not ok:
        return False, witness, None
    f, _, _ = observable_from_increasing(r)
    return True, None, reconstruct(f)


def restrict_observable(f: ObservableFunction, members: Iterable[int]
                        ) -> tuple[ObservableFunction, FiniteOrthoLattice]:
    """Restriction to a sub-ortholattice: evaluate f at the parent cone of
    each of the sub's dual ideals."""
    lat = f.lattice
    if f.top != lat.one:
        raise PreconditionError("restriction starts from a whole-lattice table")
    sub, parent_idx = lat.sublattice(members)
    vals: dict[int, float] = {}
    for a_sub in range(sub.n):
        if a_sub == sub.zero:
            continue
        sub_ideal_parent_members = [parent_idx[b] for b in
                                    bits(sub.upset_mask(a_sub))]
        vals[a_sub] = f.at_ideal(cone(lat, sub_ideal_parent_members))
    return observable(sub, vals, checked=False), sub
