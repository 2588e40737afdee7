"""Dual ideals and quasipoints of a finite lattice.

A dual ideal is a nonempty, upward-closed, meet-closed proper subset (it never
contains the bottom element).  In a finite lattice every dual ideal has a
minimum, so it is the principal up-set of its generator; enumeration therefore
walks the nonzero elements instead of scanning subsets, and quasipoints (the
maximal dual ideals) are exactly the up-sets of atoms.  Subsets are bitmasks
over element indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError, PreconditionError
from .lattice import FiniteOrthoLattice, bits, mask_from


@dataclass(frozen=True)
class DualIdeal:
    """An upward-closed, meet-closed set of nonzero elements, as a bitmask."""
    lattice: FiniteOrthoLattice = field(compare=False)
    mask: int = 0

    def members(self) -> list[int]:
        return bits(self.mask)

    def names(self) -> list[str]:
        return [self.lattice.names[i] for i in self.members()]

    def contains(self, a: int) -> bool:
        return bool(self.mask >> a & 1)

    def generator(self) -> int:
        """The minimum member; the ideal is its principal up-set."""
        return self.lattice.meet_of(self.members())

    def size(self) -> int:
        return self.mask.bit_count()

    def __repr__(self):
        return "{" + ",".join(self.names()) + "}"


def dual_ideal_violation(lattice: FiniteOrthoLattice, mask: int) -> dict | None:
    """None if the mask is a dual ideal, else a witness dict saying why not."""
    if mask == 0:
        return {"kind": "empty"}
    members = bits(mask)
    if any(m >= lattice.n for m in members):
        raise InputError("mask names elements outside the lattice")
    if lattice.zero in members:
        return {"kind": "contains-bottom", "element": lattice.names[lattice.zero]}
    mset = set(members)
    for a in members:
        for b in bits(lattice.upset_mask(a)):
            if b not in mset:
                return {"kind": "not-up-closed",
                        "element": lattice.names[a], "missing": lattice.names[b]}
        for b in members:
            if lattice.meet(a, b) not in mset:
                return {"kind": "not-meet-closed",
                        "pair": [lattice.names[a], lattice.names[b]],
                        "missing": lattice.names[lattice.meet(a, b)]}
    return None


def is_dual_ideal(lattice: FiniteOrthoLattice, mask: int) -> bool:
    return dual_ideal_violation(lattice, mask) is None


def principal(lattice: FiniteOrthoLattice, a: int) -> DualIdeal:
    """The up-set of a nonzero element."""
    if a == lattice.zero:
        raise PreconditionError(
            "the up-set of bottom is the whole lattice, not a proper dual ideal")
    return DualIdeal(lattice, lattice.upset_mask(a))


def ideal_from_names(lattice: FiniteOrthoLattice, names: Iterable[str]) -> DualIdeal:
    mask = mask_from(lattice.index(s) for s in names)
    bad = dual_ideal_violation(lattice, mask)
    if bad is not None:
        raise InputError("the given set is not a dual ideal", witness=bad)
    return DualIdeal(lattice, mask)


def is_filter_base(lattice: FiniteOrthoLattice, subset: Iterable[int]
                   ) -> tuple[bool, dict | None]:
    """Nonempty, bottom-free, and downward directed inside itself."""
    elems = sorted(set(int(a) for a in subset))
    if not elems:
        return False, {"kind": "empty"}
    if lattice.zero in elems:
        return False, {"kind": "contains-bottom"}
    for a in elems:
        for b in elems:
            if not any(lattice.le(c, a) and lattice.le(c, b) for c in elems):
                return False, {"kind": "no-lower-bound-in-set",
                               "pair": [lattice.names[a], lattice.names[b]]}
    return True, None


def cone(lattice: FiniteOrthoLattice, subset: Iterable[int]) -> DualIdeal:
    """Smallest dual ideal containing a filter base: the up-set of its minimum.

    A finite downward-directed set has a least member, so the generated dual
    ideal is principal over it.
    """
    elems = sorted(set(int(a) for a in subset))
    ok, why = is_filter_base(lattice, elems)
    if not ok:
        raise PreconditionError("cone needs a filter base", witness=why)
    bottom = [a for a in elems if all(lattice.le(a, b) for b in elems)]
    return principal(lattice, bottom[0])


def _canonical_order(ideal: DualIdeal) -> tuple:
    return (ideal.size(), tuple(ideal.members()))


def enumerate_dual_ideals(lattice: FiniteOrthoLattice) -> list[DualIdeal]:
    """All dual ideals: one principal up-set per nonzero element.

    Ordered by (size, member tuple) so reports are deterministic.
    """
    out = [principal(lattice, a) for a in range(lattice.n) if a != lattice.zero]
    out.sort(key=_canonical_order)
    return out


def enumerate_quasipoints(lattice: FiniteOrthoLattice) -> list[DualIdeal]:
    """Maximal dual ideals: the up-sets of atoms, in canonical order."""
    out = [principal(lattice, t) for t in lattice.atoms()]
    out.sort(key=_canonical_order)
    return out


def basis_set(lattice: FiniteOrthoLattice, a: int) -> list[DualIdeal]:
    """Quasipoints containing the element a (a basic open of the spectrum)."""
    if a == lattice.zero:
        return []
    return [q for q in enumerate_quasipoints(lattice) if q.contains(a)]


def quasipoints_over_center(lattice: FiniteOrthoLattice,
                            quasipoint: DualIdeal) -> DualIdeal:
    """Trace of a quasipoint on the center sublattice, as a center dual ideal."""
    central = lattice.center()
    sub, parent_idx = lattice.sublattice(central)
    pos = {m: k for k, m in enumerate(parent_idx)}
    mask = mask_from(pos[z] for z in central if quasipoint.contains(z))
    bad = dual_ideal_violation(sub, mask)
    if bad is not None:
        raise PreconditionError("center trace is not a dual ideal", witness=bad)
    return DualIdeal(sub, mask)


def inclusion_dot(lattice: FiniteOrthoLattice) -> str:
    """DOT digraph of dual ideals ordered by inclusion (cover edges only)."""
    ideals = enumerate_dual_ideals(lattice)
    label = {j.mask: "H(" + lattice.names[j.generator()] + ")" for j in ideals}
    lines = ["digraph dual_ideals {", "  rankdir=BT;"]
    for idl in ideals:
        lines.append(f'  "{label[idl.mask]}";')
    for a in ideals:
        for b in ideals:
            if a.mask == b.mask or (a.mask & b.mask) != a.mask:
                continue
            # cover: nothing strictly between a and b
            strict = [c for c in ideals
                      if c.mask not in (a.mask, b.mask)
                      and (a.mask & c.mask) == a.mask
                      and (c.mask & b.mask) == c.mask]
            if not strict:
                lines.append(f'  "{label[a.mask]}" -> "{label[b.mask]}";')
    lines.append("}")
    return "\n".join(lines)
