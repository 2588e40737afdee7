"""Bounded spectral families with values in a finite lattice.

A family is a finite list of breakpoints (lambda_i, E_i) with strictly
increasing lambdas and increasing elements, read as the right-continuous step
map that is E_i on [lambda_i, lambda_{i+1}) and bottom below lambda_1.  The
last element must equal the family's top (the whole-lattice top by default; a
smaller top models a family living in the down-set sublattice under it).

Breakpoint reals are compared exactly: the corpus sticks to small decimals, so
no epsilon is needed at the lattice layer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError
from .lattice import FiniteOrthoLattice


@dataclass(frozen=True)
class SpectralFamily:
    lattice: FiniteOrthoLattice = field(compare=False)
    breakpoints: tuple[tuple[float, int], ...] = ()
    top: int = 0

    def elements(self) -> list[int]:
        return [e for _, e in self.breakpoints]

    def spectrum(self) -> list[float]:
        return [lam for lam, _ in self.breakpoints]

    def value_at(self, lam: float) -> int:
        """The step value: the element at the largest breakpoint <= lam."""
        out = self.lattice.zero
        for lam_i, e in self.breakpoints:
            if lam_i <= lam:
                out = e
            else:
                break
        return out

    def to_pairs(self) -> list[tuple[float, str]]:
        return [(lam, self.lattice.names[e]) for lam, e in self.breakpoints]

    def __repr__(self):
        inner = ", ".join(f"({lam:g}, {self.lattice.names[e]})"
                          for lam, e in self.breakpoints)
        return f"[{inner}]"


def spectral_family(lattice: FiniteOrthoLattice,
                    pairs: Iterable[tuple[float, int]],
                    top: int | None = None) -> SpectralFamily:
    """Validate and canonicalize breakpoint data.

    Canonical form: sorted by lambda, versions of the bottom element at the
    front dropped, an entry whose element repeats the previous one dropped
    (the step map is unchanged by both), and the final element must equal
    ``top``.  Duplicate lambdas and order violations are rejected.
    """
    if top is None:
        top = lattice.one
    raw = [(float(lam), int(e)) for lam, e in pairs]
    if not raw:
        raise InputError("a spectral family needs at least one breakpoint")
    for lam, e in raw:
        if not math.isfinite(lam):
            raise InputError("breakpoints must be finite reals", witness=lam)
        if not 0 <= e < lattice.n:
            raise InputError("breakpoint element out of range", witness=e)
        if not lattice.le(e, top):
            raise InputError(
                f"element {lattice.names[e]} exceeds the family top "
                f"{lattice.names[top]}",
                witness=[lattice.names[e], lattice.names[top]])
    raw.sort(key=lambda p: p[0])
    for (l1, e1), (l2, e2) in zip(raw, raw[1:]):
        if l1 == l2 and e1 != e2:
            raise InputError(
                f"two different elements at breakpoint {l1:g}",
                witness=[lattice.names[e1], lattice.names[e2]])
        if not lattice.le(e1, e2):
            raise InputError(
                "family is not increasing",
                witness=[[l1, lattice.names[e1]], [l2, lattice.names[e2]]])
    canon: list[tuple[float, int]] = []
    for lam, e in raw:
        if not canon and e == lattice.zero:
            continue
        if canon and canon[-1][1] == e:
            continue
        canon.append((lam, e))
    if not canon or canon[-1][1] != top:
        raise InputError(
            "family must reach its top element",
            witness=lattice.names[top])
    return SpectralFamily(lattice, tuple(canon), top)


def constant_family(lattice: FiniteOrthoLattice, value: float,
                    top: int | None = None) -> SpectralFamily:
    return spectral_family(lattice, [(value, top if top is not None
                                      else lattice.one)], top)


def projection_family(lattice: FiniteOrthoLattice, p: int) -> SpectralFamily:
    """The two-step family of an orthocomplemented element: its complement at
    0, top at 1.  Degenerate p in {0, top} collapses to one step."""
    return spectral_family(
        lattice, [(0.0, lattice.orthocomplement(p)), (1.0, lattice.one)])


def restrict_family(family: SpectralFamily, a: int) -> SpectralFamily:
    """Meet every value with a; the result lives under the new top a."""
    lat = family.lattice
    new_top = lat.meet(family.top, a)
    if new_top == lat.zero:
        raise PreconditionError(
            "restriction target meets the family top in bottom",
            witness=lat.names[a])
    return spectral_family(
        lat, [(lam, lat.meet(e, a)) for lam, e in family.breakpoints], new_top)


def family_to_dict(family: SpectralFamily) -> dict:
    return {"breakpoints": [[lam, family.lattice.names[e]]
                            for lam, e in family.breakpoints]}


def family_from_pairs_named(lattice: FiniteOrthoLattice,
                            pairs: Sequence[Sequence], top: str | None = None
                            ) -> SpectralFamily:
    idx_pairs = [(float(lam), lattice.index(str(name))) for lam, name in pairs]
    return spectral_family(
        lattice, idx_pairs,
        top=None if top is None else lattice.index(top))


def sample_family(lattice: FiniteOrthoLattice, rng,
                  max_steps: int = 4,
                  grid: Sequence[float] | None = None) -> SpectralFamily:
    """Random bounded family: a random chain up to top with grid breakpoints."""
    if grid is None:
        grid = [round(-2.0 + 0.25 * i, 2) for i in range(21)]
    chain = [lattice.one]
    while len(chain) < max_steps:
        below = [e for e in range(lattice.n)
                 if e not in (lattice.zero, chain[-1])
                 and lattice.le(e, chain[-1])]
        if not below or rng.random() < 0.35:
            break
        chain.append(below[rng.randrange(len(below))])
    chain.reverse()
    lams = sorted(rng.sample(list(grid), len(chain)))
    return spectral_family(lattice, list(zip(lams, chain)))
