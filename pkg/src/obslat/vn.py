"""Small Hermitian matrices: eigenstructure, operator spectral families, the
spectral order, commutants, and the two coarse-graining maps onto a
subalgebra.

Everything is exact linear algebra on matrices of dimension <= 16.  The
eigensolver is a cyclic complex Jacobi iteration written out here rather than
delegated: the rotation that kills one off-diagonal entry is two lines of
algebra, dimensions stay tiny, and keeping it local pins down the exact
tolerance behavior the rest of the module relies on.  numpy supplies array
arithmetic, SVD and the rank-revealing orthonormalization only.

All comparisons name the tolerance they use; the defaults live in
``Tolerances``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError, PreconditionError, ResourceError

MAX_DIM = 16


@dataclass(frozen=True)
class Tolerances:
    sym: float = 1e-12         # Hermitian symmetry defect
    proj: float = 1e-10        # idempotence defect of projections
    rec: float = 1e-9          # reconstruction residuals (Frobenius)
    sub: float = 1e-9          # subspace membership / principal angles
    cluster: float = 1e-8      # eigenvalue clustering gap
    pivot: float = 1e-10       # rank decisions in orthonormalization
    jacobi_off: float = 1e-11  # target off-diagonal Frobenius norm
    jacobi_sweeps: int = 100

    def scaled(self, **kw) -> "Tolerances":
        return replace(self, **kw)


TOL = Tolerances()


def as_matrix(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("matrix must be square", witness=list(a.shape))
    if a.shape[0] > MAX_DIM:
        raise ResourceError(f"dimension {a.shape[0]} exceeds {MAX_DIM}")
    return a


def check_hermitian(a, tol: Tolerances = TOL) -> np.ndarray:
    a = as_matrix(a)
    defect = float(np.linalg.norm(a - a.conj().T))
    if defect > tol.sym:
        raise InputError(
            f"matrix is not Hermitian within sym tolerance {tol.sym:g}",
            witness={"defect": defect})
    return (a + a.conj().T) / 2


def check_projection(p, tol: Tolerances = TOL) -> np.ndarray:
    p = check_hermitian(p, tol)
    defect = float(np.linalg.norm(p @ p - p))
    if defect > tol.proj:
        raise InputError(
            f"matrix is not idempotent within proj tolerance {tol.proj:g}",
            witness={"defect": defect})
    return p


def rank_of_projection(p) -> int:
    return int(round(float(np.trace(np.asarray(p)).real)))


def _off_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - np.diag(np.diag(m))))


# -- eigensolver -------------------------------------------------------------

def eigen_hermitian(a, tol: Tolerances = TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    Cyclic Jacobi.  For the pivot entry z = m[p, q] = r*u with r = |z|, the
    unitary that zeroes it mixes coordinates p and q as

        [c   s ]       [  cos          sin        ]
        [-s*conj(u)  c*conj(u)]

    with tan chosen from tau = (m[q,q] - m[p,p]) / (2r) by the stable root
    t = sign(tau) / (|tau| + sqrt(1 + tau^2)).  Sweeps run until the
    off-diagonal Frobenius norm is below jacobi_off.
    """
    a = check_hermitian(a, tol)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    m = a.copy()
    for _ in range(tol.jacobi_sweeps):
        if _off_norm(m) < tol.jacobi_off:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = m[p, q]
                r = abs(z)
                if r == 0.0:
                    continue
                u = z / r
                tau = (m[q, q].real - m[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.conj(u)
                g[q, q] = c * np.conj(u)
                m = g.conj().T @ m @ g
                v = v @ g
                m[p, q] = m[q, p] = 0.0  # zero exactly; the rotation was built for it
    if _off_norm(m) >= tol.jacobi_off:
        raise ResourceError(
            f"eigensolver did not converge in {tol.jacobi_sweeps} sweeps",
            witness={"off_diagonal": _off_norm(m)})
    vals = np.diag(m).real.copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


# -- subspace arithmetic ------------------------------------------------------

def orthonormal_range(columns: np.ndarray, tol: Tolerances = TOL) -> np.ndarray:
    """Orthonormal basis of the column span; rank decided at the pivot
    threshold on singular values."""
    columns = np.asarray(columns, dtype=complex)
    if columns.size == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    rank = int(np.sum(s > tol.pivot * scale))
    return u[:, :rank]


def null_space(stacked: np.ndarray, tol: Tolerances = TOL) -> np.ndarray:
    """Orthonormal basis of the right null space."""
    stacked = np.asarray(stacked, dtype=complex)
    rows, cols = stacked.shape
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    rank = int(np.sum(s > tol.pivot * scale))
    return vh.conj().T[:, rank:]


def projection_onto(columns: np.ndarray, tol: Tolerances = TOL) -> np.ndarray:
    b = orthonormal_range(columns, tol)
    return b @ b.conj().T


def projection_leq(p, q, tol: Tolerances = TOL) -> bool:
    """Range containment ran p <= ran q: q acts as the identity on ran p
    within the sub tolerance."""
    p = np.asarray(p)
    q = np.asarray(q)
    return float(np.linalg.norm(q @ p - p)) <= tol.sub


def projection_join(ps, tol: Tolerances = TOL) -> np.ndarray:
    """Projection onto the span-sum of the ranges."""
    ps = [np.asarray(p, dtype=complex) for p in ps]
    if not ps:
        raise PreconditionError("join of no projections")
    return projection_onto(np.hstack(ps), tol)


def projection_meet(ps, tol: Tolerances = TOL) -> np.ndarray:
    """Projection onto the intersection of the ranges: complement of the
    span of the complements."""
    ps = [np.asarray(p, dtype=complex) for p in ps]
    if not ps:
        raise PreconditionError("meet of no projections")
    eye = np.eye(ps[0].shape[0], dtype=complex)
    return eye - projection_join([eye - p for p in ps], tol)


# -- operator spectral families ----------------------------------------------

@dataclass(frozen=True)
class OperatorSpectralFamily:
    """Clustered eigenvalue breakpoints with cumulative eigenprojections."""
    breakpoints: tuple[float, ...] = ()
    projections: tuple = ()          # ndarrays, strictly increasing ranges
    dim: int = 0

    def value_at(self, lam: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for mu, e in zip(self.breakpoints, self.projections):
            if mu <= lam:
                out = e
            else:
                break
        return out

    def synthesize(self) -> np.ndarray:
        """sum of mu_i (E_i - E_{i-1})."""
        a = np.zeros((self.dim, self.dim), dtype=complex)
        prev = np.zeros_like(a)
        for mu, e in zip(self.breakpoints, self.projections):
            a = a + mu * (e - prev)
            prev = e
        return a


def spectral_family_of(a, tol: Tolerances = TOL) -> OperatorSpectralFamily:
    """Cluster eigenvalues within the cluster gap (the module's only lossy
    step; each breakpoint is its cluster's mean), then accumulate
    eigenprojections."""
    if isinstance(a, OperatorSpectralFamily):
        return a
    vals, vecs = eigen_hermitian(a, tol)
    n = len(vals)
    groups: list[list[int]] = [[0]]
    for i in range(1, n):
        if vals[i] - vals[groups[-1][-1]] <= tol.cluster:
            groups[-1].append(i)
        else:
            groups.append([i])
    breakpoints = []
    projections = []
    cum = np.zeros((n, n), dtype=complex)
    for g in groups:
        breakpoints.append(float(np.mean([vals[i] for i in g])))
        for i in g:
            col = vecs[:, i:i + 1]
            cum = cum + col @ col.conj().T
        projections.append(cum.copy())
    projections[-1] = np.eye(n, dtype=complex)
    return OperatorSpectralFamily(tuple(breakpoints), tuple(projections), n)


def family_from_steps(breakpoints, projections, tol: Tolerances = TOL
                      ) -> OperatorSpectralFamily:
    """Canonicalize (lambda, projection) steps: sort, drop rank-zero leading
    steps and repeated projections, require an increasing family ending at
    the identity."""
    pairs = sorted(zip([float(b) for b in breakpoints], list(projections)),
                   key=lambda pr: pr[0])
    canon: list[tuple[float, np.ndarray]] = []
    for lam, p in pairs:
        p = check_projection(p, tol)
        if not canon and rank_of_projection(p) == 0:
            continue
        if canon and float(np.linalg.norm(canon[-1][1] - p)) <= tol.sub:
            continue
        canon.append((lam, p))
    if not canon:
        raise InputError("family has no nonzero step")
    dim = canon[0][1].shape[0]
    if float(np.linalg.norm(canon[-1][1] - np.eye(dim))) > tol.proj:
        raise InputError("family must end at the identity")
    for (l1, p1), (l2, p2) in zip(canon, canon[1:]):
        if not projection_leq(p1, p2, tol):
            raise InputError("family is not increasing",
                             witness={"breakpoints": [l1, l2]})
    return OperatorSpectralFamily(tuple(c[0] for c in canon),
                                  tuple(c[1] for c in canon), dim)


# -- spectral order ------------------------------------------------------------

def merged_breakpoints(fams, tol: Tolerances = TOL) -> list[float]:
    """Union of the families' breakpoints with nearly-equal values
    identified; each cluster is represented by its maximum, so evaluating
    there sees every member family past its jump."""
    lams = sorted(set(b for f in fams for b in f.breakpoints))
    out: list[float] = []
    for lam in lams:
        if out and lam - out[-1] <= tol.cluster:
            out[-1] = lam
        else:
            out.append(lam)
    return out


def spectral_leq(a, b, tol: Tolerances = TOL) -> bool:
    """a <= b in the spectral order: b's spectral projection lies under a's
    at every merged breakpoint."""
    fa = spectral_family_of(a, tol)
    fb = spectral_family_of(b, tol)
    if fa.dim != fb.dim:
        raise InputError("dimension mismatch", witness=[fa.dim, fb.dim])
    return all(projection_leq(fb.value_at(lam), fa.value_at(lam), tol)
               for lam in merged_breakpoints([fa, fb], tol))


def _pointwise(ops, combine, tol: Tolerances) -> np.ndarray:
    fams = [spectral_family_of(x if isinstance(x, OperatorSpectralFamily)
                               else check_hermitian(x, tol), tol) for x in ops]
    if not fams:
        raise PreconditionError("need a nonempty operator list")
    dims = {f.dim for f in fams}
    if len(dims) != 1:
        raise InputError("dimension mismatch", witness=sorted(dims))
    lams = merged_breakpoints(fams, tol)
    steps = [combine([f.value_at(lam) for f in fams], tol) for lam in lams]
    return family_from_steps(lams, steps, tol).synthesize()


def spectral_meet(ops, tol: Tolerances = TOL) -> np.ndarray:
    """Greatest lower bound in the spectral order: pointwise join of the
    spectral projections, then synthesis."""
    return _pointwise(ops, projection_join, tol)


def spectral_join(ops, tol: Tolerances = TOL) -> np.ndarray:
    """Least upper bound: pointwise meet of the spectral projections.  Step
    families are right-continuous, so the regularized value at each merged
    breakpoint is the plain intersection there."""
    return _pointwise(ops, projection_meet, tol)


# -- subalgebras and commutants ------------------------------------------------

def _vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex).reshape(-1)


def commutant_basis(mats, dim: int, tol: Tolerances = TOL) -> list[np.ndarray]:
    """Basis of everything commuting with the given matrices and their
    adjoints: the null space of the stacked Sylvester equations, via
    vec(G X - X G) = (G (x) I - I (x) G^T) vec(X)."""
    eye = np.eye(dim, dtype=complex)
    rows = []
    for g in mats:
        g = as_matrix(g)
        for h in (g, g.conj().T):
            rows.append(np.kron(h, eye) - np.kron(eye, h.T))
    stacked = (np.vstack(rows) if rows
               else np.zeros((0, dim * dim), dtype=complex))
    vecs = null_space(stacked, tol)
    return [vecs[:, k].reshape(dim, dim) for k in range(vecs.shape[1])]


@dataclass(frozen=True)
class VNSubalgebra:
    """Unital *-closed linear span inside a full matrix algebra."""
    dim: int = 0
    generators: tuple = ()
    basis: tuple = ()            # matrices whose vecs are orthonormal
    commutant: tuple = ()        # same, for the commutant

    @property
    def linear_dim(self) -> int:
        return len(self.basis)

    def contains(self, m, tol: Tolerances = TOL) -> bool:
        m = as_matrix(m)
        if m.shape[0] != self.dim:
            return False
        b = np.column_stack([_vec(x) for x in self.basis])
        v = _vec(m)
        resid = v - b @ (b.conj().T @ v)   # columns are orthonormal
        return float(np.linalg.norm(resid)) <= tol.sub * max(
            1.0, float(np.linalg.norm(v)))

    def is_abelian(self, tol: Tolerances = TOL) -> bool:
        return all(float(np.linalg.norm(x @ y - y @ x)) <= tol.sub
                   for x in self.basis for y in self.basis)

    def hermitian_basis(self) -> list[np.ndarray]:
        """A spanning set of the selfadjoint part."""
        out = []
        for x in self.basis:
            out.append((x + x.conj().T) / 2)
            out.append((x - x.conj().T) / 2j)
        return out


def _closed_linear_span(seed: list[np.ndarray], dim: int,
                        tol: Tolerances = TOL) -> list[np.ndarray]:
    """Close matrices under products, tracking an orthonormal vec-basis of
    the span until the dimension stabilizes."""
    basis = orthonormal_range(np.column_stack([_vec(m) for m in seed]), tol)
    while True:
        mats = [basis[:, k].reshape(dim, dim) for k in range(basis.shape[1])]
        cols = [basis] + [_vec(x @ y).reshape(-1, 1)
                          for x in mats for y in mats]
        new_basis = orthonormal_range(np.hstack(cols), tol)
        if new_basis.shape[1] == basis.shape[1]:
            return mats
        basis = new_basis


def subalgebra(gens, dim: int | None = None, tol: Tolerances = TOL
               ) -> VNSubalgebra:
    """The unital *-algebra generated by the given matrices, with its
    commutant; the double commutant is verified to reproduce the span."""
    gens = [as_matrix(g) for g in gens]
    if dim is None:
        if not gens:
            raise InputError("need generators or an explicit dimension")
        dim = gens[0].shape[0]
    for g in gens:
        if g.shape[0] != dim:
            raise InputError("generator dimension mismatch",
                             witness=[int(g.shape[0]), dim])
    seed = [np.eye(dim, dtype=complex)]
    for g in gens:
        seed += [g, g.conj().T]
    basis = _closed_linear_span(seed, dim, tol)
    comm = commutant_basis(basis, dim, tol)
    bicomm = commutant_basis(comm, dim, tol)
    if len(bicomm) != len(basis):
        raise ResourceError(
            "double commutant does not close at the generated span",
            witness={"span": len(basis), "bicommutant": len(bicomm)})
    return VNSubalgebra(dim, tuple(gens), tuple(basis), tuple(comm))


def trivial_algebra(dim: int, tol: Tolerances = TOL) -> VNSubalgebra:
    return subalgebra([], dim=dim, tol=tol)


def algebra_intersection(a: VNSubalgebra, b: VNSubalgebra,
                         tol: Tolerances = TOL) -> VNSubalgebra:
    """Meet of two subalgebras: intersection of the linear spans, then
    regeneration (which restores closure and re-runs the checks)."""
    if a.dim != b.dim:
        raise InputError("ambient dimension mismatch", witness=[a.dim, b.dim])
    pa = projection_onto(np.column_stack([_vec(x) for x in a.basis]), tol)
    pb = projection_onto(np.column_stack([_vec(x) for x in b.basis]), tol)
    vecs = orthonormal_range(projection_meet([pa, pb], tol), tol)
    mats = [vecs[:, k].reshape(a.dim, a.dim) for k in range(vecs.shape[1])]
    return subalgebra(mats, dim=a.dim, tol=tol)


def minimal_projections(m: VNSubalgebra, tol: Tolerances = TOL
                        ) -> list[np.ndarray]:
    """Minimal projections of an abelian subalgebra, ordered by the
    eigenvalue of a fixed generic element.

    A Hermitian combination with pairwise-irrational weights separates the
    joint eigenspaces; the result is verified to have exactly linear_dim
    members, all inside the algebra."""
    if not m.is_abelian(tol):
        raise PreconditionError("minimal projections need an abelian algebra")
    herm = m.hermitian_basis()
    generic = np.zeros((m.dim, m.dim), dtype=complex)
    for k, h in enumerate(herm):
        generic = generic + math.sqrt(k + 2.0) * h
    fam = spectral_family_of(generic, tol)
    prev = np.zeros((m.dim, m.dim), dtype=complex)
    out = []
    for e in fam.projections:
        out.append(e - prev)
        prev = e
    if len(out) != m.linear_dim:
        raise ResourceError(
            "generic element failed to separate the minimal projections",
            witness={"found": len(out), "algebra_dim": m.linear_dim})
    for p in out:
        if not m.contains(p, tol):
            raise ResourceError(
                "spectral projection of the generic element left the algebra")
    return out


# -- core, support, and the two restriction maps -------------------------------

def core_projection(m: VNSubalgebra, q, tol: Tolerances = TOL) -> np.ndarray:
    """Largest subspace of ran q invariant under the commutant, as a
    projection.  Fixpoint: keep the vectors the commutant maps back into the
    current subspace; the dimension drops or the iteration stops, so at most
    dim rounds run.  The result must commute with the commutant (hence lie
    in the algebra); a breach is an internal numeric failure."""
    q = check_projection(q, tol)
    basis = orthonormal_range(q, tol)
    eye = np.eye(m.dim, dtype=complex)
    while basis.shape[1] > 0:
        p_cur = basis @ basis.conj().T
        stacked = np.vstack([(eye - p_cur) @ (g @ basis) for g in m.commutant])
        keep = null_space(stacked, tol)
        if keep.shape[1] == basis.shape[1]:
            break
        basis = orthonormal_range(basis @ keep, tol)
    core = (basis @ basis.conj().T if basis.shape[1]
            else np.zeros((m.dim, m.dim), dtype=complex))
    for g in m.commutant:
        defect = float(np.linalg.norm(g @ core - core @ g))
        if defect > tol.sub:
            raise ResourceError("core failed to commute with the commutant",
                                witness={"defect": defect})
    return core


def support_projection(m: VNSubalgebra, q, tol: Tolerances = TOL) -> np.ndarray:
    """Smallest projection of the algebra above q: complement of the core of
    the complement."""
    q = check_projection(q, tol)
    eye = np.eye(m.dim, dtype=complex)
    return eye - core_projection(m, eye - q, tol)


def rho_restrict(m: VNSubalgebra, a, tol: Tolerances = TOL) -> np.ndarray:
    """Smallest spectral-order upper bound of a inside the subalgebra,
    synthesized from the cores of a's spectral projections."""
    fam = spectral_family_of(check_hermitian(a, tol), tol)
    steps = [core_projection(m, e, tol) for e in fam.projections]
    return family_from_steps(fam.breakpoints, steps, tol).synthesize()


def sigma_restrict(m: VNSubalgebra, a, tol: Tolerances = TOL) -> np.ndarray:
    """Largest spectral-order lower bound inside the subalgebra, from the
    supports of the spectral projections.  The defining infimum over later
    arguments is exact on step families, so each merged breakpoint takes the
    support of the value right there."""
    fam = spectral_family_of(check_hermitian(a, tol), tol)
    steps = [support_projection(m, e, tol) for e in fam.projections]
    return family_from_steps(fam.breakpoints, steps, tol).synthesize()


def atomic_value(a, x, tol: Tolerances = TOL) -> float:
    """The first breakpoint whose spectral projection contains the given
    vector (normalized here)."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    nrm = float(np.linalg.norm(x))
    if nrm <= tol.pivot:
        raise InputError("need a nonzero vector")
    x = x / nrm
    fam = spectral_family_of(a, tol)
    for mu, e in zip(fam.breakpoints, fam.projections):
        if float(np.linalg.norm(e @ x - x)) <= tol.sub:
            return mu
    return float(fam.breakpoints[-1])


# -- samplers -----------------------------------------------------------------

def random_hermitian(rng, dim: int, scale: float = 1.0) -> np.ndarray:
    re = np.array([[rng.gauss(0.0, scale) for _ in range(dim)]
                   for _ in range(dim)])
    im = np.array([[rng.gauss(0.0, scale) for _ in range(dim)]
                   for _ in range(dim)])
    m = re + 1j * im
    return (m + m.conj().T) / 2


def random_projection(rng, dim: int, rank: int | None = None,
                      tol: Tolerances = TOL) -> np.ndarray:
    if rank is None:
        rank = rng.randrange(0, dim + 1)
    if rank == 0:
        return np.zeros((dim, dim), dtype=complex)
    cols = np.array([[rng.gauss(0.0, 1.0) + 1j * rng.gauss(0.0, 1.0)
                      for _ in range(rank)] for _ in range(dim)])
    return projection_onto(cols, tol)
