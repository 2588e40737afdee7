#!/usr/bin/env python3
"""The coarse-graining toward a subalgebra is not additive.

With M the diagonal 2x2 matrices, P the projection onto span{(1,1)} and
Q = diag(1, 0), restricting P + Q lands strictly above the sum of the
restrictions: every spectral projection of P + Q has trivial core in M, so
the whole sum collapses to its top eigenvalue, while Q already lies in M and
survives untouched.
"""
import numpy as np

from obslat import vn


def show(label: str, m: np.ndarray) -> None:
    print(label)
    for row in np.asarray(m):
        print("   ", "  ".join(f"{e.real:+.6f}" for e in row))


def main() -> None:
    alg = vn.subalgebra([np.diag([0.0, 1.0])], dim=2)
    p = np.full((2, 2), 0.5)
    q = np.diag([1.0, 0.0])

    rp = vn.rho_restrict(alg, p)
    rq = vn.rho_restrict(alg, q)
    rsum = vn.rho_restrict(alg, p + q)

    show("rho(P)", rp)
    show("rho(Q)", rq)
    show("rho(P) + rho(Q)", rp + rq)
    show("rho(P + Q)", rsum)

    lam = 1.0 + np.sqrt(0.5)
    print(f"\ntop eigenvalue of P + Q: {lam:.6f}")
    print("rho(P + Q) equals that multiple of the identity:",
          bool(np.allclose(rsum, lam * np.eye(2), atol=1e-9)))
    gap = float(np.linalg.norm(rsum - (rp + rq)))
    print(f"|rho(P + Q) - rho(P) - rho(Q)| = {gap:.6f}")
    print("additive:", gap <= 1e-9)


if __name__ == "__main__":
    main()
