"""Shared construction utilities for the test suite."""

import numpy as np

import psdsim as ps


def rand_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


def rand_frame(rng, n, r):
    """Random n x r column-orthonormal frame."""
    return rand_orthogonal(rng, n)[:, :r]


def rand_pd(rng, n, lo=0.5, hi=2.0):
    """Random PD matrix with eigenvalues in [lo, hi]."""
    Q = rand_orthogonal(rng, n)
    w = rng.uniform(lo, hi, size=n)
    return (Q * w) @ Q.T


def rand_psd_rank(rng, n, r, lo=0.5, hi=2.0):
    """Random PSD matrix of exact rank r in ambient dimension n."""
    F = rand_frame(rng, n, r)
    w = rng.uniform(lo, hi, size=r)
    return ps.PsdMatrix((F * w) @ F.T)


# the 5x5 worked pair: ranges meeting in a line, two right angles (l = 2),
# fiber spectra {1, 1, 1/2} and {1, 1, 2}
EXAMPLE_A = np.diag([1.0, 1.0, 0.5, 0.0, 0.0])
EXAMPLE_B = np.diag([1.0, 0.0, 0.0, 1.0, 2.0])


def example_pair():
    return ps.PsdMatrix(EXAMPLE_A), ps.PsdMatrix(EXAMPLE_B)


def displayed_left_fiber(psi):
    """The left fiber representation family of the 5x5 worked pair."""
    c, s = np.cos(psi), np.sin(psi)
    return np.array([
        [1.0, 0.0, 0.0],
        [0.0, (1 + c * c) / 2, s * c / 2],
        [0.0, s * c / 2, (1 + s * s) / 2],
    ])


def displayed_right_fiber(theta):
    """The right fiber representation family of the 5x5 worked pair."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([
        [1.0, 0.0, 0.0],
        [0.0, 1 + s * s, -s * c],
        [0.0, -s * c, 1 + c * c],
    ])


# divergence specs covering the five families and the named presets
def family_specs():
    return [
        ps.FiberDivergence.alpha_beta(1.0, 0.5),
        ps.FiberDivergence.stein(1.0),
        ps.FiberDivergence.burg(0.7),
        ps.FiberDivergence.itakura_saito(0.5),
        ps.FiberDivergence.geodesic(),
        ps.FiberDivergence.kl(),
        ps.FiberDivergence.bhattacharyya(),
        ps.FiberDivergence.renyi(0.3),
        ps.FiberDivergence.beta_log_det(1.0),
    ]


def rotated_containment_pair(rng, n, r, max_angle=1.2, pencil_lo=1.0, pencil_hi=4.0):
    """Equal-rank pair (A, B) whose base angles stay below a right angle and
    whose aligned fiber pencil spectrum lies in [pencil_lo, pencil_hi].

    With pencil_lo >= 1 the clamped and unclamped fiber values coincide, so
    the distance equals the quasi-geodesic length with k = 1.
    """
    F = rand_orthogonal(rng, n)
    qa, extra = F[:, :r], F[:, r : 2 * r]
    theta = np.sort(rng.uniform(0.05, max_angle, size=r))
    qb = qa * np.cos(theta) + extra * np.sin(theta)
    A = ps.PsdMatrix((qa * rng.uniform(0.5, 2.0, size=r)) @ qa.T)
    geo = ps.subspace_geodesic(ps.Subspace(qa), ps.Subspace(qb))
    u0, u1 = geo.evaluator(0.0), geo.evaluator(1.0)
    C0 = ps.fiber_representation(A, u0)
    E = rand_pd(rng, r, pencil_lo, pencil_hi)
    Ch = ps.psd_power(C0, 0.5)
    Dp = Ch @ E @ Ch
    B = ps.PsdMatrix(0.5 * (u1 @ Dp @ u1.T + (u1 @ Dp @ u1.T).T))
    return A, B
