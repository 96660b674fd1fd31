"""The bundle-based geometric distance between PSD matrices.

The distance combines a Grassmann base distance between the ranges with a
fiber divergence between the induced positive definite representations:

    total = sqrt(grassmann_term^2 + fiber_term^2).

On the generic stratum (no right principal angles, l = 0) the fiber term
has a closed form through the clamped pencil spectrum. On degenerate
strata the principal bases are ambiguous and the fiber term is evaluated
either by maximizing over the residual unitary freedom ("algorithm1") or
by a max-min over the sampled ambiguity group ("faithful").
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .divergences import GEODESIC_AB, FiberDivergence
from .errors import DomainError
from .grassmann import GrassmannMetric, grassmann_distance
from .linalg import TOL_RANK, PsdMatrix, _herm, small_angles_refined
from .pointset import _min_quadratic_box, pointset_value_from_spectrum

__all__ = [
    "MetricSpec",
    "GdResult",
    "generalized_hausdorff",
    "representation_set",
    "gd",
    "gd_degenerate_fiber",
    "pairwise_gram",
]


@dataclass(frozen=True)
class MetricSpec:
    grassmann: GrassmannMetric
    fiber: FiberDivergence
    hausdorff_mode: str = "algorithm1"  # or "faithful"

    def __post_init__(self):
        if self.hausdorff_mode not in ("algorithm1", "faithful"):
            raise DomainError(f"unknown hausdorff mode {self.hausdorff_mode!r}")


@dataclass
class GdResult:
    total: float
    grassmann_term: float
    fiber_term: float
    stratum_index: int
    pencil_spectrum: np.ndarray  # clamped, descending
    angles: np.ndarray           # ascending
    mode: str                    # closedForm | optimizedDegenerate | faithfulSampled

    def to_dict(self):
        return {
            "total": self.total,
            "grassmann_term": self.grassmann_term,
            "fiber_term": self.fiber_term,
            "stratum_index": self.stratum_index,
            "angles": [float(t) for t in self.angles],
            "pencil_spectrum": [float(x) for x in self.pencil_spectrum],
            "mode": self.mode,
        }

    def to_json(self):
        def num(x):
            if math.isinf(x):
                return "Infinity"
            return f"{x:.17g}"

        parts = [
            f'"total": {num(self.total)}',
            f'"grassmann_term": {num(self.grassmann_term)}',
            f'"fiber_term": {num(self.fiber_term)}',
            f'"stratum_index": {self.stratum_index}',
            '"angles": [' + ", ".join(num(t) for t in self.angles) + "]",
            '"pencil_spectrum": [' + ", ".join(num(x) for x in self.pencil_spectrum) + "]",
            f'"mode": {json.dumps(self.mode)}',
        ]
        return "{" + ", ".join(parts) + "}"


# --- generalized Hausdorff functional ---------------------------------


def generalized_hausdorff(f, pairs):
    """max of the two directed sup-inf values over a paired subset.

    `pairs` is a finite iterable of (x, y); the pairing structure is read
    off by object identity, so reuse the same x object for all its
    partners. Reduces to f(x, y) on a singleton.
    """
    pairs = list(pairs)
    if not pairs:
        raise DomainError("empty pairing set")
    partners_of_x = {}
    partners_of_y = {}
    xs, ys = {}, {}
    for x, y in pairs:
        xs[id(x)] = x
        ys[id(y)] = y
        partners_of_x.setdefault(id(x), []).append(y)
        partners_of_y.setdefault(id(y), []).append(x)
    d1 = max(min(f(xs[kx], y) for y in part) for kx, part in partners_of_x.items())
    d2 = max(min(f(x, ys[ky]) for x in part) for ky, part in partners_of_y.items())
    return max(d1, d2)


# --- internal: preparation of the aligned fiber pair ------------------


@dataclass
class _Prepared:
    r: int
    s: int
    sigma: np.ndarray
    theta: np.ndarray
    l: int
    C: np.ndarray  # r x r representation of the smaller-rank side
    D: np.ndarray  # s x s representation of the other side


def _prepare(A: PsdMatrix, B: PsdMatrix, tol):
    """Aligned fiber representations; assumes rank(A) <= rank(B)."""
    n = max(A.n, B.n)
    UA, wA = A.compact_factors()
    UB, wB = B.compact_factors()
    r, s = len(wA), len(wB)
    if r == 0 or s == 0:
        raise DomainError("zero-rank input")
    if UA.shape[0] < n:
        UA = np.vstack([UA, np.zeros((n - UA.shape[0], r), dtype=UA.dtype)])
    if UB.shape[0] < n:
        UB = np.vstack([UB, np.zeros((n - UB.shape[0], s), dtype=UB.dtype)])
    M = UA.conj().T @ UB
    P, sig, Qh = np.linalg.svd(M, full_matrices=True)
    sigma = np.clip(sig, 0.0, 1.0)
    theta = small_angles_refined(sigma, UA, UB @ Qh.conj().T)
    l = int(np.count_nonzero(sigma <= tol))
    C = _herm(P.conj().T @ (wA[:, None] * P))
    D = _herm(Qh @ (wB[:, None] * Qh.conj().T))
    return _Prepared(r=r, s=s, sigma=sigma, theta=theta, l=l, C=C, D=D)


def _pair_fiber_value(spec: FiberDivergence, mu):
    """Extended point-set fiber value from an unclamped pencil spectrum."""
    if spec.kind == GEODESIC_AB and spec.beta != 0.0:
        c = np.log(np.asarray(mu, dtype=float))
        return float(np.sqrt(_min_quadratic_box(spec.alpha, spec.beta, np.sort(c)[::-1])))
    return pointset_value_from_spectrum(spec, mu).value


def _batch_pencil(X_invhalf, Y11_batch):
    """Descending pencil spectra of X^{-1} Y11 for a stack of Y11 blocks."""
    W = X_invhalf @ Y11_batch @ X_invhalf.conj().T
    W = 0.5 * (W + np.swapaxes(W.conj(), -1, -2))
    lam = np.linalg.eigvalsh(W)
    return lam[..., ::-1]


def _batch_values(spec, X_invhalf, Y11_batch):
    mu = _batch_pencil(X_invhalf, Y11_batch)
    mu = np.maximum(mu, 1e-300)
    if spec.kind == GEODESIC_AB and spec.beta != 0.0:
        return np.array([_pair_fiber_value(spec, row) for row in mu])
    lam = np.maximum(1.0, mu)
    from .divergences import apply_bound, per_eigenvalue_terms

    totals = np.sum(per_eigenvalue_terms(spec, lam), axis=-1)
    vals = np.where(totals > 0.0, totals, 0.0) ** spec.outer_exponent
    if spec.bound is not None:
        vals = np.array([apply_bound(spec, v) for v in vals])
    return vals


def _inv_half(X):
    lam, V = np.linalg.eigh(_herm(X))
    if lam[0] <= 0.0:
        raise DomainError("fiber representation not positive definite")
    return (V / np.sqrt(lam)) @ V.conj().T


# --- ambiguity group sampling -----------------------------------------


def _sigma_blocks(sigma, count, tol=1e-8):
    """Group the first `count` singular values into runs of equal value."""
    blocks = []
    i = 0
    while i < count:
        j = i + 1
        while j < count and abs(sigma[j] - sigma[i]) <= tol:
            j += 1
        blocks.append((i, j))
        i = j
    return blocks


def _random_unitaries(rng, count, k, complex_field):
    """A (count, k, k) stack of random orthogonal/unitary matrices."""
    if k == 0:
        return np.zeros((count, 0, 0))
    G = rng.normal(size=(count, k, k))
    if complex_field:
        G = G + 1j * rng.normal(size=(count, k, k))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    d = d / np.abs(np.where(d == 0, 1.0, d))
    return Q * d[..., None, :]


def _random_unitary(rng, k, complex_field):
    return _random_unitaries(rng, 1, k, complex_field)[0]


def _tail_unitaries(rng, count, k, complex_field):
    """Sample U(k)/O(k): quasi-uniform grids for tiny real blocks, random QR else."""
    if k == 0:
        return np.zeros((count, 0, 0))
    if not complex_field and k == 1:
        signs = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
        return signs[:, None, None] * np.ones((count, 1, 1))
    if not complex_field and k == 2:
        # evenly spaced rotations (random phase offset), alternating reflection
        ang = rng.uniform(0.0, 2.0 * np.pi) + np.linspace(
            0.0, 2.0 * np.pi, max(1, (count + 1) // 2), endpoint=False)
        c, s = np.cos(ang), np.sin(ang)
        rot = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
        refl = rot.copy()
        refl[:, :, 1] *= -1.0
        return np.concatenate([rot, refl])[:count]
    return _random_unitaries(rng, count, k, complex_field)


def _sample_group(rng, k_extra, count, complex_field, r_total):
    """Sample blkdiag(I, T) tail factors; element 0 is always the identity."""
    out = np.tile(np.eye(r_total, dtype=complex if complex_field else float),
                  (count, 1, 1))
    if k_extra and count > 1:
        i0 = r_total - k_extra
        out[1:, i0:, i0:] = _tail_unitaries(rng, count - 1, k_extra, complex_field)
    return out


def representation_set(A: PsdMatrix, B: PsdMatrix, grid=256, tol=TOL_RANK, seed=0):
    """Sampled fiber-representation pairs over the principal-basis ambiguity.

    Returns a list of (M_X, M_Y) array pairs. Pairs sharing the same
    repeated-sigma block rotation reuse the same array objects, so the
    list can be fed to generalized_hausdorff directly.
    """
    if A.rank > B.rank:
        A, B = B, A
    prep = _prepare(A, B, tol)
    r, s, l = prep.r, prep.s, prep.l
    complex_field = np.iscomplexobj(prep.C) or np.iscomplexobj(prep.D)
    rng = np.random.default_rng(seed)
    blocks = _sigma_blocks(prep.sigma, r - l)
    n_p = max(1, int(round(grid ** (1.0 / 3.0))))
    n_s = 1 if l == 0 else n_p
    n_t = max(1, grid // max(1, n_p * n_s))
    pairs = []
    for _ in range(n_p):
        P = np.eye(r - l, dtype=complex if complex_field else float)
        for (i, j) in blocks:
            P[i:j, i:j] = _random_unitary(rng, j - i, complex_field)
        xs = []
        for _ in range(n_s):
            G = np.eye(r, dtype=P.dtype)
            G[: r - l, : r - l] = P
            if l:
                G[r - l :, r - l :] = _random_unitary(rng, l, complex_field)
            xs.append(_herm(G @ prep.C @ G.conj().T))
        ys = []
        for _ in range(n_t):
            H = np.eye(s, dtype=P.dtype)
            H[: r - l, : r - l] = P
            k = s - r + l
            if k:
                H[r - l :, r - l :] = _random_unitary(rng, k, complex_field)
            ys.append(_herm(H @ prep.D @ H.conj().T))
        pairs.extend((x, y) for x in xs for y in ys)
    return pairs


def _faithful_fiber(prep: _Prepared, spec: FiberDivergence, samples, seed):
    """Directed max-min fiber value over the sampled ambiguity group."""
    r, s, l = prep.r, prep.s, prep.l
    complex_field = np.iscomplexobj(prep.C) or np.iscomplexobj(prep.D)
    rng = np.random.default_rng(seed)
    blocks = _sigma_blocks(prep.sigma, r - l)
    if l == 0:
        n_p, n_s = max(4, min(32, samples // 64)), 1
    else:
        n_p = 4
        n_s = max(4, int(math.sqrt(samples / n_p)))
    n_t = max(4, samples // max(1, n_p * n_s))

    d1 = -np.inf
    d2 = -np.inf
    eye_r = np.eye(r, dtype=complex if complex_field else float)
    eye_s = np.eye(s, dtype=complex if complex_field else float)
    for _ in range(n_p):
        P = np.eye(r - l, dtype=eye_r.dtype)
        for (i, j) in blocks:
            P[i:j, i:j] = _random_unitary(rng, j - i, complex_field)
        # S factors act on the last l rows of the left frame
        Gs = _sample_group(rng, l, n_s if l else 1, complex_field, r)
        Gs[:, : r - l, : r - l] = P
        Xs = Gs @ prep.C @ np.swapaxes(Gs.conj(), -1, -2)
        # T factors act on the last s - r + l rows of the right frame
        Ht = _sample_group(rng, s - r + l, n_t, complex_field, s)
        Ht[:, : r - l, : r - l] = P
        Y11 = (Ht @ prep.D @ np.swapaxes(Ht.conj(), -1, -2))[:, :r, :r]
        vals = np.empty((Xs.shape[0], n_t))
        for i in range(Xs.shape[0]):
            vals[i] = _batch_values(spec, _inv_half(Xs[i]), Y11)
        d1 = max(d1, float(vals.min(axis=1).max()))
        d2 = max(d2, float(vals.min(axis=0).max()))
    return max(d1, d2)


# --- degenerate-stratum optimizer -------------------------------------


def _conjugated_block_values(spec, C, D, l, Ts):
    """Fiber values for a stack of tail unitaries T conjugating D."""
    r, s = C.shape[0], D.shape[0]
    k = s - r + l
    H = np.tile(np.eye(s, dtype=np.result_type(D, Ts)), (Ts.shape[0], 1, 1))
    H[:, r - l :, r - l :] = Ts
    Y11 = (H @ D @ np.swapaxes(H.conj(), -1, -2))[:, :r, :r]
    return _batch_values(spec, _inv_half(C), Y11)


def gd_degenerate_fiber(Crep, Drep, l, spec: FiberDivergence, budget=16,
                        mode="algorithm1", seed=0, samples=None, sigma=None):
    """Fiber term on a degenerate stratum (l >= 1 right principal angles).

    algorithm1 mode maximizes the extended divergence over the tail
    unitary group U(s-r+l) conjugating the larger representation;
    faithful mode evaluates the max-min over the sampled ambiguity group.
    Deterministic given a seed.
    """
    C = np.asarray(Crep)
    D = np.asarray(Drep)
    r, s = C.shape[0], D.shape[0]
    if l < 1 or r > s:
        raise DomainError("degenerate evaluator needs l >= 1 and r <= s")
    k = s - r + l
    complex_field = np.iscomplexobj(C) or np.iscomplexobj(D)

    if mode == "faithful":
        if sigma is None:
            sigma = np.concatenate([np.full(r - l, 0.5), np.zeros(l)])
        prep = _Prepared(r=r, s=s, sigma=np.asarray(sigma), theta=np.arccos(np.clip(sigma, 0, 1)),
                         l=l, C=C, D=D)
        return _faithful_fiber(prep, spec, samples or 20000, seed)
    if mode != "algorithm1":
        raise DomainError(f"unknown hausdorff mode {mode!r}")

    if k == 1 and not complex_field:
        Ts = np.array([[[1.0]], [[-1.0]]])
        return float(_conjugated_block_values(spec, C, D, l, Ts).max())

    rng = np.random.default_rng(seed)

    # coarse sampling pass to seed the local maximizations
    n_coarse = 512
    Ts = np.concatenate([
        _random_unitaries(rng, n_coarse - 1, k, complex_field),
        np.eye(k, dtype=complex if complex_field else float)[None],
    ])
    coarse = _conjugated_block_values(spec, C, D, l, Ts)
    order = np.argsort(coarse)[::-1]
    best = float(coarse.max())

    nskew = k * k if complex_field else k * (k - 1) // 2

    def make_T(x, T0):
        K = np.zeros((k, k), dtype=complex if complex_field else float)
        iu = np.triu_indices(k, 1)
        m = len(iu[0])
        K[iu] = x[:m]
        K = K - K.T
        if complex_field:
            Hsym = np.zeros((k, k), dtype=complex)
            Hsym[iu] = 1j * x[m : 2 * m]
            Hsym = Hsym + Hsym.conj().T
            Hsym[np.diag_indices(k)] = 1j * x[2 * m :]
            K = K + Hsym
        return T0 @ scipy.linalg.expm(K)

    def negobj(x, T0):
        T = make_T(x, T0)
        return -float(_conjugated_block_values(spec, C, D, l, T[None])[0])

    starts = [Ts[i] for i in order[: max(2, budget)]]
    for T0 in starts:
        res = scipy.optimize.minimize(
            negobj, np.zeros(nskew), args=(T0,), method="L-BFGS-B",
            options={"maxiter": 60, "ftol": 1e-14, "eps": 1e-7},
        )
        best = max(best, -float(res.fun))
    return best


# --- the distance -----------------------------------------------------


def gd(A: PsdMatrix, B: PsdMatrix, spec: MetricSpec, seed=0, budget=16,
       samples=None, tol=None) -> GdResult:
    """Geometric distance between two PSD matrices of any size and rank."""
    if A.rank == 0 or B.rank == 0:
        raise DomainError("zero-rank input")
    if A.rank > B.rank:
        A, B = B, A  # the measurement is symmetric across unequal ranks
    tol = A.tol_rank if tol is None else tol
    prep = _prepare(A, B, tol)
    gterm = grassmann_distance(spec.grassmann, prep.theta)

    if prep.l == 0:
        mu = _batch_pencil(_inv_half(prep.C), prep.D[None, : prep.r, : prep.r])[0]
        lam = np.maximum(1.0, mu)
        if spec.hausdorff_mode == "faithful":
            fterm = _faithful_fiber(prep, spec.fiber, samples or 20000, seed)
            mode = "faithfulSampled"
        else:
            fterm = _pair_fiber_value(spec.fiber, mu)
            mode = "closedForm"
    else:
        if spec.hausdorff_mode == "faithful":
            fterm = _faithful_fiber(prep, spec.fiber, samples or 20000, seed)
            mode = "faithfulSampled"
        else:
            fterm = gd_degenerate_fiber(prep.C, prep.D, prep.l, spec.fiber,
                                        budget=budget, seed=seed, samples=samples)
            mode = "optimizedDegenerate"
        mu = _batch_pencil(_inv_half(prep.C), prep.D[None, : prep.r, : prep.r])[0]
        lam = np.maximum(1.0, mu)

    total = math.hypot(gterm, fterm)
    return GdResult(
        total=total,
        grassmann_term=gterm,
        fiber_term=fterm,
        stratum_index=prep.l,
        pencil_spectrum=lam,
        angles=prep.theta,
        mode=mode,
    )


def pairwise_gram(mats, spec: MetricSpec, seed=0, **kwargs):
    """Matrix of pairwise distances; diagonal exactly zero."""
    if not mats:
        raise DomainError("empty input list")
    n = len(mats)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            try:
                out[i, j] = gd(mats[i], mats[j], spec, seed=seed, **kwargs).total
            except DomainError as e:
                raise DomainError(f"pair ({i}, {j}): {e}") from e
    return out
