"""Non-equidimensional extension of the divergences.

A divergence between a PD r x r matrix C and a PD s x s matrix D (r <= s)
is extended through the containment sets

    Omega_minus(D) = { X r x r PD : X >= D11 }
    Omega_plus(C)  = { Y s x s PD : Y11 <= C }

as min over the feasible set of the equidimensional divergence. For the
divergence families the two sides coincide and have the closed form

    ( sum_k g(max{1, lambda_k(C^{-1} D11)}) )^a,

which is what pointset_minus / pointset_plus evaluate. The two-parameter
geodesic family with beta != 0 needs a small quadratic program instead
(alpha_beta_pointset), where the two sides can differ. project_minus and
lift_plus construct the optimal representatives, and oracle_min_over_omega
is an independent brute-force minimizer used for verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .divergences import (
    GEODESIC_AB,
    FiberDivergence,
    _g_derivative,
    apply_bound,
    per_eigenvalue_terms,
)
from .errors import DomainError
from .linalg import (
    _herm,
    check_pd,
    hermitian_eig,
    pencil_eigenvalues,
    psd_power,
)


@dataclass
class PointSetValue:
    value: float
    side: str  # "minus" or "plus"
    clamped_spectrum: np.ndarray  # max{1, lambda_k(C^{-1} D11)}, descending
    witness: np.ndarray | None = None


@dataclass
class ProjectionWitness:
    dminus: np.ndarray  # r x r PD, the projection of D onto Omega_minus(D)
    lam: np.ndarray     # diagonal of Lambda = max{1, lambda_k}, descending
    Q: np.ndarray       # unitary with C^{-1/2} D11 C^{-1/2} = Q* diag(lam_raw) Q


@dataclass
class LiftWitness:
    cplus: np.ndarray   # s x s PD, the lift of C into Omega_plus(C)
    Z: np.ndarray       # whitening factor with Z D Z* = I_s
    lam: np.ndarray     # diagonal of Lambda = (min{1, lambda_k(D11^{-1}C)}, 1, ..., 1)


def _check_pair(C, D):
    C, _, _ = check_pd(C, name="C")
    D, _, _ = check_pd(D, name="D")
    r, s = C.shape[0], D.shape[0]
    if r > s:
        raise DomainError(f"point-set extension needs r <= s, got r={r}, s={s}")
    return C, D, r, s


def _reject_two_parameter(spec):
    if spec.kind == GEODESIC_AB and spec.beta != 0.0:
        raise DomainError(
            "the two-parameter geodesic family has no shared closed form; "
            "use alpha_beta_pointset"
        )


def pointset_value_from_spectrum(spec: FiberDivergence, mu, side="minus") -> PointSetValue:
    """Closed-form point-set value from the pencil spectrum mu = lambda(C^{-1}D11)."""
    _reject_two_parameter(spec)
    mu = np.asarray(mu, dtype=float)
    lam = np.maximum(1.0, mu)
    total = float(np.sum(per_eigenvalue_terms(spec, lam)))
    value = total**spec.outer_exponent if total > 0.0 else 0.0
    return PointSetValue(apply_bound(spec, value), side, lam)


def pointset_minus(spec: FiberDivergence, C, D, with_witness=False) -> PointSetValue:
    """min over X in Omega_minus(D) of divergence(spec, C, X)."""
    C, D, r, s = _check_pair(C, D)
    mu = pencil_eigenvalues(C, D[:r, :r])
    out = pointset_value_from_spectrum(spec, mu, side="minus")
    if with_witness:
        out.witness = project_minus(C, D).dminus
    return out


def pointset_plus(spec: FiberDivergence, C, D, with_witness=False) -> PointSetValue:
    """min over Y in Omega_plus(C) of divergence(spec, Y, D); equals the minus side."""
    C, D, r, s = _check_pair(C, D)
    mu = pencil_eigenvalues(C, D[:r, :r])
    out = pointset_value_from_spectrum(spec, mu, side="plus")
    if with_witness:
        out.witness = lift_plus(C, D).cplus
    return out


# --- two-parameter geodesic quadratic programs ------------------------


def _min_quadratic_box(alpha, beta, c):
    """Minimize alpha*sum(t^2) + beta*(sum t)^2 subject to t >= c.

    c is descending; the ordering constraints of the original program are
    implied (the objective is permutation symmetric and the descending
    rearrangement of any feasible point is feasible). Solved exactly by
    enumerating active sets; the problem is convex for alpha + len(c)*beta > 0.
    """
    c = np.asarray(c, dtype=float)
    r = c.size
    if r == 0:
        return 0.0
    if r > 16:
        raise DomainError("quadratic program limited to 16 variables (desk scale)")
    best = None
    for mask in range(1 << r):
        active = np.array([(mask >> i) & 1 for i in range(r)], dtype=bool)
        f = int(r - active.sum())
        s_active = float(c[active].sum())
        if f > 0:
            x = -beta * s_active / (alpha + f * beta)
            if np.any(x < c[~active] - 1e-12):
                continue
        else:
            x = 0.0
        total = s_active + f * x
        # KKT: multipliers on active constraints must be nonnegative
        if active.any():
            grad_active = 2.0 * alpha * c[active] + 2.0 * beta * total
            if np.any(grad_active < -1e-10):
                continue
        obj = alpha * (float(np.sum(c[active] ** 2)) + f * x**2) + beta * total**2
        if best is None or obj < best:
            best = obj
    assert best is not None
    return max(0.0, best)


def alpha_beta_pointset(C, D, alpha, beta, side="minus") -> float:
    """Point-set value of the two-parameter geodesic family.

    minus side: min of t'(alpha I_r + beta J_r)t over t1 >= ... >= t_r,
    t_k >= log lambda_k(C^{-1}D11); plus side: the same quadratic in s
    variables, with the trailing s - r variables unconstrained. Returns the
    square root of the optimal value. plus <= minus always, with equality
    iff beta = 0 or r = s.
    """
    C, D, r, s = _check_pair(C, D)
    if not (alpha > 0.0 and beta > -alpha / s):
        raise DomainError("parameter region requires alpha > 0 and beta > -alpha/s")
    if side not in ("minus", "plus"):
        raise DomainError(f"unknown side {side!r}")
    c = np.log(pencil_eigenvalues(C, D[:r, :r]))
    if side == "minus":
        beta_eff = beta
    else:
        # minimizing over the free trailing variables in closed form leaves
        # an r-variable program with a shrunken coupling coefficient
        beta_eff = alpha * beta / (alpha + (s - r) * beta)
    return float(np.sqrt(_min_quadratic_box(alpha, beta_eff, c)))


# --- optimal representatives -----------------------------------------


def project_minus(C, D) -> ProjectionWitness:
    """The unique point of Omega_minus(D) closest to C, for every family."""
    C, D, r, s = _check_pair(C, D)
    D11 = D[:r, :r]
    Chalf = psd_power(C, 0.5)
    Cih = psd_power(C, -0.5)
    lam_raw, V = hermitian_eig(_herm(Cih @ D11 @ Cih))
    lam = np.maximum(1.0, lam_raw)
    if np.all(lam_raw >= 1.0):
        dminus = D11.copy()
    else:
        dminus = _herm(Chalf @ ((V * lam) @ V.conj().T) @ Chalf)
    return ProjectionWitness(dminus=dminus, lam=lam, Q=V.conj().T)


def _whitening(C, D):
    """Internal: (Z, lam) with Z D Z* = I_s and lam = lambda(D11^{-1}C) descending."""
    C, D, r, s = _check_pair(C, D)
    D11 = D[:r, :r]
    Dih = psd_power(D11, -0.5)
    lam, V = hermitian_eig(_herm(Dih @ C @ Dih))
    P = V.conj().T
    top = P @ Dih
    if r == s:
        return top, lam
    D12 = D[:r, r:]
    D22 = D[r:, r:]
    schur = _herm(D22 - D12.conj().T @ np.linalg.solve(D11, D12))
    W = psd_power(schur, -0.5)
    Z = np.zeros((s, s), dtype=np.result_type(C, D))
    Z[:r, :r] = top
    Z[r:, :r] = -W @ D12.conj().T @ np.linalg.inv(D11)
    Z[r:, r:] = W
    return Z, lam


def whitening_factor(C, D) -> np.ndarray:
    """Block factor Z with Z D Z* = I_s, mapping Omega_plus(C) onto Omega_plus(Sigma)."""
    Z, _ = _whitening(C, D)
    return Z


def lift_plus(C, D) -> LiftWitness:
    """The unique point of Omega_plus(C) closest to D, for every family."""
    C, D, r, s = _check_pair(C, D)
    Z, lam_raw = _whitening(C, D)
    lam = np.concatenate([np.minimum(1.0, lam_raw), np.ones(s - r)])
    if np.all(lam_raw >= 1.0):
        cplus = D.copy()
    else:
        Zinv = np.linalg.inv(Z)
        cplus = _herm((Zinv * lam) @ Zinv.conj().T)
    return LiftWitness(cplus=cplus, Z=Z, lam=lam)


# --- independent verification oracle ---------------------------------


def _phi_and_grad(spec, lam):
    """Pre-exponent objective Phi(lambda) and its eigenvalue gradient."""
    lam = np.asarray(lam, dtype=float)
    if spec.kind == GEODESIC_AB and spec.beta != 0.0:
        log = np.log(lam)
        phi = spec.alpha * np.sum(log**2, axis=-1) + spec.beta * np.sum(log, axis=-1) ** 2
        grad = (2.0 * spec.alpha * log + 2.0 * spec.beta * np.sum(log, axis=-1, keepdims=True)) / lam
        return phi, grad
    with np.errstate(all="ignore"):
        terms = per_eigenvalue_terms(spec, np.maximum(lam, 1e-300))
        grad = _g_derivative(spec, np.maximum(lam, 1e-300))
    return np.sum(terms, axis=-1), grad


def _finalize(spec, phi):
    value = phi**spec.outer_exponent if phi > 0.0 else 0.0
    return apply_bound(spec, float(value))


def _phi_batch(spec, lam):
    """Phi for a (B, r) stack of spectra, +inf where the domain is violated."""
    try:
        phi, _ = _phi_and_grad(spec, lam)
    except DomainError:
        # per-row domain violations: fall back to a python loop
        phi = np.empty(lam.shape[0])
        for i in range(lam.shape[0]):
            try:
                phi[i], _ = _phi_and_grad(spec, lam[i])
            except DomainError:
                phi[i] = np.inf
        return phi
    phi = np.asarray(phi, dtype=float)
    phi[~np.isfinite(phi)] = np.inf
    return phi


def _oracle_minus(spec, C, D11, budget, seed):
    """Multi-start descent over X = D11 + L L', L lower triangular."""
    r = C.shape[0]
    Cih = psd_power(C, -0.5)
    rng = np.random.default_rng(seed)
    tril = np.tril_indices(r)
    nb = max(2, int(budget))

    L = np.zeros((nb, r, r))
    scale = np.sqrt(max(1.0, np.trace(D11).real / r))
    for i in range(1, nb):
        G = rng.normal(size=(r, r)) * scale * 10.0 ** rng.uniform(-2, 0.5)
        L[i][tril] = G[tril]

    def f_batch(Lb):
        X = D11 + Lb @ np.swapaxes(Lb, -1, -2)
        W = Cih @ X @ Cih
        lam = np.linalg.eigvalsh(_herm(W))
        return _phi_batch(spec, lam)

    def f_grad_single(lvec):
        Lm = np.zeros((r, r))
        Lm[tril] = lvec
        X = D11 + Lm @ Lm.T
        lam, V = np.linalg.eigh(_herm(Cih @ X @ Cih))
        try:
            phi, dphi = _phi_and_grad(spec, lam)
        except DomainError:
            return 1e12, np.zeros_like(lvec)
        if not np.isfinite(phi):
            return 1e12, np.zeros_like(lvec)
        Gx = Cih @ ((V * dphi) @ V.T) @ Cih
        GL = 2.0 * Gx @ Lm
        return float(phi), GL[tril]

    # crude batched descent with per-element backtracking
    step = np.full(nb, 1e-2 * scale**2)
    fval = f_batch(L)
    Gfull = np.zeros_like(L)
    for _ in range(150):
        # numerical gradient would be too slow; reuse the analytic formula batched
        X = D11 + L @ np.swapaxes(L, -1, -2)
        lam, V = np.linalg.eigh(_herm(Cih @ X @ Cih))
        try:
            _, dphi = _phi_and_grad(spec, lam)
        except DomainError:
            dphi = np.zeros_like(lam)
        Gx = Cih @ ((V * dphi[..., None, :]) @ np.swapaxes(V, -1, -2)) @ Cih
        Gfull = 2.0 * Gx @ L
        mask = np.zeros((r, r))
        mask[tril] = 1.0
        Gfull = Gfull * mask
        trial = L - step[:, None, None] * Gfull
        ftrial = f_batch(trial)
        better = ftrial < fval
        L[better] = trial[better]
        fval[better] = ftrial[better]
        step[better] *= 1.3
        step[~better] *= 0.4
        if step.max() < 1e-14:
            break

    # polish the best candidates with a quasi-Newton pass
    order = np.argsort(fval)
    best = np.inf
    for idx in order[:3]:
        res = scipy.optimize.minimize(
            f_grad_single, L[idx][tril], jac=True, method="L-BFGS-B",
            options={"maxiter": 200, "ftol": 1e-16, "gtol": 1e-12},
        )
        best = min(best, float(res.fun))
    best = min(best, float(fval.min()))
    return _finalize(spec, best)


def _oracle_plus(spec, C, D, budget, seed):
    """Multi-start search over Y with Y11 <= C, via smooth factors.

    Y11 = C^{1/2} (I + E E')^{-1} C^{1/2} sweeps all PD blocks below C;
    the off-diagonal block and the Schur complement of Y are free factors.
    """
    r, s = C.shape[0], D.shape[0]
    Chalf = psd_power(C, 0.5)
    rng = np.random.default_rng(seed)
    k = s - r
    tril = np.tril_indices(k)
    n_e, n_r, n_f = r * r, r * k, len(tril[0])

    def build(x):
        E = x[:n_e].reshape(r, r)
        Y11 = Chalf @ np.linalg.inv(np.eye(r) + E @ E.T) @ Chalf
        if k == 0:
            return _herm(Y11)
        R = x[n_e:n_e + n_r].reshape(r, k)
        F = np.zeros((k, k))
        F[tril] = x[n_e + n_r:]
        S = F @ F.T
        Y = np.zeros((s, s))
        Y[:r, :r] = Y11
        Y[:r, r:] = R
        Y[r:, :r] = R.T
        Y[r:, r:] = R.T @ np.linalg.solve(Y11, R) + S
        return _herm(Y)

    def objective(x):
        Y = build(x)
        lam = np.linalg.eigvalsh(Y)
        if lam[0] <= 0.0:
            return 1e12
        try:
            phi, _ = _phi_and_grad(spec, pencil_eigenvalues(Y, D))
        except DomainError:
            return 1e12
        return float(phi) if np.isfinite(phi) else 1e12

    best = np.inf
    nvar = n_e + n_r + n_f
    for i in range(max(2, int(budget))):
        x0 = rng.normal(size=nvar) * (0.3 if i else 1e-3)
        # bias the Schur factor away from singularity
        x0[n_e + n_r:] += np.eye(k)[tril] if k else 0.0
        res = scipy.optimize.minimize(
            objective, x0, method="L-BFGS-B",
            options={"maxiter": 300, "ftol": 1e-15},
        )
        best = min(best, float(res.fun))
    return _finalize(spec, best)


def oracle_min_over_omega(spec: FiberDivergence, C, D, side="minus", budget=32, seed=0):
    """Brute-force minimum of the divergence over the containment set.

    Independent of the closed forms: parameterizes the feasible set
    directly and runs seeded multi-start local minimization. Real inputs
    only (the verification suites operate over the reals).
    """
    C, D, r, s = _check_pair(C, D)
    if np.iscomplexobj(C) or np.iscomplexobj(D):
        raise DomainError("the oracle supports real inputs only")
    if max(r, s) > 5:
        raise DomainError("oracle limited to r, s <= 5 (desk scale)")
    if side == "minus":
        return _oracle_minus(spec, C, D[:r, :r], budget, seed)
    if side == "plus":
        return _oracle_plus(spec, C, D, budget, seed)
    raise DomainError(f"unknown side {side!r}")
