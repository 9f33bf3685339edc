"""Spectral radii and the two contraction certificates.

Nonnegative matrices go through shifted power iteration. Matrices with
mixed signs use a normalized repeated-squaring estimate of the limit
||A^(2^k)||_1^(1/2^k) with log-scale extrapolation, falling back to a
dense eigensolve for moderate dimensions.
"""

from collections import namedtuple

import numpy as np
import scipy.sparse as sp
import scipy.linalg as sla

from .bounds import BoundMatrix

POWER_NONNEG = "POWER_NONNEG"
GELFAND = "GELFAND"
DENSE_QR = "DENSE_QR"

DENSE_LIMIT = 512
LYAPUNOV_LIMIT = 512
KRONECKER_LIMIT = 64

SpectralResult = namedtuple("SpectralResult", "rho method iterations residual")

LyapunovCertificate = namedtuple(
    "LyapunovCertificate", "P eta bound_constant p_half p_inv_half")

StarCertificate = namedtuple(
    "StarCertificate", "n beta delta alpha c eps rho_rows max_rho")


class CertificateUnavailable(RuntimeError):
    """No contraction certificate exists or the solve failed verification."""


class CertificateInapplicable(ValueError):
    """The certificate's hypotheses are violated."""


class DegenerateWindow(ValueError):
    """The certificate's parameter window is empty or unbounded."""


def _unpack(m):
    if isinstance(m, BoundMatrix):
        mat = m.mat
        nonneg = m.nonnegative
    else:
        mat = m
        if sp.issparse(mat):
            nonneg = mat.nnz == 0 or mat.data.min() >= 0
        else:
            mat = np.asarray(mat, dtype=float)
            nonneg = mat.size == 0 or mat.min() >= 0
    if mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square, got shape %s" % (mat.shape,))
    return mat, nonneg


def _power_nonneg(mat, tol, max_iter):
    dim = mat.shape[0]
    if sp.issparse(mat):
        norm_inf = np.abs(mat).sum(axis=1).max() if mat.nnz else 0.0
    else:
        norm_inf = np.abs(mat).sum(axis=1).max() if dim else 0.0
    if norm_inf == 0:
        return SpectralResult(0.0, POWER_NONNEG, 0, 0.0)
    # shift keeps the iteration off the -rho branch of periodic matrices;
    # for nonnegative M, rho(M + sI) = rho(M) + s exactly
    s = 0.125 * norm_inf
    v = np.ones(dim) / np.sqrt(dim)
    for it in range(1, max_iter + 1):
        w = mat @ v + s * v
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return SpectralResult(0.0, POWER_NONNEG, it, 0.0)
        v = w / nrm
        mv = mat @ v
        lam = float(v @ mv)
        resid = np.linalg.norm(mv - lam * v)
        if resid <= tol * max(1.0, abs(lam)):
            return SpectralResult(max(lam, 0.0), POWER_NONNEG, it, resid)
    return None


def _gelfand(mat, tol, max_squarings):
    dense = mat.toarray() if sp.issparse(mat) else np.array(mat, dtype=float)
    nrm = np.abs(dense).sum(axis=0).max()
    if nrm == 0:
        return SpectralResult(0.0, GELFAND, 0, 0.0)
    ell = np.log(nrm)
    E = dense / nrm
    prev_extrap = None
    prev_ell = ell
    for k in range(1, max_squarings + 1):
        E = E @ E
        nrm = np.abs(E).sum(axis=0).max()
        if nrm == 0:
            return SpectralResult(0.0, GELFAND, k, 0.0)
        ell = ell + np.log(nrm) / (2.0 ** k)
        E = E / nrm
        # the plain estimate has an O(log C / 2^k) bias; the two-term
        # extrapolation 2*ell_k - ell_{k-1} cancels it
        extrap = np.exp(2 * ell - prev_ell)
        if prev_extrap is not None:
            gap = abs(extrap - prev_extrap)
            if gap <= tol * max(1.0, extrap):
                return SpectralResult(float(extrap), GELFAND, k, float(gap))
        prev_extrap = extrap
        prev_ell = ell
    return None


def _dense_qr(mat):
    dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat, dtype=float)
    if dense.shape[0] == 0:
        return SpectralResult(0.0, DENSE_QR, 0, 0.0)
    eigs = sla.eigvals(dense)
    return SpectralResult(float(np.abs(eigs).max()), DENSE_QR, 1, 0.0)


def spectral_radius(m, tol=None, method=None, max_iter=200000,
                    max_squarings=64):
    """Spectral radius of a bound matrix (or any square matrix).

    Parameters
    ----------
    m : BoundMatrix, ndarray, or sparse matrix
    tol : float, optional
        Power-iteration residual (default 1e-10) or repeated-squaring
        relative gap (default 1e-8), depending on the route taken.
    method : {None, "power", "gelfand", "dense"}
        Force a route; by default nonnegative matrices use power
        iteration and mixed-sign matrices use repeated squaring with a
        dense fallback for dimension <= 512.
    """
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive, got %r" % tol)
    mat, nonneg = _unpack(m)
    dim = mat.shape[0]
    if method == "power":
        res = _power_nonneg(mat, tol or 1e-10, max_iter)
        if res is None:
            raise RuntimeError("power iteration stagnated")
        return res
    if method == "gelfand":
        res = _gelfand(mat, tol or 1e-8, max_squarings)
        if res is None:
            raise RuntimeError("repeated squaring did not converge")
        return res
    if method == "dense":
        if dim > DENSE_LIMIT:
            raise ValueError("dense eigensolve limited to dimension %d, got %d"
                             % (DENSE_LIMIT, dim))
        return _dense_qr(mat)
    if method is not None:
        raise ValueError("unknown method %r" % method)
    if nonneg:
        res = _power_nonneg(mat, tol or 1e-10, max_iter)
        if res is not None:
            return res
        # reducible or tiny-gap cases can stagnate; squaring is gap-free
        res = _gelfand(mat, tol or 1e-8, max_squarings)
        if res is not None:
            return res
    else:
        res = _gelfand(mat, tol or 1e-8, max_squarings)
        if res is not None:
            return res
    if dim <= DENSE_LIMIT:
        return _dense_qr(mat)
    raise RuntimeError("no spectral-radius route converged for dimension %d" % dim)


def _solve_stein_kron(a, d):
    # vec(M^T P M) = (M^T kron M^T) vec(P), column-stacking convention
    lhs = np.kron(a.T, a.T) - np.eye(d * d)
    x = sla.solve(lhs, -np.eye(d).reshape(d * d, order="F"))
    return x.reshape((d, d), order="F")


def lyapunov_certificate(m, q_choice="identity"):
    """Contraction certificate from the discrete Lyapunov equation.

    Solves M^T P M - P = -I, then returns eta = ||P^(1/2) M P^(-1/2)||_2
    and bound_constant = ||P^(1/2) 1|| * ||P^(-1/2) 1||, which certify
    1^T M^t 1 <= eta^t * bound_constant for all t >= 0.

    Uses the explicit Kronecker linear system up to dimension 64 and a
    Stein-equation solver above that (the Kronecker system has dim^4
    entries, so it cannot scale further); both paths are verified after
    the fact through the equation residual and Cholesky factorizations.
    """
    if q_choice != "identity":
        raise ValueError("only the identity right-hand side is supported")
    mat, _ = _unpack(m)
    dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat, dtype=float)
    d = dense.shape[0]
    if d > LYAPUNOV_LIMIT:
        raise ValueError("lyapunov solve limited to dimension %d, got %d"
                         % (LYAPUNOV_LIMIT, d))
    rho = spectral_radius(m).rho
    if rho >= 1:
        raise CertificateUnavailable(
            "no contraction certificate: spectral radius %.6g >= 1" % rho)
    if d <= KRONECKER_LIMIT:
        P = _solve_stein_kron(dense, d)
    else:
        P = sla.solve_discrete_lyapunov(dense.T, np.eye(d))
    P = (P + P.T) / 2
    resid = np.linalg.norm(dense.T @ P @ dense - P + np.eye(d))
    if resid > 1e-8 * (1 + np.linalg.norm(P)):
        raise CertificateUnavailable(
            "lyapunov solve failed verification, residual %.3g" % resid)
    try:
        sla.cholesky(P)
        sla.cholesky(P - dense.T @ P @ dense)
    except sla.LinAlgError:
        raise CertificateUnavailable("lyapunov solution is not positive definite")
    w, V = np.linalg.eigh(P)
    if w.min() <= 0:
        raise CertificateUnavailable("lyapunov solution is not positive definite")
    p_half = (V * np.sqrt(w)) @ V.T
    p_inv_half = (V / np.sqrt(w)) @ V.T
    eta = float(np.linalg.norm(p_half @ dense @ p_inv_half, 2))
    if eta >= 1:
        raise CertificateUnavailable("certified rate %.6g is not below 1" % eta)
    ones = np.ones(d)
    const = float(np.linalg.norm(p_half @ ones) * np.linalg.norm(p_inv_half @ ones))
    return LyapunovCertificate(P, eta, const, p_half, p_inv_half)


def star_rowsum_certificate(n, params):
    """Closed-form row-sum bound on the directed-pair matrix of a star.

    Uses the positive scaling x = [1, eps*1, (alpha/sqrt(n-1))*1, c*1]
    over the blocks (hub marginal, leaf marginals, hub-healthy pairs,
    leaf-healthy pairs) and returns the four scaled row-sum values plus
    their maximum, an upper bound on the spectral radius. Requires
    1 - delta - beta >= 0 and delta(1 + delta) < 1; parameters are picked
    at window midpoints so the certificate is deterministic.
    """
    if n < 2:
        raise ValueError("star certificate needs n >= 2, got %d" % n)
    b, d = params.beta, params.delta
    if 1 - d - b < 0 or d * (1 + d) >= 1:
        raise CertificateInapplicable(
            "needs 1-delta-beta >= 0 and delta(1+delta) < 1, got "
            "beta=%g delta=%g" % (b, d))
    if d == 0 or b == 0:
        raise DegenerateWindow(
            "scaling windows need beta > 0 and delta > 0, got beta=%g delta=%g"
            % (b, d))
    alpha = (d + 1) / 2
    c_lo = max(alpha * (1 + d), 1.0)
    c_hi = alpha / d
    if not c_lo < c_hi:
        raise DegenerateWindow("empty window for c: [%g, %g]" % (c_lo, c_hi))
    c = (c_lo + c_hi) / 2
    eps_hi = b * (alpha - d * c) / (d * (1 - d))
    if not eps_hi > 0:
        raise DegenerateWindow("empty window for eps")
    eps = eps_hi / 2
    root = np.sqrt(n - 1.0)
    u = 1 - d
    rho1 = u + alpha * b * root
    rho2 = u + b * c / eps
    rho3 = u * (u - b) + (d * u * eps + b * d * c) * root / alpha
    rho4 = u * (u - b) + (d * u + alpha * b * ((1 + d) * (n - 1) - 1) / root) / c
    rows = (float(rho1), float(rho2), float(rho3), float(rho4))
    return StarCertificate(n, b, d, alpha, c, eps, rows, max(rows))
