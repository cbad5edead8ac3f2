"""Haar sampling on O(2N+1) and USp(2N), secular coefficients, moment estimates."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np
from scipy import stats

from .montecarlo import Estimate, Moments, run_streams
from .ssyt import Ensemble, mass


class NumericalQualityError(ArithmeticError):
    pass


@dataclass
class HaarSample:
    ensemble: Ensemble
    dim: int
    matrix: np.ndarray
    sc: np.ndarray
    det: complex

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)


def symplectic_form(N: int) -> np.ndarray:
    """``J = I_N (x) [[0, 1], [-1, 0]]``, the form preserved by the block realization."""
    return np.kron(np.eye(N), np.array([[0.0, 1.0], [-1.0, 0.0]]))


# -- orthogonal --------------------------------------------------------------------

def haar_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of O(dim): QR of a Gaussian matrix with the R-diagonal sign fix."""
    if dim < 1:
        raise ValueError("dim must be positive")
    for _ in range(2):
        z = rng.standard_normal((dim, dim))
        q, r = np.linalg.qr(z)
        d = np.diag(r)
        if np.min(np.abs(d)) > 1e-12:
            return q * np.sign(d)
    raise NumericalQualityError("Gaussian draw was numerically singular twice")


def sample_orthogonal(dim: int, rng: np.random.Generator) -> HaarSample:
    u = haar_orthogonal(dim, rng)
    return HaarSample(Ensemble.ORTHOGONAL, dim, u, secular_coeffs(u), complex(np.linalg.det(u)))


# -- unitary symplectic ------------------------------------------------------------------

def _qmul(a1, b1, a2, b2):
    # (a1 + b1 j)(a2 + b2 j) with j z = conj(z) j
    return a1 * a2 - b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


def _qconj(a, b):
    return np.conj(a), -b


def haar_symplectic(N: int, rng: np.random.Generator) -> np.ndarray:
    """Haar element of USp(2N) as a ``2N x 2N`` complex matrix.

    A quaternionic Gaussian ``N x N`` matrix (entries ``a + b j``) is
    orthonormalized column by column over the quaternions, then each entry is
    replaced by the block ``[[a, b], [-conj(b), conj(a)]]``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    for _ in range(2):
        g = lambda: (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2)
        A, B = g(), g()
        ok = True
        for j in range(N):
            va, vb = A[:, j].copy(), B[:, j].copy()
            for i in range(j):
                ea, eb = A[:, i], B[:, i]
                # <e, v> = sum conj(e_r) v_r, a quaternion
                ca, cb = _qmul(*_qconj(ea, eb), va, vb)
                pa, pb = ca.sum(), cb.sum()
                # v -= e <e, v>
                sa, sb = _qmul(ea, eb, pa, pb)
                va, vb = va - sa, vb - sb
            norm = np.sqrt(np.sum(np.abs(va) ** 2 + np.abs(vb) ** 2))
            if norm < 1e-12:
                ok = False
                break
            A[:, j], B[:, j] = va / norm, vb / norm
        if ok:
            U = np.empty((2 * N, 2 * N), dtype=complex)
            U[0::2, 0::2] = A
            U[0::2, 1::2] = B
            U[1::2, 0::2] = -np.conj(B)
            U[1::2, 1::2] = np.conj(A)
            return U
    raise NumericalQualityError("quaternionic Gaussian draw was numerically singular twice")


def sample_symplectic(N: int, rng: np.random.Generator) -> HaarSample:
    u = haar_symplectic(N, rng)
    return HaarSample(Ensemble.SYMPLECTIC, 2 * N, u, secular_coeffs(u), complex(np.linalg.det(u)))


def sample(ensemble, N: int, rng: np.random.Generator) -> HaarSample:
    """One draw from O(2N+1) or USp(2N)."""
    if Ensemble.parse(ensemble) is Ensemble.SYMPLECTIC:
        return sample_symplectic(N, rng)
    return sample_orthogonal(2 * N + 1, rng)


# -- secular coefficients ----------------------------------------------------------------

def _realify(c: np.ndarray, tol: float) -> np.ndarray:
    if np.max(np.abs(c.imag), initial=0.0) > tol:
        raise NumericalQualityError(f"secular coefficients have imaginary residue {np.max(np.abs(c.imag)):.3g}")
    return c.real.copy()


def secular_from_eigenvalues(eigs: np.ndarray, real: bool = True, tol: float = 1e-8) -> np.ndarray:
    """Coefficients of ``prod (1 + lambda x)`` by repeated linear-factor multiplication."""
    c = np.zeros(len(eigs) + 1, dtype=complex)
    c[0] = 1.0
    for m, lam in enumerate(eigs, start=1):
        c[1 : m + 1] = c[1 : m + 1] + lam * c[0:m]
    return _realify(c, tol) if real else c


def secular_coeffs(sample_or_matrix, real: bool = True, tol: float = 1e-8) -> np.ndarray:
    """``Sc_0..Sc_dim`` with ``det(I + Ux) = sum Sc_j x^j``; ``Sc_0 = 1`` exactly."""
    u = sample_or_matrix.matrix if isinstance(sample_or_matrix, HaarSample) else np.asarray(sample_or_matrix)
    out = secular_from_eigenvalues(np.linalg.eigvals(u), real, tol)
    out[0] = 1.0
    return out


def secular_faddeev(matrix, real: bool = True, tol: float = 1e-8) -> np.ndarray:
    """Same coefficients without eigenvalues: Faddeev-LeVerrier on ``A = -U``.

    ``det(tI - A) = sum c_i t^{d-i}`` gives ``det(I + Ux) = sum c_i x^i``.
    """
    a = -np.asarray(matrix, dtype=complex)
    d = a.shape[0]
    c = np.zeros(d + 1, dtype=complex)
    c[0] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(d)
    for i in range(1, d + 1):
        m = a @ m + c[i - 1] * eye
        c[i] = -np.trace(a @ m) / i
    return _realify(c, tol) if real else c


def convolution_power_coeff(sc: np.ndarray, k: int, n: int) -> float:
    """``[x^n] (sum Sc_j x^j)^k`` by polynomial powering."""
    p = np.array([1.0])
    for _ in range(k):
        p = np.convolve(p, sc)
    return float(p[n]) if n < len(p) else 0.0


def convolution_sum(sc: np.ndarray, k: int, n: int) -> float:
    """``sum_{j_1+...+j_k=n} prod Sc_{j_i}`` by listing the tuples."""
    d = len(sc) - 1
    total = 0.0
    for js in product(range(d + 1), repeat=k):
        if sum(js) == n:
            total += float(np.prod([sc[j] for j in js]))
    return total


# -- estimation --------------------------------------------------------------------------

def _estimate_worker(seq, count: int, ens_value: str, k: int, n: int, N: int) -> Moments:
    rng = np.random.default_rng(seq)
    vals = np.empty(count)
    for i in range(count):
        s = sample(ens_value, N, rng)
        vals[i] = convolution_power_coeff(s.sc, k, n) ** 2
    return Moments.of(vals)


def estimate_I(ensemble, k: int, n: int, N: int, samples: int, seed: int, streams: int = 1,
               jobs: int = 1) -> Estimate:
    """Monte Carlo mean of ``|sum_{j_1+..+j_k=n} prod Sc_{j_i}|^2`` (orthogonal times 2)."""
    ens = Ensemble.parse(ensemble)
    if samples < 2:
        raise ValueError("need at least two samples")
    est = run_streams(_estimate_worker, seed, samples, streams, jobs, (ens.value, k, n, N))
    w = mass(ens)
    return Estimate(w * est.mean, w * est.stderr, est.samples)


# -- diagnostics ------------------------------------------------------------------------------

def unitarity_error(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def symplectic_error(u: np.ndarray) -> float:
    J = symplectic_form(u.shape[0] // 2)
    return float(np.max(np.abs(u.T @ J @ u - J)))


def conjugate_pair_error(u: np.ndarray) -> float:
    """Distance between the spectrum and its complex conjugate, after sorting by angle."""
    th = np.sort(np.angle(np.linalg.eigvals(u)))
    return float(np.max(np.abs(th + th[::-1])))


def trace_square_mean(ensemble, N: int, samples: int, seed: int, dim: Optional[int] = None) -> Estimate:
    """Mean of ``(tr U)^2`` (``|tr U|^2`` for complex ``U``)."""
    rng = np.random.default_rng(seed)
    ens = Ensemble.parse(ensemble)
    vals = np.empty(samples)
    for i in range(samples):
        if ens is Ensemble.SYMPLECTIC:
            u = haar_symplectic(N, rng)
        else:
            u = haar_orthogonal(dim if dim is not None else 2 * N + 1, rng)
        vals[i] = abs(np.trace(u)) ** 2
    m = Moments.of(vals)
    mean = m.total / m.n
    var = (m.total_sq - m.n * mean * mean) / (m.n - 1)
    return Estimate(mean, float(np.sqrt(var / m.n)), m.n)


@dataclass(frozen=True)
class InvarianceCheck:
    statistic: float
    critical: float
    pvalue: float

    @property
    def passed(self) -> bool:
        return self.statistic < self.critical


def ks_invariance(ensemble, N: int, samples: int, seed: int) -> InvarianceCheck:
    """Two-sample KS test that ``tr(U)`` and ``tr(gU)`` have the same law for a fixed ``g``."""
    ens = Ensemble.parse(ensemble)
    rng = np.random.default_rng(seed)
    draw = (lambda: haar_symplectic(N, rng)) if ens is Ensemble.SYMPLECTIC else (lambda: haar_orthogonal(2 * N + 1, rng))
    g = draw()
    a = np.array([np.trace(draw()).real for _ in range(samples)])
    b = np.array([np.trace(g @ draw()).real for _ in range(samples)])
    res = stats.ks_2samp(a, b)
    # asymptotic 1% critical value of the two-sample statistic
    crit = 1.628 * np.sqrt(2.0 / samples)
    return InvarianceCheck(float(res.statistic), float(crit), float(res.pvalue))
