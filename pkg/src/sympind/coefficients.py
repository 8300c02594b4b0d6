"""Loop coefficients of the asymptotic operator and their path data.

A coefficient set (S, C, D) over the circle (S, D symmetric) determines
a subgroup path through the initial-value problems

    Psi' = J0 S Psi,          Psi(0) = I,
    A'   = J0 S A + J0 C^T,   A(0) = 0,      X = Psi^{-1} A,
    F'   = C A + D,           F(0) = 0,      E = sym(F),

integrated here with classical fixed-step RK4 (coefficients are sampled
at nodes and midpoints through exact trigonometric interpolation, so the
scheme keeps its full order).  The reverse map recovers the coefficients
from a sampled path by fourth-order finite differences:

    S = sym(-J0 Psi' Psi^{-1}),  C = X'^T Psi^T J0,  D = E' + sym(X^T J0 X').

The integrator also carries B' = C Psi, whose exact value is X^T J0;
that residual is reported as a consistency diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (IntegratorBlowup, InvalidInput, ShapeError,
                     SymplecticityLoss)
from .linalg import TOL_SYM, sym_part, symplectic_inverse
from .paths import SnmPath
from .snm import Dimensions, SnmElement, assemble_blocks

BLOWUP_LIMIT = 1e8
SYMPLECTIC_LOSS = 1e-6


def periodic_midpoints(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Samples at theta_j + h/2 from samples at theta_j = j/N, spectrally."""
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    spec = np.fft.rfft(values, axis=axis)
    k = np.arange(spec.shape[axis])
    phase = np.exp(1j * np.pi * k / n)
    shape = [1] * values.ndim
    shape[axis] = len(k)
    spec = spec * phase.reshape(shape)
    return np.fft.irfft(spec, n=n, axis=axis)


def trig_eval(values: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Evaluate periodic samples (axis 0, theta_j = j/N) at arbitrary points."""
    values = np.asarray(values, dtype=float)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    n = values.shape[0]
    spec = np.fft.rfft(values, axis=0)
    k = np.arange(spec.shape[0])
    weights = np.full(len(k), 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    ph = np.exp(2j * np.pi * np.outer(thetas, k))  # (T, K)
    flat = spec.reshape(len(k), -1)
    out = (ph * weights) @ flat
    return out.real.reshape((len(thetas),) + values.shape[1:]) / n


def fd4(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order derivative of uniformly spaced nodes along axis 0."""
    f = np.asarray(values, dtype=float)
    if f.shape[0] < 5:
        raise ShapeError("fourth-order differences need at least five nodes")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    return d


class OperatorCoefficients:
    """Sampled loop coefficients (S, C, D); S, D symmetric.

    Samples live on the uniform grid theta_j = j/N (no duplicate at 1).
    """

    def __init__(self, dims: Dimensions, s: np.ndarray, c: np.ndarray, d: np.ndarray,
                 tol_sym: float = TOL_SYM):
        self.dims = dims
        s = np.asarray(s, dtype=float)
        c = np.asarray(c, dtype=float)
        d = np.asarray(d, dtype=float)
        n_theta = s.shape[0]
        if s.shape != (n_theta, dims.loop, dims.loop):
            raise ShapeError(f"S samples must be (N, {dims.loop}, {dims.loop})")
        if c.shape != (n_theta, dims.m, dims.loop):
            raise ShapeError(f"C samples must be (N, {dims.m}, {dims.loop})")
        if d.shape != (n_theta, dims.m, dims.m):
            raise ShapeError(f"D samples must be (N, {dims.m}, {dims.m})")
        for name, arr in (("S", s), ("D", d)):
            if arr.size:
                dev = float(np.max(np.abs(arr - np.swapaxes(arr, -1, -2))))
                if dev > 100 * tol_sym:
                    raise InvalidInput(f"{name} samples asymmetric by {dev:.3e}")
        self.s = sym_part(s)
        self.c = c
        self.d = sym_part(d) if dims.m else d
        self.n_theta = n_theta

    @classmethod
    def from_callables(cls, dims: Dimensions, s_fn, c_fn, d_fn,
                       n_theta: int = 512) -> "OperatorCoefficients":
        thetas = np.arange(n_theta) / n_theta
        s = np.stack([np.asarray(s_fn(t), dtype=float) for t in thetas])
        c = np.stack([np.asarray(c_fn(t), dtype=float).reshape(dims.m, dims.loop)
                      for t in thetas])
        d = np.stack([np.asarray(d_fn(t), dtype=float).reshape(dims.m, dims.m)
                      for t in thetas])
        return cls(dims, s, c, d)

    def resampled(self, n_theta: int) -> "OperatorCoefficients":
        if n_theta == self.n_theta:
            return self
        thetas = np.arange(n_theta) / n_theta
        return OperatorCoefficients(self.dims, trig_eval(self.s, thetas),
                                    trig_eval(self.c, thetas), trig_eval(self.d, thetas))

    def stage_tables(self):
        """(node, midpoint) tables with the wrap node appended."""

        def tables(arr):
            nodes = np.concatenate([arr, arr[:1]], axis=0)
            mids = periodic_midpoints(arr, axis=0)
            return nodes, mids

        return tables(self.s), tables(self.c), tables(self.d)


@dataclass
class PathData:
    """Subgroup path sampled on theta nodes 0..1 (inclusive).

    dpsi/dx/de hold the exact ODE right-hand sides at the nodes when the
    path comes out of an integrator; interpolating those beats
    differentiating the value splines, whose endpoint-derivative error
    is large enough to corrupt crossing forms at theta = 0 and 1.
    """

    dims: Dimensions
    theta: np.ndarray
    psi: np.ndarray
    x: np.ndarray
    e: np.ndarray
    f_raw: Optional[np.ndarray] = None
    b_raw: Optional[np.ndarray] = None
    dpsi: Optional[np.ndarray] = None
    dx: Optional[np.ndarray] = None
    de: Optional[np.ndarray] = None

    @property
    def nsteps(self) -> int:
        return len(self.theta) - 1

    def endpoint(self) -> SnmElement:
        return SnmElement(self.dims, self.psi[-1], self.x[-1], self.e[-1], validate=False)

    def assembled(self) -> np.ndarray:
        return assemble_blocks(self.dims, self.psi, self.x, self.e)

    def to_snm_path(self, sample_hint: Optional[int] = None) -> SnmPath:
        hint = self.nsteps if sample_hint is None else sample_hint
        return SnmPath.from_samples(self.dims, self.theta, self.psi, self.x,
                                    self.e, sample_hint=hint,
                                    dpsi=self.dpsi, dx=self.dx, de=self.de)


def _rk4_components(dims: Dimensions, j0s, j0ct, cf, df, keep_nodes: bool = True):
    """One integration over theta; leading batch axis on every table.

    Tables: j0s = J0 S at ((B, N+1, ...) nodes, (B, N, ...) midpoints),
    likewise j0ct = J0 C^T, cf = C, df = D.  Returns node trajectories
    of Psi, A, F (the raw parameter integral) and B (integral of C Psi),
    or just the final states when keep_nodes is false.
    """
    (j0s_n, j0s_m) = j0s
    (j0ct_n, j0ct_m) = j0ct
    (cf_n, cf_m) = cf
    (df_n, df_m) = df
    batch = j0s_n.shape[0]
    nsteps = j0s_n.shape[1] - 1
    ln, pm = dims.loop, dims.m
    h = 1.0 / nsteps

    psi = np.broadcast_to(np.eye(ln), (batch, ln, ln)).copy()
    a = np.zeros((batch, ln, pm))
    f = np.zeros((batch, pm, pm))
    bacc = np.zeros((batch, pm, ln))

    if keep_nodes:
        psis = np.empty((batch, nsteps + 1, ln, ln))
        as_ = np.empty((batch, nsteps + 1, ln, pm))
        fs = np.empty((batch, nsteps + 1, pm, pm))
        bs = np.empty((batch, nsteps + 1, pm, ln))
        psis[:, 0], as_[:, 0], fs[:, 0], bs[:, 0] = psi, a, f, bacc

    def rhs(js, jct, cc, dd, y):
        p, aa, _, _ = y
        return (js @ p, js @ aa + jct, cc @ aa + dd, cc @ p)

    for i in range(nsteps):
        y = (psi, a, f, bacc)
        k1 = rhs(j0s_n[:, i], j0ct_n[:, i], cf_n[:, i], df_n[:, i], y)
        y2 = tuple(v + 0.5 * h * k for v, k in zip(y, k1))
        k2 = rhs(j0s_m[:, i], j0ct_m[:, i], cf_m[:, i], df_m[:, i], y2)
        y3 = tuple(v + 0.5 * h * k for v, k in zip(y, k2))
        k3 = rhs(j0s_m[:, i], j0ct_m[:, i], cf_m[:, i], df_m[:, i], y3)
        y4 = tuple(v + h * k for v, k in zip(y, k3))
        k4 = rhs(j0s_n[:, i + 1], j0ct_n[:, i + 1], cf_n[:, i + 1], df_n[:, i + 1], y4)
        psi, a, f, bacc = tuple(
            v + (h / 6.0) * (p1 + 2 * p2 + 2 * p3 + p4)
            for v, p1, p2, p3, p4 in zip(y, k1, k2, k3, k4))
        if keep_nodes:
            psis[:, i + 1], as_[:, i + 1], fs[:, i + 1], bs[:, i + 1] = psi, a, f, bacc
        if i % 64 == 63 and float(np.max(np.abs(psi))) > BLOWUP_LIMIT:
            raise IntegratorBlowup(f"|Psi| exceeded {BLOWUP_LIMIT:.0e} at step {i + 1}")

    if keep_nodes:
        return psis, as_, fs, bs
    return psi, a, f, bacc


def _finalize_path(dims: Dimensions, thetas, psis, as_, fs, bs,
                   node_tables=None) -> PathData:
    """Turn one batched trajectory row into PathData with X and E.

    node_tables = (J0 S, J0 C^T, C, D) at the nodes; when given, the
    stored-block derivatives dPsi = J0 S Psi, dX = Psi^-1 J0 C^T and
    dE = Sym(C Psi X + D) are recorded exactly.
    """
    j0 = dims.j_loop()
    defect = float(np.max(np.abs(np.swapaxes(psis, -1, -2) @ j0 @ psis - j0)))
    if defect > SYMPLECTIC_LOSS:
        raise SymplecticityLoss(f"loop part lost symplecticity (defect {defect:.3e})")
    psi_inv = symplectic_inverse(psis, j0)
    x = psi_inv @ as_
    e = sym_part(fs)
    dpsi = dx = de = None
    if node_tables is not None:
        j0s_n, j0ct_n, cf_n, df_n = node_tables
        dpsi = j0s_n @ psis
        dx = psi_inv @ j0ct_n
        de = sym_part(cf_n @ as_ + df_n)
    return PathData(dims, thetas, psis, x, e, f_raw=fs, b_raw=bs,
                    dpsi=dpsi, dx=dx, de=de)


def path_from_coefficients(coeffs: OperatorCoefficients,
                           nsteps: Optional[int] = None) -> PathData:
    """Integrate the coefficient ODEs into a sampled subgroup path."""
    if nsteps is not None and nsteps != coeffs.n_theta:
        coeffs = coeffs.resampled(nsteps)
    dims = coeffs.dims
    j0 = dims.j_loop()
    (s_n, s_m), (c_n, c_m), (d_n, d_m) = coeffs.stage_tables()
    ct_n = np.swapaxes(c_n, -1, -2)
    ct_m = np.swapaxes(c_m, -1, -2)
    tables = ((j0 @ s_n[None], j0 @ s_m[None]),
              (j0 @ ct_n[None], j0 @ ct_m[None]),
              (c_n[None], c_m[None]),
              (d_n[None], d_m[None]))
    psis, as_, fs, bs = _rk4_components(dims, *tables)
    thetas = np.linspace(0.0, 1.0, coeffs.n_theta + 1)
    return _finalize_path(dims, thetas, psis[0], as_[0], fs[0], bs[0],
                          node_tables=(j0 @ s_n, j0 @ ct_n, c_n, d_n))


def coefficients_from_path(pd: PathData):
    """Recover (S, C, D) node samples from a sampled subgroup path.

    Returns node arrays on pd.theta (closed grid, N+1 values); the last
    node duplicates the first up to the reconstruction error when the
    path really comes from loop coefficients.
    """
    dims = pd.dims
    j0 = dims.j_loop()
    h = pd.theta[1] - pd.theta[0]
    dpsi = fd4(pd.psi, h)
    dx = fd4(pd.x, h)
    de = fd4(pd.e, h)
    psi_inv = symplectic_inverse(pd.psi, j0)
    s = sym_part(-j0 @ dpsi @ psi_inv)
    c = np.swapaxes(dx, -1, -2) @ np.swapaxes(pd.psi, -1, -2) @ j0
    d = sym_part(de + sym_part(np.swapaxes(pd.x, -1, -2) @ j0 @ dx))
    return s, c, d


def loop_identity_residuals(pd: PathData):
    """Diagnostics tying the carried integrals to the path blocks.

    Returns (|antisym(F) - X^T J0 X / 2|, |B - X^T J0|, |C Psi - X'^T J0|)
    as maxima over nodes.
    """
    dims = pd.dims
    j0 = dims.j_loop()
    xt = np.swapaxes(pd.x, -1, -2)
    r1 = r2 = 0.0
    if pd.f_raw is not None and pd.f_raw.size:
        anti = 0.5 * (pd.f_raw - np.swapaxes(pd.f_raw, -1, -2))
        r1 = float(np.max(np.abs(anti - 0.5 * (xt @ j0 @ pd.x))))
    if pd.b_raw is not None and pd.b_raw.size:
        r2 = float(np.max(np.abs(pd.b_raw - xt @ j0)))
    s, c, d = coefficients_from_path(pd)
    dx = fd4(pd.x, pd.theta[1] - pd.theta[0])
    r3 = float(np.max(np.abs(c @ pd.psi - np.swapaxes(dx, -1, -2) @ j0))) if dims.m else 0.0
    return r1, r2, r3
