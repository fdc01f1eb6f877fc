"""Continuous-time quantum walks ``psi(t) = exp(-i t A) psi(0)`` by Lanczos
(Krylov) propagation, return-probability series and their statistics."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from hl2lab.errors import ConvergenceFailure, InvalidParams, NotNormalized
from hl2lab.graph import Graph

KRYLOV_DIM = 64
NORM_TOL = 1e-9
MIN_STEP_FRACTION = 2.0**-30


def default_grid(level: int) -> tuple[float, int]:
    """(T, steps): (30, 400) for base graphs and (60, 600) for lifts."""
    return (30.0, 400) if level == 0 else (60.0, 600)


def basis_state(n: int, v: int) -> np.ndarray:
    if not 0 <= v < n:
        raise InvalidParams(f"start vertex {v} outside 0..{n - 1}")
    psi = np.zeros(n, dtype=np.complex128)
    psi[v] = 1.0
    return psi


def _operator(g):
    return g.adjacency() if isinstance(g, Graph) else g


class _Krylov:
    """Orthonormal Lanczos basis ``Q`` of span{v, Av, ...} with tridiagonal
    projection ``T = Q^H A Q`` diagonalized as ``S diag(theta) S^T``."""

    def __init__(self, a, v: np.ndarray, m_max: int = KRYLOV_DIM):
        n = v.shape[0]
        m_max = max(1, min(m_max, n))
        q = np.zeros((n, m_max), dtype=np.complex128)
        alpha = np.zeros(m_max)
        beta = np.zeros(m_max)
        q[:, 0] = v
        scale = 1.0
        m = m_max
        for j in range(m_max):
            w = a @ q[:, j]
            alpha[j] = np.vdot(q[:, j], w).real
            # full reorthogonalization, applied twice
            for _ in range(2):
                w = w - q[:, :j + 1] @ (q[:, :j + 1].conj().T @ w)
            b = float(np.linalg.norm(w))
            beta[j] = b
            scale = max(scale, abs(alpha[j]), b)
            if b <= 1e-12 * scale:
                beta[j] = 0.0
                m = j + 1
                break
            if j + 1 < m_max:
                q[:, j + 1] = w / b
        self.q = q[:, :m]
        self.m = m
        self.beta_next = beta[m - 1]
        if m == 1:
            self.theta, self.s = alpha[:1].copy(), np.ones((1, 1))
        else:
            self.theta, self.s = eigh_tridiagonal(alpha[:m], beta[:m - 1])
        self._s0 = self.s[0, :]

    def coeffs(self, tau: float) -> tuple[np.ndarray, float]:
        """Coefficients of ``exp(-i tau A) v`` in the basis and the
        a posteriori error estimate ``beta_m |e_m^T exp(-i tau T) e_1|``."""
        y = self.s @ (np.exp(-1j * tau * self.theta) * self._s0)
        return y, float(self.beta_next * abs(y[-1]))


def _check_norm(psi: np.ndarray, what: str) -> float:
    nrm = float(np.linalg.norm(psi))
    if abs(nrm - 1.0) > NORM_TOL:
        raise NotNormalized(f"{what} has norm {nrm!r}")
    return nrm


def _finish(psi: np.ndarray) -> np.ndarray:
    nrm = float(np.linalg.norm(psi))
    drift = abs(nrm - 1.0)
    if drift >= NORM_TOL:
        raise ConvergenceFailure(f"propagated state lost normalization (drift {drift:.2e})")
    return psi / nrm if drift else psi


def propagate(g, psi0: np.ndarray, t: float, tol: float = 1e-10,
              m_max: int = KRYLOV_DIM) -> np.ndarray:
    """``exp(-i t A) psi0`` for the adjacency matrix ``A`` of ``g``.

    The interval is covered by sub-steps; each step builds a Lanczos basis
    around the current state and is halved until its error estimate is at
    most ``tol * |h| / |t|``, so the estimates sum to at most ``tol``. A step
    shorter than ``|t| * 2**-30`` raises ``ConvergenceFailure``.
    """
    a = _operator(g)
    psi = np.asarray(psi0, dtype=np.complex128)
    _check_norm(psi, "initial state")
    if t == 0:
        return psi.copy()
    total = abs(float(t))
    sign = 1.0 if t > 0 else -1.0
    done = 0.0
    h = total
    while total - done > 1e-15 * total:
        kry = _Krylov(a, psi, m_max)
        h = min(h, total - done)
        while True:
            y, err = kry.coeffs(sign * h)
            if err <= tol * h / total:
                break
            h *= 0.5
            if h < total * MIN_STEP_FRACTION:
                raise ConvergenceFailure(f"sub-step fell below {total * MIN_STEP_FRACTION:.3g}")
        psi = kry.q @ y
        done += h
        h *= 2.0
    return _finish(psi)


@dataclass
class WalkSeries:
    t: np.ndarray
    p_return: np.ndarray
    start_vertex: int
    graph: str = ""

    def to_csv(self) -> str:
        lines = ["t,p_return"]
        lines.extend(f"{t:.12g},{p:.12g}" for t, p in zip(self.t.tolist(), self.p_return.tolist()))
        return "\n".join(lines) + "\n"


def return_series(g, v: int, T: float, steps: int, tol: float = 1e-10,
                  m_max: int = KRYLOV_DIM) -> WalkSeries:
    """``|psi_v(t)|^2`` on the inclusive uniform grid of ``steps`` points over
    ``[0, T]``, starting from the basis state at ``v``.

    One Krylov basis is reused for consecutive grid points while its error
    estimate stays within ``tol``; otherwise the state at the last accepted
    point becomes the new anchor. If even one grid step is out of reach of a
    fresh basis, that step falls back to sub-stepped :func:`propagate`.
    """
    if steps < 2:
        raise InvalidParams("steps must be at least 2")
    a = _operator(g)
    n = a.shape[0]
    psi = basis_state(n, v)
    grid = np.linspace(0.0, float(T), steps)
    p = np.empty(steps)
    p[0] = 1.0
    anchor_t, kry = 0.0, _Krylov(a, psi, m_max)
    last_y = None
    j = 1
    while j < steps:
        y, err = kry.coeffs(grid[j] - anchor_t)
        if err <= tol:
            p[j] = abs(kry.q[v, :] @ y) ** 2
            last_y = y
            j += 1
            continue
        if last_y is not None:
            psi = _finish(kry.q @ last_y)
            anchor_t = grid[j - 1]
        else:
            psi = propagate(a, psi, grid[j] - anchor_t, tol=tol, m_max=m_max)
            anchor_t = grid[j]
            p[j] = abs(psi[v]) ** 2
            j += 1
        kry = _Krylov(a, psi, m_max)
        last_y = None
    label = g.label if isinstance(g, Graph) else ""
    return WalkSeries(t=grid, p_return=p, start_vertex=v, graph=label)


@dataclass
class WalkStats:
    mean: float
    peak: float
    peak_time: float
    std: float
    revival_peak: float
    revival_time: float
    t_min: float = field(default=1.0)

    def to_dict(self) -> dict:
        return asdict(self)


def series_stats(s: WalkSeries, t_min: float = 1.0) -> WalkStats:
    """Grid mean, peak and population standard deviation (t = 0 included),
    plus the largest value over ``t >= t_min`` as the revival peak."""
    p = np.asarray(s.p_return, dtype=np.float64)
    if p.size == 0:
        raise InvalidParams("empty series")
    i = int(np.argmax(p))
    late = np.flatnonzero(s.t >= t_min)
    if late.size:
        r = late[int(np.argmax(p[late]))]
        rev_peak, rev_time = float(p[r]), float(s.t[r])
    else:
        rev_peak, rev_time = float("nan"), float("nan")
    return WalkStats(mean=float(p.mean()), peak=float(p[i]), peak_time=float(s.t[i]),
                     std=float(p.std()), revival_peak=rev_peak, revival_time=rev_time,
                     t_min=float(t_min))
