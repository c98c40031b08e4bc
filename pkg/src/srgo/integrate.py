"""Integration of the vertical momentum system and horizontal lifts.

Fixed-step classical RK4 throughout (reproducible diagnostics); the
vertical loop runs through the compiled kernel in kernels.py.
"""

from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import Momentum, vertical_field_coords
from .kernels import vertical_rk4


@dataclass
class Trajectory:
    """Sampled solution of the vertical (and optionally horizontal) system."""

    structure: "HomogeneousSRStructure"  # noqa: F821
    times: np.ndarray
    momenta: np.ndarray  # (N, n)
    group_points: np.ndarray | None = None  # (N, r, r)
    diagnostics: dict = field(default_factory=dict)
    aborted: bool = False

    @property
    def n_samples(self):
        return self.times.shape[0]

    def momentum(self, i):
        return Momentum(self.momenta[i], self.structure)

    def h_drift(self):
        h = self.diagnostics["H"]
        return float(np.max(np.abs(h - h[0])))

    def casimir_drifts(self):
        return {
            name: float(np.max(np.abs(vals - vals[0])))
            for name, vals in self.diagnostics.items()
            if name != "H"
        }

    def to_csv_text(self):
        """CSV export: t, p_1..p_n, H, casimirs, then flattened group points."""
        n = self.momenta.shape[1]
        cols = ["t"] + [f"p_{i + 1}" for i in range(n)] + ["H"]
        names = [k for k in self.diagnostics if k != "H"]
        cols += names
        blocks = [self.times.reshape(-1, 1), self.momenta,
                  self.diagnostics["H"].reshape(-1, 1)]
        blocks += [self.diagnostics[k].reshape(-1, 1) for k in names]
        if self.group_points is not None:
            r = self.group_points.shape[1]
            cols += [f"g_{i + 1}{j + 1}" for i in range(r) for j in range(r)]
            blocks.append(self.group_points.reshape(self.n_samples, r * r))
        data = np.concatenate(blocks, axis=1)
        lines = [",".join(cols)]
        for row in data:
            lines.append(",".join("%.17g" % v for v in row))
        return "\n".join(lines) + "\n"

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_csv_text())


def integrate_vertical(p0: Momentum, T, step, casimirs=None) -> Trajectory:
    """Integrate the momentum equation over [0, T] with fixed step RK4.

    ``casimirs`` is an optional mapping name -> Polynomial (on g*) recorded
    per sample alongside H. On a non-finite state the trajectory is
    truncated at the last valid sample and flagged aborted.
    """
    if not (T > 0 and 0 < step <= T):
        raise ValueError("need T > 0 and 0 < step <= T")
    s = p0.structure
    nsteps = int(round(T / step))
    samples, last = vertical_rk4(
        s.algebra.c_float, s.dmat, p0.coords, step, nsteps
    )
    aborted = last < nsteps
    momenta = samples[: last + 1]
    times = step * np.arange(last + 1)
    diagnostics = {"H": 0.5 * np.einsum("ti,ij,tj->t", momenta, s.dmat, momenta)}
    for name, poly in (casimirs or {}).items():
        diagnostics[name] = np.array([poly(p) for p in momenta])
    return Trajectory(s, times, momenta, diagnostics=diagnostics, aborted=aborted)


def closed_form_axisymmetric(p0: Momentum, t, kappa) -> Momentum:
    """Exact vertical solution for the axisymmetric models.

    Rotates the (p1, p2) pair by the angle kappa * p3 * t and keeps the
    remaining coordinates; kappa is the per-model constant calibrated
    against the integrator.
    """
    s = p0.structure
    if not getattr(s, "is_axisymmetric", False):
        raise ValueError("closed form only applies to the axisymmetric models")
    p = p0.coords.copy()
    theta = kappa * p[2] * t
    c, sn = np.cos(theta), np.sin(theta)
    p1, p2 = p[0], p[1]
    p[0] = c * p1 - sn * p2
    p[1] = sn * p1 + c * p2
    return Momentum(p, s)


def integrate_horizontal(traj: Trajectory) -> Trajectory:
    """Fill group_points by solving G' = G rho(dH(p(t))), G(0) = I.

    RK4 on the same grid; p is interpolated linearly inside each step,
    which keeps the combined scheme fourth order.
    """
    s = traj.structure
    if s.representation is None:
        raise ValueError("structure carries no matrix representation")
    rho = np.stack(s.representation)
    r = rho.shape[1]
    nsamp = traj.n_samples
    controls = traj.momenta @ s.dmat.T  # dH(p_i) per sample
    rho_u = np.einsum("ta,aij->tij", controls, rho)
    gpts = np.empty((nsamp, r, r))
    g = np.eye(r)
    gpts[0] = g
    for i in range(nsamp - 1):
        dt = traj.times[i + 1] - traj.times[i]
        a0 = rho_u[i]
        a1 = rho_u[i + 1]
        ah = 0.5 * (a0 + a1)
        k1 = g @ a0
        k2 = (g + 0.5 * dt * k1) @ ah
        k3 = (g + 0.5 * dt * k2) @ ah
        k4 = (g + dt * k3) @ a1
        g = g + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        gpts[i + 1] = g
    return Trajectory(
        s, traj.times, traj.momenta, group_points=gpts,
        diagnostics=traj.diagnostics, aborted=traj.aborted,
    )


def sample_momenta(structure, nsamples, rng):
    """Draw momenta on the level set H = 1/2 inside the annihilator of k.

    Rejection-free: a unit Gaussian direction fixes the delta-pairings
    through the metric square root (pinning H to 1/2 exactly), the rest of
    the m-dual block is Gaussian fill, the k-pairings are identically zero
    by construction in the dual of the adapted basis.
    """
    s = structure
    n = s.dim
    dm = s.m.dim
    adapted = np.concatenate([s.m_basis_float, s.k_basis_float], axis=1) \
        if s.k.dim else s.m_basis_float
    dual = np.linalg.inv(adapted).T  # rows/cols pair with the adapted basis
    m_dual = dual[:, :dm]
    # delta = m_basis @ E; pairings with delta are E^T a for m*-coords a.
    e_coef, *_ = np.linalg.lstsq(s.m_basis_float, s.delta_basis_float, rcond=None)
    rank = e_coef.shape[1]
    gram_inv = np.linalg.inv(e_coef.T @ e_coef)
    # fixed basis of ker(E^T): fill directions that leave H untouched
    _, sv, vt = np.linalg.svd(e_coef.T)
    null_dim = dm - rank
    fill = vt[rank:].T if null_dim else np.zeros((dm, 0))
    sqrt_b = np.linalg.cholesky(s.metric_float)
    out = np.empty((nsamples, n))
    for i in range(nsamples):
        u = rng.standard_normal(rank)
        u /= np.linalg.norm(u)
        target = sqrt_b @ u  # delta-pairings with (1/2)|B^{-1/2} target|^2 = 1/2
        a = e_coef @ (gram_inv @ target)
        if null_dim:
            a = a + fill @ rng.standard_normal(null_dim)
        out[i] = m_dual @ a
    return out


def find_fixed_points(structure, samples, seed=0, residual_tol=1e-10,
                      dedup_tol=1e-6):
    """Fixed points of the vertical field on the level set H = 1/2.

    Seeds are sampled momenta polished by Gauss-Newton on the stacked
    system (vertical field, H - 1/2, k-pairings); converged points are
    deduplicated by Euclidean distance.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    s = structure
    n = s.dim
    rng = np.random.default_rng(seed)
    seeds = sample_momenta(s, samples, rng)
    kb = s.k_basis_float

    def residual(p):
        parts = [vertical_field_coords(s, p), [s.hamiltonian_value(p) - 0.5]]
        if s.k.dim:
            parts.append(kb.T @ p)
        return np.concatenate([np.atleast_1d(np.asarray(x)) for x in parts])

    def jacobian(p):
        eps = 1e-7
        cols = []
        for i in range(n):
            dp = np.zeros(n)
            dp[i] = eps
            cols.append((residual(p + dp) - residual(p - dp)) / (2 * eps))
        return np.stack(cols, axis=1)

    found = []
    for p in seeds:
        x = p.copy()
        for _ in range(60):
            r = residual(x)
            if np.linalg.norm(r, np.inf) < 1e-14:
                break
            dx, *_ = np.linalg.lstsq(jacobian(x), -r, rcond=None)
            step_len = np.linalg.norm(dx)
            if step_len > 1.0:
                dx = dx / step_len
            x = x + dx
            if not np.all(np.isfinite(x)):
                break
        if not np.all(np.isfinite(x)):
            continue
        r = residual(x)
        if np.linalg.norm(vertical_field_coords(s, x), np.inf) < residual_tol and \
           abs(s.hamiltonian_value(x) - 0.5) < 1e-9 and \
           (not s.k.dim or np.max(np.abs(kb.T @ x)) < 1e-9):
            found.append(x)
    found.sort(key=lambda v: tuple(np.round(v, 8)))
    unique = []
    for x in found:
        if all(np.linalg.norm(x - y) > dedup_tol for y in unique):
            unique.append(x)
    return [Momentum(x, s) for x in unique]
