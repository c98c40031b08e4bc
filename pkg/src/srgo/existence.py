"""Constructive existence of homogeneous geodesics.

Two constructions, selected by the Killing form: when the Killing kernel
equals the reductive complement, a momentum annihilating the derived
algebra of a solvable transitive subalgebra works; otherwise an
eigenvector of the comparison operator between the metric extension and
the Killing form provides one, after factoring out the radical.
Every returned momentum carries a homogeneity certificate.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla
from .algebra import Subspace, subspace_sum
from .hamiltonian import Momentum
from .homogeneity import HOMOGENEOUS, check_homogeneous

ROUTE_SOLVABLE = "solvable"
ROUTE_EIGENVECTOR = "eigenvector"


@dataclass
class ExistenceResult:
    success: bool
    route: str
    momentum: np.ndarray | None
    certificate: object | None
    steps: list = field(default_factory=list)

    def to_dict(self):
        return {
            "success": self.success,
            "route": self.route,
            "momentum": None if self.momentum is None
            else [float(x) for x in self.momentum],
            "certificate": None if self.certificate is None
            else self.certificate.to_dict(),
            "steps": self.steps,
        }


@dataclass
class Factorization:
    structure: object
    projection: np.ndarray  # exact (n_hat, n)
    ideal: Subspace

    def lift(self, p_hat):
        """Pull a quotient momentum back; it annihilates the ideal."""
        proj_f = exactla.to_float(self.projection)
        return proj_f.T @ np.asarray(p_hat, dtype=float)


def _derived_subspace(algebra, space):
    """Span of all brackets of basis vectors of ``space``."""
    cols = []
    for a in range(space.dim):
        for b in range(a + 1, space.dim):
            v = algebra.bracket_exact(space.basis[:, a], space.basis[:, b])
            cols.append(v.reshape(-1, 1))
    if not cols:
        return Subspace(algebra.dim, exactla.fzeros(algebra.dim, 0))
    return Subspace.span_of_columns(algebra.dim, np.concatenate(cols, axis=1))


def is_solvable(algebra, space=None):
    """Exact derived-series test for a subalgebra (default: all of g)."""
    if space is None:
        space = Subspace(algebra.dim, exactla.feye(algebra.dim))
    current = space
    while current.dim:
        nxt = _derived_subspace(algebra, current)
        if nxt.dim == current.dim:
            return False
        current = nxt
    return True


def radical(algebra):
    """Solvable radical: the Killing-orthogonal complement of [g, g]."""
    derived = _derived_subspace(
        algebra, Subspace(algebra.dim, exactla.feye(algebra.dim))
    )
    if derived.dim == 0:
        return Subspace(algebra.dim, exactla.feye(algebra.dim))
    mat = exactla.matmul(derived.basis.T, algebra.killing_form())
    return Subspace(algebra.dim, exactla.nullspace(mat))


def _intersection(a: Subspace, b: Subspace):
    """Exact intersection of two subspaces."""
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.ambient_dim, exactla.fzeros(a.ambient_dim, 0))
    stacked = np.concatenate([a.basis, -b.basis], axis=1)
    null = exactla.nullspace(stacked)
    if null.shape[1] == 0:
        return Subspace(a.ambient_dim, exactla.fzeros(a.ambient_dim, 0))
    cols = exactla.matmul(a.basis, null[: a.dim])
    return Subspace.span_of_columns(a.ambient_dim, cols)


def _is_ideal(algebra, space):
    for i in range(algebra.dim):
        e = np.empty(algebra.dim, dtype=object)
        e[:] = Fraction(0)
        e[i] = Fraction(1)
        for b in range(space.dim):
            if not space.contains(algebra.bracket_exact(e, space.basis[:, b])):
                return False
    return True


def factorize_by_ideal(structure, ideal: Subspace) -> Factorization:
    """Quotient structure on g / i with the inherited metric.

    Requires an exact ideal contained in m that does not contain delta;
    the quotient basis is a standard-vector completion, so the projection
    keeps plain coordinates wherever possible.
    """
    from .algebra import HomogeneousSRStructure, LieAlgebra

    s = structure
    g = s.algebra
    n = g.dim
    if ideal.dim == 0:
        return Factorization(s, exactla.feye(n), ideal)
    if not _is_ideal(g, ideal):
        raise ValueError("subspace is not an ideal")
    if not s.m.contains_subspace(ideal):
        raise ValueError("ideal must sit inside m")
    if ideal.contains_subspace(s.delta):
        raise ValueError("delta collapses in the quotient")

    # Completion by standard vectors, greedily by rank.
    comp_idx = []
    current = ideal.basis
    for i in range(n):
        e = exactla.fzeros(n, 1)
        e[i, 0] = Fraction(1)
        cand = np.concatenate([current, e], axis=1)
        if exactla.rank(cand) > exactla.rank(current):
            comp_idx.append(i)
            current = cand
    n_hat = len(comp_idx)
    comp = exactla.fzeros(n, n_hat)
    for a, i in enumerate(comp_idx):
        comp[i, a] = Fraction(1)
    full = np.concatenate([ideal.basis, comp], axis=1)
    proj = exactla.inverse(full)[ideal.dim:]  # (n_hat, n): quotient coords

    brackets = {}
    for a in range(n_hat):
        for b in range(a + 1, n_hat):
            w = exactla.matvec(proj, g.bracket_exact(comp[:, a], comp[:, b]))
            comps = {k: w[k] for k in range(n_hat) if w[k]}
            if comps:
                brackets[(a, b)] = comps
    labels = [g.labels[i] for i in comp_idx]
    g_hat = LieAlgebra.from_brackets(n_hat, brackets, labels)

    k_hat = Subspace.span_of_columns(n_hat, exactla.matmul(proj, s.k.basis)) \
        if s.k.dim else Subspace(n_hat, exactla.fzeros(n_hat, 0))
    m_hat = Subspace.span_of_columns(n_hat, exactla.matmul(proj, s.m.basis))

    # delta part surviving the quotient: B-orthogonal complement of
    # delta cap i inside delta, expressed in delta-coordinates.
    cap = _intersection(s.delta, ideal)
    if cap.dim:
        cap_coords = exactla.fzeros(s.delta.dim, cap.dim)
        for j in range(cap.dim):
            cap_coords[:, j] = exactla.solve(s.delta.basis, cap.basis[:, j])
        w_coords = exactla.nullspace(
            exactla.matmul(cap_coords.T, s.metric)
        )
    else:
        w_coords = exactla.feye(s.delta.dim)
    surviving = exactla.matmul(s.delta.basis, w_coords)
    delta_hat = Subspace.span_of_columns(n_hat, exactla.matmul(proj, surviving))
    metric_hat = exactla.matmul(exactla.matmul(w_coords.T, s.metric), w_coords)

    s_hat = HomogeneousSRStructure(
        g_hat, k_hat, m_hat, delta_hat, metric_hat,
        name=f"{s.name}/ideal" if s.name else None,
    )
    return Factorization(s_hat, proj, ideal)


def _normalize_sign(v):
    for x in v:
        if abs(x) > 1e-12:
            return v if x > 0 else -v
    return v


def _solvable_route(structure, steps):
    s = structure
    g = s.algebra
    n = g.dim
    # Transitive solvable subalgebra: m itself when it is one, else g.
    candidate = s.m
    m_is_subalgebra = candidate.contains_subspace(
        _derived_subspace(g, candidate)
    )
    if m_is_subalgebra:
        sub = candidate
        steps.append("transitive solvable subalgebra: the complement m")
    else:
        sub = Subspace(n, exactla.feye(n))
        steps.append("transitive solvable subalgebra: g itself")
    if not is_solvable(g, sub):
        steps.append("selected subalgebra is not solvable")
        return None
    derived = _derived_subspace(g, sub)
    blocked = subspace_sum(n, [s.k, derived])
    if blocked.dim == n:
        steps.append("annihilator of k + [s, s] is trivial")
        return None
    ann = exactla.nullspace(blocked.basis.T)
    steps.append(
        f"momenta annihilating k and [s, s]: {ann.shape[1]}-dimensional"
    )
    best = None
    for j in range(ann.shape[1]):
        p = np.array([float(v) for v in ann[:, j]])
        if np.linalg.norm(s.dH(p)) > 1e-9:
            best = p
            break
    if best is None:
        best = np.array([float(v) for v in ann[:, 0]])
        steps.append("no candidate with nonzero horizontal part; using first")
    best = _normalize_sign(best / np.linalg.norm(best))
    return best


def _khat_extension(structure, steps):
    """Metric extension and comparison operator for the eigenvector route.

    Returns (bhat, gamma_float) with bhat the full bilinear form whose
    restriction to delta is B, built on the splitting by the
    Killing-orthogonal complement of Gamma.
    """
    s = structure
    g = s.algebra
    n = g.dim
    kf = g.killing_form()
    # Degenerate directions of K inside delta, in delta-coordinates.
    gram = exactla.matmul(exactla.matmul(s.delta.basis.T, kf), s.delta.basis)
    degenerate = exactla.nullspace(gram)
    if degenerate.shape[1]:
        gamma_coords = exactla.nullspace(
            exactla.matmul(degenerate.T, s.metric)
        )
        steps.append(
            f"K degenerates on a {degenerate.shape[1]}-dimensional part of delta"
        )
    else:
        gamma_coords = exactla.feye(s.delta.dim)
    gamma = exactla.matmul(s.delta.basis, gamma_coords)
    if gamma.shape[1] == 0:
        return None, None
    # Killing-orthogonal complement of Gamma in g.
    comp = exactla.nullspace(exactla.matmul(gamma.T, kf))
    full = np.concatenate([gamma, comp], axis=1)
    if exactla.rank(full) != n:
        steps.append("Gamma meets its Killing complement; extension fails")
        return None, None
    b_gamma = exactla.matmul(
        exactla.matmul(gamma_coords.T, s.metric), gamma_coords
    )
    blocks = exactla.fzeros(n, n)
    dg = gamma.shape[1]
    for i in range(dg):
        for j in range(dg):
            blocks[i, j] = b_gamma[i, j]
    for i in range(dg, n):
        blocks[i, i] = Fraction(1)
    inv = exactla.inverse(full)
    bhat = exactla.matmul(exactla.matmul(inv.T, blocks), inv)
    return exactla.to_float(bhat), exactla.to_float(gamma)


def _eigen_route(structure, steps):
    s = structure
    g = s.algebra
    rad = radical(g)
    if 0 < rad.dim < g.dim:
        ideal = _intersection(rad, s.m)
        if ideal.dim and not ideal.contains_subspace(s.delta) \
                and _is_ideal(g, ideal):
            steps.append(
                f"factoring out the {ideal.dim}-dimensional radical part of m"
            )
            fact = factorize_by_ideal(s, ideal)
            inner = construct_homogeneous_geodesic(fact.structure)
            steps.extend("  " + t for t in inner.steps)
            if not inner.success:
                return None
            steps.append("lifting the quotient momentum")
            return fact.lift(inner.momentum)
    bhat, gamma = _khat_extension(s, steps)
    if bhat is None:
        return None
    kf = g.killing_form_float()
    a_op = np.linalg.solve(kf, bhat)
    # Restrict A to Gamma: A Gamma = Gamma M up to invariance residual.
    m_mat, *_ = np.linalg.lstsq(gamma, a_op @ gamma, rcond=None)
    resid = np.max(np.abs(a_op @ gamma - gamma @ m_mat))
    if resid > 1e-9:
        steps.append(f"Gamma is not invariant under the comparison operator "
                     f"(residual {resid:.2e})")
        return None
    vals, vecs = np.linalg.eig(m_mat)
    order = np.argsort(-np.abs(vals))
    for idx in order:
        lam, v = vals[idx], vecs[:, idx]
        if abs(lam) < 1e-12 or abs(lam.imag) > 1e-10 \
                or np.max(np.abs(v.imag)) > 1e-10:
            continue
        x = gamma @ v.real
        x = _normalize_sign(x / np.linalg.norm(x))
        steps.append(
            f"eigenvector of K^(-1) B-hat with eigenvalue {lam.real:.6g}"
        )
        p = bhat @ x
        if s.k.dim and np.max(np.abs(s.k_basis_float.T @ p)) > 1e-9:
            steps.append("candidate momentum fails to annihilate k; skipping")
            continue
        return p
    steps.append("no usable real eigenvector")
    return None


def construct_homogeneous_geodesic(structure) -> ExistenceResult:
    """Produce a momentum generating a homogeneous geodesic, with proof.

    The solvable construction applies when the Killing kernel is exactly
    the complement m; otherwise the eigenvector construction runs, passing
    through the quotient by the radical when there is one.
    """
    s = structure
    steps = []
    ker = s.algebra.killing_kernel()
    if ker == s.m:
        steps.append("Killing kernel equals m: solvable construction")
        route = ROUTE_SOLVABLE
        p = _solvable_route(s, steps)
    else:
        steps.append("Killing form alive on delta: eigenvector construction")
        route = ROUTE_EIGENVECTOR
        p = _eigen_route(s, steps)
    if p is None:
        return ExistenceResult(False, route, None, None, steps)
    cert = check_homogeneous(Momentum(p, s))
    ok = cert.verdict == HOMOGENEOUS
    steps.append(
        "certificate: homogeneous" if ok
        else f"certificate failed ({cert.verdict}, residual {cert.residual:.2e})"
    )
    return ExistenceResult(ok, route, p, cert, steps)


def verify_eigenconstruction(structure, result: ExistenceResult):
    """Independent numeric audit of a constructed momentum."""
    from .hamiltonian import vertical_field_coords

    p = result.momentum
    out = {
        "annihilates_k": bool(structure.annihilates_k(p)),
        "hamiltonian": float(structure.hamiltonian_value(p)),
        "vertical_residual": float(
            np.max(np.abs(vertical_field_coords(structure, p)))
        ),
    }
    cert = check_homogeneous(Momentum(p, structure))
    out["homogeneous"] = cert.verdict == HOMOGENEOUS
    out["residual"] = cert.residual
    return out
