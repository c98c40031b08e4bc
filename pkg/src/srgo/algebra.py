"""Lie algebra arithmetic from structure constants.

Structure constants are exact rationals with a cached float mirror; all
structural checks (antisymmetry, Jacobi, reductivity, bracket generation)
run in exact arithmetic.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla
from .exactla import fmat, fzeros, feye, to_float


def _as_fraction_vec(v, n):
    out = np.empty(n, dtype=object)
    for i in range(n):
        out[i] = Fraction(v[i]) if not isinstance(v[i], Fraction) else v[i]
    return out


class LieAlgebra:
    """Finite-dimensional Lie algebra given by a structure tensor.

    ``constants[i, j, k]`` is the coefficient of e_k in [e_i, e_j].
    """

    def __init__(self, dim, constants, labels=None):
        self.dim = dim
        self.constants = constants  # (n, n, n) object array of Fractions
        self.labels = list(labels) if labels else [f"e{i + 1}" for i in range(dim)]
        if len(self.labels) != dim:
            raise ValueError("label count mismatch")
        self.c_float = np.array(
            [[[float(constants[i, j, k]) for k in range(dim)] for j in range(dim)]
             for i in range(dim)],
            dtype=float,
        )

    @classmethod
    def from_brackets(cls, dim, brackets, labels=None):
        """Build from a dict {(i, j): {k: coeff}} with i < j, 0-based.

        Antisymmetric counterparts are filled in automatically.
        """
        c = np.empty((dim, dim, dim), dtype=object)
        c[:] = Fraction(0)
        for (i, j), comps in brackets.items():
            for k, v in comps.items():
                c[i, j, k] = Fraction(v)
                c[j, i, k] = -Fraction(v)
        return cls(dim, c, labels)

    def bracket(self, a, b):
        """[a, b] for float coordinate vectors."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.shape != (self.dim,) or b.shape != (self.dim,):
            raise ValueError("dimension mismatch")
        return np.einsum("i,j,ijk->k", a, b, self.c_float)

    def bracket_exact(self, a, b):
        a = _as_fraction_vec(a, self.dim)
        b = _as_fraction_vec(b, self.dim)
        out = np.empty(self.dim, dtype=object)
        out[:] = Fraction(0)
        for i in range(self.dim):
            if not a[i]:
                continue
            for j in range(self.dim):
                if not b[j]:
                    continue
                for k in range(self.dim):
                    cijk = self.constants[i, j, k]
                    if cijk:
                        out[k] += a[i] * b[j] * cijk
        return out

    def ad_matrix(self, x):
        """Matrix of ad x; column j is [x, e_j]."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError("dimension mismatch")
        return np.einsum("i,ijk->kj", x, self.c_float)

    def ad_matrix_exact(self, x):
        x = _as_fraction_vec(x, self.dim)
        out = fzeros(self.dim, self.dim)
        for i in range(self.dim):
            if not x[i]:
                continue
            for j in range(self.dim):
                for k in range(self.dim):
                    cijk = self.constants[i, j, k]
                    if cijk:
                        out[k, j] += x[i] * cijk
        return out

    def coad_apply(self, x, p):
        """Coadjoint pairing: returns the covector xi -> p([x, xi])."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        if x.shape != (self.dim,) or p.shape != (self.dim,):
            raise ValueError("dimension mismatch")
        return np.einsum("i,ijk,k->j", x, self.c_float, p)

    def coad_apply_exact(self, x, p):
        x = _as_fraction_vec(x, self.dim)
        p = _as_fraction_vec(p, self.dim)
        out = np.empty(self.dim, dtype=object)
        out[:] = Fraction(0)
        for i in range(self.dim):
            if not x[i]:
                continue
            for j in range(self.dim):
                for k in range(self.dim):
                    cijk = self.constants[i, j, k]
                    if cijk and p[k]:
                        out[j] += x[i] * cijk * p[k]
        return out

    def killing_form(self):
        """K[i, j] = tr(ad e_i ad e_j), exact."""
        n = self.dim
        ads = [self.ad_matrix_exact(_basis_vec(n, i)) for i in range(n)]
        K = fzeros(n, n)
        for i in range(n):
            for j in range(i, n):
                t = Fraction(0)
                for a in range(n):
                    for b in range(n):
                        if ads[i][a, b] and ads[j][b, a]:
                            t += ads[i][a, b] * ads[j][b, a]
                K[i, j] = t
                K[j, i] = t
        return K

    def killing_form_float(self):
        return to_float(self.killing_form())

    def killing_kernel(self):
        """Null space of the Killing form as a Subspace."""
        return Subspace(self.dim, exactla.nullspace(self.killing_form()))

    def validate(self, max_reported=20):
        """Exact antisymmetry and Jacobi checks; returns a ValidationReport.

        Constants are rescaled to integers by the common denominator, so
        the checks vectorize while staying exact.
        """
        report = ValidationReport()
        n = self.dim
        c = self.constants
        lcm = 1
        for v in c.flat:
            lcm = lcm * v.denominator // np.gcd(lcm, v.denominator)
        ints = np.array(
            [[[int(c[i, j, k] * lcm) for k in range(n)] for j in range(n)]
             for i in range(n)],
            dtype=object,
        )
        if np.max(np.abs(ints.astype(float))) < 2 ** 20:
            ints = ints.astype(np.int64)
        anti = ints + ints.transpose(1, 0, 2)
        for i, j, k in zip(*np.nonzero(anti)):
            if len(report.violations) >= max_reported:
                break
            report.add(f"antisymmetry violated at ({i + 1},{j + 1},{k + 1})")
        if report.violations:
            return report
        # jac[i, j, l, k] = coefficient of e_k in [[e_i, e_j], e_l]
        jac = np.einsum("ijm,mlk->ijlk", ints, ints)
        total = jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3)
        for i, j, l, k in zip(*np.nonzero(total)):
            if i < j < l:
                if len(report.violations) >= max_reported:
                    break
                report.add(
                    f"Jacobi identity violated at ({i + 1},{j + 1},{l + 1};{k + 1})"
                )
        return report


def _basis_vec(n, i):
    v = np.empty(n, dtype=object)
    v[:] = Fraction(0)
    v[i] = Fraction(1)
    return v


class ValidationReport:
    """Accumulates structural violations; empty means valid."""

    def __init__(self):
        self.violations = []

    def add(self, msg):
        self.violations.append(msg)

    @property
    def ok(self):
        return not self.violations

    def merged(self, other):
        out = ValidationReport()
        out.violations = self.violations + other.violations
        return out

    def __repr__(self):
        return "valid" if self.ok else "; ".join(self.violations)


class Subspace:
    """Subspace of R^n spanned by the columns of ``basis`` (exact)."""

    def __init__(self, ambient_dim, basis):
        self.ambient_dim = ambient_dim
        if basis.size == 0:
            basis = fzeros(ambient_dim, 0)
        self.basis = basis
        if basis.shape[0] != ambient_dim:
            raise ValueError("basis rows must match ambient dimension")
        self.canonical = exactla.column_echelon(basis)
        if self.canonical.shape[1] != basis.shape[1]:
            raise ValueError("basis columns are linearly dependent")
        # Fast membership path when every basis column is a standard vector.
        idx = set()
        for j in range(basis.shape[1]):
            col = basis[:, j]
            nz = [i for i in range(ambient_dim) if col[i]]
            if len(nz) == 1 and col[nz[0]] == 1:
                idx.add(nz[0])
            else:
                idx = None
                break
        self._std_indices = idx

    @classmethod
    def from_vectors(cls, ambient_dim, vectors):
        if not vectors:
            return cls(ambient_dim, fzeros(ambient_dim, 0))
        return cls(ambient_dim, fmat(vectors).T)

    @classmethod
    def span_of_columns(cls, ambient_dim, cols):
        """Span, discarding dependent columns."""
        return cls(ambient_dim, exactla.column_echelon(cols))

    @property
    def dim(self):
        return self.basis.shape[1]

    def basis_float(self):
        return to_float(self.basis)

    def contains(self, v):
        if self.dim == 0:
            return all(Fraction(x) == 0 for x in v)
        if self._std_indices is not None:
            return all(
                not v[i] for i in range(self.ambient_dim)
                if i not in self._std_indices
            )
        vv = _as_fraction_vec(v, self.ambient_dim)
        return exactla.solve(self.basis, vv) is not None

    def contains_subspace(self, other):
        return all(self.contains(other.basis[:, j]) for j in range(other.dim))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.canonical.shape == other.canonical.shape
            and (self.canonical == other.canonical).all()
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.canonical.shape))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in R^{self.ambient_dim})"


def subspace_sum(ambient_dim, subspaces):
    cols = [s.basis for s in subspaces if s.dim]
    if not cols:
        return Subspace(ambient_dim, fzeros(ambient_dim, 0))
    return Subspace.span_of_columns(ambient_dim, np.concatenate(cols, axis=1))


def lie_closure(algebra, seed):
    """Smallest subalgebra containing the Subspace ``seed``."""
    current = seed
    while True:
        new_cols = [current.basis]
        for a in range(current.dim):
            for b in range(a + 1, current.dim):
                v = algebra.bracket_exact(current.basis[:, a], current.basis[:, b])
                new_cols.append(v.reshape(-1, 1))
        nxt = Subspace.span_of_columns(
            algebra.dim, np.concatenate(new_cols, axis=1)
        )
        if nxt.dim == current.dim:
            return nxt
        current = nxt


class HomogeneousSRStructure:
    """Left-invariant sub-Riemannian structure on G/K via (g, k, m, delta, B).

    The metric is stored exactly and inverted once at construction; a
    non positive-definite metric is rejected immediately.
    """

    def __init__(self, algebra, k, m, delta, metric, grading=None,
                 representation=None, name=None, validate=True):
        self.algebra = algebra
        self.k = k
        self.m = m
        self.delta = delta
        self.metric = fmat(metric) if not isinstance(metric, np.ndarray) or metric.dtype != object else metric
        self.grading = grading
        self.representation = (
            [np.asarray(r, dtype=float) for r in representation]
            if representation is not None
            else None
        )
        self.name = name

        n = algebra.dim
        if self.metric.shape != (delta.dim, delta.dim):
            raise ValueError("metric shape must match delta dimension")
        mf = to_float(self.metric)
        try:
            np.linalg.cholesky(mf)
        except np.linalg.LinAlgError:
            raise ValueError("metric is not positive definite") from None
        self.metric_float = mf
        self.metric_inv = exactla.inverse(self.metric)
        self.metric_inv_float = to_float(self.metric_inv)

        # dH(p) = Dmat @ p with Dmat = delta B^{-1} delta^T.
        db = delta.basis
        self.dmat_exact = exactla.matmul(
            exactla.matmul(db, self.metric_inv), db.T
        )
        self.dmat = to_float(self.dmat_exact)
        self.k_basis_float = k.basis_float()
        self.m_basis_float = m.basis_float()
        self.delta_basis_float = delta.basis_float()

        if validate:
            rep = self.validate()
            if not rep.ok:
                raise ValueError(f"invalid structure: {rep}")

    @property
    def dim(self):
        return self.algebra.dim

    def validate(self):
        """Exact structural checks; returns a ValidationReport."""
        report = ValidationReport()
        g = self.algebra
        n = g.dim
        k, m, delta = self.k, self.m, self.delta

        if k.dim + m.dim != n or exactla.rank(
            np.concatenate([k.basis, m.basis], axis=1) if k.dim else m.basis
        ) != n:
            report.add("g is not the direct sum of k and m")
        for a in range(k.dim):
            for b in range(k.dim):
                if not k.contains(g.bracket_exact(k.basis[:, a], k.basis[:, b])):
                    report.add("k is not a subalgebra")
        for a in range(k.dim):
            for b in range(m.dim):
                if not m.contains(g.bracket_exact(k.basis[:, a], m.basis[:, b])):
                    report.add("decomposition is not reductive: [k, m] not in m")
        if not m.contains_subspace(delta):
            report.add("delta is not contained in m")
        seed = subspace_sum(n, [delta, k])
        if lie_closure(g, seed).dim != n:
            report.add("delta (with k) is not bracket generating")

        if self.grading is not None:
            report = report.merged(self._validate_grading())
        if self.representation is not None:
            report = report.merged(self._validate_representation())
        return report

    def _validate_grading(self):
        report = ValidationReport()
        g = self.algebra
        n = g.dim
        layers = self.grading
        if subspace_sum(n, layers) != subspace_sum(n, [self.m]):
            report.add("grading layers do not span m")
        if layers[0] != Subspace(n, self.delta.basis.copy()) and layers[0] != self.delta:
            report.add("first grading layer must equal delta")
        s = len(layers)
        for i, layer in enumerate(layers):
            brackets = []
            for a in range(layers[0].dim):
                for b in range(layer.dim):
                    brackets.append(
                        g.bracket_exact(layers[0].basis[:, a], layer.basis[:, b]).reshape(-1, 1)
                    )
            span = Subspace.span_of_columns(n, np.concatenate(brackets, axis=1))
            if i + 1 < s:
                if span != layers[i + 1]:
                    report.add(f"[g_1, g_{i + 1}] != g_{i + 2}")
            else:
                if span.dim != 0:
                    report.add("[g_1, g_s] != 0")
        if lie_closure(g, layers[0]).dim != sum(l.dim for l in layers):
            report.add("g_1 does not generate the graded part")
        return report

    def _validate_representation(self):
        report = ValidationReport()
        g = self.algebra
        rho = self.representation
        if len(rho) != g.dim:
            report.add("representation must provide one matrix per basis vector")
            return report
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                comm = rho[i] @ rho[j] - rho[j] @ rho[i]
                target = sum(
                    float(g.constants[i, j, k]) * rho[k] for k in range(g.dim)
                )
                if np.max(np.abs(comm - target)) > 1e-10:
                    report.add(f"representation not bracket-compatible at ({i + 1},{j + 1})")
        return report

    def dH(self, p):
        """B^{-1}(p|_delta) in g-coordinates, supported on delta."""
        p = np.asarray(p, dtype=float)
        return self.dmat @ p

    def dH_exact(self, p):
        return exactla.matvec(self.dmat_exact, _as_fraction_vec(p, self.dim))

    def hamiltonian_value(self, p):
        p = np.asarray(p, dtype=float)
        return 0.5 * float(p @ self.dmat @ p)

    def m_coords(self, p):
        """Coordinates of p in the m* basis (pairings with the m-basis)."""
        return self.m_basis_float.T @ np.asarray(p, dtype=float)

    def annihilates_k(self, p, tol=1e-9):
        if self.k.dim == 0:
            return True
        return float(np.max(np.abs(self.k_basis_float.T @ np.asarray(p, dtype=float)))) <= tol
