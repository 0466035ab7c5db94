"""Lie algebras given by the differentials of dual basis 1-forms.

An algebra is specified by d e^1, ..., d e^n (2-forms); the bracket is
recovered from d alpha(X, Y) = -alpha([X, Y]).  Sign convention:
d e^k = sum_{i<j} c^k_{ij} e^{ij} corresponds to [e_i, e_j] = -sum_k c^k_{ij} e_k.

Differentials of all basis forms are precomputed per algebra at
construction, so instances carry read-only caches and stay shareable.
"""
from __future__ import annotations

import numpy as np

from .exterior import KForm, Metric, hodge_star, multi_indices


class LieAlgebra:
    __slots__ = ("dim", "dual_differential", "bracket", "name", "_diff")

    def __init__(self, dual_differential, name=None):
        duals = tuple(dual_differential)
        n = len(duals)
        if n == 0:
            raise ValueError("empty structure data")
        for i, form in enumerate(duals):
            if form.dim != n or form.degree != 2:
                raise ValueError(f"d e{i + 1} must be a 2-form in dimension {n}")
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "dual_differential", duals)
        object.__setattr__(self, "name", name)

        bracket = np.zeros((n, n, n))
        for k, form in enumerate(duals):
            for (i, j), c in form.items():
                bracket[i - 1, j - 1, k] -= c
                bracket[j - 1, i - 1, k] += c
        bracket.setflags(write=False)
        object.__setattr__(self, "bracket", bracket)

        diff = [self._build_diff_matrix(k) for k in range(n + 1)]
        object.__setattr__(self, "_diff", tuple(diff))

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    def _d_basis(self, key):
        # Leibniz: d e^{i1..ik} = sum_m (-1)^{m-1} e^{<m} ^ de^{im} ^ e^{>m};
        # de^{im} has even degree, so it can be pulled to the front.
        n = self.dim
        out = KForm.zero(n, len(key) + 1)
        for m, i in enumerate(key):
            rest = key[:m] + key[m + 1:]
            term = self.dual_differential[i - 1]
            if rest:
                term = term.wedge(KForm.basis(n, rest))
            out = out + ((-1.0) ** m) * term
        return out

    def _build_diff_matrix(self, k):
        n = self.dim
        keys = multi_indices(n, k)
        rows = len(multi_indices(n, k + 1))
        mat = np.zeros((rows, len(keys)))
        if k > 0:
            for col, key in enumerate(keys):
                mat[:, col] = self._d_basis(key).to_vector()
        mat.setflags(write=False)
        return mat

    def diff_matrix(self, degree):
        """Matrix of the differential on degree-`degree` coefficient vectors."""
        return self._diff[degree]

    def d(self, a):
        return ce_diff(self, a)

    def bracket_vectors(self, x, y):
        """[x, y] for coefficient vectors over the basis."""
        return np.einsum("ijk,i,j->k", self.bracket, np.asarray(x, float),
                         np.asarray(y, float))

    def is_unimodular(self, tol=1e-12):
        traces = np.einsum("ijj->i", self.bracket)
        return bool(np.all(np.abs(traces) <= tol))

    def lower_central_series_dims(self, tol=1e-10):
        """Dimensions of g >= [g,g] >= [g,[g,g]] >= ... until it stabilizes."""
        n = self.dim
        current = np.eye(n)
        dims = [n]
        while True:
            prods = np.einsum("ijk,ja->iak", self.bracket, current).reshape(n * current.shape[1], n)
            s = np.linalg.svd(prods, compute_uv=False) if prods.size else np.zeros(0)
            rank = int((s > tol * max(1.0, s[0] if s.size else 1.0)).sum())
            if rank == 0:
                dims.append(0)
                break
            basis = np.linalg.svd(prods, full_matrices=False)[2][:rank].T
            dims.append(rank)
            if rank == dims[-2]:
                break
            current = basis
        return dims

    def __repr__(self):
        label = self.name or f"dim={self.dim}"
        return f"LieAlgebra({label})"


def ce_diff(algebra, a):
    """Chevalley-Eilenberg differential; linear, Leibniz, d^2 = 0 iff Jacobi."""
    if a.dim != algebra.dim:
        raise ValueError(f"dimension mismatch: algebra {algebra.dim}, form {a.dim}")
    if a.degree >= algebra.dim:
        return KForm.zero(a.dim, a.degree + 1)
    return KForm.from_vector(a.dim, a.degree + 1, algebra.diff_matrix(a.degree) @ a.to_vector())


def jacobi_residual(algebra):
    """max_i || d(d e^i) ||; zero (to roundoff) exactly when Jacobi holds."""
    return max(ce_diff(algebra, de).norm() for de in algebra.dual_differential)


def codifferential(algebra, metric, a):
    """delta = (-1)^k star^{-1} d star on k-forms; 0-forms map to zero."""
    if a.degree == 0:
        return KForm.zero(a.dim, 0)
    n, k = a.dim, a.degree
    da = ce_diff(algebra, hodge_star(metric, a))
    p = n - k + 1
    inv_sign = (-1.0) ** (p * (n - p))
    return ((-1.0) ** k) * inv_sign * hodge_star(metric, da)


def derivation_residual(algebra, D):
    """max over basis pairs of || D[x,y] - [Dx,y] - [x,Dy] ||."""
    D = np.asarray(D, dtype=float)
    B = algebra.bracket
    lhs = np.einsum("ijm,km->ijk", B, D)
    rhs = np.einsum("mi,mjk->ijk", D, B) + np.einsum("mj,imk->ijk", D, B)
    return float(np.max(np.linalg.norm(lhs - rhs, axis=2)))


def derivation_space(algebra, cutoff=1e-10):
    """Orthonormal basis of the space of derivations, as n x n matrices.

    The derivation equations are linear in the entries of D; the basis is the
    SVD null space with relative singular-value cutoff `cutoff`.
    """
    n = algebra.dim
    B = algebra.bracket
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    eqs = np.zeros((len(pairs) * n, n * n))
    for r, (i, j) in enumerate(pairs):
        for k in range(n):
            row = np.zeros((n, n))
            row[k, :] += B[i, j, :]          # D[x,y] term: c^m_{ij} D_{km}
            row[:, i] -= B[:, j, k]          # [Dx,y] term: D_{mi} c^k_{mj}
            row[:, j] -= B[i, :, k]          # [x,Dy] term: D_{mj} c^k_{im}
            eqs[r * n + k] = row.reshape(-1)
    _, s, vh = np.linalg.svd(eqs)
    smax = s[0] if s.size else 0.0
    rank = int((s > cutoff * max(smax, 1.0)).sum())
    return [vh[m].reshape(n, n) for m in range(rank, vh.shape[0])]
