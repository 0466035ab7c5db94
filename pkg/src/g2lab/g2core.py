"""G2-structures on 7-dimensional Lie algebras.

A positive 3-form phi determines a metric through
    g(X, Y) dV = 1/6 iota_X phi ^ iota_Y phi ^ phi,
inverted here as g = (36 det B)^{-1/9} B where B_ij is the e^{1..7}
coefficient of iota_i phi ^ iota_j phi ^ phi.  The torsion of the structure
is read off from d phi and d star(phi) by least squares over the invariant
2- and 3-form subspaces.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exterior import (KForm, Metric, complement_data, compound_matrix, hodge_star,
                       index_positions, multi_indices, sort_with_sign, standard_volume,
                       wedge, wedge_matrix)
from .liealg import ce_diff

VANISH_TOL = 1e-8


class PositivityError(ValueError):
    """Raised when a 3-form does not define a positive definite metric."""


class TorsionSolveError(RuntimeError):
    """Raised when the two torsion equations disagree about tau1."""


@lru_cache(maxsize=None)
def _b_contraction_table():
    # COO table: B[i,j] = sum sgn * phi_a phi_b phi_c over basis triples with
    # iota_i e^a ^ iota_j e^b ^ e^c a nonzero multiple of e^{1..7}.
    keys3 = multi_indices(7, 3)
    pos3 = index_positions(7, 3)
    ti, tj, ta, tb, tc, sg = [], [], [], [], [], []
    for i in range(1, 8):
        for ka in keys3:
            if i not in ka:
                continue
            sa = (-1.0) ** ka.index(i)
            ra = tuple(x for x in ka if x != i)
            for j in range(1, 8):
                for kb in keys3:
                    if j not in kb:
                        continue
                    sb = (-1.0) ** kb.index(j)
                    rb = tuple(x for x in kb if x != j)
                    if set(ra) & set(rb):
                        continue
                    kc = tuple(sorted(set(range(1, 8)) - set(ra) - set(rb)))
                    _, s = sort_with_sign(ra + rb + kc)
                    if s == 0:
                        continue
                    ti.append(i - 1)
                    tj.append(j - 1)
                    ta.append(pos3[ka])
                    tb.append(pos3[kb])
                    tc.append(pos3[kc])
                    sg.append(sa * sb * s)
    return (np.array(ti, dtype=np.intp), np.array(tj, dtype=np.intp),
            np.array(ta, dtype=np.intp), np.array(tb, dtype=np.intp),
            np.array(tc, dtype=np.intp), np.array(sg))


def gram_matrix_from_phi(phi_vec):
    """B_ij = coefficient of e^{1..7} in iota_i phi ^ iota_j phi ^ phi."""
    ti, tj, ta, tb, tc, sg = _b_contraction_table()
    flat = np.bincount(ti * 7 + tj, weights=sg * phi_vec[ta] * phi_vec[tb] * phi_vec[tc],
                       minlength=49)
    B = flat.reshape(7, 7)
    return (B + B.T) / 2.0


def _gram_from_complement(comp_gram_low, degree, det_g):
    # Jacobi complementary-minor identity: the degree-k Gram of g^{-1} equals
    # sign(I,Ic) sign(J,Jc) det(g[Jc,Ic]) / det g.
    pos, s = complement_data(7, degree)
    M = comp_gram_low[np.ix_(pos, pos)]
    return (s[:, None] * s[None, :]) * M / det_g


class G2Structure:
    """A positive 3-form with its derived metric, volume and Hodge data.

    The form fixes the metric through B/6 = sqrt(det g) g relative to
    epsilon e^{1..7} with epsilon = sign(det B), so g = (36 |det B|)^{-1/9}
    epsilon B.  Forms of either orientation are accepted (only a degenerate
    or indefinite B is rejected); `orientation` records epsilon.  The volume
    form and the Hodge star are always taken positively oriented on
    e^{1..7}, which is the convention the torsion conventions below assume.

    All caches (metric, Gram matrices of degrees 2..5, star of phi) are
    computed at construction; instances are immutable and shareable.
    """

    __slots__ = ("algebra", "phi", "metric", "volume", "gram_det", "b_matrix",
                 "orientation", "star_phi", "_phi_vec", "_star_phi_vec", "_grams")

    def __init__(self, algebra, phi):
        if algebra.dim != 7:
            raise ValueError("G2 structures need a 7-dimensional algebra")
        if phi.dim != 7 or phi.degree != 3:
            raise ValueError("phi must be a 3-form in dimension 7")
        v = phi.to_vector()
        B = gram_matrix_from_phi(v)
        det_b = float(np.linalg.det(B))
        if det_b == 0:
            raise PositivityError("not a positive G2 form (det B = 0)")
        eps = 1.0 if det_b > 0 else -1.0
        metric = Metric((36.0 * abs(det_b)) ** (-1.0 / 9.0) * eps * B)
        if not metric.positive_definite:
            raise PositivityError("not a positive G2 form (metric not positive definite)")
        grams = {
            2: compound_matrix(metric.inverse, 2),
            3: compound_matrix(metric.inverse, 3),
            4: _gram_from_complement(compound_matrix(metric.g, 3), 4, metric.det),
            5: _gram_from_complement(compound_matrix(metric.g, 2), 5, metric.det),
        }
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "volume", metric.sqrt_det * standard_volume(7))
        object.__setattr__(self, "gram_det", det_b)
        object.__setattr__(self, "b_matrix", B)
        object.__setattr__(self, "orientation", eps)
        object.__setattr__(self, "_phi_vec", v)
        object.__setattr__(self, "_grams", grams)
        spv = self.star_vec(v, 3)
        object.__setattr__(self, "_star_phi_vec", spv)
        object.__setattr__(self, "star_phi", KForm.from_vector(7, 4, spv))

    def __setattr__(self, name, value):
        raise AttributeError("G2Structure is immutable")

    def star_vec(self, vec, degree):
        """Fast Hodge star on coefficient vectors for degrees 2..5."""
        gram = self._grams[degree]
        pos, s = complement_data(7, degree)
        out = np.empty(len(pos))
        out[pos] = s * (self.metric.sqrt_det * (gram @ vec))
        return out

    def star(self, a):
        """Hodge star in this structure's metric and orientation."""
        if a.degree in self._grams:
            return KForm.from_vector(7, 7 - a.degree, self.star_vec(a.to_vector(), a.degree))
        return hodge_star(self.metric, a)

    def d(self, a):
        return ce_diff(self.algebra, a)

    def inner(self, a, b):
        gram = self._grams.get(a.degree)
        if gram is not None and b.degree == a.degree:
            return float(a.to_vector() @ gram @ b.to_vector())
        from .exterior import form_inner
        return form_inner(self.metric, a, b)

    def norm(self, a):
        return float(np.sqrt(max(self.inner(a, a), 0.0)))

    def laplacian_vec(self):
        """Coefficient vector of the Hodge Laplacian of phi (degree 3)."""
        L = self.algebra
        v = self._phi_vec
        d2, d3, d4 = L.diff_matrix(2), L.diff_matrix(3), L.diff_matrix(4)
        delta_phi = -self.star_vec(d4 @ self.star_vec(v, 3), 5)
        delta_dphi = self.star_vec(d3 @ self.star_vec(d3 @ v, 4), 4)
        return d2 @ delta_phi + delta_dphi

    def __repr__(self):
        return f"G2Structure(algebra={self.algebra!r}, det_B={self.gram_det:.6g})"


def metric_from_phi(algebra, phi):
    """Build the G2Structure of a positive 3-form; raises PositivityError otherwise."""
    return G2Structure(algebra, phi)


def lambda2_14_basis(structure):
    """Orthonormal basis (as columns) of {alpha in Lambda^2 : alpha ^ star(phi) = 0}."""
    mat = wedge_matrix(7, 2, 4, structure._star_phi_vec)
    return _null_space(mat)


def lambda3_27_basis(structure):
    """Orthonormal basis of {beta in Lambda^3 : beta ^ phi = 0, beta ^ star(phi) = 0}."""
    top = wedge_matrix(7, 3, 3, structure._phi_vec)
    bottom = wedge_matrix(7, 3, 4, structure._star_phi_vec)
    return _null_space(np.vstack([top, bottom]))


def _null_space(mat, rcond=1e-10):
    _, s, vh = np.linalg.svd(mat)
    smax = s[0] if s.size else 0.0
    rank = int((s > rcond * max(smax, 1.0)).sum())
    return vh[rank:].T


@dataclass(frozen=True)
class TorsionForms:
    """Torsion components of d phi = tau0 star(phi) + 3 tau1 ^ phi + star(tau3)
    and d star(phi) = 4 tau1 ^ star(phi) + tau2 ^ phi."""
    tau0: float
    tau1: KForm
    tau2: KForm
    tau3: KForm
    residual: float
    tau1_consistency: float = 0.0


def torsion_forms(structure, tau1_tol=1e-8):
    """Extract (tau0, tau1, tau2, tau3) by least squares over invariant subspaces.

    The two equations each determine tau1; a disagreement beyond `tau1_tol`
    means the input did not come from a positive G2 form and raises
    TorsionSolveError.
    """
    G = structure
    dphi = G.d(G.phi)
    dstar = G.d(G.star_phi)

    basis14 = lambda2_14_basis(G)
    basis27 = lambda3_27_basis(G)

    e_wedge_phi = np.column_stack(
        [wedge(KForm.basis(7, (i,)), G.phi).to_vector() for i in range(1, 8)])
    star27 = np.column_stack([G.star_vec(basis27[:, j], 3) for j in range(basis27.shape[1])])
    A1 = np.column_stack([G._star_phi_vec, 3.0 * e_wedge_phi, star27])
    b1 = dphi.to_vector()
    x, *_ = np.linalg.lstsq(A1, b1, rcond=None)

    e_wedge_star = np.column_stack(
        [wedge(KForm.basis(7, (i,)), G.star_phi).to_vector() for i in range(1, 8)])
    phi_wedge = wedge_matrix(7, 2, 3, G._phi_vec)
    A2 = np.column_stack([4.0 * e_wedge_star, phi_wedge @ basis14])
    b2 = dstar.to_vector()
    y, *_ = np.linalg.lstsq(A2, b2, rcond=None)

    tau1_mismatch = float(np.linalg.norm(x[1:8] - y[:7]))
    if tau1_mismatch > tau1_tol:
        raise TorsionSolveError(
            f"tau1 disagrees between the two torsion equations by {tau1_mismatch:.3e}")

    tau0 = float(x[0])
    tau1 = KForm.from_vector(7, 1, x[1:8])
    tau3 = KForm.from_vector(7, 3, basis27 @ x[8:])
    tau2 = KForm.from_vector(7, 2, basis14 @ y[7:])
    residual = max(float(np.linalg.norm(A1 @ x - b1)), float(np.linalg.norm(A2 @ y - b2)))
    return TorsionForms(tau0, tau1, tau2, tau3, residual, tau1_mismatch)


def lee_form(structure):
    """Lee form theta = -1/4 star(star(d phi) ^ phi); equals 3 tau1."""
    G = structure
    inner = wedge(G.star(G.d(G.phi)), G.phi)
    return -0.25 * G.star(inner)


@dataclass(frozen=True)
class G2Class:
    """Vanishing pattern of the four torsion forms with the derived labels."""
    tau0_zero: bool
    tau1_zero: bool
    tau2_zero: bool
    tau3_zero: bool
    label: str
    labels: tuple

    @property
    def torsion_free(self):
        return self.tau0_zero and self.tau1_zero and self.tau2_zero and self.tau3_zero


_CLASS_TABLE = (
    # (label, which torsion forms must vanish)
    ("nearly parallel", (False, True, True, True)),
    ("closed, calibrated", (True, True, False, True)),
    ("locally conformal parallel", (True, False, True, True)),
    ("coclosed, cocalibrated", (False, True, True, False)),
    ("locally conformal calibrated", (True, False, False, True)),
)


def classify(torsion, tol=VANISH_TOL):
    """Classify from the torsion forms: vanishing flags plus type labels.

    `labels` records every matching row of the class table (the classes are
    nested); `label` is the most specific one, or "generic"/"torsion-free".
    """
    flags = (abs(torsion.tau0) <= tol,
             torsion.tau1.norm() <= tol,
             torsion.tau2.norm() <= tol,
             torsion.tau3.norm() <= tol)
    if all(flags):
        return G2Class(*flags, label="torsion-free",
                       labels=("torsion-free",) + tuple(name for name, _ in _CLASS_TABLE))
    matching = tuple(name for name, req in _CLASS_TABLE
                     if all(f for f, needed in zip(flags, req) if needed))
    label = matching[0] if matching else "generic"
    return G2Class(*flags, label=label, labels=matching or ("generic",))
