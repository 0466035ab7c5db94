"""Left-invariant curvature of a metric Lie algebra.

The Levi-Civita connection comes from the Koszul formula, which for
left-invariant fields has no derivative terms; Ricci is contracted from the
full curvature tensor, so one code path serves nilpotent and solvable
(non-unimodular) algebras alike.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exterior import KForm, Metric, form_inner
from .g2core import G2Structure, classify, torsion_forms
from .liealg import LieAlgebra, ce_diff, codifferential, derivation_residual, derivation_space

SOLITON_CUTOFF = 1e-10


def levi_civita(algebra, metric):
    """Connection coefficients Gamma[i, j, k]: nabla_{e_i} e_j = sum_k Gamma[i,j,k] e_k.

    2 <nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y> on basis triples.
    """
    if not metric.positive_definite:
        raise ValueError("metric is not positive definite")
    bg = np.einsum("ijk,km->ijm", algebra.bracket, metric.g)
    k = 0.5 * (bg - np.einsum("jmi->ijm", bg) + np.einsum("mij->ijm", bg))
    return np.einsum("km,ijm->ijk", metric.inverse, k)


def riemann(algebra, metric):
    """Curvature R[i,j,k,l]: R(e_i,e_j)e_k = sum_l R[i,j,k,l] e_l,
    with R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_{[X,Y]}."""
    gamma = levi_civita(algebra, metric)
    first = np.einsum("jkm,iml->ijkl", gamma, gamma)
    return (first - np.transpose(first, (1, 0, 2, 3))
            - np.einsum("ijm,mkl->ijkl", algebra.bracket, gamma))


def ricci(algebra, metric):
    """Ricci as a symmetric bilinear form (matrix in the e_i basis)."""
    R = riemann(algebra, metric)
    ric = np.einsum("ijki->jk", R)
    return (ric + ric.T) / 2.0


def ricci_operator(algebra, metric):
    return metric.inverse @ ricci(algebra, metric)


def scalar_curvature(algebra, metric):
    return float(np.trace(ricci_operator(algebra, metric)))


def einstein_residual(algebra, metric):
    """Spectral norm of Ric - (Scal/n) g; zero exactly for Einstein metrics."""
    ric = ricci(algebra, metric)
    scal = float(np.trace(metric.inverse @ ric))
    return float(np.linalg.norm(ric - (scal / algebra.dim) * metric.g, ord=2))


def scal_from_torsion(structure):
    """Scalar curvature from the torsion forms:
    12 delta(tau1) + 21/8 tau0^2 + 30 |tau1|^2 - 1/2 |tau2|^2 - 1/2 |tau3|^2.
    """
    t = torsion_forms(structure)
    g = structure.metric
    delta_tau1 = codifferential(structure.algebra, g, t.tau1).coefficient(())
    return (12.0 * delta_tau1
            + (21.0 / 8.0) * t.tau0 ** 2
            + 30.0 * form_inner(g, t.tau1, t.tau1)
            - 0.5 * form_inner(g, t.tau2, t.tau2)
            - 0.5 * form_inner(g, t.tau3, t.tau3))


def _sqrt_spd(g):
    w, v = np.linalg.eigh(g)
    if np.any(w <= 0):
        raise ValueError("matrix is not positive definite")
    return (v * np.sqrt(w)) @ v.T, (v / np.sqrt(w)) @ v.T


def _dense_3form(form):
    t = np.zeros((7, 7, 7))
    for (i, j, k), c in form.items():
        for (a, b, d), s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                             ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            t[a - 1, b - 1, d - 1] = s * c
    return t


def star_ricci(structure):
    """Star-Ricci tensor: contraction of Riemann with two copies of phi in a
    g-orthonormal frame, returned as a bilinear form in the e_i basis."""
    g = structure.metric
    s, s_inv = _sqrt_spd(g.g)
    r = riemann(structure.algebra, g)
    r4 = np.einsum("ijkm,ml->ijkl", r, g.g)
    r4f = np.einsum("ia,jb,kc,ld,ijkl->abcd", s_inv, s_inv, s_inv, s_inv, r4)
    phif = np.einsum("ia,jb,kc,ijk->abc", s_inv, s_inv, s_inv, _dense_3form(structure.phi))
    ric_f = np.einsum("ijkl,ijs,klm->sm", r4f, phif, phif)
    ric_f = (ric_f + ric_f.T) / 2.0
    return s @ ric_f @ s


def star_scal(structure):
    return float(np.trace(structure.metric.inverse @ star_ricci(structure)))


def star_einstein_residual(structure):
    """|| Ric* - (Scal*/7) g ||, the obstruction to the star-Einstein condition."""
    ric = star_ricci(structure)
    scal = float(np.trace(structure.metric.inverse @ ric))
    return float(np.linalg.norm(ric - (scal / 7.0) * structure.metric.g, ord=2))


@dataclass(frozen=True)
class SolitonCertificate:
    """Best decomposition Ric = lambda I + D with D a derivation.

    `residual` is the Frobenius distance of the Ricci operator to the affine
    space lambda I + Der; a certificate with tiny residual exhibits an
    algebraic Ricci soliton.
    """
    lam: float
    derivation: np.ndarray
    residual: float
    classification: str

    @property
    def derivation_diagonal(self):
        return np.diag(self.derivation).copy()


def soliton_solve(algebra, metric, cutoff=SOLITON_CUTOFF):
    """Least-squares solve of Ric = lambda I + D over span{I} + derivations.

    Rank deficiency (abelian algebras, where I itself is a derivation) is
    resolved by the minimum-norm solution.
    """
    n = algebra.dim
    ric_op = ricci_operator(algebra, metric)
    ders = derivation_space(algebra, cutoff=cutoff)
    cols = [np.eye(n).reshape(-1)] + [d.reshape(-1) for d in ders]
    A = np.column_stack(cols)
    x, *_ = np.linalg.lstsq(A, ric_op.reshape(-1), rcond=cutoff)
    lam = float(x[0])
    D = sum((c * d for c, d in zip(x[1:], ders)), np.zeros((n, n)))
    residual = float(np.linalg.norm(ric_op - lam * np.eye(n) - D))
    scale = max(1.0, float(np.linalg.norm(ric_op)))
    if abs(lam) <= 1e-10 * scale:
        label = "steady"
    elif lam < 0:
        label = "expanding"
    else:
        label = "shrinking"
    return SolitonCertificate(lam, D, residual, label)


def einstein_calibrated_residual(structure, tol=1e-8):
    """Residual of d tau2 = 3/14 |tau2|^2 phi + 1/2 star(tau2 ^ tau2).

    Defined for calibrated structures only; vanishing is equivalent to the
    induced metric being Einstein.
    """
    t = torsion_forms(structure)
    cls = classify(t, tol=tol)
    if not (cls.tau0_zero and cls.tau1_zero and cls.tau3_zero):
        raise ValueError("structure is not calibrated (closed)")
    g = structure.metric
    d_tau2 = ce_diff(structure.algebra, t.tau2)
    rhs = ((3.0 / 14.0) * form_inner(g, t.tau2, t.tau2)) * structure.phi \
        + 0.5 * structure.star(t.tau2.wedge(t.tau2))
    diff = d_tau2 - rhs
    return float(np.sqrt(max(form_inner(g, diff, diff), 0.0)))


def rank_one_extension(algebra, D, tol=1e-10):
    """Extend by one dimension with the new generator acting by the derivation D.

    The dual structure equations gain transport terms against e^{n+1}:
    d e^i += sum_j D_ij e^j ^ e^{n+1}, and d e^{n+1} = 0.
    """
    D = np.asarray(D, dtype=float)
    n = algebra.dim
    if D.shape != (n, n):
        raise ValueError(f"derivation must be {n}x{n}")
    res = derivation_residual(algebra, D)
    if res > tol:
        raise ValueError(f"matrix is not a derivation (residual {res:.3e})")
    duals = []
    for i in range(n):
        form = algebra.dual_differential[i].embed(n + 1)
        transport = KForm(n + 1, 2, {(j + 1, n + 1): D[i, j] for j in range(n) if D[i, j] != 0.0})
        duals.append(form + transport)
    duals.append(KForm.zero(n + 1, 2))
    name = f"{algebra.name}+R" if algebra.name else None
    return LieAlgebra(duals, name=name)
