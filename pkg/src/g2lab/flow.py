"""Hodge Laplacian and the Laplacian flow d/dt phi = Delta phi on closed forms.

The integrator is a fixed-step classical 4th-order Runge-Kutta scheme on
the 35 coefficients of phi, with positivity and closedness re-validated
after every accepted step.  No re-projection onto closed forms is done:
drift is monitored and aborts the trajectory instead of being hidden.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .exterior import KForm, multi_indices
from .g2core import G2Structure, PositivityError, torsion_forms
from .curvature import scalar_curvature

MAX_STEPS = 10_000_000

TERMINATION_REACHED = "reached_t_end"
TERMINATION_POSITIVITY = "positivity_lost"
TERMINATION_CLOSEDNESS = "closedness_violated"

#: Column order of trajectory CSV files: time, the 35 coefficients of phi in
#: lexicographic multi-index order, then the diagnostics.
CSV_COLUMNS = (("t",)
               + tuple("phi_" + "".join(map(str, key)) for key in multi_indices(7, 3))
               + ("closedness", "tau2_norm", "scalar_curvature", "volume_density",
                  "laplacian_norm"))


def hodge_laplacian(structure):
    """Delta phi = d delta phi + delta d phi in the metric of the structure."""
    return KForm.from_vector(7, 3, structure.laplacian_vec())


@dataclass(frozen=True)
class FlowOptions:
    sample_every: int = 10
    closedness_tol: float = 1e-8
    max_steps: int = MAX_STEPS


@dataclass(frozen=True)
class FlowState:
    t: float
    phi: KForm
    diagnostics: dict


@dataclass(frozen=True)
class FlowTrajectory:
    states: list
    termination: str

    @property
    def times(self):
        return [s.t for s in self.states]

    @property
    def final(self):
        return self.states[-1]

    def to_csv(self, path):
        """Write sampled states in the CSV_COLUMNS order."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for state in self.states:
                vec = state.phi.to_vector()
                d = state.diagnostics
                writer.writerow([repr(state.t)] + [repr(float(c)) for c in vec]
                                + [repr(float(d[k])) for k in CSV_COLUMNS[36:]])


def _diagnostics(algebra, vec, structure=None):
    G = structure if structure is not None else G2Structure(algebra, KForm.from_vector(7, 3, vec))
    t = torsion_forms(G)
    return {
        "closedness": float(np.linalg.norm(algebra.diff_matrix(3) @ vec)),
        "tau2_norm": G.norm(t.tau2),
        "scalar_curvature": scalar_curvature(algebra, G.metric),
        "volume_density": G.metric.sqrt_det,
        "laplacian_norm": float(np.linalg.norm(G.laplacian_vec())),
    }


def flow_integrate(algebra, phi0, t_end, dt, options=FlowOptions()):
    """Integrate the Laplacian flow from a closed positive 3-form.

    Returns a FlowTrajectory of sampled states (every `sample_every` steps,
    plus the initial and final ones).  Loss of positivity or excessive
    closedness drift truncates the trajectory with the corresponding
    termination reason instead of raising.
    """
    if algebra.dim != 7:
        raise ValueError("the flow runs on 7-dimensional algebras")
    if t_end <= 0 or dt <= 0:
        raise ValueError("t_end and dt must be positive")
    n_steps = max(1, math.ceil(t_end / dt - 1e-12))
    if n_steps > options.max_steps:
        raise ValueError(f"{n_steps} steps exceed the cap of {options.max_steps}")

    vec = phi0.to_vector()
    d3 = algebra.diff_matrix(3)
    initial_residual = float(np.linalg.norm(d3 @ vec))
    if initial_residual > 1e-10:
        raise ValueError(f"initial form is not closed (||d phi0|| = {initial_residual:.3e})")
    G0 = G2Structure(algebra, phi0)  # raises PositivityError if phi0 is not positive
    drift_limit = max(10.0 * initial_residual, options.closedness_tol)

    def rhs(v):
        return G2Structure(algebra, KForm.from_vector(7, 3, v)).laplacian_vec()

    states = [FlowState(0.0, phi0, _diagnostics(algebra, vec, G0))]
    termination = TERMINATION_REACHED
    t = 0.0
    for step in range(1, n_steps + 1):
        h = min(dt, t_end - t)
        try:
            k1 = rhs(vec)
            k2 = rhs(vec + 0.5 * h * k1)
            k3 = rhs(vec + 0.5 * h * k2)
            k4 = rhs(vec + h * k3)
            new_vec = vec + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            G = G2Structure(algebra, KForm.from_vector(7, 3, new_vec))
        except PositivityError:
            termination = TERMINATION_POSITIVITY
            break
        closedness = float(np.linalg.norm(d3 @ new_vec))
        if closedness > drift_limit:
            termination = TERMINATION_CLOSEDNESS
            break
        vec = new_vec
        t += h
        if step % options.sample_every == 0 or step == n_steps:
            states.append(FlowState(t, G.phi, _diagnostics(algebra, vec, G)))
    if termination != TERMINATION_REACHED and states[-1].t < t:
        states.append(FlowState(t, KForm.from_vector(7, 3, vec), _diagnostics(algebra, vec)))
    return FlowTrajectory(states, termination)


def _check_interval(t, lower, label):
    if t <= lower:
        raise ValueError(f"t = {t} outside the existence interval ({lower}, +inf) of {label}")


_N2_CONSTANT = {(1, 4, 7): 1.0, (2, 6, 7): 1.0, (3, 5, 7): 1.0,
                (1, 5, 6): 1.0, (2, 4, 5): 1.0, (3, 4, 6): -1.0}

_N12_CONSTANT = {(1, 2, 4): -1.0, (1, 6, 7): 1.0, (2, 5, 7): 1.0,
                 (3, 4, 7): 1.0, (4, 5, 6): -1.0}


def closed_form_n2(t):
    """Exact flow solution on the complex-Heisenberg-times-line algebra:
    only the e^{123} coefficient moves, as (10/3 t + 1)^{3/5}; t > -3/10."""
    _check_interval(t, -0.3, "the n2 solution")
    coeffs = dict(_N2_CONSTANT)
    coeffs[(1, 2, 3)] = (10.0 * t / 3.0 + 1.0) ** 0.6
    return KForm(7, 3, coeffs)


def closed_form_n2_velocity(t):
    """Analytic time derivative of closed_form_n2."""
    _check_interval(t, -0.3, "the n2 solution")
    return KForm(7, 3, {(1, 2, 3): 2.0 * (10.0 * t / 3.0 + 1.0) ** (-0.4)})


def closed_form_n12(t):
    """Exact flow solution in the modified basis: the e^{135} - e^{236}
    component scales as (t/3 + 1)^{3/4}; t > -3."""
    _check_interval(t, -3.0, "the n12 solution")
    a = (t / 3.0 + 1.0) ** 0.75
    coeffs = dict(_N12_CONSTANT)
    coeffs[(1, 3, 5)] = a
    coeffs[(2, 3, 6)] = -a
    return KForm(7, 3, coeffs)


def closed_form_n12_velocity(t):
    """Analytic time derivative of closed_form_n12."""
    _check_interval(t, -3.0, "the n12 solution")
    a = 0.25 * (t / 3.0 + 1.0) ** (-0.25)
    return KForm(7, 3, {(1, 3, 5): a, (2, 3, 6): -a})


def oracle_residual(algebra, solution, velocity, times):
    """sup-norm residuals || d/dt phi(t) - Delta phi(t) || at the given times."""
    out = {}
    for t in times:
        phi = solution(t)
        lap = hodge_laplacian(G2Structure(algebra, phi))
        out[t] = (velocity(t) - lap).sup_norm()
    return out
