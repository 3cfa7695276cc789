"""b-Hamilton flow, radial set, linearization and non-trapping sampling.

With fiber coordinates ``(xi, gamma, eta)`` dual to ``(d rho/rho, dv, dy)``
the symplectic form is ``d xi ^ d rho/rho + d gamma ^ dv + d eta ^ dy`` and
the Hamilton vector field of the quadratic symbol ``lambda = zeta.G.zeta`` is

    H = (dl/dxi) rho d_rho + (dl/dgamma) d_v + (dl/deta) . d_y
        - (rho d_rho lambda) d_xi - (d_v lambda) d_gamma - (d_y lambda) . d_eta .

The radial set sits at fiber infinity over the corner:
``{rho = 0, v = 0, xi = 0, eta = 0}``.  Near it we use the compactified fiber
chart ``nu = 1/gamma, xi_hat = xi/gamma, eta_hat = eta/gamma`` and the
rescaled field ``nu * H``, whose coefficients in terms of
``Q(rho, v, y, xi_hat, eta_hat) = lambda(xi_hat, 1, eta_hat)`` are

    rho'     = (dQ/dxi_hat) rho
    v'       = 2 Q - xi_hat dQ/dxi_hat - eta_hat . dQ/deta_hat
    y'       = dQ/deta_hat
    nu'      = nu dQ/dv
    xi_hat'  = -rho dQ/drho + xi_hat dQ/dv
    eta_hat' = -dQ/dy + eta_hat dQ/dv .

Its linearization at the radial set has eigenvalues {-8, -4, 0}; for m != 0
the -4 eigenvalue is defective, with a Jordan block spanned by the d(rho) and
d(xi_hat) covectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import DOP853

from .geometry import (
    CotangentPoint,
    MetricModel,
    b_symbol,
    dual_metric_gradient,
    dual_metric_matrix,
)
from .numdiff import jacobian

__all__ = [
    "Bicharacteristic",
    "IntegrationFailure",
    "LinearizationReport",
    "NontrappingReport",
    "check_nontrapping",
    "halton_sequence",
    "hamilton_vector",
    "linearization",
    "null_seeds",
    "radial_distance",
    "trace_bicharacteristic",
    "write_trajectory_csv",
]

GAMMA_SWITCH = 1.0e3  # handoff threshold to compactified fiber coordinates


class IntegrationFailure(RuntimeError):
    """Integrator could not continue (step-size underflow or solver error)."""


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


def hamilton_vector(model: MetricModel, p: CotangentPoint) -> np.ndarray:
    """Coefficients of H over (rho d_rho, d_v, d_y.., d_xi, d_gamma, d_eta..).

    Fiber-slot coefficients use exact base derivatives of the symbol obtained
    by analytic continuation of the model coefficients (no finite
    differencing).
    """
    G, grads = dual_metric_gradient(model, p.rho, p.v, p.y)
    zeta = p.fiber
    base = 2.0 * (G @ zeta)  # (a, b, c..): derivatives in (xi, gamma, eta)
    dlam = np.array([zeta @ g @ zeta for g in grads])  # d lambda / d(rho, v, y..)
    fiber = np.concatenate(([-p.rho * dlam[0]], -dlam[1:]))
    return np.concatenate((base, fiber))


def _rhs_standard(model: MetricModel, z: np.ndarray) -> np.ndarray:
    """Flow RHS in (rho, v, y.., xi, gamma, eta..)."""
    na = model.nang
    rho, v, y = z[0], z[1], z[2 : 2 + na]
    zeta = z[2 + na :]
    G, grads = dual_metric_gradient(model, rho, v, y)
    base = 2.0 * (G @ zeta)
    dlam = np.array([zeta @ g @ zeta for g in grads])
    out = np.empty_like(z)
    out[0] = base[0] * rho
    out[1] = base[1]
    out[2 : 2 + na] = base[2:]
    out[2 + na] = -rho * dlam[0]
    out[3 + na] = -dlam[1]
    out[4 + na :] = -dlam[2:]
    return out


def _rhs_compactified(model: MetricModel, z: np.ndarray, orient: float) -> np.ndarray:
    """Rescaled flow RHS in (rho, v, y.., nu, xi_hat, eta_hat..).

    ``orient`` carries the sign of nu at handoff so that forward parameter
    continues the same orbit direction.
    """
    na = model.nang
    rho, v, y = z[0], z[1], z[2 : 2 + na]
    nu = z[2 + na]
    xh = z[3 + na]
    eh = z[4 + na :]
    G, grads = dual_metric_gradient(model, rho, v, y)
    zhat = np.concatenate(([xh, 1.0], eh))
    Q = float(zhat @ G @ zhat)
    gQ = 2.0 * (G @ zhat)                      # (dQ/dxi_hat, *, dQ/deta_hat..)
    dQ = np.array([zhat @ g @ zhat for g in grads])  # d/d(rho, v, y..)
    out = np.empty_like(z)
    out[0] = gQ[0] * rho
    out[1] = 2.0 * Q - xh * gQ[0] - float(eh @ gQ[2:])
    out[2 : 2 + na] = gQ[2:]
    out[2 + na] = nu * dQ[1]
    out[3 + na] = -rho * dQ[0] + xh * dQ[1]
    out[4 + na :] = -dQ[2:] + eh * dQ[1]
    return orient * out


def b_symbol_state(model: MetricModel, z: np.ndarray, compactified: bool) -> float:
    """Symbol value from an integration state (lambda = Q/nu^2 when compactified)."""
    na = model.nang
    G = dual_metric_matrix(model, z[0], z[1], z[2 : 2 + na])
    if not compactified:
        zeta = z[2 + na :]
        return float(zeta @ G @ zeta)
    nu = z[2 + na]
    zhat = np.concatenate(([z[3 + na], 1.0], z[4 + na :]))
    Q = float(zhat @ G @ zhat)
    denom = nu * nu
    if denom == 0.0:
        return math.nan
    return Q / denom


def radial_distance(p) -> float:
    """Euclidean distance to the radial set: |(rho, v, xi_hat, eta_hat)|.

    Accepts a CotangentPoint (gamma != 0 required) or a compactified state
    tuple (rho, v, xi_hat, eta_hat..).
    """
    if isinstance(p, CotangentPoint):
        vec = np.concatenate(([p.rho, p.v, p.xi_hat], p.eta_hat))
    else:
        vec = np.asarray(p, dtype=float)
    return float(np.linalg.norm(vec))


# ---------------------------------------------------------------------------
# tracing
# ---------------------------------------------------------------------------


@dataclass
class Bicharacteristic:
    """A traced null bicharacteristic with symbol values along the way."""

    params: np.ndarray
    states: np.ndarray          # rows: (rho, v, y.., nu, xi_hat, eta_hat..) or NaN fiber
    lambdas: np.ndarray
    reason: str                 # reached-radial-set | left-chart | horizon-exhausted
    handoff_index: int          # first sample in compactified coordinates (-1: none)
    nang: int = 2

    @property
    def final_radial_distance(self) -> float:
        z = self.states[-1]
        na = self.nang
        return float(
            np.linalg.norm(np.concatenate((z[:2], [z[3 + na]], z[4 + na :])))
        )

    def monitored_lambda_max(self, nu_floor: float = 1e-3) -> float:
        """Max |lambda| over samples where it is numerically well-defined.

        In compactified coordinates lambda = Q/nu^2 is 0/0 at the radial set,
        so conservation is monitored while |nu| stays above a floor.
        """
        na = self.nang
        vals = []
        for i, z in enumerate(self.states):
            lam = self.lambdas[i]
            if math.isnan(lam):
                continue
            if self.handoff_index >= 0 and i >= self.handoff_index:
                if abs(z[2 + na]) < nu_floor:
                    continue
            vals.append(abs(lam))
        return max(vals) if vals else 0.0


def _state_from_point(p: CotangentPoint, compactified: bool) -> np.ndarray:
    if compactified:
        return np.concatenate(
            ([p.rho, p.v], p.y, [p.nu, p.xi_hat], p.eta_hat)
        )
    return np.concatenate(([p.rho, p.v], p.y, [p.xi, p.gamma], p.eta))


def _in_chart(model: MetricModel, z: np.ndarray) -> bool:
    na = model.nang
    return model.chart.contains(z[0], z[1], z[2 : 2 + na])


def _standard_to_compactified(z: np.ndarray, na: int) -> np.ndarray:
    gamma = z[3 + na]
    out = z.copy()
    out[2 + na] = 1.0 / gamma
    out[3 + na] = z[2 + na] / gamma
    out[4 + na :] = z[4 + na :] / gamma
    return out


def trace_bicharacteristic(
    model: MetricModel,
    p0: CotangentPoint,
    horizon: float = 200.0,
    tol: float = 1e-8,
    direction: float = 1.0,
    null_mode: bool = True,
    radial_tol: float = 1e-6,
    rescaled_horizon: float = 40.0,
    max_step: float = 1.0,
) -> Bicharacteristic:
    """Integrate the flow from p0, switching to compactified fiber coordinates
    when |gamma| exceeds the handoff threshold.

    Termination: the radial set counts as reached after ``radial_distance``
    stays below ``radial_tol`` for 10 consecutive accepted steps; leaving the
    model chart and exhausting the parameter horizon are the other outcomes.
    """
    na = model.nang
    lam0 = b_symbol(model, p0)
    if null_mode and abs(lam0) > max(tol, 1e-10):
        raise ValueError(f"datum is not null: lambda(p0) = {lam0:.3e} exceeds tol")
    if p0.rho < 0:
        raise ValueError("rho must be nonnegative")

    params, states, lams = [], [], []
    handoff = -1

    def record(t, z, compactified):
        if compactified:
            row = z.copy()
        else:
            gamma = z[3 + na]
            row = z.copy()
            if abs(gamma) > 1e-12:
                row = _standard_to_compactified(z, na)
            else:
                row[2 + na :] = np.nan
        params.append(t)
        states.append(row)
        lams.append(b_symbol_state(model, z, compactified))

    start_compactified = abs(p0.gamma) >= GAMMA_SWITCH
    z = _state_from_point(p0, start_compactified)
    record(0.0, z, start_compactified)
    if horizon == 0.0:
        return Bicharacteristic(
            np.array(params), np.array(states), np.array(lams), "horizon-exhausted",
            0 if start_compactified else -1, na,
        )

    t_accum = 0.0
    reason = "horizon-exhausted"

    # phase 1: standard coordinates until the fiber blows up
    if not start_compactified:
        rhs = lambda t, zz: direction * _rhs_standard(model, zz)
        solver = DOP853(rhs, 0.0, z, horizon, rtol=1e-12, atol=1e-14, max_step=max_step)
        while solver.status == "running":
            msg = solver.step()
            if msg is not None and solver.status == "failed":
                raise IntegrationFailure(f"standard-phase step failure: {msg}")
            z = solver.y
            record(solver.t, z, False)
            if not _in_chart(model, z):
                reason = "left-chart"
                return Bicharacteristic(
                    np.array(params), np.array(states), np.array(lams), reason, -1, na
                )
            if abs(z[3 + na]) >= GAMMA_SWITCH:
                break
        t_accum = solver.t
        if solver.status == "finished" and abs(z[3 + na]) < GAMMA_SWITCH:
            return Bicharacteristic(
                np.array(params), np.array(states), np.array(lams),
                "horizon-exhausted", -1, na,
            )
        z = _standard_to_compactified(z, na)

    # phase 2: rescaled field in compactified coordinates
    handoff = len(states)
    orient = direction * math.copysign(1.0, z[2 + na]) if z[2 + na] != 0 else direction
    rhs = lambda t, zz: _rhs_compactified(model, zz, orient)
    solver = DOP853(rhs, 0.0, z, rescaled_horizon, rtol=1e-12, atol=1e-14, max_step=max_step)
    consecutive = 0
    while solver.status == "running":
        msg = solver.step()
        if msg is not None and solver.status == "failed":
            raise IntegrationFailure(f"compactified-phase step failure: {msg}")
        z = solver.y
        record(t_accum + solver.t, z, True)
        if not _in_chart(model, z):
            reason = "left-chart"
            break
        dist = float(
            np.linalg.norm(np.concatenate((z[:2], [z[3 + na]], z[4 + na :])))
        )
        consecutive = consecutive + 1 if dist < radial_tol else 0
        if consecutive >= 10:
            reason = "reached-radial-set"
            break

    return Bicharacteristic(
        np.array(params), np.array(states), np.array(lams), reason, handoff, na
    )


def write_trajectory_csv(traj: Bicharacteristic, path, nang: int = 2):
    """CSV columns: param, rho, v, y.., nu, xi_hat, eta_hat.., lambda."""
    cols = (
        ["param", "rho", "v"]
        + [f"y{i}" for i in range(nang)]
        + ["nu", "xi_hat"]
        + [f"eta_hat{i}" for i in range(nang)]
        + ["lambda"]
    )
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for t, z, lam in zip(traj.params, traj.states, traj.lambdas):
            row = [t, *z, lam]
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


# ---------------------------------------------------------------------------
# linearization at the radial set
# ---------------------------------------------------------------------------


@dataclass
class CovectorCheck:
    label: str
    eigenvalue: float
    residual: float
    passed: bool


@dataclass
class LinearizationReport:
    matrix: np.ndarray
    coordinates: list[str]
    eigenvalues: list[tuple[float, int]]        # (cluster mean, algebraic mult)
    geometric_mult_minus4: int
    algebraic_mult_minus4: int
    jordan_block: bool
    jordan_pairing_residual: float
    covector_checks: list[CovectorCheck]
    step_sweep: list[tuple[float, list[float]]]

    def eigenvalue_near(self, target: float) -> float:
        return min((ev for ev, _ in self.eigenvalues), key=lambda ev: abs(ev - target))

    def lines(self):
        out = ["radial-set linearization"]
        evs = ", ".join(f"{ev:+.10f} (x{k})" for ev, k in self.eigenvalues)
        out.append(f"  eigenvalues: {evs}")
        out.append(
            f"  -4 eigenspace: algebraic {self.algebraic_mult_minus4},"
            f" geometric {self.geometric_mult_minus4},"
            f" Jordan block: {'yes' if self.jordan_block else 'no'}"
        )
        for c in self.covector_checks:
            status = "pass" if c.passed else "FAIL"
            out.append(
                f"  [{status}] covector {c.label}: eigenvalue {c.eigenvalue:+g},"
                f" residual {c.residual:.3e}"
            )
        return out


def _compactified_field(model: MetricModel):
    def F(x):
        return _rhs_compactified(model, np.asarray(x, dtype=float), 1.0)

    return F


def linearization(
    model: MetricModel,
    y0: np.ndarray | None = None,
    steps=(1e-2, 2.5e-3, 6.25e-4),
    eig_tol: float = 1e-6,
) -> LinearizationReport:
    """Linearize the rescaled field at the radial set by finite differences.

    The field itself is coded analytically; only the linearization uses
    central differences (with Richardson refinement and a step sweep for a
    consistency report).  Eigenvalues of near-defective clusters are reported
    as cluster means, which are first-order insensitive to the symmetric
    splitting that finite-difference noise induces on a Jordan block.
    """
    na = model.nang
    if y0 is None:
        y0 = np.array([math.pi / 2, 0.0][: na + 0]) if na == 2 else np.full(na, math.pi / 2)
    x0 = np.zeros(4 + 2 * na)
    x0[2 : 2 + na] = y0
    F = _compactified_field(model)

    sweep = []
    mats = {}
    for h in steps:
        A = jacobian(F, x0, h=h, refine=True)
        mats[h] = A
        ev = np.sort_complex(np.linalg.eigvals(A))
        sweep.append((h, [float(np.real(e)) for e in ev]))
    A = mats[steps[-1]]

    ev = np.linalg.eigvals(A)
    if np.max(np.abs(np.imag(ev))) > 1e-4:
        raise RuntimeError("unexpected complex eigenvalues in radial linearization")
    ev = np.real(ev)
    clusters: list[list[float]] = []
    for e in sorted(ev):
        if clusters and abs(e - np.mean(clusters[-1])) < 0.5:
            clusters[-1].append(e)
        else:
            clusters.append([e])
    eigenvalues = [(float(np.mean(c)), len(c)) for c in clusters]

    alg4 = sum(k for mean, k in eigenvalues if abs(mean + 4.0) < 0.5)
    A4 = A + 4.0 * np.eye(A.shape[0])
    svals = np.linalg.svd(A4, compute_uv=False)
    scale = svals[0]
    geo4 = int(np.sum(svals < 1e-4 * scale))
    jordan = geo4 < alg4

    # Jordan pairing: (A^T + 4) d xi_hat = -4 m d rho, (A^T + 4) d rho = 0
    e_rho = np.zeros(A.shape[0]); e_rho[0] = 1.0
    e_xh = np.zeros(A.shape[0]); e_xh[3 + na] = 1.0
    v1 = A4.T @ e_xh
    v2 = A4.T @ e_rho
    pairing_res = float(
        np.linalg.norm(v1 - (-4.0 * model.m) * e_rho) + np.linalg.norm(v2)
    )

    checks = []
    m = model.m
    G0 = dual_metric_matrix(model, 0.0, 0.0, y0)
    g_ry = G0[0, 2:]
    g_yy = G0[2:, 2:]
    ups = np.asarray(model.upsilon(0.0, 0.0, y0), dtype=float)

    def add_check(label, w, kappa):
        resid = float(np.linalg.norm(A.T @ w - kappa * w) / max(np.linalg.norm(w), 1e-30))
        checks.append(CovectorCheck(label, kappa, resid, resid < eig_tol))

    w = np.zeros(A.shape[0])
    w[1] = 1.0; w[3 + na] = 1.0; w[0] = -m
    add_check("dv + dxi_hat - m drho", w, -8.0)
    add_check("drho", e_rho, -4.0)
    w = np.zeros(A.shape[0]); w[2 + na] = 1.0
    add_check("dnu", w, -4.0)
    for j in range(na):
        w = np.zeros(A.shape[0]); w[4 + na + j] = 1.0
        add_check(f"deta_hat{j}", w, -4.0)
    for j in range(na):
        # c is the rho-coefficient of the angular slot, read from the matrix
        c_j = 0.5 * A[2 + j, 0]
        w = np.zeros(A.shape[0])
        w[2 + j] = 4.0
        w[4 + na :] += 2.0 * g_yy[j, :]
        w[0] = 2.0 * c_j - 3.0 * m * ups[j] - 2.0 * m * g_ry[j]
        w[1] = -ups[j]
        w[3 + na] = 2.0 * g_ry[j] + ups[j]
        add_check(f"angular zero covector y{j}", w, 0.0)

    coords = (
        ["rho", "v"] + [f"y{i}" for i in range(na)]
        + ["nu", "xi_hat"] + [f"eta_hat{i}" for i in range(na)]
    )
    return LinearizationReport(
        matrix=A,
        coordinates=coords,
        eigenvalues=eigenvalues,
        geometric_mult_minus4=geo4,
        algebraic_mult_minus4=alg4,
        jordan_block=jordan,
        jordan_pairing_residual=pairing_res,
        covector_checks=checks,
        step_sweep=sweep,
    )


# ---------------------------------------------------------------------------
# non-trapping sampling
# ---------------------------------------------------------------------------


def halton_sequence(n: int, dim: int, skip: int = 20) -> np.ndarray:
    """Deterministic quasi-random points in [0,1)^dim (van der Corput bases)."""
    primes = [2, 3, 5, 7, 11, 13, 17][:dim]
    out = np.empty((n, dim))
    for j, p in enumerate(primes):
        for i in range(n):
            k, f, r = i + 1 + skip, 1.0, 0.0
            while k > 0:
                f /= p
                r += f * (k % p)
                k //= p
            out[i, j] = r
    return out


def null_seeds(model: MetricModel, count: int, box=None) -> list[CotangentPoint]:
    """Deterministic null seeds over the spacelike region v < 0.

    Base and partial fiber data come from a Halton sequence; gamma is solved
    from the null-cone quadratic, alternating root branches.  Seeds whose
    quadratic has no real root are skipped (the stream stays deterministic).
    """
    if box is None:
        # azimuthal fiber momentum keeps impact parameters large enough that
        # no ray dives through the near-origin region v -> 1 of the chart
        box = {
            "rho": (5e-4, 0.05),
            "v": (-0.5, -0.1),
            "theta": (math.pi / 2 - 0.5, math.pi / 2 + 0.5),
            "phi": (0.0, 1.0),
            "xi": (0.4, 1.2),
            "eta_pol": (-0.2, 0.2),
            "eta_az": (0.35, 0.85),
        }
    na = model.nang
    pts: list[CotangentPoint] = []
    raw = halton_sequence(4 * count, 5 + na)
    branch = 0
    for row in raw:
        if len(pts) >= count:
            break
        rho = box["rho"][0] + row[0] * (box["rho"][1] - box["rho"][0])
        v = box["v"][0] + row[1] * (box["v"][1] - box["v"][0])
        th = box["theta"][0] + row[2] * (box["theta"][1] - box["theta"][0])
        ph = box["phi"][0] + row[3] * (box["phi"][1] - box["phi"][0])
        xi = box["xi"][0] + row[4] * (box["xi"][1] - box["xi"][0])
        eta = np.array(
            [
                box["eta_pol"][0] + row[5] * (box["eta_pol"][1] - box["eta_pol"][0]),
                box["eta_az"][0] + row[6] * (box["eta_az"][1] - box["eta_az"][0]),
            ][:na]
        )
        y = np.array([th, ph][:na]) if na == 2 else np.full(na, th)
        if not model.chart.contains(rho, v, y):
            continue
        G = dual_metric_matrix(model, rho, v, y)
        zf = np.concatenate(([xi, 0.0], eta))
        a = G[1, 1]
        b = 2.0 * float(G[1, :] @ zf)
        c = float(zf @ G @ zf)
        disc = b * b - 4.0 * a * c
        if disc <= 0.0 or a == 0.0:
            continue
        root = (-b + math.sqrt(disc)) / (2 * a) if branch == 0 else (
            -b - math.sqrt(disc)
        ) / (2 * a)
        branch = 1 - branch
        if abs(root) < 1e-8:
            continue
        pts.append(CotangentPoint(rho, v, y, xi, root, eta))
    return pts


@dataclass
class SeedOutcome:
    index: int
    reason: str
    direction: int
    final_distance: float
    lambda_max: float


@dataclass
class NontrappingReport:
    outcomes: list[SeedOutcome]
    tol: float

    @property
    def reached(self) -> int:
        return sum(1 for o in self.outcomes if o.reason == "reached-radial-set")

    @property
    def classified(self) -> int:
        return sum(
            1
            for o in self.outcomes
            if o.reason in ("reached-radial-set", "left-chart")
        )

    @property
    def all_classified(self) -> bool:
        return self.classified == len(self.outcomes)

    def lines(self):
        n = len(self.outcomes)
        out = [
            f"non-trapping sampling: {self.reached}/{n} reached the radial set,"
            f" {self.classified}/{n} classified (tol {self.tol:g})"
        ]
        for o in self.outcomes:
            out.append(
                f"  seed {o.index:3d} [{'fwd' if o.direction > 0 else 'bwd'}]"
                f" {o.reason}  dist={o.final_distance:.2e}  max|lambda|={o.lambda_max:.2e}"
            )
        return out


def check_nontrapping(
    model: MetricModel,
    seed_count: int = 64,
    horizon: float = 200.0,
    tol: float = 1e-3,
    threads: int = 1,
) -> NontrappingReport:
    """Trace deterministic null seeds; classify each by its termination.

    Each seed is integrated forward; if that run neither reaches the radial
    set nor leaves the chart (or leaves it immediately), the backward run is
    tried, matching the two possible parameter orientations of a null
    bicharacteristic.
    """
    seeds = null_seeds(model, seed_count)

    def classify(item):
        i, p0 = item
        best = None
        for direction in (1.0, -1.0):
            try:
                traj = trace_bicharacteristic(
                    model, p0, horizon=horizon, radial_tol=tol, direction=direction
                )
            except IntegrationFailure:
                continue
            out = SeedOutcome(
                i, traj.reason, int(direction), traj.final_radial_distance,
                traj.monitored_lambda_max(),
            )
            if traj.reason == "reached-radial-set":
                return out
            if best is None or (traj.reason == "left-chart" and best.reason != "left-chart"):
                best = out
        return best if best is not None else SeedOutcome(i, "unclassified", 1, math.inf, math.inf)

    items = list(enumerate(seeds))
    if horizon == 0.0:
        outcomes = [SeedOutcome(i, "unclassified", 1, math.inf, 0.0) for i, _ in items]
        return NontrappingReport(outcomes, tol)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            outcomes = list(ex.map(classify, items))
    else:
        outcomes = [classify(it) for it in items]
    return NontrappingReport(outcomes, tol)
