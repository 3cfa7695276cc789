"""Normal-form models of long-range Lorentzian scattering metrics.

A :class:`MetricModel` stores the dual (inverse) metric near the corner
``{rho = 0, v = 0}`` of the radially compactified spacetime, in the rescaled
coframe

    d rho / rho^2,   d v / rho,   d y / rho .

The component layout near the corner is::

    g^{rr} = omega              g^{rv} = -2 + alpha v        g^{ry} = -mu/2 + ...
    g^{vv} = -4 v + 4 m rho + beta v^2
    g^{vy} = -v upsilon + ...   g^{yy} = -h_inv + ...

with every correction beyond the displayed principal parts carried by
explicitly declared :class:`Remainder` terms whose vanishing orders in
``(rho, v)`` are recorded so that validation can test them.  The long-range
constant ``m`` enters only through the ``4 m rho`` term of ``g^{vv}``; for the
Kerr exterior with mass parameter ``M`` one has ``m = 4 M`` and corner
constants ``(omega, alpha, beta) = (1, 2, 4)``.

Coordinates are ``(rho, v, y)`` with ``y = (theta, phi)`` an angular chart on
the sphere minus polar caps; the chart used for the Kerr family is

    rho = 1/t,   v0 = 2 (1 - r/t),   v = v0 - v0^2 / 4 ,

so that ``r = sqrt(1 - v) / rho`` exactly.

All coefficient functions must accept real or complex scalar arguments
(complex-step differentiation is used downstream) and be smooth across
``rho = 0`` as formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .numdiff import cstep_grad

__all__ = [
    "ChartDomain",
    "CotangentPoint",
    "MetricModel",
    "Remainder",
    "b_symbol",
    "dual_metric_matrix",
    "make_kerr_exterior",
    "make_minkowski",
    "measure_corner_constants",
    "model_from_config",
    "model_to_config",
    "static_spherical_model",
    "validate_model",
]

REMAINDER_SLOTS = ("rho_rho", "rho_v", "v_v", "rho_y", "v_y", "y_y")


class ChartDomainError(ValueError):
    """Raised when a point lies outside a model's chart of validity."""


@dataclass(frozen=True)
class ChartDomain:
    """Validity region of a normal-form chart.

    ``r_min`` bounds the area radius from below (Kerr exterior region),
    ``theta_margin`` excludes polar caps of the angular chart.
    """

    rho_max: float = 0.8
    v_min: float = -0.9
    v_max: float = 0.9
    theta_margin: float = 0.35
    r_min: float = 0.0

    def contains(self, rho, v, y) -> bool:
        theta = float(y[0])
        if not (0.0 <= rho <= self.rho_max):
            return False
        if not (self.v_min <= v <= self.v_max):
            return False
        if not (self.theta_margin <= theta <= math.pi - self.theta_margin):
            return False
        if self.r_min > 0.0 and rho > 0.0:
            r = math.sqrt(max(1.0 - v, 0.0)) / rho
            if r < self.r_min:
                return False
        return True


@dataclass(frozen=True)
class Remainder:
    """A declared correction term of the dual metric.

    ``orders`` lists monomials ``rho^i v^j``; the function value divided by
    the sum of the declared monomials must stay bounded as ``(rho, v) -> 0``.
    ``func(rho, v, y)`` returns a scalar for scalar slots, a length-(n-2)
    sequence for the vector slots ``rho_y``/``v_y`` and an (n-2)x(n-2) matrix
    for ``y_y``.
    """

    slot: str
    orders: tuple[tuple[int, int], ...]
    func: Callable
    description: str = ""

    def __post_init__(self):
        if self.slot not in REMAINDER_SLOTS:
            raise ValueError(f"unknown remainder slot {self.slot!r}")


@dataclass(frozen=True)
class CotangentPoint:
    """A point of the b-cotangent bundle over the chart.

    Fiber coordinates ``(xi, gamma, eta)`` are dual to
    ``(d rho / rho, d v, d y)``.  Near fiber infinity the compactified
    coordinates ``nu = 1/gamma, xi_hat = xi/gamma, eta_hat = eta/gamma`` are
    used; they are defined only for ``gamma != 0``.
    """

    rho: float
    v: float
    y: np.ndarray
    xi: float
    gamma: float
    eta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=float)))
        object.__setattr__(self, "eta", np.atleast_1d(np.asarray(self.eta, dtype=float)))

    @property
    def fiber(self) -> np.ndarray:
        return np.concatenate(([self.xi, self.gamma], self.eta))

    def _require_gamma(self):
        if self.gamma == 0.0:
            raise ValueError("compactified fiber coordinates need gamma != 0")

    @property
    def nu(self) -> float:
        self._require_gamma()
        return 1.0 / self.gamma

    @property
    def xi_hat(self) -> float:
        self._require_gamma()
        return self.xi / self.gamma

    @property
    def eta_hat(self) -> np.ndarray:
        self._require_gamma()
        return self.eta / self.gamma


def _zeros_vec(n):
    return lambda rho, v, y: tuple(0.0 for _ in range(n))


@dataclass(frozen=True)
class MetricModel:
    """Dual-metric data of a long-range scattering metric in normal form.

    Instances are immutable; every operation on them is a pure function.
    """

    n: int
    m: float
    omega: Callable
    alpha: Callable
    beta: Callable
    mu: Callable
    upsilon: Callable
    h_inv: Callable
    remainders: tuple[Remainder, ...] = ()
    label: str = "model"
    chart: ChartDomain = field(default_factory=ChartDomain)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("spacetime dimension must be >= 3")

    @property
    def nang(self) -> int:
        return self.n - 2

    def remainders_in(self, slot: str):
        return [r for r in self.remainders if r.slot == slot]


def dual_metric_matrix(model: MetricModel, rho, v, y, check_chart: bool = False):
    """Assemble the dual metric in the coframe (d rho/rho^2, d v/rho, d y/rho).

    Accepts real or complex scalars for ``rho`` and ``v``.  With
    ``check_chart`` the base point is validated against the model chart.
    """
    if check_chart and not model.chart.contains(np.real(rho), np.real(v), y):
        raise ChartDomainError(
            f"point (rho={rho}, v={v}, y={y}) outside chart of {model.label!r}"
        )
    na = model.nang
    n = model.n
    is_complex = np.iscomplexobj(rho) or np.iscomplexobj(v) or np.iscomplexobj(y)
    G = np.zeros((n, n), dtype=complex if is_complex else float)

    G[0, 0] = model.omega(rho, v, y)
    G[0, 1] = -2.0 + model.alpha(rho, v, y) * v
    G[1, 1] = -4.0 * v + 4.0 * model.m * rho + model.beta(rho, v, y) * v * v
    mu = model.mu(rho, v, y)
    ups = model.upsilon(rho, v, y)
    for j in range(na):
        G[0, 2 + j] = -0.5 * mu[j]
        G[1, 2 + j] = -v * ups[j]
    h = model.h_inv(rho, v, y)
    for i in range(na):
        for j in range(na):
            G[2 + i, 2 + j] = -h[i][j]

    for rem in model.remainders:
        val = rem.func(rho, v, y)
        if rem.slot == "rho_rho":
            G[0, 0] += val
        elif rem.slot == "rho_v":
            G[0, 1] += val
        elif rem.slot == "v_v":
            G[1, 1] += val
        elif rem.slot == "rho_y":
            for j in range(na):
                G[0, 2 + j] += val[j]
        elif rem.slot == "v_y":
            for j in range(na):
                G[1, 2 + j] += val[j]
        elif rem.slot == "y_y":
            for i in range(na):
                for j in range(na):
                    G[2 + i, 2 + j] += val[i][j]

    # symmetrize the off-diagonal blocks that were filled one-sided
    for i in range(n):
        for j in range(i + 1, n):
            G[j, i] = G[i, j]
    return G


def dual_metric_gradient(model: MetricModel, rho, v, y):
    """Dual metric and its exact partials w.r.t. (rho, v, y_1, ..).

    Derivatives are obtained by complex-step evaluation of the coefficient
    functions, i.e. by analytic continuation rather than finite differencing.
    Returns ``(G, [dG/drho, dG/dv, dG/dy_1, ...])``.
    """
    x0 = np.concatenate(([rho, v], np.asarray(y, dtype=float)))

    def f(x):
        return dual_metric_matrix(model, x[0], x[1], x[2:])

    G = f(x0)
    grads = cstep_grad(f, x0)
    return np.real(G), grads


def b_symbol(model: MetricModel, p: CotangentPoint) -> float:
    """b-principal symbol of the rescaled wave operator at p.

    This is the quadratic form of the dual metric evaluated on the b-fiber
    coordinates ``(xi, gamma, eta)``.
    """
    G = dual_metric_matrix(model, p.rho, p.v, p.y)
    zeta = p.fiber
    return float(zeta @ G @ zeta)


# ---------------------------------------------------------------------------
# model constructors
# ---------------------------------------------------------------------------


def _round_sphere_h_inv(rho, v, y):
    """Inverse angular metric (1-v)^{-1} diag(1, 1/sin^2 theta)."""
    theta = y[0]
    s = np.sin(theta)
    f = 1.0 / (1.0 - v)
    return ((f, 0.0 * rho), (0.0 * rho, f / (s * s)))


def make_minkowski() -> MetricModel:
    """Compactified Minkowski model in the chart rho=1/t, v = v0 - v0^2/4.

    Corner constants (omega, alpha, beta) = (1, 2, 4) hold exactly as
    functions, m = 0, and there are no remainder terms.
    """
    return MetricModel(
        n=4,
        m=0.0,
        omega=lambda rho, v, y: 1.0,
        alpha=lambda rho, v, y: 2.0,
        beta=lambda rho, v, y: 4.0,
        mu=_zeros_vec(2),
        upsilon=_zeros_vec(2),
        h_inv=_round_sphere_h_inv,
        remainders=(),
        label="minkowski",
        chart=ChartDomain(),
        params={"M": 0.0, "a": 0.0},
    )


def make_kerr_exterior(M: float, a: float) -> MetricModel:
    """Kerr exterior, far from the horizon, in normal form.

    Exact closed-form dual-metric components are used; the principal parts
    are the constants (1, 2, 4) with m = 4M, and everything else is carried
    by remainder terms with declared vanishing orders.  The spin enters the
    remainder slots only.

    Requires ``M > 0`` and ``|a| < M`` (the sub-extremal exterior).
    """
    if not M > 0.0:
        raise ValueError("mass parameter M must be positive")
    if not abs(a) < M:
        raise ValueError("spin must satisfy |a| < M (sub-extremal exterior)")

    def _sig(rho, v, y):
        # Sigma * rho^2 and Delta * rho^2, regular down to rho = 0
        theta = y[0]
        one_mv = 1.0 - v
        root = np.sqrt(one_mv)
        sig = one_mv + (a * rho * np.cos(theta)) ** 2
        delta = one_mv - 2.0 * M * rho * root + (a * rho) ** 2
        return one_mv, root, sig, delta

    def A_tt(rho, v, y):
        # (r^2 + a^2 + 2 M a^2 r sin^2(theta)/Sigma) / Delta, rho-regular form
        theta = y[0]
        one_mv, root, sig, delta = _sig(rho, v, y)
        s2 = np.sin(theta) ** 2
        num = one_mv + (a * rho) ** 2 + 2.0 * M * a * a * s2 * rho**3 * root / sig
        return num / delta

    def frame_drag(rho, v, y):
        # 2 M r a / (Sigma Delta rho) in rho-regular form; O(rho^2)
        _, root, sig, delta = _sig(rho, v, y)
        return 2.0 * M * a * root * rho * rho / (sig * delta)

    def rem_rr(rho, v, y):
        return A_tt(rho, v, y) - 1.0

    def rem_rv(rho, v, y):
        return -2.0 * (1.0 - v) * (A_tt(rho, v, y) - 1.0)

    def rem_vv(rho, v, y):
        one_mv, root, sig, delta = _sig(rho, v, y)
        g_vv = 4.0 * one_mv * (one_mv * A_tt(rho, v, y) - delta / sig)
        return g_vv - (-4.0 * v + 16.0 * M * rho + 4.0 * v * v)

    def rem_ry(rho, v, y):
        return (0.0 * rho, -frame_drag(rho, v, y))

    def rem_vy(rho, v, y):
        return (0.0 * rho, 2.0 * (1.0 - v) * frame_drag(rho, v, y))

    def rem_yy(rho, v, y):
        theta = y[0]
        one_mv, root, sig, delta = _sig(rho, v, y)
        s2 = np.sin(theta) ** 2
        g_thth = -1.0 / sig
        g_phph = -(1.0 - 2.0 * M * root * rho / sig) / (delta * s2)
        r_thth = g_thth + 1.0 / one_mv
        r_phph = g_phph + 1.0 / (one_mv * s2)
        zero = 0.0 * rho
        return ((r_thth, zero), (zero, r_phph))

    remainders = (
        Remainder("rho_rho", ((1, 0),), rem_rr, "mass correction of g^{rr}"),
        Remainder("rho_v", ((1, 0),), rem_rv, "mass correction of g^{rv}"),
        Remainder("v_v", ((1, 1), (2, 0)), rem_vv, "g^{vv} beyond -4v+4m rho+4v^2"),
        Remainder("rho_y", ((2, 0),), rem_ry, "frame dragging, g^{r phi}"),
        Remainder("v_y", ((2, 0),), rem_vy, "frame dragging, g^{v phi}"),
        Remainder("y_y", ((2, 0),), rem_yy, "angular block corrections"),
    )

    return MetricModel(
        n=4,
        m=4.0 * M,
        omega=lambda rho, v, y: 1.0,
        alpha=lambda rho, v, y: 2.0,
        beta=lambda rho, v, y: 4.0,
        mu=_zeros_vec(2),
        upsilon=_zeros_vec(2),
        h_inv=_round_sphere_h_inv,
        remainders=remainders,
        label=f"kerr(M={M}, a={a})",
        chart=ChartDomain(r_min=3.0 * M),
        params={"M": float(M), "a": float(a)},
    )


def static_spherical_model(f_of_inv_r: Callable, label: str = "static") -> MetricModel:
    """Normal-form model of a static spherical metric f dt^2 - f^{-1} dr^2 - r^2 dS^2.

    ``f_of_inv_r(u)`` is the lapse as a function of u = 1/r and must be smooth
    at u = 0 with f(0) = 1.  The long-range constant is read off as
    m = -2 f'(0) (complex-step).  This is an independent entry route: e.g.
    Schwarzschild in Boyer-Lindquist form via ``f_of_inv_r = lambda u: 1-2*M*u``.
    """
    fp0 = float(np.imag(f_of_inv_r(1e-30j)) / 1e-30)
    m = -2.0 * fp0

    def fhat(rho, v, y):
        return f_of_inv_r(rho / np.sqrt(1.0 - v))

    def omega(rho, v, y):
        return 1.0 / fhat(rho, v, y)

    def rem_rv(rho, v, y):
        return -2.0 * (1.0 - v) * (1.0 / fhat(rho, v, y) - 1.0)

    def rem_vv(rho, v, y):
        f = fhat(rho, v, y)
        g_vv = 4.0 * (1.0 - v) * ((1.0 - v) / f - f)
        return g_vv - (-4.0 * v + 4.0 * m * rho + 4.0 * v * v)

    remainders = (
        Remainder("rho_v", ((1, 0),), rem_rv, "lapse correction of g^{rv}"),
        Remainder("v_v", ((1, 1), (2, 0)), rem_vv, "g^{vv} beyond principal part"),
    )

    r_min = 0.0
    if m > 0.0:
        r_min = 1.5 * m  # stay outside r = 3M for Schwarzschild-like lapses
    return MetricModel(
        n=4,
        m=m,
        omega=omega,
        alpha=lambda rho, v, y: 2.0,
        beta=lambda rho, v, y: 4.0,
        mu=_zeros_vec(2),
        upsilon=_zeros_vec(2),
        h_inv=_round_sphere_h_inv,
        remainders=remainders,
        label=label,
        chart=ChartDomain(r_min=r_min),
        params={"M": m / 4.0, "a": 0.0},
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass
class InvariantResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""


@dataclass
class ValidationReport:
    model_label: str
    results: list[InvariantResult]
    constants: dict

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self):
        out = [f"model {self.model_label}"]
        for k, val in sorted(self.constants.items()):
            out.append(f"  {k} = {val:.12g}")
        for r in self.results:
            status = "pass" if r.passed else "FAIL"
            out.append(f"  [{status}] {r.name}  margin={r.margin:.3e}  {r.detail}")
        return out


def default_sample_points(model: MetricModel, n_per_axis: int = 5):
    """Deterministic sample grid in the chart, biased toward the corner."""
    ch = model.chart
    rhos = np.array([0.0, 1e-4, 1e-3, 1e-2, 0.05])
    rhos = rhos[rhos <= ch.rho_max]
    vs = np.linspace(0.6 * ch.v_min, 0.6 * ch.v_max, n_per_axis)
    thetas = np.linspace(ch.theta_margin + 0.1, math.pi - ch.theta_margin - 0.1, 3)
    pts = []
    for rho in rhos:
        for v in vs:
            for th in thetas:
                y = np.array([th, 0.3])
                if model.chart.contains(rho, v, y):
                    pts.append((float(rho), float(v), y))
    return pts


def measure_corner_constants(model: MetricModel, y=None, h: float = 0.05) -> dict:
    """Measure (omega, alpha, beta) at the corner from the assembled dual metric.

    The v-slope of g^{rv} and the second v-difference of g^{vv} at rho = 0
    are exact for models whose corner coefficients are constant in v; the
    long-range constant is cross-checked from the rho-slope of g^{vv}.
    """
    if y is None:
        y = np.array([math.pi / 2, 0.0])
    G0 = dual_metric_matrix(model, 0.0, 0.0, y)
    Gp = dual_metric_matrix(model, 0.0, h, y)
    Gm = dual_metric_matrix(model, 0.0, -h, y)
    omega_bar = G0[0, 0]
    alpha_bar = (Gp[0, 1] - Gm[0, 1]) / (2.0 * h)
    beta_bar = (Gp[1, 1] - 2.0 * G0[1, 1] + Gm[1, 1]) / (h * h) / 2.0
    hr = 1e-3
    d1 = (
        dual_metric_matrix(model, hr, 0.0, y)[1, 1]
        - dual_metric_matrix(model, -hr, 0.0, y)[1, 1]
    ) / (2 * hr)
    d2 = (
        dual_metric_matrix(model, hr / 2, 0.0, y)[1, 1]
        - dual_metric_matrix(model, -hr / 2, 0.0, y)[1, 1]
    ) / hr
    m_slope = (4.0 * d2 - d1) / 3.0 / 4.0
    return {
        "omega_bar": float(omega_bar),
        "alpha_bar": float(alpha_bar),
        "beta_bar": float(beta_bar),
        "m": float(model.m),
        "m_from_slope": float(m_slope),
        "corner_g_rv": float(G0[0, 1]),
        "corner_g_vv": float(G0[1, 1]),
    }


def validate_model(
    model: MetricModel,
    samples: Sequence | None = None,
    remainder_bound: float = 100.0,
) -> ValidationReport:
    """Check the model invariants on a sample set; failures become report rows.

    Checks: positive definiteness of h_inv, the corner normal form, Lorentzian
    signature of the assembled dual metric, and boundedness of each declared
    remainder divided by its vanishing monomials along shrinking rays.
    """
    if samples is None:
        samples = default_sample_points(model)
    if len(samples) == 0:
        raise ValueError("sample set must be nonempty")
    results = []

    # h_inv positive definite
    worst = math.inf
    ok = True
    for rho, v, y in samples:
        h = np.array(model.h_inv(rho, v, y), dtype=float)
        try:
            np.linalg.cholesky(h)
            worst = min(worst, float(np.min(np.linalg.eigvalsh(h))))
        except np.linalg.LinAlgError:
            ok = False
            worst = min(worst, float(np.min(np.linalg.eigvalsh(h))))
    results.append(
        InvariantResult("h_inv positive definite", ok, worst, f"{len(samples)} samples")
    )

    # corner normal form
    y0 = np.array([math.pi / 2, 0.0])
    G0 = dual_metric_matrix(model, 0.0, 0.0, y0)
    err = max(abs(G0[0, 1] + 2.0), abs(G0[1, 1]))
    results.append(
        InvariantResult(
            "corner normal form g^{rv}=-2, g^{vv}=0",
            err < 1e-10,
            err,
            f"g^(rr)={G0[0, 0]:.12g}",
        )
    )

    # Lorentzian signature at interior samples
    ok = True
    worst = math.inf
    for rho, v, y in samples:
        if rho <= 0.0:
            continue
        G = dual_metric_matrix(model, rho, v, y)
        ev = np.linalg.eigvalsh(G)
        npos = int(np.sum(ev > 0))
        nneg = int(np.sum(ev < 0))
        if not (npos == 1 and nneg == model.n - 1):
            ok = False
        worst = min(worst, float(np.min(np.abs(ev))))
    results.append(
        InvariantResult("Lorentzian signature (+,-,...,-)", ok, worst)
    )

    # remainder vanishing orders on shrinking rays
    rays = [(0.04, 0.3), (0.04, -0.3), (0.02, 0.5), (0.05, 0.05)]
    for idx, rem in enumerate(model.remainders):
        ratio_max = 0.0
        for rho0, v0 in rays:
            for k in range(0, 10):
                t = 2.0 ** (-k)
                rho, v = t * rho0, t * v0
                val = np.max(np.abs(np.asarray(rem.func(rho, v, y0), dtype=float)))
                denom = sum(rho**i * abs(v) ** j for i, j in rem.orders)
                ratio_max = max(ratio_max, val / denom)
        results.append(
            InvariantResult(
                f"remainder[{idx}] {rem.slot} {rem.orders} bounded",
                ratio_max <= remainder_bound,
                ratio_max,
                rem.description,
            )
        )

    constants = measure_corner_constants(model)
    return ValidationReport(model.label, results, constants)


# ---------------------------------------------------------------------------
# config serialization
# ---------------------------------------------------------------------------


def model_to_config(model: MetricModel) -> dict:
    """Serializable description of a model.

    Built-in families round-trip exactly through their parameters; generic
    models are emitted as corner constants plus constant-coefficient
    remainder tables (see :func:`model_from_config`).
    """
    base = {"label": model.label, "n": model.n}
    if model.label == "minkowski":
        base["kind"] = "minkowski"
        return base
    if model.label.startswith("kerr("):
        base["kind"] = "kerr"
        base["M"] = model.params["M"]
        base["a"] = model.params["a"]
        return base
    consts = measure_corner_constants(model)
    base.update(
        {
            "kind": "table",
            "m": model.m,
            "omega_bar": consts["omega_bar"],
            "alpha_bar": consts["alpha_bar"],
            "beta_bar": consts["beta_bar"],
            "remainders": [],
        }
    )
    return base


def model_from_config(cfg: dict) -> MetricModel:
    """Build a model from a key-value description.

    Schema::

        kind: "minkowski" | "kerr" | "schwarzschild_bl" | "table"
        kerr:            M, a
        schwarzschild_bl: M          (independent Boyer-Lindquist entry route)
        table: m, omega_bar, alpha_bar, beta_bar,
               remainders: [ {slot, orders: [[i, j], ...], coeffs: [[i, j, c], ...]} ]
               h_inv_scale (optional, default 1; negative values break SPD for
               testing validation failures)
    """
    kind = cfg.get("kind", "minkowski")
    if kind == "minkowski":
        return make_minkowski()
    if kind == "kerr":
        return make_kerr_exterior(float(cfg["M"]), float(cfg.get("a", 0.0)))
    if kind == "schwarzschild_bl":
        M = float(cfg["M"])
        return static_spherical_model(
            lambda u: 1.0 - 2.0 * M * u, label=f"schwarzschild_bl(M={M})"
        )
    if kind == "table":
        ob = float(cfg.get("omega_bar", 1.0))
        ab = float(cfg.get("alpha_bar", 2.0))
        bb = float(cfg.get("beta_bar", 4.0))
        m = float(cfg.get("m", 0.0))
        scale = float(cfg.get("h_inv_scale", 1.0))

        def h_inv(rho, v, y):
            base = _round_sphere_h_inv(rho, v, y)
            return tuple(tuple(scale * x for x in row) for row in base)

        remainders = []
        for tab in cfg.get("remainders", []):
            slot = tab["slot"]
            coeffs = [tuple(c) for c in tab["coeffs"]]
            orders = tuple(tuple(o) for o in tab.get("orders", [(i, j) for i, j, _ in coeffs]))

            def func(rho, v, y, _coeffs=tuple(coeffs), _slot=slot):
                val = sum(c * rho**i * v**j for i, j, c in _coeffs)
                if _slot in ("rho_y", "v_y"):
                    return (val, val)
                if _slot == "y_y":
                    return ((val, 0.0 * rho), (0.0 * rho, val))
                return val

            remainders.append(Remainder(slot, orders, func, "table entry"))
        return MetricModel(
            n=int(cfg.get("n", 4)),
            m=m,
            omega=lambda rho, v, y: ob,
            alpha=lambda rho, v, y: ab,
            beta=lambda rho, v, y: bb,
            mu=_zeros_vec(int(cfg.get("n", 4)) - 2),
            upsilon=_zeros_vec(int(cfg.get("n", 4)) - 2),
            h_inv=h_inv,
            remainders=tuple(remainders),
            label=cfg.get("label", "table"),
            params={"M": m / 4.0, "a": 0.0},
        )
    raise ValueError(f"unknown model kind {kind!r}")
