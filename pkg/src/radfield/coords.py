"""Logarithmic change of smooth structure and radiation-field blow-up.

The long-range term of the metric makes light cones diverge logarithmically;
the cure is a change of smooth structure replacing the light-cone coordinate
``v`` by

    vbar = v + chi(v) * m * rho * log(rho) ,

with ``chi`` a compactly supported plateau cutoff equal to 1 near ``v = 0``.
Blowing up ``{rho = vbar = 0}`` afterwards introduces the lapse coordinate
``s = vbar / rho`` along the front face (null infinity).  This module holds
the point maps, their inverses, the lifts of the module vector fields through
the combined transformation, and a synthetic polyhomogeneous function
generator used as an oracle by the fitting code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "BlowupPoint",
    "CutoffSpec",
    "LiftCoefficients",
    "lapse_curve_point",
    "lift_module_generator",
    "logify_point",
    "synth_phg",
    "unlogify_point",
]


def _smoothstep(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, exp(-1/x)-glued between."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    out[x >= 1.0] = 1.0
    mid = (x > 0.0) & (x < 1.0)
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    out[mid] = a / (a + b)
    return out if out.shape else float(out)


def _smoothstep_prime(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x < 1.0)
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    da = a / xm**2
    db = b / (1.0 - xm) ** 2
    out[mid] = (da * b + a * db) / (a + b) ** 2
    return out if out.shape else float(out)


@dataclass(frozen=True)
class CutoffSpec:
    """Plateau bump chi with chi = 1 on |v| <= c1 and chi = 0 on |v| >= C."""

    c1: float = 0.25
    C: float = 0.75

    def __post_init__(self):
        if not (0.0 < self.c1 < self.C):
            raise ValueError("cutoff needs 0 < c1 < C")

    def chi(self, v):
        return _smoothstep((self.C - np.abs(v)) / (self.C - self.c1))

    def chi_prime(self, v):
        v = np.asarray(v, dtype=float)
        inner = _smoothstep_prime((self.C - np.abs(v)) / (self.C - self.c1))
        val = inner * (-np.sign(v) / (self.C - self.c1))
        return val if val.shape else float(val)

    @property
    def sup_chi_prime(self) -> float:
        x = np.linspace(-self.C, self.C, 20001)
        return float(np.max(np.abs(self.chi_prime(x))))


def logify_point(rho, v, m: float, chi: CutoffSpec):
    """(rho, v) -> (rhobar, vbar) with vbar = v + chi(v) m rho log rho.

    Extends continuously to rho = 0 with vbar = v; rho < 0 is rejected.
    """
    rho = np.asarray(rho, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(rho < 0.0):
        raise ValueError("logification needs rho >= 0")
    rlog = np.where(rho > 0.0, rho * np.log(np.where(rho > 0.0, rho, 1.0)), 0.0)
    vbar = v + chi.chi(v) * m * rlog
    if vbar.shape:
        return rho, vbar
    return float(rho), float(vbar)


def unlogify_point(rhobar, vbar, m: float, chi: CutoffSpec, tol: float = 1e-12):
    """Invert the logification in v at fixed rho by Newton iteration.

    Requires the map v -> vbar to be monotone:
    ``|m rhobar log rhobar| * sup|chi'| < 1``.
    """
    rhobar = np.asarray(rhobar, dtype=float)
    vbar = np.asarray(vbar, dtype=float)
    if np.any(rhobar < 0.0):
        raise ValueError("unlogify needs rhobar >= 0")
    rlog = np.where(rhobar > 0.0, rhobar * np.log(np.where(rhobar > 0.0, rhobar, 1.0)), 0.0)
    if m != 0.0:
        margin = np.max(np.abs(m * rlog)) * chi.sup_chi_prime
        if margin >= 1.0:
            raise ValueError(
                f"logification not monotone on this slice (margin {margin:.3g} >= 1)"
            )
    v = vbar.copy() if vbar.shape else np.atleast_1d(vbar).astype(float)
    rl = np.broadcast_to(rlog, v.shape)
    for _ in range(60):
        resid = v + chi.chi(v) * m * rl - vbar
        if np.max(np.abs(resid)) < tol * (1.0 + np.max(np.abs(vbar))):
            break
        deriv = 1.0 + chi.chi_prime(v) * m * rl
        v = v - resid / deriv
    else:
        raise RuntimeError("unlogify Newton iteration did not converge")
    if np.asarray(vbar).shape:
        return rhobar, v
    return float(rhobar), float(v[0])


@dataclass(frozen=True)
class BlowupPoint:
    """Front-face point: lapse s = vbar/rhobar, face distance rhobar, angles y."""

    s: float
    rhobar: float
    y: np.ndarray = field(default_factory=lambda: np.array([np.pi / 2, 0.0]))

    @property
    def vbar(self) -> float:
        return self.s * self.rhobar


@dataclass(frozen=True)
class LiftCoefficients:
    """Lift of a module vector field to the blown-up logified space.

    The lift is ``ds(s, rhobar, v) d/ds + log_ds(s, rhobar, v) log(rhobar) d/ds
    + rho_drho * rhobar d/rhobar``; ``v`` is the original (unlogified)
    light-cone coordinate at which the cutoff is evaluated.
    """

    name: str
    ds: Callable
    log_ds: Callable
    rho_drho: float

    def apply(self, F_s: Callable, F_rhobar: Callable, s, rhobar, v):
        """Apply the lifted field to F given dF/ds and dF/drhobar."""
        val = (self.ds(s, rhobar, v) + self.log_ds(s, rhobar, v) * np.log(rhobar)) * F_s(
            s, rhobar
        )
        if self.rho_drho:
            val = val + self.rho_drho * rhobar * F_rhobar(s, rhobar)
        return val


def lift_module_generator(which: str, m: float, chi: CutoffSpec) -> LiftCoefficients:
    """Exact lift of rho d/drho, v d/dv or rho d/dv through logification + blow-up.

    The lifts follow from the chain rule applied to
    vbar = v + chi(v) m rho log rho and s = vbar/rhobar:

        rho d/drho -> rhobar d/drhobar + (chi m - s) d/ds + chi m log(rhobar) d/ds
        v  d/dv    -> s d/ds + m (chi'(v) v - chi(v)) log(rhobar) d/ds
        rho d/dv   -> d/ds + chi'(v) m rhobar log(rhobar) d/ds

    In the second line the identity s rhobar = v + chi m rhobar log rhobar has
    been used to collapse the product form to a single log power.
    """
    if which == "rho_drho":
        return LiftCoefficients(
            which,
            ds=lambda s, rb, v: chi.chi(v) * m - s,
            log_ds=lambda s, rb, v: chi.chi(v) * m + 0.0 * s,
            rho_drho=1.0,
        )
    if which == "v_dv":
        return LiftCoefficients(
            which,
            ds=lambda s, rb, v: s,
            log_ds=lambda s, rb, v: m * (chi.chi_prime(v) * v - chi.chi(v)),
            rho_drho=0.0,
        )
    if which == "rho_dv":
        return LiftCoefficients(
            which,
            ds=lambda s, rb, v: 1.0 + 0.0 * s,
            log_ds=lambda s, rb, v: chi.chi_prime(v) * m * rb,
            rho_drho=0.0,
        )
    raise ValueError(f"unknown generator {which!r}; use rho_drho, v_dv or rho_dv")


def lapse_curve_point(s: float, rhobar, m: float, chi: CutoffSpec):
    """Original (rho, v) of the fixed-lapse curve point (s, rhobar)."""
    rhobar = np.asarray(rhobar, dtype=float)
    vbar = s * rhobar
    _, v = unlogify_point(rhobar, vbar, m, chi)
    return rhobar, v


def synth_phg(entries: Sequence, coeffs, rho):
    """Sample a finite polyhomogeneous sum on a rho grid.

    ``entries`` are (z, k) pairs; the corresponding term is
    ``a_{z,k} * rho^{i z} * log(rho)^k``.  ``coeffs`` maps (z, k) -> constant
    or callable of rho (callables allow coefficient profiles).  Entries
    without a coefficient default to zero.  Returns a complex array.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0.0):
        raise ValueError("synthetic expansions are sampled at rho > 0")
    log_rho = np.log(rho)
    out = np.zeros(rho.shape, dtype=complex)
    for entry in entries:
        z, k = (entry.z, entry.k) if hasattr(entry, "z") else entry
        a = coeffs.get((complex(z), int(k)), 0.0) if isinstance(coeffs, dict) else coeffs
        if callable(a):
            a = a(rho)
        if np.all(a == 0.0):
            continue
        out += a * np.exp(1j * complex(z) * log_rho) * log_rho ** int(k)
    return out
