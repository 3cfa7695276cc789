"""Differentiation helpers: complex-step gradients and Richardson-extrapolated
central differences.

Complex-step differentiation evaluates ``f(x + i*h)`` with a tiny imaginary
perturbation and reads the derivative from the imaginary part.  For functions
built from arithmetic, ``sqrt``, ``exp``, ``log`` and trigonometry (everything
the metric models use) this is exact to round-off, with no subtractive
cancellation.  The function must be real on real input and must not branch on
the imaginary part.
"""

from __future__ import annotations

import numpy as np

CSTEP = 1e-30


def cstep_partial(f, x, j, h=CSTEP):
    """Partial derivative of scalar/array-valued f at real vector x along e_j."""
    xz = np.asarray(x, dtype=complex).copy()
    xz[j] = xz[j] + 1j * h
    return np.imag(f(xz)) / h


def cstep_grad(f, x, h=CSTEP):
    """Gradient of f (scalar or array valued) w.r.t. every component of x.

    Returns a list, entry j being d f / d x_j with the same shape as f(x).
    """
    return [cstep_partial(f, x, j, h) for j in range(len(x))]


def central_diff(f, x, j, h):
    """Second-order central difference of f along coordinate j."""
    xp = np.array(x, dtype=float)
    xm = np.array(x, dtype=float)
    xp[j] += h
    xm[j] -= h
    return (np.asarray(f(xp)) - np.asarray(f(xm))) / (2.0 * h)


def richardson_diff(f, x, j, h):
    """Fourth-order derivative estimate: Richardson over steps h and h/2."""
    d1 = central_diff(f, x, j, h)
    d2 = central_diff(f, x, j, 0.5 * h)
    return (4.0 * d2 - d1) / 3.0


def jacobian(f, x, h=1e-2, refine=True):
    """Numerical Jacobian of vector-valued f at x by central differences.

    With ``refine`` a Richardson step is applied, giving O(h^4) accuracy on
    smooth inputs.
    """
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(len(x)):
        if refine:
            cols.append(richardson_diff(f, x, j, h))
        else:
            cols.append(central_diff(f, x, j, h))
    return np.array(cols).T
