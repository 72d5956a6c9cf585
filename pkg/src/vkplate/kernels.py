"""Boundary data and analytic kernel application.

The plate equations in integral form involve two piecewise-bilinear
kernels over the unit square, one for the slope equation and one for
the membrane-force equation.  Both have the shape

    K(y, e) = (w - 1) * y * e + min(y, e)

where the edge weight ``w`` encodes the support condition (``lam`` for
the slope kernel, ``mu`` for the membrane kernel).  Acting on a
monomial the kernel integrates in closed form,

    e**m  ->  [(w - 1)/(m + 2) + 1/(m + 1)] * y + [1/(m + 2) - 1/(m + 1)] * y**(m + 2),

so applying a kernel to a polynomial is a cheap coefficient map: every
input monomial feeds the linear term plus one shifted monomial.  The
closed form is validated against adaptive quadrature in the test suite
before anything else trusts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ddouble as dd
from .polyseries import PolySeries

#: Supported support conditions at the plate edge.
BOUNDARY_KINDS = ("clamped", "moveable", "simple", "hinged")


@dataclass(frozen=True)
class BoundarySpec:
    """Edge support condition and Poisson ratio.

    The kernel edge weights are fixed by the kind:

    ==========  ==============  ==============
    kind        lam (slope)     mu (membrane)
    ==========  ==============  ==============
    clamped     0               2/(1 - nu)
    moveable    0               0
    simple      2/(1 + nu)      0
    hinged      2/(1 + nu)      2/(1 - nu)
    ==========  ==============  ==============

    ``clamped`` is the immovable clamped edge, ``moveable`` the clamped
    edge free to slide radially, ``simple`` the movable simple support
    and ``hinged`` the immovable (hinged) simple support.
    """

    kind: str = "clamped"
    nu: float = 0.3

    def __post_init__(self):
        if self.kind not in BOUNDARY_KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}; expected one of {BOUNDARY_KINDS}")
        if not 0.0 < self.nu < 0.5:
            raise ValueError(f"Poisson ratio {self.nu} outside (0, 0.5)")
        assert 2.0 * self.lam + 1.0 > 0.0

    @property
    def lam(self) -> float:
        return 0.0 if self.kind in ("clamped", "moveable") else 2.0 / (1.0 + self.nu)

    @property
    def mu(self) -> float:
        return 2.0 / (1.0 - self.nu) if self.kind in ("clamped", "hinged") else 0.0


def kernel_value(y: float, e: float, w: float) -> float:
    """Pointwise kernel (w - 1)*y*e + min(y, e); used only as a test oracle hook."""
    return (w - 1.0) * y * e + min(y, e)


def _apply(f: PolySeries, w: float) -> PolySeries:
    """Integrate f against the kernel with edge weight w (closed form)."""
    if f.is_zero:
        return PolySeries.zero(extended=f.extended)
    n = len(f.coeffs)
    m = np.arange(n, dtype=float)
    if f.lo is None:
        lin = (w - 1.0) / (m + 2.0) + 1.0 / (m + 1.0)
        tail = 1.0 / (m + 2.0) - 1.0 / (m + 1.0)
        out = np.zeros(n + 2)
        out[2:] = f.coeffs * tail
        # all input monomials contribute to the linear term; fsum keeps the
        # accumulated rounding from drifting over long runs
        out[1] += math.fsum(f.coeffs * lin)
        return PolySeries(out)
    # extended path: the weight enters as the exact pair w - 1
    wm1_h, wm1_l = dd.two_sum(w, -1.0)
    a_h, a_l = dd.div_d(np.full(n, wm1_h), np.full(n, wm1_l), m + 2.0)
    b_h, b_l = dd.div_floats(1.0, m + 1.0)
    lin_h, lin_l = dd.add(a_h, a_l, b_h, b_l)
    c_h, c_l = dd.div_floats(1.0, m + 2.0)
    tail_h, tail_l = dd.add(c_h, c_l, -b_h, -b_l)
    out_h = np.zeros(n + 2)
    out_l = np.zeros(n + 2)
    out_h[2:], out_l[2:] = dd.mul(f.coeffs, f.lo, tail_h, tail_l)
    s_h, s_l = dd.dot(f.coeffs, f.lo, lin_h, lin_l)
    out_h[1], out_l[1] = dd.add(out_h[1], out_l[1], s_h, s_l)
    return PolySeries(out_h, lo=out_l)


def apply_slope_kernel(f: PolySeries, boundary: BoundarySpec) -> PolySeries:
    """Kernel of the slope equation acting on a series (edge weight lam)."""
    return _apply(f, boundary.lam)


def apply_membrane_kernel(f: PolySeries, boundary: BoundarySpec) -> PolySeries:
    """Kernel of the membrane-force equation acting on a series (edge weight mu)."""
    return _apply(f, boundary.mu)


def load_forcing(boundary: BoundarySpec) -> PolySeries:
    """Image of a unit load under the slope kernel: ((lam + 1) y - y**2) / 2."""
    return PolySeries([0.0, (boundary.lam + 1.0) / 2.0, -0.5])


def forcing_integral(boundary: BoundarySpec) -> float:
    """Weighted integral of the unit-load image, (2 lam + 1) / 4."""
    return load_forcing(boundary).integral_over_y()
