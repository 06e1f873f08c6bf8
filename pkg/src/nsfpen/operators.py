r"""
Discrete operators on periodic piecewise-constant fields.

Every face carries the unit normal of the positive axis direction. For the
face between a cell ``K`` and its positive-side neighbor ``L``

.. math::

    \overline{r} = \frac{r_K + r_L}{2}, \qquad [[r]] = r_L - r_K.

All operators work on a uniform grid of any dimension ``d``: a scalar field is
an array with ``d`` axes, a vector field has one leading component axis and a
tensor field two. The cell width ``h`` enters through ``|sigma|/|K| = 1/h``.

.. autofunction:: face_average
.. autofunction:: face_jump
.. autofunction:: grad_h
.. autofunction:: div_h_vec
.. autofunction:: sym_grad
.. autofunction:: div_h_tensor
.. autofunction:: upwind_flux
.. autofunction:: upwind_div_scalar
.. autofunction:: upwind_div_vector
"""

from __future__ import annotations

import numpy as np


def _plus(r: np.ndarray, axis: int) -> np.ndarray:
    # value of the positive-side neighbor
    return np.roll(r, -1, axis=axis)


def face_average(r: np.ndarray, axis: int) -> np.ndarray:
    """Average on the positive face of every cell along *axis*."""
    return 0.5 * (r + _plus(r, axis))


def face_jump(r: np.ndarray, axis: int) -> np.ndarray:
    """Jump ``r_L - r_K`` across the positive face of every cell along *axis*."""
    return _plus(r, axis) - r


def _face_divergence(flux: np.ndarray, axis: int, h: float) -> np.ndarray:
    # flux[K] lives on the positive face of K; the negative face of K is the
    # positive face of its negative-side neighbor, entered with flipped normal
    return (flux - np.roll(flux, 1, axis=axis)) / h


def grad_h(r: np.ndarray, h: float) -> np.ndarray:
    """Face-average gradient of a scalar field, shape ``(d, *r.shape)``."""
    return np.stack([_face_divergence(face_average(r, a), a, h) for a in range(r.ndim)])


def div_h_vec(v: np.ndarray, h: float) -> np.ndarray:
    """Face-average divergence of a vector field, the negative adjoint of :func:`grad_h`."""
    d = v.shape[0]
    out = _face_divergence(face_average(v[0], 0), 0, h)
    for a in range(1, d):
        out = out + _face_divergence(face_average(v[a], a), a, h)
    return out


def grad_h_vec(v: np.ndarray, h: float) -> np.ndarray:
    """Gradient tensor ``G[i, j] = d_j v_i`` of a vector field."""
    return np.stack([grad_h(vi, h) for vi in v])


def sym_grad(v: np.ndarray, h: float) -> np.ndarray:
    g = grad_h_vec(v, h)
    return 0.5 * (g + np.swapaxes(g, 0, 1))


def div_h_tensor(T: np.ndarray, h: float) -> np.ndarray:
    """Row-wise divergence, component ``i`` is ``div_h`` of ``T[i, :]``."""
    return np.stack([div_h_vec(row, h) for row in T])


def upwind_flux(r: np.ndarray, v: np.ndarray, axis: int, h: float, alpha: float,
                diffusion: float | None = None) -> np.ndarray:
    r"""Viscosity-upwind flux through the positive face of every cell.

    .. math::

        F = \overline{r}\, \overline{v} \cdot n
            - \left(\tfrac12 |\overline{v} \cdot n| + h^\alpha\right) [[r]]

    *diffusion* replaces the ``h**alpha`` coefficient when given; pass ``0``
    to recover the plain donor-cell flux.
    """
    if diffusion is None:
        diffusion = h**alpha
    vn = face_average(v[axis], axis)
    return face_average(r, axis) * vn - (0.5 * np.abs(vn) + diffusion) * face_jump(r, axis)


def upwind_div_scalar(r: np.ndarray, v: np.ndarray, h: float, alpha: float,
                      diffusion: float | None = None) -> np.ndarray:
    out = _face_divergence(upwind_flux(r, v, 0, h, alpha, diffusion), 0, h)
    for a in range(1, r.ndim):
        out = out + _face_divergence(upwind_flux(r, v, a, h, alpha, diffusion), a, h)
    return out


def upwind_div_vector(m: np.ndarray, v: np.ndarray, h: float, alpha: float,
                      diffusion: float | None = None) -> np.ndarray:
    """Componentwise :func:`upwind_div_scalar` with the shared transport velocity *v*."""
    return np.stack([upwind_div_scalar(mi, v, h, alpha, diffusion) for mi in m])
