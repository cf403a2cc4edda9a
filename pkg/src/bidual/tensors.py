"""Adjoint chains of trilinear tensors on finite-dimensional spaces.

A trilinear map f: X1 x X2 x X3 -> Y is stored as a dense coefficient
array of shape (d1, d2, d3, dY) in fixed bases, with the bilinear duality
pairing <y*, y> = sum_i y*_i y_i.  The adjoint rotates the legs, the
four-fold adjoint is the canonical bidual extension (the identity here,
since finite-dimensional spaces are reflexive), and every permuted
extension coincides with the original map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .templates import Perm3


class TensorShapeError(ValueError):
    pass


@dataclass(frozen=True)
class TrilinearTensor:
    array: np.ndarray  # shape (d1, d2, d3, dY)

    def __post_init__(self):
        arr = np.asarray(self.array, dtype=complex)
        if arr.ndim != 4:
            raise TensorShapeError(f"expected a 4-leg tensor, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise TensorShapeError("tensor entries must be finite")
        object.__setattr__(self, "array", arr)

    @property
    def dims(self):
        return self.array.shape

    def evaluate(self, x1, x2, x3) -> np.ndarray:
        x1, x2, x3 = (np.asarray(x, dtype=complex) for x in (x1, x2, x3))
        d1, d2, d3, _ = self.dims
        if x1.shape != (d1,) or x2.shape != (d2,) or x3.shape != (d3,):
            raise TensorShapeError("input dimensions do not match the tensor")
        return np.einsum("ijky,i,j,k->y", self.array, x1, x2, x3)


def adjoint(t: TrilinearTensor) -> TrilinearTensor:
    """The adjoint f*: Y* x X1 x X2 -> X3*, <f*(y*,x1,x2),x3> = <y*,f(x1,x2,x3)>.

    Coefficients satisfy adjoint(A)[y,i,j][k] = A[i,j,k,y]: the output leg
    rotates to the front.
    """
    return TrilinearTensor(np.moveaxis(t.array, 3, 0))


def circledast(t: TrilinearTensor) -> TrilinearTensor:
    """Four iterated adjoints: the canonical extension to the biduals."""
    out = t
    for _ in range(4):
        out = adjoint(out)
    return out


def permuted(t: TrilinearTensor, sigma: Perm3) -> TrilinearTensor:
    """f^sigma with inputs in the order X_{sigma(1)}, X_{sigma(2)}, X_{sigma(3)}."""
    axes = (sigma(1) - 1, sigma(2) - 1, sigma(3) - 1, 3)
    return TrilinearTensor(np.transpose(t.array, axes))


def permuted_extension(t: TrilinearTensor, sigma: Perm3) -> TrilinearTensor:
    """((f^sigma)^circledast)^(sigma^-1); equals f in finite dimensions."""
    return permuted(circledast(permuted(t, sigma)), sigma.inverse())


def random_tensor(dims, rng) -> TrilinearTensor:
    re = rng.standard_normal(dims)
    im = rng.standard_normal(dims)
    return TrilinearTensor(re + 1j * im)
