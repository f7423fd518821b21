"""Box operator, Frobenius transformations and the triangular decomposition x = t_x e."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Element,
    Endomorphism,
    JordanFrame,
    eigenvalues,
    identity,
    inner,
    jordan_product,
    lmap,
    quad_rep,
    zero,
)
from .errors import DomainError, ValidationError
from .peirce import peirce_projectors


def box_operator(x: Element, y: Element) -> Endomorphism:
    """The endomorphism x box y = L(xy) + L(x)L(y) - L(y)L(x)."""
    x._check_same(y)
    lx = lmap(x).matrix
    ly = lmap(y).matrix
    lxy = lmap(jordan_product(x, y)).matrix
    return Endomorphism(x.algebra, lxy + lx @ ly - ly @ lx)


def frobenius_transform(c: Element, z: Element) -> Endomorphism:
    """tau_c(z) = I + N + N^2/2 with N = 2 z box c, for z in the half space of c.

    N is nilpotent of degree 3, so this is the exact exponential of N.
    z is projected onto the half space before use.
    """
    z = peirce_projectors(c)[0.5].apply(z)
    n = 2.0 * box_operator(z, c).matrix
    eye = np.eye(c.algebra.dim)
    return Endomorphism(c.algebra, eye + n + 0.5 * (n @ n))


@dataclass(frozen=True, eq=False)
class TriangularElement:
    """A member of the triangular group: Frobenius parameters plus a positive diagonal.

    Represents tau_{c_1}(z^(1)) ... tau_{c_{r-1}}(z^(r-1)) P(sum_k sqrt(alpha_k) c_k)
    with z^(j) in the span of the subspaces E_jk, k > j.
    """

    frame: JordanFrame
    frobenius_params: tuple
    diagonal: np.ndarray

    def __post_init__(self) -> None:
        r = len(self.frame)
        diag = np.array(self.diagonal, dtype=float)
        if diag.shape != (r,):
            raise ValidationError(f"diagonal must have {r} entries")
        if np.any(diag <= 0):
            raise DomainError("triangular diagonal entries must be positive")
        diag.flags.writeable = False
        object.__setattr__(self, "diagonal", diag)
        params = tuple(self.frobenius_params)
        if len(params) != max(r - 1, 0):
            raise ValidationError(f"expected {r - 1} Frobenius parameters")
        object.__setattr__(self, "frobenius_params", params)

    @property
    def algebra(self):
        return self.frame.algebra


def _strict_upper_projector(frame: JordanFrame, j: int) -> Endomorphism:
    """Projection onto the span of E_jk for k > j, within the trailing subalgebra."""
    algebra = frame.algebra
    tail = zero(algebra)
    for c in frame.elements[j + 1 :]:
        tail = tail + c
    half_j = peirce_projectors(frame[j])[0.5].matrix
    half_tail_one = quad_rep(tail).matrix + peirce_projectors(tail)[0.5].matrix
    return Endomorphism(algebra, half_j @ half_tail_one)


def triangular_decompose(x: Element, frame) -> TriangularElement:
    """Unique t in the triangular group of the frame with t e = x, for x in the cone.

    Peels Peirce components: alpha_j is the E_jj component, z^(j) solves the
    half-space components linearly, then tau_{c_j}(-z^(j)) reduces to the
    subalgebra spanned by the remaining frame members.
    """
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    if x.algebra != frame.algebra:
        raise ValidationError("element and frame from different algebras")
    if eigenvalues(x).min() <= 0:
        raise DomainError("triangular decomposition needs a cone element")
    r = len(frame)
    work = x
    alphas = np.empty(r)
    zs = []
    for j in range(r - 1):
        c = frame[j]
        alpha = inner(work, c)
        if alpha <= 0:
            raise DomainError("element is not in the cone of this frame")
        alphas[j] = alpha
        half = _strict_upper_projector(frame, j).apply(work)
        z = half / alpha
        zs.append(z)
        work = frobenius_transform(c, -z).apply(work)
    alphas[r - 1] = inner(work, frame[r - 1])
    if alphas[r - 1] <= 0:
        raise DomainError("element is not in the cone of this frame")
    return TriangularElement(frame, tuple(zs), alphas)


def as_endomorphism(t: TriangularElement) -> Endomorphism:
    """The group element: composed Frobenius maps times P(sum sqrt(alpha_k) c_k)."""
    algebra = t.algebra
    diag = zero(algebra)
    for a, c in zip(t.diagonal, t.frame):
        diag = diag + float(np.sqrt(a)) * c
    out = quad_rep(diag).matrix
    for j in range(len(t.frame) - 2, -1, -1):
        out = frobenius_transform(t.frame[j], t.frobenius_params[j]).matrix @ out
    return Endomorphism(algebra, out)


def adjoint(t: TriangularElement) -> Endomorphism:
    """Adjoint of the group element in the trace form."""
    return as_endomorphism(t).adjoint()


def apply_triangular(t: TriangularElement, x: Element) -> Element:
    return as_endomorphism(t).apply(x)


def compose_triangular(t: TriangularElement, u: TriangularElement) -> TriangularElement:
    """Composition inside the group, recovered by re-decomposing the image of e."""
    if t.frame is not u.frame and t.frame.elements != u.frame.elements:
        raise ValidationError("composition needs a shared frame")
    combined = as_endomorphism(t) @ as_endomorphism(u)
    image = combined.apply(identity(t.algebra))
    return triangular_decompose(image, t.frame)


def triangular_from_cholesky(mat: np.ndarray, frame) -> TriangularElement:
    """Parameters of the sym_real triangular element x -> T x T^t, T lower triangular.

    Valid for the standard frame of a real symmetric algebra; used as an
    independent cross-check of :func:`triangular_decompose`.
    """
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    algebra = frame.algebra
    from .algebra import SYM_REAL, from_matrix, standard_frame

    if algebra.kind != SYM_REAL or frame.elements != standard_frame(algebra).elements:
        raise ValidationError("Cholesky parameters require the standard sym_real frame")
    t_mat = np.asarray(mat, dtype=float)
    r = algebra.rank
    alphas = np.diag(t_mat) ** 2
    zs = []
    for j in range(r - 1):
        zm = np.zeros((r, r))
        for k in range(j + 1, r):
            ratio = t_mat[k, j] / t_mat[j, j]
            zm[j, k] = ratio
            zm[k, j] = ratio
        zs.append(from_matrix(algebra, zm))
    return TriangularElement(frame, tuple(zs), alphas)
