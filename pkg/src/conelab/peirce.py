"""Peirce decomposition, principal minors and generalized power functions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Element,
    Endomorphism,
    JordanFrame,
    determinant,
    eigenvalues,
    identity,
    inner,
    is_idempotent,
    jordan_product,
    norm,
    quad_rep,
)
from .errors import DomainError, ValidationError

PEIRCE_EIGENVALUES = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class PowerExponent:
    """Exponent vector s = (s_1, ..., s_r) of a generalized power function."""

    values: tuple

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values) -> "PowerExponent":
        if isinstance(values, PowerExponent):
            return values
        values = np.atleast_1d(np.asarray(values, dtype=float))
        return cls(tuple(values))

    @classmethod
    def constant(cls, p: float, rank: int) -> "PowerExponent":
        return cls((float(p),) * rank)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    def __len__(self) -> int:
        return len(self.values)


def _check_exponent(s, rank: int) -> np.ndarray:
    s = PowerExponent.of(s)
    if len(s) != rank:
        raise ValidationError(f"exponent has {len(s)} entries, rank is {rank}")
    return s.as_array()


# ---------------------------------------------------------------------------
# projections onto Peirce eigenspaces
# ---------------------------------------------------------------------------


def peirce_projectors(c: Element, tol: float = 1e-8) -> dict:
    """Orthogonal projections onto the eigenspaces of L(c), keyed by 0, 1/2, 1.

    P(c) projects onto the eigenvalue-1 space and P(e - c) onto the
    eigenvalue-0 space; the half space absorbs the rest.
    """
    if not is_idempotent(c, tol):
        raise ValidationError("Peirce projections require an idempotent")
    algebra = c.algebra
    p1 = quad_rep(c)
    p0 = quad_rep(identity(algebra) - c)
    ph = Endomorphism(algebra, np.eye(algebra.dim) - p1.matrix - p0.matrix)
    return {0.0: p0, 0.5: ph, 1.0: p1}


def peirce_project(x: Element, c: Element, eigenvalue: float) -> Element:
    """Component of x in the L(c)-eigenspace for eigenvalue 0, 1/2 or 1."""
    ev = float(eigenvalue)
    if ev not in PEIRCE_EIGENVALUES:
        raise ValidationError("eigenvalue must be one of 0, 1/2, 1")
    return peirce_projectors(c)[ev].apply(x)


# ---------------------------------------------------------------------------
# the joint decomposition for a full frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PeirceBasis:
    """Orthonormal bases of the subspaces E_ij attached to a frame.

    ``subspaces[(i, j)]`` is a (d_ij, dim) array of coordinate rows,
    orthonormal in the trace form; d_ii = 1 and d_ij = d for i < j.
    """

    frame: JordanFrame
    subspaces: dict = field(repr=False)

    def projector_matrix(self, i: int, j: int) -> np.ndarray:
        rows = self.subspaces[(min(i, j), max(i, j))]
        scale = self.frame.algebra.inner_scale
        return scale * rows.T @ rows

    def project(self, x: Element, i: int, j: int) -> Element:
        return Element(x.algebra, self.projector_matrix(i, j) @ x.coords)

    def coordinates(self, x: Element, i: int, j: int) -> np.ndarray:
        """Trace-form coefficients of x along the (i, j) subspace basis."""
        rows = self.subspaces[(min(i, j), max(i, j))]
        return self.frame.algebra.inner_scale * rows @ x.coords


def _gram_schmidt_rows(candidates: np.ndarray, scale: float, expect: int) -> np.ndarray:
    """Orthonormalize candidate coordinate rows (trace form) in deterministic order."""
    rows = []
    for cand in candidates:
        v = cand.copy()
        for b in rows:
            v -= (scale * np.dot(b, v)) * b
        length = np.sqrt(scale) * np.linalg.norm(v)
        if length > 1e-8:
            rows.append(v / length)
        if len(rows) == expect:
            break
    return np.array(rows) if rows else np.zeros((0, candidates.shape[1]))


def build_peirce_basis(frame) -> PeirceBasis:
    """Split the algebra into the subspaces E_ij determined by a frame."""
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    algebra = frame.algebra
    r = algebra.rank
    scale = algebra.inner_scale
    half = [peirce_projectors(c)[0.5].matrix for c in frame]
    subspaces = {}
    total = 0
    basis_eye = np.eye(algebra.dim)
    for i in range(r):
        subspaces[(i, i)] = frame[i].coords[None, :] / norm(frame[i])
        total += 1
        for j in range(i + 1, r):
            proj = half[i] @ half[j]
            candidates = (proj @ basis_eye).T
            rows = _gram_schmidt_rows(candidates, scale, algebra.peirce_d)
            if rows.shape[0] != algebra.peirce_d:
                raise ValidationError(
                    f"subspace ({i},{j}) has dimension {rows.shape[0]}, "
                    f"expected {algebra.peirce_d}"
                )
            subspaces[(i, j)] = rows
            total += algebra.peirce_d
    if total != algebra.dim:
        raise ValidationError("Peirce subspace dimensions do not sum to dim")
    return PeirceBasis(frame, subspaces)


def peirce_norm_identities(
    x: Element,
    y: Element,
    i: int,
    j: int,
    k: int,
    basis: PeirceBasis,
    tol: float = 1e-9,
):
    """Square and cross-norm identities for x in E_ij, y in E_jk with i != k.

    Returns (x^2, |xy|^2) after checking x^2 = |x|^2 (c_i + c_j) / 2 and
    |xy|^2 = |x|^2 |y|^2 / 8.  Inputs are projected onto their subspaces
    first; a projection that moves them beyond tolerance is an error.
    """
    if i == k:
        raise ValidationError("the cross-norm identity needs i != k")
    px = basis.project(x, i, j)
    py = basis.project(y, j, k)
    for label, orig, proj in (("x", x, px), ("y", y, py)):
        drift = norm(orig - proj)
        if drift > tol * max(1.0, norm(orig)):
            raise ValidationError(f"{label} is not in its stated Peirce subspace")
    x_sq = jordan_product(px, px)
    xy = jordan_product(px, py)
    xy_norm_sq = inner(xy, xy)
    nx = inner(px, px)
    ny = inner(py, py)
    target = 0.5 * nx * (basis.frame[i] + basis.frame[j])
    if norm(x_sq - target) > tol * max(1.0, nx):
        raise ValidationError("square identity x^2 = |x|^2 (c_i + c_j)/2 violated")
    if abs(xy_norm_sq - nx * ny / 8.0) > tol * max(1.0, nx * ny):
        raise ValidationError("cross-norm identity |xy|^2 = |x|^2 |y|^2 / 8 violated")
    return x_sq, xy_norm_sq


# ---------------------------------------------------------------------------
# principal minors and generalized powers
# ---------------------------------------------------------------------------


def principal_minor(x: Element, k: int, frame) -> float:
    """Minor of order k: the subalgebra determinant of the projection of x.

    The projection onto the subalgebra of c_1 + ... + c_k has the subalgebra
    spectrum plus r - k exact zeros, so the minor is the product of the k
    largest eigenvalues in absolute value.
    """
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    algebra = x.algebra
    if not 1 <= k <= algebra.rank:
        raise ValidationError(f"minor order {k} outside 1..{algebra.rank}")
    if k == algebra.rank:
        return determinant(x)
    y = frame.leading_projector(k).apply(x)
    lam = eigenvalues(y)
    order = np.argsort(-np.abs(lam), kind="stable")
    return float(np.prod(lam[order[:k]]))


def all_principal_minors(x: Element, frame) -> np.ndarray:
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    return np.array(
        [principal_minor(x, k, frame) for k in range(1, x.algebra.rank + 1)]
    )


def generalized_power_log(x: Element, s, frame) -> float:
    """log Delta_s(x) = sum_k (s_k - s_{k+1}) log Delta_k(x); needs Delta_k > 0."""
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    svec = _check_exponent(s, x.algebra.rank)
    minors = all_principal_minors(x, frame)
    if np.any(minors <= 0.0):
        raise DomainError("generalized power needs all principal minors positive")
    steps = svec - np.append(svec[1:], 0.0)
    return float(np.dot(steps, np.log(minors)))


def generalized_power(x: Element, s, frame) -> float:
    """Delta_s(x); reduces to det(x)^p for constant s = (p, ..., p)."""
    return float(np.exp(generalized_power_log(x, s, frame)))
