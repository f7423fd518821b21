"""Multiplication and division algorithms w, g = w^{-1} as first-class objects.

An algorithm maps each cone point x to a cone automorphism w(x) with
w(x) e = x.  The two canonical constructions are the quadratic one
(w1: x -> P(x^{1/2})) and the triangular one (w2: x -> t_x); ``interp``
blends them and ``k_extended`` post-composes with a fixed rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .algebra import (
    AlgebraDescriptor,
    Element,
    Endomorphism,
    JordanFrame,
    determinant,
    eigenvalues,
    element_power,
    identity,
    norm,
    quad_rep,
    random_automorphism_k,
    random_cone_element,
    require_in_cone,
    sqrt_element,
    standard_frame,
)
from .errors import ValidationError
from .triangular import as_endomorphism, triangular_decompose


@dataclass(frozen=True, eq=False)
class MultiplicationAlgorithm:
    """A map x -> w(x) in the automorphism group with w(x) e = x."""

    kind: str
    algebra: AlgebraDescriptor
    evaluator: Callable[[Element], Endomorphism] = field(repr=False)
    homogeneous: bool = True
    frame: Optional[JordanFrame] = None
    alpha: Optional[float] = None
    spec: str = ""

    def __call__(self, x: Element) -> Endomorphism:
        require_in_cone(x, "multiplication algorithm argument")
        return self.evaluator(x)

    def unit_image(self) -> Endomorphism:
        """w(e); the identity for w1/w2/interp, the fixed rotation for k_extended."""
        return self.evaluator(identity(self.algebra))


def w1(algebra: AlgebraDescriptor) -> MultiplicationAlgorithm:
    """The quadratic algorithm x -> P(x^{1/2})."""
    return MultiplicationAlgorithm(
        kind="w1",
        algebra=algebra,
        evaluator=lambda x: quad_rep(sqrt_element(x)),
        homogeneous=True,
        spec="w1",
    )


def w2(frame) -> MultiplicationAlgorithm:
    """The triangular algorithm x -> t_x for a fixed frame."""
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    return MultiplicationAlgorithm(
        kind="w2",
        algebra=frame.algebra,
        evaluator=lambda x: as_endomorphism(triangular_decompose(x, frame)),
        homogeneous=True,
        frame=frame,
        spec="w2",
    )


def interp(alpha: float, frame) -> MultiplicationAlgorithm:
    """P(x^alpha) composed with t_{x^{1-2alpha}}: w1 at alpha=1/2, w2 at alpha=0."""
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    alpha = float(alpha)

    def evaluate(x: Element) -> Endomorphism:
        head = quad_rep(element_power(x, alpha))
        tail = as_endomorphism(
            triangular_decompose(element_power(x, 1.0 - 2.0 * alpha), frame)
        )
        return head @ tail

    return MultiplicationAlgorithm(
        kind="interp",
        algebra=frame.algebra,
        evaluator=evaluate,
        homogeneous=True,
        frame=frame,
        alpha=alpha,
        spec=f"interp:{alpha:g}",
    )


def k_extended(base: MultiplicationAlgorithm, k: Endomorphism, spec: str = "") -> MultiplicationAlgorithm:
    """x -> base(x) k for a fixed rotation k; still neutral since k e = e."""
    if k.algebra != base.algebra:
        raise ValidationError("rotation and base algorithm from different algebras")
    if norm(k.apply(identity(base.algebra)) - identity(base.algebra)) > 1e-9:
        raise ValidationError("the extension factor must fix e")
    return MultiplicationAlgorithm(
        kind="kext",
        algebra=base.algebra,
        evaluator=lambda x: base.evaluator(x) @ k,
        homogeneous=base.homogeneous,
        frame=base.frame,
        spec=spec or f"kext:{base.spec}",
    )


def piecewise_det(frame) -> MultiplicationAlgorithm:
    """w1 where det x > 1, w2 elsewhere; a valid algorithm that is not homogeneous."""
    if not isinstance(frame, JordanFrame):
        frame = JordanFrame(frame)
    quad = w1(frame.algebra)
    tri = w2(frame)

    def evaluate(x: Element) -> Endomorphism:
        branch = quad if determinant(x) > 1.0 else tri
        return branch.evaluator(x)

    return MultiplicationAlgorithm(
        kind="piecewise",
        algebra=frame.algebra,
        evaluator=evaluate,
        homogeneous=False,
        frame=frame,
        spec="piecewise",
    )


def parse_algorithm(spec: str, algebra: AlgebraDescriptor, frame=None) -> MultiplicationAlgorithm:
    """Build an algorithm from its config string.

    Recognized forms: "w1", "w2", "interp:<alpha>", "kext:<base>:<seed>".
    """
    frame = frame if frame is not None else standard_frame(algebra)
    spec = spec.strip()
    if spec == "w1":
        return w1(algebra)
    if spec == "w2":
        return w2(frame)
    if spec.startswith("interp:"):
        try:
            alpha = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ValidationError(f"bad interpolation parameter in {spec!r}") from exc
        return interp(alpha, frame)
    if spec.startswith("kext:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValidationError(f"expected kext:<base>:<seed>, got {spec!r}")
        base = parse_algorithm(parts[1], algebra, frame)
        try:
            seed = int(parts[2])
        except ValueError as exc:
            raise ValidationError(f"bad seed in {spec!r}") from exc
        k = random_automorphism_k(algebra, np.random.default_rng(seed))
        return k_extended(base, k, spec=spec)
    raise ValidationError(f"unknown algorithm spec {spec!r}")


# ---------------------------------------------------------------------------
# evaluation and verification
# ---------------------------------------------------------------------------


def multiply(w: MultiplicationAlgorithm, x: Element, y: Element) -> Element:
    """w(x) applied to y; multiply(w, x, e) = x."""
    return w(x).apply(y)


def divide(w: MultiplicationAlgorithm, x: Element, y: Element) -> Element:
    """g(x) y with g = w^{-1}; divide(w, x, x) = e."""
    return w(x).solve(y)


@dataclass(frozen=True)
class AlgorithmReport:
    """Max residuals of the defining and structural properties over a sample."""

    spec: str
    samples: int
    neutrality: float
    cone_violation: float
    homogeneity: float
    divide_scaling: float
    ddet_rel: float
    homogeneous: bool

    def as_dict(self) -> dict:
        return {
            "spec": self.spec,
            "samples": self.samples,
            "neutrality": self.neutrality,
            "cone_violation": self.cone_violation,
            "homogeneity": self.homogeneity,
            "divide_scaling": self.divide_scaling,
            "ddet_rel": self.ddet_rel,
            "homogeneous": self.homogeneous,
        }


def check_algorithm(
    w: MultiplicationAlgorithm,
    sample_count: int,
    rng: np.random.Generator,
    homogeneity_tol: float = 1e-9,
) -> AlgorithmReport:
    """Measure neutrality, cone preservation, degree-1 scaling and the
    endomorphism-determinant law DDet(w(y)) = (det y)^(dim/r)."""
    algebra = w.algebra
    e = identity(algebra)
    neutrality = 0.0
    cone_violation = 0.0
    homogeneity = 0.0
    divide_scaling = 0.0
    ddet_rel = 0.0
    exponent = algebra.dim / algebra.rank
    for _ in range(sample_count):
        x = random_cone_element(algebra, rng, 0.2, 5.0)
        wx = w(x)
        neutrality = max(neutrality, norm(wx.apply(e) - x) / max(norm(x), 1.0))
        y = random_cone_element(algebra, rng, 0.2, 5.0)
        image = wx.apply(y)
        cone_violation = max(cone_violation, max(0.0, -float(eigenvalues(image).min())))
        s = float(np.exp(rng.uniform(np.log(0.25), np.log(4.0))))
        ws = w(s * x)
        homogeneity = max(
            homogeneity,
            float(np.max(np.abs(ws.matrix - s * wx.matrix))) / max(s, 1.0),
        )
        g_scaled = np.linalg.inv(ws.matrix)
        g_plain = np.linalg.inv(wx.matrix)
        divide_scaling = max(
            divide_scaling, float(np.max(np.abs(g_scaled - g_plain / s)))
        )
        dd = wx.ddet()
        ddet_rel = max(ddet_rel, abs(dd - determinant(x) ** exponent) / abs(dd))
    return AlgorithmReport(
        spec=w.spec or w.kind,
        samples=sample_count,
        neutrality=neutrality,
        cone_violation=cone_violation,
        homogeneity=homogeneity,
        divide_scaling=divide_scaling,
        ddet_rel=ddet_rel,
        homogeneous=homogeneity <= homogeneity_tol,
    )
