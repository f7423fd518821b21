"""Riesz and Wishart distributions on the cone, their densities and samplers.

The Riesz density with exponent vector s and scale a in the cone is

    f(x) = Delta_{s - dim/r}(x) * exp(-<a, x>) / (Gamma_V(s) * Delta_s(a^{-1}))

with respect to the trace-form Lebesgue measure; Wishart is the constant-s
case, where the normalizer reduces to (det a)^p / Gamma_V(p).  The sampler
uses the triangular-group construction: gamma-distributed diagonal entries,
conditionally Gaussian Frobenius parameters, then the group element sending
e to a^{-1} adjusts the scale.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special
from scipy.special import roots_genlaguerre

from .algebra import (
    SYM_REAL,
    AlgebraDescriptor,
    Element,
    JordanFrame,
    determinant,
    eigenvalues,
    from_matrix,
    identity,
    inner,
    inverse,
    jordan_product,
    mats_to_coords,
    parse_algebra,
    random_element,
    require_in_cone,
    standard_frame,
)
from .errors import DomainError, ValidationError
from .funceq import LogCauchyFn, delta_s_log, log_det_power
from .peirce import PowerExponent, build_peirce_basis, generalized_power_log
from .triangular import as_endomorphism, triangular_decompose

# ---------------------------------------------------------------------------
# the cone Gamma function
# ---------------------------------------------------------------------------


def _exponent_array(s, algebra: AlgebraDescriptor) -> np.ndarray:
    s = PowerExponent.of(s)
    if len(s) != algebra.rank:
        raise ValidationError(f"exponent has {len(s)} entries, rank is {algebra.rank}")
    return s.as_array()


def gamma_shapes(s, algebra: AlgebraDescriptor) -> np.ndarray:
    """The shifted parameters s_j - (j-1) d/2; all must be positive."""
    svec = _exponent_array(s, algebra)
    shifts = 0.5 * algebra.peirce_d * np.arange(algebra.rank)
    return svec - shifts


def log_gamma_cone(s, algebra: AlgebraDescriptor) -> float:
    """log of the cone Gamma function."""
    shapes = gamma_shapes(s, algebra)
    if np.any(shapes <= 0):
        raise DomainError(
            f"Gamma function needs s_j > (j-1)d/2; offending shapes {shapes}"
        )
    half_log_two_pi = 0.5 * (algebra.dim - algebra.rank) * np.log(2.0 * np.pi)
    return float(half_log_two_pi + np.sum(special.gammaln(shapes)))


def gamma_cone(s, algebra: AlgebraDescriptor) -> float:
    """Gamma function of the cone: (2 pi)^((dim-r)/2) prod_j Gamma(s_j - (j-1)d/2)."""
    return float(np.exp(log_gamma_cone(s, algebra)))


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RieszParams:
    """Exponent vector s, scale a in the cone, and the reference frame."""

    s: PowerExponent
    a: Element
    frame: JordanFrame

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", PowerExponent.of(self.s))
        frame = self.frame
        if not isinstance(frame, JordanFrame):
            frame = JordanFrame(frame)
            object.__setattr__(self, "frame", frame)
        algebra = frame.algebra
        if self.a.algebra != algebra:
            raise ValidationError("scale parameter and frame from different algebras")
        if np.any(gamma_shapes(self.s, algebra) <= 0):
            raise DomainError("Riesz exponents must satisfy s_j > (j-1)d/2")
        require_in_cone(self.a, "scale parameter")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.frame.algebra


@dataclass(frozen=True, eq=False)
class WishartParams:
    """Degree p > dim/r - 1 and scale a in the cone."""

    p: float
    a: Element

    def __post_init__(self) -> None:
        algebra = self.a.algebra
        if self.p <= algebra.dim / algebra.rank - 1:
            raise DomainError(
                f"Wishart degree must exceed dim/r - 1 = {algebra.dim / algebra.rank - 1}"
            )
        require_in_cone(self.a, "scale parameter")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.a.algebra

    def as_riesz(self, frame=None) -> RieszParams:
        algebra = self.algebra
        frame = frame if frame is not None else standard_frame(algebra)
        return RieszParams(PowerExponent.constant(self.p, algebra.rank), self.a, frame)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


def riesz_log_normalizer(params: RieszParams) -> float:
    """log of 1 / (Gamma_V(s) Delta_s(a^{-1})); the constant making mass one."""
    algebra = params.algebra
    a_inv = inverse(params.a)
    return -log_gamma_cone(params.s, algebra) - generalized_power_log(
        a_inv, params.s, params.frame
    )


def riesz_logpdf(params: RieszParams, x: Element) -> float:
    """Log density of the Riesz distribution at x; -inf outside the cone."""
    algebra = params.algebra
    if x.algebra != algebra:
        raise ValidationError("point and parameters from different algebras")
    if eigenvalues(x).min() <= 0:
        return float("-inf")
    shifted = params.s.as_array() - algebra.dim / algebra.rank
    return float(
        riesz_log_normalizer(params)
        + generalized_power_log(x, shifted, params.frame)
        - inner(params.a, x)
    )


def wishart_logpdf(params: WishartParams, x: Element) -> float:
    """Log density of the Wishart distribution, in closed form."""
    algebra = params.algebra
    if x.algebra != algebra:
        raise ValidationError("point and parameters from different algebras")
    lam = eigenvalues(x)
    if lam.min() <= 0:
        return float("-inf")
    p = params.p
    log_norm = p * np.log(determinant(params.a)) - log_gamma_cone(
        PowerExponent.constant(p, algebra.rank), algebra
    )
    return float(
        log_norm
        + (p - algebra.dim / algebra.rank) * np.sum(np.log(lam))
        - inner(params.a, x)
    )


def in_domain_D(u: Element) -> bool:
    """True when both u and e - u lie in the open cone (all eigenvalues in (0, 1))."""
    lam = eigenvalues(u)
    return bool(lam.min() > 0.0 and lam.max() < 1.0)


def random_in_domain_D(
    algebra: AlgebraDescriptor, rng: np.random.Generator, low: float = 0.05, high: float = 0.95
) -> Element:
    return random_element(algebra, rng, (low, high))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _scale_endomorphism(params: RieszParams):
    """The triangular element sending e to a^{-1} (identity when a = e)."""
    algebra = params.algebra
    if np.max(np.abs(params.a.coords - identity(algebra).coords)) < 1e-14:
        return None
    return as_endomorphism(triangular_decompose(inverse(params.a), params.frame))


def _sample_riesz_sym_real_standard(params: RieszParams, n: int, rng: np.random.Generator):
    """Vectorized lower-triangular construction for sym_real with the standard frame."""
    algebra = params.algebra
    r = algebra.rank
    shapes = gamma_shapes(params.s, algebra)
    diag = np.sqrt(rng.gamma(shape=shapes, size=(n, r)))
    t = np.zeros((n, r, r))
    idx = np.arange(r)
    t[:, idx, idx] = diag
    lower = np.tril_indices(r, k=-1)
    t[:, lower[0], lower[1]] = rng.standard_normal((n, len(lower[0]))) * np.sqrt(0.5)
    scale = _scale_endomorphism(params)
    if scale is not None:
        t0 = np.linalg.cholesky(inverse(params.a).to_matrix())
        t = t0 @ t
    mats = t @ np.transpose(t, (0, 2, 1))
    coords = mats_to_coords(algebra, mats)
    return [Element(algebra, row) for row in coords]


def _apply_frobenius(c: Element, z: Element, y: Element) -> Element:
    """tau_c(z) y through Jordan products only (z already in the half space)."""

    def n_apply(v: Element) -> Element:
        zc = jordan_product(z, c)
        return 2.0 * (
            jordan_product(zc, v)
            + jordan_product(z, jordan_product(c, v))
            - jordan_product(c, jordan_product(z, v))
        )

    ny = n_apply(y)
    return y + ny + 0.5 * n_apply(ny)


def sample_riesz(params: RieszParams, n: int, rng: np.random.Generator):
    """n independent draws, deterministic under the generator state."""
    algebra = params.algebra
    if algebra.kind == SYM_REAL and params.frame.elements == standard_frame(algebra).elements:
        return _sample_riesz_sym_real_standard(params, n, rng)
    r = algebra.rank
    frame = params.frame
    basis = build_peirce_basis(frame)
    shapes = gamma_shapes(params.s, algebra)
    z_rows = []
    for j in range(r - 1):
        rows = np.vstack([basis.subspaces[(j, k)] for k in range(j + 1, r)])
        z_rows.append(rows)
    scale = _scale_endomorphism(params)
    out = []
    for _ in range(n):
        alphas = rng.gamma(shape=shapes)
        zs = []
        for j in range(r - 1):
            xi = rng.standard_normal(z_rows[j].shape[0]) / np.sqrt(alphas[j])
            zs.append(Element(algebra, xi @ z_rows[j]))
        y = Element(
            algebra, np.sum([a * c.coords for a, c in zip(alphas, frame)], axis=0)
        )
        for j in range(r - 2, -1, -1):
            y = _apply_frobenius(frame[j], zs[j], y)
        if scale is not None:
            y = scale.apply(y)
        out.append(y)
    return out


def sample_wishart(params: WishartParams, n: int, rng: np.random.Generator, frame=None):
    return sample_riesz(params.as_riesz(frame), n, rng)


# ---------------------------------------------------------------------------
# factorized density models for the independence harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityModel:
    """Density of the form exp(log_normalizer) * exp(mult_fn(x)) * exp(<lam, x>) on the cone.

    ``mult_fn`` is the logarithm of the multiplicative part.  ``lam`` is not
    required to have -lam in the cone; integrability is the caller's burden
    and is only checked numerically where a check is requested.
    """

    log_normalizer: float
    lam: Element
    mult_fn: LogCauchyFn
    algorithm: object
    riesz_params: Optional[RieszParams] = None

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.lam.algebra

    def logpdf(self, x: Element) -> float:
        if eigenvalues(x).min() <= 0:
            return float("-inf")
        return float(self.log_normalizer + self.mult_fn(x) + inner(self.lam, x))

    def sample(self, n: int, rng: np.random.Generator):
        if self.riesz_params is None:
            raise ValidationError("this density model carries no sampler parameters")
        return sample_riesz(self.riesz_params, n, rng)


def wishart_model(params: WishartParams, algorithm, frame=None) -> DensityModel:
    """Wishart density packaged as a factorized model for the quadratic algorithm."""
    algebra = params.algebra
    riesz = params.as_riesz(frame)
    mult = log_det_power(params.p - algebra.dim / algebra.rank, algebra)
    return DensityModel(
        log_normalizer=riesz_log_normalizer(riesz),
        lam=-1.0 * params.a,
        mult_fn=mult,
        algorithm=algorithm,
        riesz_params=riesz,
    )


def riesz_model(params: RieszParams, algorithm) -> DensityModel:
    """Riesz density packaged as a factorized model for the triangular algorithm."""
    algebra = params.algebra
    shifted = params.s.as_array() - algebra.dim / algebra.rank
    mult = delta_s_log(shifted, params.frame)
    return DensityModel(
        log_normalizer=riesz_log_normalizer(params),
        lam=-1.0 * params.a,
        mult_fn=mult,
        algorithm=algorithm,
        riesz_params=params,
    )


# ---------------------------------------------------------------------------
# quadrature check of the normalization (rank 2, sym_real)
# ---------------------------------------------------------------------------


def riesz_normalization_quadrature(
    params: RieszParams,
    n_radial: int = 48,
    n_angle: int = 48,
    check_points: int = 64,
) -> tuple:
    """Total mass of the density by quadrature in spectral coordinates.

    Only implemented for sym_real rank 2 with the standard frame, where the
    trace-form volume element is sqrt(2) (l1 - l2) dl1 dl2 dtheta on the
    ordered region {l1 > l2 > 0} x [0, pi).  The ordered region is mapped to
    (l2, gap) and integrated with generalized Gauss-Laguerre rules whose
    weights absorb the fractional powers at the boundary.  Returns
    (mass, spot_disagreement) where the second entry is the largest gap
    between the closed-form integrand and exp(riesz_logpdf) on a subsample
    of nodes.
    """
    algebra = params.algebra
    if algebra.kind != SYM_REAL or algebra.rank != 2:
        raise ValidationError("quadrature check supports sym_real rank 2 only")
    if params.frame.elements != standard_frame(algebra).elements:
        raise ValidationError("quadrature check needs the standard frame")
    svec = params.s.as_array()
    shifted = svec - algebra.dim / algebra.rank
    beta = shifted[1]
    a_mat = params.a.to_matrix()
    rate = float(np.linalg.eigvalsh(a_mat).min())
    if rate <= 0:
        raise DomainError("scale parameter must be positive definite")
    x_low, w_low = roots_genlaguerre(n_radial, beta)  # weight x^beta e^{-x}
    x_gap, w_gap = roots_genlaguerre(n_radial, 1.0)  # weight x e^{-x}
    theta = (np.arange(n_angle) + 0.5) * np.pi / n_angle
    theta_w = np.pi / n_angle
    l2, gap, th = np.meshgrid(x_low / rate, x_gap / rate, theta, indexing="ij")
    l1 = l2 + gap
    cos, sin = np.cos(th), np.sin(th)
    x11 = l1 * cos**2 + l2 * sin**2
    x22 = l1 * sin**2 + l2 * cos**2
    x12 = (l1 - l2) * sin * cos
    pairing = a_mat[0, 0] * x11 + a_mat[1, 1] * x22 + 2.0 * a_mat[0, 1] * x12
    # integrand = (l1 l2)^beta x11^(s1-s2) gap e^{-pairing}; the rules carry
    # l2^beta e^{-rate l2} and gap e^{-rate gap}, leaving this residual factor
    residual = l1**beta * x11 ** (svec[0] - svec[1]) * np.exp(
        -(pairing - rate * (l2 + gap))
    )
    weights = (
        (w_low[:, None, None] / rate ** (beta + 1.0))
        * (w_gap[None, :, None] / rate**2)
        * theta_w
        * np.sqrt(2.0)
    )
    log_norm = riesz_log_normalizer(params)
    mass = float(np.exp(log_norm) * np.sum(weights * residual))

    spot = 0.0
    log_density = (
        log_norm
        + (svec[0] - svec[1]) * np.log(x11)
        + beta * np.log(l1 * l2)
        - pairing
    )
    flat_idx = np.linspace(0, log_density.size - 1, check_points).astype(int)
    for idx in flat_idx:
        i, j, k = np.unravel_index(idx, log_density.shape)
        mat = np.array([[x11[i, j, k], x12[i, j, k]], [x12[i, j, k], x22[i, j, k]]])
        lp = riesz_logpdf(params, from_matrix(algebra, mat))
        spot = max(spot, abs(lp - float(log_density[i, j, k])))
    return mass, spot


# ---------------------------------------------------------------------------
# CSV persistence of sample batches
# ---------------------------------------------------------------------------


def save_samples_csv(path, samples) -> None:
    """One row per draw; coordinates in the documented basis order."""
    if not samples:
        raise ValidationError("refusing to write an empty sample batch")
    algebra = samples[0].algebra
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([f"algebra={algebra.name}"] + [f"c{i}" for i in range(algebra.dim)])
        for x in samples:
            writer.writerow([""] + [repr(float(v)) for v in x.coords])


def load_samples_csv(path):
    """Inverse of :func:`save_samples_csv`."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if not header or not header[0].startswith("algebra="):
            raise ValidationError("missing algebra descriptor in CSV header")
        algebra = parse_algebra(header[0].split("=", 1)[1])
        samples = []
        for row in reader:
            coords = np.array([float(v) for v in row[1:]])
            samples.append(Element(algebra, coords))
    return samples
