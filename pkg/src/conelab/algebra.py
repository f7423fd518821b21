"""Euclidean Jordan algebras: real symmetric, complex Hermitian, and Lorentz kinds.

Coordinate conventions
----------------------
Elements are stored as real coordinate vectors in a fixed basis, so reports
built from coordinates are byte-stable:

* ``sym_real(r)``: diagonal units ``E_ii`` for i = 1..r first, then the
  off-diagonal units ``(E_ij + E_ji)/sqrt(2)`` for i < j in row-major order.
* ``herm_complex(r)``: diagonal units first, then for each pair i < j the
  real unit ``(E_ij + E_ji)/sqrt(2)`` followed by the imaginary unit
  ``(i*E_ij - i*E_ji)/sqrt(2)``.
* ``lorentz(n)``: the natural coordinates of R^(n+1); the Jordan product is
  (x, y) -> (sum_i x_i y_i, x_0*y_1 + y_0*x_1, ..., x_0*y_n + y_0*x_n).

The matrix bases are orthonormal for the Frobenius inner product, which
coincides with the trace form <x, y> = tr(xy).  On the Lorentz kind the
coordinates are the natural ones, and the trace form equals twice the
coordinate dot product; :func:`inner` always returns the trace form, since
that is the normalization under which the Peirce norm identities and the
Gamma-function formulas hold.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    AlgebraMismatchError,
    DomainError,
    SingularElementError,
    ValidationError,
)

logger = logging.getLogger("conelab")

SYM_REAL = "sym_real"
HERM_COMPLEX = "herm_complex"
LORENTZ = "lorentz"

_MAX_RANK = {SYM_REAL: 8, HERM_COMPLEX: 6}
_MAX_LORENTZ_N = 16

#: relative threshold below which an eigenvalue counts as zero for inversion
SINGULAR_REL_TOL = 1e-12
#: absolute tolerance for idempotency / frame orthogonality checks
IDEMPOTENT_TOL = 1e-9


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Which simple algebra: kind, rank r, Peirce constant d, dimension."""

    kind: str
    rank: int
    peirce_d: int
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in (SYM_REAL, HERM_COMPLEX, LORENTZ):
            raise ValidationError(f"unknown algebra kind {self.kind!r}")
        if self.rank < 1:
            raise ValidationError("rank must be >= 1")
        if self.peirce_d < 0:
            raise ValidationError("Peirce constant must be >= 0")
        expected = self.rank + self.peirce_d * self.rank * (self.rank - 1) // 2
        if self.dim != expected:
            raise ValidationError(
                f"dim {self.dim} inconsistent with rank {self.rank} and "
                f"Peirce constant {self.peirce_d} (expected {expected})"
            )
        if self.kind == LORENTZ:
            if self.rank != 2:
                raise ValidationError("Lorentz kind has rank 2")
            if self.peirce_d < 1 or self.peirce_d + 1 > _MAX_LORENTZ_N:
                raise ValidationError(f"Lorentz kind supports 2 <= n <= {_MAX_LORENTZ_N}")
        elif self.rank > _MAX_RANK[self.kind]:
            raise ValidationError(f"{self.kind} supports rank <= {_MAX_RANK[self.kind]}")

    @property
    def is_matrix_kind(self) -> bool:
        return self.kind in (SYM_REAL, HERM_COMPLEX)

    @property
    def inner_scale(self) -> float:
        """Trace form = inner_scale * (coordinate dot product)."""
        return 2.0 if self.kind == LORENTZ else 1.0

    @property
    def name(self) -> str:
        if self.kind == LORENTZ:
            return f"lorentz({self.peirce_d + 1})"
        return f"{self.kind}({self.rank})"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.name


def sym_real(r: int) -> AlgebraDescriptor:
    """Real symmetric r x r matrices (d = 1, dim = r(r+1)/2)."""
    return AlgebraDescriptor(SYM_REAL, r, 1, r + r * (r - 1) // 2)


def herm_complex(r: int) -> AlgebraDescriptor:
    """Complex Hermitian r x r matrices (d = 2, dim = r^2)."""
    return AlgebraDescriptor(HERM_COMPLEX, r, 2, r + r * (r - 1))


def lorentz(n: int) -> AlgebraDescriptor:
    """The Lorentz algebra on R^(n+1) (rank 2, d = n - 1)."""
    if n < 2:
        raise ValidationError("Lorentz kind requires n >= 2")
    return AlgebraDescriptor(LORENTZ, 2, n - 1, n + 1)


def parse_algebra(text: str) -> AlgebraDescriptor:
    """Parse "sym_real(3)", "herm_complex(2)" or "lorentz(4)"."""
    text = text.strip()
    if not text.endswith(")") or "(" not in text:
        raise ValidationError(f"cannot parse algebra spec {text!r}")
    base, arg = text[:-1].split("(", 1)
    try:
        value = int(arg)
    except ValueError as exc:
        raise ValidationError(f"cannot parse algebra spec {text!r}") from exc
    if base == SYM_REAL:
        return sym_real(value)
    if base == HERM_COMPLEX:
        return herm_complex(value)
    if base == LORENTZ:
        return lorentz(value)
    raise ValidationError(f"unknown algebra kind {base!r}")


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Element:
    """A point of the algebra in the fixed coordinate basis. Immutable."""

    algebra: AlgebraDescriptor
    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coords, dtype=float)
        if arr.shape != (self.algebra.dim,):
            raise ValidationError(
                f"coords shape {arr.shape} does not match dim {self.algebra.dim}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    def _check_same(self, other: "Element") -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatchError(
                f"operands from different algebras: {self.algebra.name} vs {other.algebra.name}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check_same(other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        self._check_same(other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coords)

    def __mul__(self, scalar: float) -> "Element":
        return Element(self.algebra, self.coords * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "Element":
        return Element(self.algebra, self.coords / float(scalar))

    def to_matrix(self) -> np.ndarray:
        """Matrix representation (matrix kinds only)."""
        if not self.algebra.is_matrix_kind:
            raise ValidationError("to_matrix is defined for matrix kinds only")
        return coords_to_mats(self.algebra, self.coords[None, :])[0]


def identity(algebra: AlgebraDescriptor) -> Element:
    """The neutral element e."""
    c = np.zeros(algebra.dim)
    if algebra.kind == LORENTZ:
        c[0] = 1.0
    else:
        c[: algebra.rank] = 1.0
    return Element(algebra, c)


def zero(algebra: AlgebraDescriptor) -> Element:
    return Element(algebra, np.zeros(algebra.dim))


def from_matrix(algebra: AlgebraDescriptor, mat: np.ndarray) -> Element:
    """Element from an r x r symmetric / Hermitian matrix."""
    if not algebra.is_matrix_kind:
        raise ValidationError("from_matrix is defined for matrix kinds only")
    mat = np.asarray(mat)
    if mat.shape != (algebra.rank, algebra.rank):
        raise ValidationError(f"matrix shape {mat.shape} does not match rank {algebra.rank}")
    herm_defect = np.max(np.abs(mat - mat.conj().T))
    if herm_defect > 1e-10 * max(1.0, np.max(np.abs(mat))):
        raise ValidationError("matrix is not symmetric/Hermitian")
    return Element(algebra, mats_to_coords(algebra, mat[None, :, :])[0])


@lru_cache(maxsize=None)
def _basis_tensor(algebra: AlgebraDescriptor) -> np.ndarray:
    """Stack of basis matrices, shape (dim, r, r); complex for herm_complex."""
    r = algebra.rank
    dtype = complex if algebra.kind == HERM_COMPLEX else float
    mats = np.zeros((algebra.dim, r, r), dtype=dtype)
    for i in range(r):
        mats[i, i, i] = 1.0
    idx = r
    s = 1.0 / np.sqrt(2.0)
    for i in range(r):
        for j in range(i + 1, r):
            mats[idx, i, j] = s
            mats[idx, j, i] = s
            idx += 1
            if algebra.kind == HERM_COMPLEX:
                mats[idx, i, j] = 1j * s
                mats[idx, j, i] = -1j * s
                idx += 1
    return mats


def coords_to_mats(algebra: AlgebraDescriptor, coords: np.ndarray) -> np.ndarray:
    """Batch map (n, dim) coordinate rows to (n, r, r) matrices."""
    basis = _basis_tensor(algebra)
    return np.einsum("nk,kij->nij", coords, basis)


def mats_to_coords(algebra: AlgebraDescriptor, mats: np.ndarray) -> np.ndarray:
    """Batch inverse of :func:`coords_to_mats` (Frobenius projections)."""
    basis = _basis_tensor(algebra)
    if algebra.kind == HERM_COMPLEX:
        return np.einsum("nij,kij->nk", mats, basis.conj()).real
    return np.einsum("nij,kij->nk", mats, basis)


# ---------------------------------------------------------------------------
# the product and inner product
# ---------------------------------------------------------------------------


def batch_jordan_product(algebra: AlgebraDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Jordan product on (n, dim) coordinate batches."""
    if algebra.is_matrix_kind:
        ma = coords_to_mats(algebra, a)
        mb = coords_to_mats(algebra, b)
        return mats_to_coords(algebra, 0.5 * (ma @ mb + mb @ ma))
    out = np.empty_like(a)
    out[:, 0] = np.sum(a * b, axis=1)
    out[:, 1:] = a[:, :1] * b[:, 1:] + b[:, :1] * a[:, 1:]
    return out


def jordan_product(x: Element, y: Element) -> Element:
    """The bilinear commutative product xy."""
    x._check_same(y)
    c = batch_jordan_product(x.algebra, x.coords[None, :], y.coords[None, :])[0]
    return Element(x.algebra, c)


def inner(x: Element, y: Element) -> float:
    """Trace-form inner product <x, y> = tr(xy)."""
    x._check_same(y)
    return x.algebra.inner_scale * float(np.dot(x.coords, y.coords))


def norm(x: Element) -> float:
    return float(np.sqrt(x.algebra.inner_scale) * np.linalg.norm(x.coords))


# ---------------------------------------------------------------------------
# endomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Endomorphism:
    """A linear map on the algebra, as a dim x dim real matrix on coordinates."""

    algebra: AlgebraDescriptor
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=float)
        n = self.algebra.dim
        if mat.shape != (n, n):
            raise ValidationError(f"matrix shape {mat.shape} does not match dim {n}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, algebra: AlgebraDescriptor) -> "Endomorphism":
        return cls(algebra, np.eye(algebra.dim))

    def apply(self, x: Element) -> Element:
        if x.algebra != self.algebra:
            raise AlgebraMismatchError("endomorphism and element from different algebras")
        return Element(self.algebra, self.matrix @ x.coords)

    def apply_batch(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self.matrix.T

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        if self.algebra != other.algebra:
            raise AlgebraMismatchError("endomorphisms from different algebras")
        return Endomorphism(self.algebra, self.matrix @ other.matrix)

    def inverse(self) -> "Endomorphism":
        cond = np.linalg.cond(self.matrix)
        if cond > 1e12:
            logger.warning("inverting endomorphism with condition estimate %.3e", cond)
        return Endomorphism(self.algebra, np.linalg.inv(self.matrix))

    def solve(self, x: Element) -> Element:
        """Apply the inverse map without forming it."""
        if x.algebra != self.algebra:
            raise AlgebraMismatchError("endomorphism and element from different algebras")
        return Element(self.algebra, np.linalg.solve(self.matrix, x.coords))

    def adjoint(self) -> "Endomorphism":
        # the coordinate metric is a scalar multiple of the identity for all
        # supported kinds, so the trace-form adjoint is the plain transpose
        return Endomorphism(self.algebra, self.matrix.T)

    def ddet(self) -> float:
        """Determinant in the space of endomorphisms."""
        return float(np.linalg.det(self.matrix))


def lmap(x: Element) -> Endomorphism:
    """Left multiplication L(x): y -> xy."""
    algebra = x.algebra
    tiled = np.tile(x.coords, (algebra.dim, 1))
    cols = batch_jordan_product(algebra, tiled, np.eye(algebra.dim))
    return Endomorphism(algebra, cols.T)


def quad_rep(x: Element) -> Endomorphism:
    """Quadratic representation P(x) = 2 L(x)^2 - L(x^2)."""
    lx = lmap(x).matrix
    lx2 = lmap(jordan_product(x, x)).matrix
    return Endomorphism(x.algebra, 2.0 * lx @ lx - lx2)


# ---------------------------------------------------------------------------
# spectral decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Jordan frame (c_1..c_r) with eigenvalues sorted descending."""

    frame: tuple
    eigenvalues: np.ndarray

    def reconstruct(self) -> Element:
        algebra = self.frame[0].algebra
        coords = np.zeros(algebra.dim)
        for lam, c in zip(self.eigenvalues, self.frame):
            coords = coords + lam * c.coords
        return Element(algebra, coords)


def _lorentz_split(x: Element) -> tuple:
    """Eigenvalues (descending) and the two idempotents of a Lorentz element."""
    algebra = x.algebra
    x0 = x.coords[0]
    tail = x.coords[1:]
    radius = float(np.linalg.norm(tail))
    if radius < 1e-300:
        unit = np.zeros(algebra.dim - 1)
        unit[0] = 1.0
    else:
        unit = tail / radius
    plus = np.concatenate(([0.5], 0.5 * unit))
    minus = np.concatenate(([0.5], -0.5 * unit))
    lam = np.array([x0 + radius, x0 - radius])
    return lam, (Element(algebra, plus), Element(algebra, minus))


def eigenvalues(x: Element) -> np.ndarray:
    """Spectral eigenvalues, sorted descending."""
    algebra = x.algebra
    if algebra.kind == LORENTZ:
        return _lorentz_split(x)[0]
    lam = np.linalg.eigvalsh(x.to_matrix())
    return lam[::-1]


def spectral_decompose(x: Element) -> SpectralDecomposition:
    """Write x = sum_i lambda_i c_i over a complete orthogonal idempotent system."""
    algebra = x.algebra
    if algebra.kind == LORENTZ:
        lam, frame = _lorentz_split(x)
        return SpectralDecomposition(frame, lam)
    lam, vecs = np.linalg.eigh(x.to_matrix())
    lam = lam[::-1]
    vecs = vecs[:, ::-1]
    frame = []
    for i in range(algebra.rank):
        v = vecs[:, i]
        frame.append(from_matrix(algebra, np.outer(v, v.conj())))
    return SpectralDecomposition(tuple(frame), lam)


def _spectral_map(x: Element, fn) -> Element:
    """Apply a scalar function to the spectrum of x."""
    algebra = x.algebra
    if algebra.kind == LORENTZ:
        lam, (cp, cm) = _lorentz_split(x)
        return fn(lam[0]) * cp + fn(lam[1]) * cm
    lam, vecs = np.linalg.eigh(x.to_matrix())
    mat = (vecs * fn(lam)) @ vecs.conj().T
    return from_matrix(algebra, mat)


def trace(x: Element) -> float:
    """Sum of eigenvalues; equals <x, e> in the trace form."""
    return inner(x, identity(x.algebra))


def determinant(x: Element) -> float:
    """Product of eigenvalues."""
    return float(np.prod(eigenvalues(x)))


def trace_det(x: Element) -> tuple:
    lam = eigenvalues(x)
    return float(np.sum(lam)), float(np.prod(lam))


def inverse(x: Element) -> Element:
    """The Jordan inverse; requires all eigenvalues away from zero."""
    lam = eigenvalues(x)
    lam_abs = np.abs(lam)
    if lam_abs.min() <= SINGULAR_REL_TOL * max(lam_abs.max(), 1e-300):
        raise SingularElementError(
            f"element is numerically singular (|lambda|_min = {lam_abs.min():.3e})"
        )
    return _spectral_map(x, lambda t: 1.0 / t)


def element_power(x: Element, alpha: float) -> Element:
    """Spectral power x^alpha; requires a strictly positive spectrum."""
    lam = eigenvalues(x)
    if lam.min() <= 0:
        raise DomainError("fractional powers need a strictly positive spectrum")
    return _spectral_map(x, lambda t: np.power(t, alpha))


def sqrt_element(x: Element) -> Element:
    return element_power(x, 0.5)


def in_cone(x: Element, tol: float = 0.0) -> bool:
    """True when every eigenvalue exceeds tol."""
    return bool(eigenvalues(x).min() > tol)


def require_in_cone(x: Element, what: str = "argument") -> None:
    if not in_cone(x):
        raise DomainError(f"{what} is not in the open cone (nonpositive eigenvalue)")


# ---------------------------------------------------------------------------
# idempotents and frames
# ---------------------------------------------------------------------------


def is_idempotent(c: Element, tol: float = IDEMPOTENT_TOL) -> bool:
    defect = norm(jordan_product(c, c) - c)
    return defect <= tol and norm(c) > tol


class JordanFrame:
    """A complete system of primitive orthogonal idempotents, in a fixed order.

    Hashable by identity; caches the projections onto the leading subalgebras
    since the generalized power functions reuse them heavily.
    """

    def __init__(self, elements, validate: bool = True, tol: float = IDEMPOTENT_TOL):
        elements = tuple(elements)
        if not elements:
            raise ValidationError("empty frame")
        algebra = elements[0].algebra
        if len(elements) != algebra.rank:
            raise ValidationError(
                f"frame has {len(elements)} members, rank is {algebra.rank}"
            )
        if validate:
            total = zero(algebra)
            for i, c in enumerate(elements):
                if c.algebra != algebra:
                    raise AlgebraMismatchError("frame members from different algebras")
                if not is_idempotent(c, tol):
                    raise ValidationError(f"frame member {i} is not idempotent")
                if abs(trace(c) - 1.0) > 1e-6:
                    raise ValidationError(f"frame member {i} is not primitive")
                total = total + c
            for i in range(len(elements)):
                for j in range(i + 1, len(elements)):
                    if norm(jordan_product(elements[i], elements[j])) > tol:
                        raise ValidationError(f"frame members {i}, {j} are not orthogonal")
            if norm(total - identity(algebra)) > tol * algebra.rank:
                raise ValidationError("frame members do not sum to the identity")
        self.elements = elements
        self.algebra = algebra
        self._leading_projectors = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def leading_projector(self, k: int) -> Endomorphism:
        """Orthogonal projection onto the subalgebra determined by c_1 + .. + c_k."""
        if not 1 <= k <= len(self.elements):
            raise ValidationError(f"order k={k} outside 1..{len(self.elements)}")
        if k not in self._leading_projectors:
            u = zero(self.algebra)
            for c in self.elements[:k]:
                u = u + c
            self._leading_projectors[k] = quad_rep(u)
        return self._leading_projectors[k]


@lru_cache(maxsize=None)
def standard_frame(algebra: AlgebraDescriptor) -> JordanFrame:
    """The canonical frame: diagonal units, or (1, +/-u)/2 with u = first axis."""
    if algebra.kind == LORENTZ:
        plus = np.zeros(algebra.dim)
        minus = np.zeros(algebra.dim)
        plus[0] = minus[0] = 0.5
        plus[1] = 0.5
        minus[1] = -0.5
        members = (Element(algebra, plus), Element(algebra, minus))
    else:
        members = []
        for i in range(algebra.rank):
            c = np.zeros(algebra.dim)
            c[i] = 1.0
            members.append(Element(algebra, c))
        members = tuple(members)
    return JordanFrame(members, validate=False)


# ---------------------------------------------------------------------------
# randomness (all draws flow through an explicitly passed generator)
# ---------------------------------------------------------------------------


def _haar_special_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_automorphism_k(algebra: AlgebraDescriptor, rng: np.random.Generator) -> Endomorphism:
    """A random cone automorphism fixing e (a point of the compact group K)."""
    dim = algebra.dim
    basis = np.eye(dim)
    if algebra.kind == LORENTZ:
        rot = _haar_special_orthogonal(dim - 1, rng)
        mat = np.zeros((dim, dim))
        mat[0, 0] = 1.0
        mat[1:, 1:] = rot
        return Endomorphism(algebra, mat)
    if algebra.kind == SYM_REAL:
        o = _haar_special_orthogonal(algebra.rank, rng)
        mats = coords_to_mats(algebra, basis)
        out = o @ mats @ o.T
    else:
        u = _haar_unitary(algebra.rank, rng)
        mats = coords_to_mats(algebra, basis)
        out = u @ mats @ u.conj().T
    return Endomorphism(algebra, mats_to_coords(algebra, out).T)


def random_element(
    algebra: AlgebraDescriptor,
    rng: np.random.Generator,
    spectrum_spec=None,
    *,
    log_uniform: bool = False,
) -> Element:
    """Random element, deterministic under the generator state.

    ``spectrum_spec`` selects the law:

    * ``None``: standard normal coordinates (not confined to the cone);
    * ``(lo, hi)``: eigenvalues drawn iid from [lo, hi] (log-uniformly when
      ``log_uniform`` is set), placed on a uniformly random frame;
    * an explicit sequence of ``rank`` eigenvalues: placed on a random frame.
    """
    if spectrum_spec is None:
        return Element(algebra, rng.standard_normal(algebra.dim))
    if isinstance(spectrum_spec, tuple) and len(spectrum_spec) == 2:
        lo, hi = spectrum_spec
        if log_uniform:
            if lo <= 0:
                raise DomainError("log-uniform spectrum needs a positive interval")
            lam = np.exp(rng.uniform(np.log(lo), np.log(hi), size=algebra.rank))
        else:
            lam = rng.uniform(lo, hi, size=algebra.rank)
    else:
        lam = np.asarray(spectrum_spec, dtype=float)
        if lam.shape != (algebra.rank,):
            raise ValidationError(
                f"spectrum has {lam.shape} entries, rank is {algebra.rank}"
            )
    k = random_automorphism_k(algebra, rng)
    diag = zero(algebra)
    for lam_i, c in zip(lam, standard_frame(algebra)):
        diag = diag + lam_i * c
    return k.apply(diag)


def random_cone_element(
    algebra: AlgebraDescriptor,
    rng: np.random.Generator,
    low: float = 0.1,
    high: float = 10.0,
    *,
    log_uniform: bool = True,
) -> Element:
    """Random point of the open cone with spectrum in [low, high]."""
    if low <= 0:
        raise DomainError("cone elements need a positive spectrum")
    return random_element(algebra, rng, (low, high), log_uniform=log_uniform)


def elements_close(x: Element, y: Element, tol: float = 1e-10) -> bool:
    x._check_same(y)
    return bool(np.max(np.abs(x.coords - y.coords)) <= tol)


def axiom_residuals(algebra: AlgebraDescriptor, n: int, rng: np.random.Generator) -> dict:
    """Max relative residuals of the defining axioms over n random triples.

    Keys: commutativity, jordan_identity, neutrality, form_associativity.
    Residuals are normalized by the product of the operand norms, so the
    reported values are scale free.
    """
    scale = np.sqrt(algebra.inner_scale)
    x = rng.standard_normal((n, algebra.dim))
    y = rng.standard_normal((n, algebra.dim))
    z = rng.standard_normal((n, algebra.dim))
    nx = scale * np.linalg.norm(x, axis=1)
    ny = scale * np.linalg.norm(y, axis=1)
    nz = scale * np.linalg.norm(z, axis=1)

    def rownorm(arr):
        return scale * np.linalg.norm(arr, axis=1)

    xy = batch_jordan_product(algebra, x, y)
    yx = batch_jordan_product(algebra, y, x)
    commutativity = float(np.max(rownorm(xy - yx) / (nx * ny)))

    xx = batch_jordan_product(algebra, x, x)
    lhs = batch_jordan_product(algebra, x, batch_jordan_product(algebra, xx, y))
    rhs = batch_jordan_product(algebra, xx, xy)
    jordan_identity = float(np.max(rownorm(lhs - rhs) / (nx**3 * ny)))

    e = np.tile(identity(algebra).coords, (n, 1))
    neutrality = float(np.max(rownorm(batch_jordan_product(algebra, x, e) - x) / nx))

    yz = batch_jordan_product(algebra, y, z)
    form_lhs = algebra.inner_scale * np.sum(x * yz, axis=1)
    form_rhs = algebra.inner_scale * np.sum(xy * z, axis=1)
    form_associativity = float(np.max(np.abs(form_lhs - form_rhs) / (nx * ny * nz)))

    return {
        "commutativity": commutativity,
        "jordan_identity": jordan_identity,
        "neutrality": neutrality,
        "form_associativity": form_associativity,
    }
