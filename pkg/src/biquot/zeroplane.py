"""Zero-curvature-plane criteria at the points p(theta).

A plane spanned by independent X, Y is flat at p(theta) exactly when three
conditions hold:

  (A) X and Y are g0-orthogonal to both generator families, the conjugated
      h1 triple and the h2 triple;
  (B) [X, Y] = [X_k, Y_k] = [X_p, Y_p] = 0;
  (C) the k- and p-brackets vanish for the pair transported by Ad_{p^{-1}}.

For pairs in normal form -- X supported on the block diagonal with entries
(x1, x2; -conj(x2), x3) and corner x4, Y supported on the third row/column
with entries (y1, y2) and corner y3 -- the three conditions reduce to the
thirteen equations evaluated by `lemma_equations_residual`, labeled here

  (1)   x1 y1 + x2 y2 - y1 x4 = 0
  (2)   -conj(x2) y1 + x3 y2 - y2 x4 = 0
  (3)   {x4, y3} real-dependent
  (4)   {v, w} real-dependent, with v, w the closed forms of `vw_vectors`
  (5i)  3 (x1)_i - (x3)_i = 0
  (5j)  sqrt(3) (x2)_j - (x3)_j = 0
  (5k)  sqrt(3) (x2)_k + (x3)_k = 0
  (6i)  -2 s^2 (x1)_i + (1 + 2 s^2) (x4)_i = 0
  (6j)  2 sqrt(3) (c - 1) (x2)_j + s^2 (x1)_j + c^2 (x4)_j = 0
  (6k)  2 sqrt(3) (c - 1) (x2)_k + s^2 (x1)_k + c^2 (x4)_k = 0
  (7i)  -4 s c (y1)_i + (1 + 2 s^2) (y3)_i = 0
  (7j)  2 s c (y1)_j - 2 sqrt(3) s (y2)_j + c^2 (y3)_j = 0
  (7k)  2 s c (y1)_k - 2 sqrt(3) s (y2)_k + c^2 (y3)_k = 0

with c = cos(theta), s = sin(theta).  Families (5)/(6) are condition (A) on
X, family (7) is condition (A) on Y, (1)-(3) encode (B), and (4) encodes (C)
through the transported projections v = (Ad_{p^{-1}} X)_p and
w = (Ad_{p^{-1}} Y)_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import embeddings, liealg
from .embeddings import ThetaPoint
from .liealg import PVector
from .quat import ImQuaternion, Quaternion

__all__ = [
    "EQUATION_LABELS",
    "ConditionResiduals",
    "NormalFormError",
    "ReducedPair",
    "conditionA_residual",
    "conditionB_residual",
    "conditionC_residual",
    "condition_basis",
    "horizontal_basis",
    "lemma_equations_residual",
    "normal_form_reduce",
    "random_reduced_pair",
    "vw_vectors",
    "x_side_solution",
    "y_side_solution",
]

EQUATION_LABELS = ("1", "2", "3", "4", "5i", "5j", "5k",
                   "6i", "6j", "6k", "7i", "7j", "7k")

DEPENDENCE_TOL = 1e-9
_R3 = math.sqrt(3.0)


class NormalFormError(ValueError):
    """Raised when a pair cannot be brought to normal form."""


@dataclass(frozen=True)
class ReducedPair:
    """Normal-form coordinates of a candidate plane."""

    x1: ImQuaternion
    x2: Quaternion
    x3: ImQuaternion
    x4: ImQuaternion
    y1: Quaternion
    y2: Quaternion
    y3: ImQuaternion

    @classmethod
    def zero(cls) -> "ReducedPair":
        im, q = ImQuaternion(), Quaternion()
        return cls(im, q, im, im, q, q, im)

    def to_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """Reconstruct (X, Y) in the block shapes fixed by the normal form."""
        zero = Quaternion()
        x = liealg.mat_from_quaternions([
            [self.x1.quaternion, self.x2, zero],
            [-self.x2.conj(), self.x3.quaternion, zero],
            [zero, zero, self.x4.quaternion],
        ])
        y = liealg.mat_from_quaternions([
            [zero, zero, self.y1],
            [zero, zero, self.y2],
            [-self.y1.conj(), -self.y2.conj(), self.y3.quaternion],
        ])
        return x, y


@dataclass(frozen=True)
class ConditionResiduals:
    """Residuals of conditions (A)(B)(C) and of the thirteen equations."""

    a_res: float
    b_res: float
    c_res: float
    eq_res: dict[str, float]

    @property
    def max_abc(self) -> float:
        return max(self.a_res, self.b_res, self.c_res)

    @property
    def max_eq(self) -> float:
        return max(self.eq_res.values())


def condition_basis(pt: ThetaPoint) -> np.ndarray:
    """Coordinates (6, 21) of the conjugated h1 triple stacked over the h2 triple."""
    rows = np.concatenate([
        embeddings.adp_h1_basis(pt).stack(),
        embeddings.h2_basis().stack(),
    ])
    return liealg.vec_sp3(rows)


def conditionA_residual(x: np.ndarray, y: np.ndarray, pt: ThetaPoint) -> np.ndarray:
    """Largest |g0| of x and y against the six generator basis elements."""
    basis = condition_basis(pt)
    pairings_x = liealg.vec_sp3(x) @ basis.T
    pairings_y = liealg.vec_sp3(y) @ basis.T
    return np.max(np.abs(np.concatenate([pairings_x, pairings_y], axis=-1)), axis=-1)


def _stacked_norm(*terms: np.ndarray) -> np.ndarray:
    total = sum(np.maximum(liealg.g0_inner(t, t), 0.0) for t in terms)
    return np.sqrt(total)


def conditionB_residual(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """g0 norm of ([X, Y], [X_k, Y_k], [X_p, Y_p]) stacked."""
    xs, ys = liealg.split_kp(x), liealg.split_kp(y)
    return _stacked_norm(
        liealg.bracket(x, y),
        liealg.bracket(xs.k_part, ys.k_part),
        liealg.bracket(xs.p_part, ys.p_part),
    )


def conditionC_residual(x: np.ndarray, y: np.ndarray, pt: ThetaPoint) -> np.ndarray:
    """Same stacked norm for the k- and p-brackets of the transported pair."""
    pinv = liealg.group_inverse(pt.matrix)
    xs = liealg.split_kp(liealg.adjoint(pinv, x))
    ys = liealg.split_kp(liealg.adjoint(pinv, y))
    return _stacked_norm(
        liealg.bracket(xs.k_part, ys.k_part),
        liealg.bracket(xs.p_part, ys.p_part),
    )


def _pair_gram(a: np.ndarray, b: np.ndarray) -> float:
    """Gram residual after scaling both vectors by the larger norm.

    Scale-free in the pair, and a pair whose smaller member is negligible
    against the larger counts as dependent, mirroring the bracket criteria.
    """
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    if scale == 0.0:
        return 0.0
    return float(liealg.gram_residual(a / scale, b / scale))


def normal_form_reduce(x: np.ndarray, y: np.ndarray, pt: ThetaPoint,
                       tol: float = DEPENDENCE_TOL) -> ReducedPair:
    """Replace span{X, Y} by a normal-form pair (X' block-diagonal, Y'
    supported on the third row/column).

    Requires the p parts and then the sp(2) parts to be real-dependent, which
    is what conditions (A) and (B) guarantee for candidate planes; each
    elimination coefficient is a one-dimensional least-squares fit and the
    eliminated block is checked, never trusted.
    """
    x = liealg.require_sp3(x)
    y = liealg.require_sp3(y)
    if embeddings.rho_rank(pt) != 3:
        raise NormalFormError("corner map is not surjective at this point")

    nx, ny = float(liealg.g0_norm(x)), float(liealg.g0_norm(y))
    if nx == 0.0 or ny == 0.0:
        raise NormalFormError("pair is not linearly independent")
    x = x / nx
    y = y / ny
    if _pair_gram(liealg.vec_sp3(x), liealg.vec_sp3(y)) <= tol:
        raise NormalFormError("pair is not linearly independent")

    xp = liealg.split_kp(x).p_part
    yp = liealg.split_kp(y).p_part
    npx, npy = float(liealg.g0_norm(xp)), float(liealg.g0_norm(yp))
    if npx <= tol:
        first, second = x, y
    elif npy <= tol:
        first, second = y, x
    else:
        lam = float(liealg.g0_inner(xp, yp)) / npy**2
        if float(liealg.g0_norm(xp - lam * yp)) > tol * max(1.0, abs(lam)):
            raise NormalFormError(
                "p parts are linearly independent; the commutation condition fails")
        first, second = x - lam * y, y

    if float(liealg.g0_norm(first)) <= tol:
        raise NormalFormError("eliminated vector degenerates to zero")
    s2_first = liealg.sp2_project(first)
    n2_first = float(liealg.g0_norm(s2_first))
    if n2_first <= tol:
        raise NormalFormError(
            "block-diagonal vector has no sp(2) part; orthogonality would force it to zero")

    mu = float(liealg.g0_inner(liealg.sp2_project(second), s2_first)) / n2_first**2
    reduced_y = second - mu * first
    if float(liealg.g0_norm(liealg.sp2_project(reduced_y))) > tol:
        raise NormalFormError(
            "sp(2) parts are linearly independent; the commutation condition fails")

    return ReducedPair(
        x1=ImQuaternion.from_array(first[0, 0, 1:]),
        x2=Quaternion.from_array(first[0, 1]),
        x3=ImQuaternion.from_array(first[1, 1, 1:]),
        x4=ImQuaternion.from_array(first[2, 2, 1:]),
        y1=Quaternion.from_array(reduced_y[0, 2]),
        y2=Quaternion.from_array(reduced_y[1, 2]),
        y3=ImQuaternion.from_array(reduced_y[2, 2, 1:]),
    )


def _require_reduced_range(pt: ThetaPoint) -> tuple[float, float]:
    if not 0.0 < pt.theta < np.pi / 4.0:
        raise ValueError(f"reduced equations require theta in (0, pi/4), got {pt.theta!r}")
    return math.cos(pt.theta), math.sin(pt.theta)


def vw_vectors(rp: ReducedPair, pt: ThetaPoint) -> tuple[PVector, PVector]:
    """Closed forms of the transported p projections of the reduced pair."""
    c, s = _require_reduced_range(pt)
    v = PVector(
        z1=(rp.x1 - rp.x4).quaternion * (c * s),
        z2=rp.x2.conj() * (-s),
    )
    w = PVector(
        z1=Quaternion(rp.y1.re, 0.0, 0.0, 0.0)
        + rp.y1.imag().quaternion * (c * c - s * s)
        - rp.y3.quaternion * (s * c),
        z2=rp.y2 * c,
    )
    return v, w


def lemma_equations_residual(rp: ReducedPair, pt: ThetaPoint) -> ConditionResiduals:
    """All thirteen equation residuals plus the (A)(B)(C) residuals of the
    reconstructed pair; both vanish together on clear-cut inputs."""
    c, s = _require_reduced_range(pt)
    x1, x2, x3, x4 = rp.x1.quaternion, rp.x2, rp.x3.quaternion, rp.x4.quaternion
    y1, y2, y3 = rp.y1, rp.y2, rp.y3.quaternion

    v, w = vw_vectors(rp, pt)
    eq = {
        "1": abs(x1 * y1 + x2 * y2 - y1 * x4),
        "2": abs(-x2.conj() * y1 + x3 * y2 - y2 * x4),
        "3": _pair_gram(rp.x4.array, rp.y3.array),
        "4": _pair_gram(v.to_r8(), w.to_r8()),
        "5i": abs(3.0 * rp.x1.ci - rp.x3.ci),
        "5j": abs(_R3 * rp.x2.cj - rp.x3.cj),
        "5k": abs(_R3 * rp.x2.ck + rp.x3.ck),
        "6i": abs(-2.0 * s * s * rp.x1.ci + (1.0 + 2.0 * s * s) * rp.x4.ci),
        "6j": abs(2.0 * _R3 * (c - 1.0) * rp.x2.cj + s * s * rp.x1.cj + c * c * rp.x4.cj),
        "6k": abs(2.0 * _R3 * (c - 1.0) * rp.x2.ck + s * s * rp.x1.ck + c * c * rp.x4.ck),
        "7i": abs(-4.0 * s * c * rp.y1.ci + (1.0 + 2.0 * s * s) * rp.y3.ci),
        "7j": abs(2.0 * s * c * rp.y1.cj - 2.0 * _R3 * s * rp.y2.cj + c * c * rp.y3.cj),
        "7k": abs(2.0 * s * c * rp.y1.ck - 2.0 * _R3 * s * rp.y2.ck + c * c * rp.y3.ck),
    }

    x, y = rp.to_matrices()
    return ConditionResiduals(
        a_res=float(conditionA_residual(x, y, pt)),
        b_res=float(conditionB_residual(x, y)),
        c_res=float(conditionC_residual(x, y, pt)),
        eq_res=eq,
    )


def horizontal_basis(pt: ThetaPoint) -> np.ndarray:
    """Orthonormal coordinate basis (21, d) of the condition-(A) subspace."""
    return scipy.linalg.null_space(condition_basis(pt))


def random_reduced_pair(rng: np.random.Generator, scale: float = 1.0) -> ReducedPair:
    def im():
        return ImQuaternion.from_array(scale * rng.standard_normal(3))

    def full():
        return Quaternion.from_array(scale * rng.standard_normal(4))

    return ReducedPair(x1=im(), x2=full(), x3=im(), x4=im(),
                       y1=full(), y2=full(), y3=im())


def x_side_solution(rng: np.random.Generator, pt: ThetaPoint) -> ReducedPair:
    """Reduced pair with zero Y side whose X side solves families (5)/(6) exactly."""
    c, s = math.cos(pt.theta), math.sin(pt.theta)
    x2 = Quaternion.from_array(rng.standard_normal(4))
    x4 = ImQuaternion.from_array(rng.standard_normal(3))
    x1 = ImQuaternion(
        (1.0 + 2.0 * s * s) * x4.ci / (2.0 * s * s),
        -(2.0 * _R3 * (c - 1.0) * x2.cj + c * c * x4.cj) / (s * s),
        -(2.0 * _R3 * (c - 1.0) * x2.ck + c * c * x4.ck) / (s * s),
    )
    x3 = ImQuaternion(3.0 * x1.ci, _R3 * x2.cj, -_R3 * x2.ck)
    return ReducedPair(x1=x1, x2=x2, x3=x3, x4=x4,
                       y1=Quaternion(), y2=Quaternion(), y3=ImQuaternion())


def y_side_solution(rng: np.random.Generator, pt: ThetaPoint) -> ReducedPair:
    """Reduced pair with zero X side whose Y side solves family (7) exactly."""
    c, s = math.cos(pt.theta), math.sin(pt.theta)
    y1 = Quaternion.from_array(rng.standard_normal(4))
    y2 = Quaternion.from_array(rng.standard_normal(4))
    y3 = ImQuaternion(
        4.0 * s * c * y1.ci / (1.0 + 2.0 * s * s),
        (2.0 * _R3 * s * y2.cj - 2.0 * s * c * y1.cj) / (c * c),
        (2.0 * _R3 * s * y2.ck - 2.0 * s * c * y1.ck) / (c * c),
    )
    im, q = ImQuaternion(), Quaternion()
    return ReducedPair(x1=im, x2=q, x3=im, x4=im, y1=y1, y2=y2, y3=y3)
