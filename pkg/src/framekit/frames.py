"""Dual-pair frames for K^m.

A FramePair holds two families {x_j}, {tau_j} of n vectors in K^m as the
columns of X and T.  The frame operator is S = T X^* = sum_j tau_j x_j^*;
the pair is a frame when S is self-adjoint, positive and invertible, and
the optimal frame bounds are then the extreme eigenvalues of S.

Analysis operators are theta_x = X^*, theta_tau = T^* (vectors to
coefficients); the frame idempotent P = X^* S^-1 T acts on coefficient
space.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import (
    BadCoefficients,
    CountMismatch,
    IdempotentNotProjection,
    NotAFrame,
    NotOrthogonal,
    NotParseval,
    ParamNotAdmissible,
    RangesDiffer,
    ShapeMismatch,
)
from .numerics import (
    Tolerance,
    entry_max,
    hermitian_part,
    herm_sqrt,
    smallest_singular_value,
    spectral,
)

REAL = "real"
COMPLEX = "complex"


def _as_matrix(entries, field: str) -> np.ndarray:
    A = np.asarray(entries)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if field == REAL:
        if np.iscomplexobj(A):
            if entry_max(A.imag) != 0.0:
                raise ValueError("real field requires exactly zero imaginary parts")
            A = A.real
        A = A.astype(np.float64)
    elif field == COMPLEX:
        A = A.astype(np.complex128)
    else:
        raise ValueError(f"unknown field tag {field!r}")
    if not np.all(np.isfinite(A)):
        raise ValueError("entries must be finite")
    A.setflags(write=False)
    return A


def infer_field(*arrays) -> str:
    return COMPLEX if any(np.iscomplexobj(np.asarray(a)) for a in arrays) else REAL


@dataclass(frozen=True)
class FramePair:
    """Columns of X are the x_j, columns of T are the tau_j."""

    X: np.ndarray
    T: np.ndarray
    field: str
    tol: Tolerance = Tolerance()

    def __post_init__(self):
        X = _as_matrix(self.X, self.field)
        T = _as_matrix(self.T, self.field)
        if X.shape != T.shape:
            raise ShapeMismatch(f"X {X.shape} and T {T.shape} must share shape")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("dimension and count must be positive")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "T", T)

    @classmethod
    def from_columns(cls, x_cols, tau_cols, field: Optional[str] = None,
                     tol: Tolerance = Tolerance()) -> "FramePair":
        X = np.column_stack([np.asarray(v).ravel() for v in x_cols])
        T = np.column_stack([np.asarray(v).ravel() for v in tau_cols])
        return cls(X, T, field or infer_field(X, T), tol)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    def x(self, j: int) -> np.ndarray:
        return self.X[:, j]

    def tau(self, j: int) -> np.ndarray:
        return self.T[:, j]

    def with_tol(self, tol: Tolerance) -> "FramePair":
        return replace(self, tol=tol)


@dataclass(frozen=True)
class FrameReport:
    self_adjoint: bool
    psd: bool
    invertible: bool
    is_bessel: bool
    is_frame: bool
    lower_a: float
    upper_b: float
    tight: bool
    parseval: bool


def frame_operator(fp: FramePair) -> np.ndarray:
    """S = T X^* = sum_j tau_j x_j^*  (m x m)."""
    return fp.T @ fp.X.conj().T


def frame_flags(S: np.ndarray, tol: Tolerance) -> FrameReport:
    """Verdicts for a would-be frame operator; never raises."""
    rep = spectral(S, tol)
    invertible = smallest_singular_value(S) > tol.abs_tol
    is_bessel = rep.is_hermitian and rep.is_psd
    is_frame = is_bessel and invertible
    if is_frame:
        a = float(rep.eigenvalues.real.min())
        b = float(rep.eigenvalues.real.max())
    else:
        a = b = 0.0
    tight = is_frame and (b - a) <= tol.margin(b)
    parseval = tight and abs(b - 1.0) <= tol.margin(1.0, b)
    return FrameReport(
        self_adjoint=rep.is_hermitian,
        psd=rep.is_psd,
        invertible=invertible,
        is_bessel=is_bessel,
        is_frame=is_frame,
        lower_a=a,
        upper_b=b,
        tight=tight,
        parseval=parseval,
    )


def verify(fp: FramePair) -> FrameReport:
    """Full verdict on the pair; degenerate input yields is_frame=False.

    Weak-frame verification coincides with this predicate: at finite
    dimension the coordinatewise Bessel conditions hold automatically, so
    only the frame-operator conditions remain to be checked.
    """
    return frame_flags(frame_operator(fp), fp.tol)


def _require_frame(fp: FramePair) -> np.ndarray:
    S = frame_operator(fp)
    if not frame_flags(S, fp.tol).is_frame:
        raise NotAFrame("operation requires a frame")
    return S


def canonical_dual(fp: FramePair) -> FramePair:
    """(S^-1 x_j, S^-1 tau_j); its frame operator is S^-1."""
    S = _require_frame(fp)
    return FramePair(np.linalg.solve(S, fp.X), np.linalg.solve(S, fp.T), fp.field, fp.tol)


def _check_shapes(fp: FramePair, gq: FramePair):
    if fp.m != gq.m or fp.n != gq.n:
        raise ShapeMismatch(
            f"pairs must share dimension and count, got ({fp.m},{fp.n}) vs ({gq.m},{gq.n})"
        )


def is_dual(fp: FramePair, gq: FramePair) -> bool:
    """True iff Omega X^* = I and Y T^* = I, gq = (Y, Omega)."""
    _check_shapes(fp, gq)
    tol = fp.tol
    return tol.is_identity(gq.T @ fp.X.conj().T) and tol.is_identity(gq.X @ fp.T.conj().T)


def is_orthogonal(fp: FramePair, gq: FramePair) -> bool:
    """True iff Omega X^* = 0 and Y T^* = 0 (bilinear condition only)."""
    _check_shapes(fp, gq)
    tol = fp.tol
    scale1 = entry_max(gq.T) * entry_max(fp.X) * fp.n
    scale2 = entry_max(gq.X) * entry_max(fp.T) * fp.n
    return tol.is_zero(gq.T @ fp.X.conj().T, scale1) and tol.is_zero(gq.X @ fp.T.conj().T, scale2)


def make_dual_from_params(fp: FramePair, U, V) -> FramePair:
    """Dual pair from free parameters U, V (operators l2(n) -> K^m).

    y_j = S^-1 x_j + V e_j - V theta_tau S^-1 x_j and the mirrored omega_j;
    admissible exactly when S^-1 + U V^* - U theta_x S^-1 theta_tau^* V^*
    is Hermitian positive definite (this matrix is the frame operator of
    the produced pair).
    """
    S = _require_frame(fp)
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape != (fp.m, fp.n) or V.shape != (fp.m, fp.n):
        raise ShapeMismatch("U and V must be m x n")
    Sinv = np.linalg.inv(S)
    SiX = Sinv @ fp.X
    SiT = Sinv @ fp.T
    Y = SiX + V - V @ (fp.T.conj().T @ SiX)
    Om = SiT + U - U @ (fp.X.conj().T @ SiT)
    cross = fp.X.conj().T @ Sinv @ fp.T  # theta_x S^-1 theta_tau^*
    W = Sinv + U @ V.conj().T - U @ cross @ V.conj().T
    rep = spectral(W, fp.tol)
    if not (rep.is_hermitian and rep.is_pd):
        raise ParamNotAdmissible("parameters fail the positivity/invertibility condition")
    field = infer_field(Y, Om) if fp.field == REAL else fp.field
    return FramePair(Y, Om, field, fp.tol)


def common_dual(fp: FramePair, gq: FramePair) -> FramePair:
    """z_j = S_fp^-1 x_j + S_gq^-1 y_j; dual to both orthogonal frames."""
    S1 = _require_frame(fp)
    S2 = _require_frame(gq)
    if not is_orthogonal(fp, gq):
        raise NotOrthogonal("common dual needs orthogonal frames")
    Z = np.linalg.solve(S1, fp.X) + np.linalg.solve(S2, gq.X)
    R = np.linalg.solve(S1, fp.T) + np.linalg.solve(S2, gq.T)
    return FramePair(Z, R, fp.field if fp.field == gq.field else COMPLEX, fp.tol)


def frame_idempotent(fp: FramePair) -> np.ndarray:
    """P = X^* S^-1 T  (n x n), idempotent on coefficient space."""
    S = _require_frame(fp)
    return fp.X.conj().T @ np.linalg.solve(S, fp.T)


@dataclass(frozen=True)
class ClassifyResult:
    riesz_frame: bool
    orthonormal_frame: bool
    cross_gram: np.ndarray  # entry [k, j] = <x_j, tau_k>


def classify(fp: FramePair) -> ClassifyResult:
    """Riesz frame: P = I.  Orthonormal frame: Parseval and cross gram I."""
    P = frame_idempotent(fp)
    report = verify(fp)
    gram = fp.T.conj().T @ fp.X
    riesz = fp.tol.is_identity(P)
    orthonormal = report.parseval and fp.tol.is_identity(gram)
    return ClassifyResult(riesz, orthonormal, gram)


def direct_sum(fp: FramePair, gq: FramePair) -> FramePair:
    """Stack the members: (x_j + y_j, tau_j + omega_j) in K^(m1+m2)."""
    if fp.n != gq.n:
        raise CountMismatch(f"counts differ: {fp.n} vs {gq.n}")
    field = fp.field if fp.field == gq.field else COMPLEX
    X = np.vstack([np.asarray(fp.X, dtype=complex if field == COMPLEX else float),
                   np.asarray(gq.X, dtype=complex if field == COMPLEX else float)])
    T = np.vstack([np.asarray(fp.T, dtype=complex if field == COMPLEX else float),
                   np.asarray(gq.T, dtype=complex if field == COMPLEX else float)])
    return FramePair(X, T, field, fp.tol)


def tensor_product(fp: FramePair, gq: FramePair) -> FramePair:
    """Columns x_j (x) y_l, index (j, l) row-major; S = S1 (x) S2."""
    field = fp.field if fp.field == gq.field else COMPLEX
    return FramePair(np.kron(fp.X, gq.X), np.kron(fp.T, gq.T), field, fp.tol)


def interpolate_parseval(fp: FramePair, gq: FramePair, A, B, C, D) -> FramePair:
    """({A x_j + B y_j}, {C tau_j + D omega_j}) for A C^* + B D^* = I."""
    _check_shapes(fp, gq)
    if not (verify(fp).parseval and verify(gq).parseval):
        raise NotParseval("both pairs must be Parseval")
    if not is_orthogonal(fp, gq):
        raise NotOrthogonal("pairs must be orthogonal")
    A, B, C, D = (np.asarray(M) for M in (A, B, C, D))
    if not fp.tol.is_identity(A @ C.conj().T + B @ D.conj().T):
        raise BadCoefficients("A C^* + B D^* must be the identity")
    X = A @ fp.X + B @ gq.X
    T = C @ fp.T + D @ gq.T
    return FramePair(X, T, infer_field(X, T) if fp.field == REAL == gq.field else COMPLEX, fp.tol)


@dataclass(frozen=True)
class SimilarityTransforms:
    Txy: np.ndarray
    Ttw: np.ndarray


def similarity_detect(fp: FramePair, gq: FramePair) -> Optional[SimilarityTransforms]:
    """Invertible (Txy, Ttw) with y_j = Txy x_j, omega_j = Ttw tau_j, if any.

    The candidates Txy = Y T^* S^-1 and Ttw = Omega X^* S^-1 are the unique
    possible transforms; similarity holds exactly when the two frame
    idempotents coincide.
    """
    S = _require_frame(fp)
    _require_frame(gq)
    _check_shapes(fp, gq)
    Sinv = np.linalg.inv(S)
    Txy = gq.X @ fp.T.conj().T @ Sinv
    Ttw = gq.T @ fp.X.conj().T @ Sinv
    tol = fp.tol
    if smallest_singular_value(Txy) <= tol.abs_tol or smallest_singular_value(Ttw) <= tol.abs_tol:
        return None
    if not (tol.mat_close(Txy @ fp.X, gq.X) and tol.mat_close(Ttw @ fp.T, gq.T)):
        return None
    return SimilarityTransforms(Txy, Ttw)


LEFT_ON_X = "left_on_x"
SPLIT = "split"
LEFT_ON_T = "left_on_t"


def parsevalize(fp: FramePair, mode: str = SPLIT) -> FramePair:
    """Similar Parseval pair: (S^-1 X, T), (S^-1/2 X, S^-1/2 T) or (X, S^-1 T)."""
    S = _require_frame(fp)
    if mode == LEFT_ON_X:
        return FramePair(np.linalg.solve(S, fp.X), fp.T, fp.field, fp.tol)
    if mode == LEFT_ON_T:
        return FramePair(fp.X, np.linalg.solve(S, fp.T), fp.field, fp.tol)
    if mode == SPLIT:
        Rinv = np.linalg.inv(herm_sqrt(S, fp.tol))
        return FramePair(Rinv @ fp.X, Rinv @ fp.T, fp.field, fp.tol)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class DilationResult:
    big: FramePair
    embed_dim: int


def range_basis(A: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal basis of the column space of A."""
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol.abs_tol + tol.rel_tol * smax))
    return U[:, :rank]


def _same_column_space(A: np.ndarray, B: np.ndarray, tol: Tolerance) -> bool:
    # mutual projection residuals below tol * norm
    QA = range_basis(A, tol)
    QB = range_basis(B, tol)
    if QA.shape[1] != QB.shape[1]:
        return False
    resB = entry_max(B - QA @ (QA.conj().T @ B))
    resA = entry_max(A - QB @ (QB.conj().T @ A))
    return resB <= tol.margin(entry_max(B)) and resA <= tol.margin(entry_max(A))


def dilate(fp: FramePair) -> DilationResult:
    """Extend a Parseval pair to an orthonormal frame of K^(m + n - r).

    The new members are y_j = x_j + P_perp e_j (coordinates of the
    orthogonal complement of ran(theta_x) appended below the originals),
    so projecting onto the first m coordinates recovers the input.
    """
    tol = fp.tol
    if not verify(fp).parseval:
        raise NotParseval("dilation starts from a Parseval pair")
    theta_x = fp.X.conj().T
    theta_t = fp.T.conj().T
    if not _same_column_space(theta_x, theta_t, tol):
        raise RangesDiffer("theta_x and theta_tau must have equal ranges")
    P = fp.X.conj().T @ fp.T  # S = I for a Parseval pair
    if entry_max(P - P.conj().T) > tol.margin(entry_max(P)) or \
            entry_max(P @ P - P) > tol.margin(entry_max(P)):
        raise IdempotentNotProjection("frame idempotent is not an orthogonal projection")
    Q = range_basis(theta_x, tol)
    r = Q.shape[1]
    Pperp = np.eye(fp.n, dtype=P.dtype) - hermitian_part(P)
    Qperp = range_basis(np.eye(fp.n, dtype=P.dtype) - Q @ Q.conj().T, tol)
    bottom = Qperp.conj().T @ Pperp  # (n - r) x n
    if fp.field == REAL:
        bottom = bottom.real
    X = np.vstack([fp.X, bottom])
    T = np.vstack([fp.T, bottom])
    big = FramePair(X, T, fp.field, tol)
    return DilationResult(big, fp.m + (fp.n - r))
