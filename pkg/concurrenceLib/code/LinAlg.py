# -*- coding: utf-8 -*-
"""
Dense complex linear algebra for bipartite N x K operators.

Composite index convention: |i> (x) |j>  ->  i*k + j (first factor major).
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .Errors import (ConcurrenceError, ConvergenceFailureError, DimensionMismatchError,
                     NonHermitianError, NotPSDError, NotUnitaryError)

logger = logging.getLogger(__name__)


class Factor(enum.Enum):
    N = 'n'  # first factor
    K = 'k'  # second factor

    @classmethod
    def from_string(cls, factor_str):
        if isinstance(factor_str, cls):
            return factor_str
        normalized_str = str(factor_str).strip().lower()
        for factor in cls:
            if factor.value == normalized_str:
                return factor
        raise ValueError(f"Invalid factor: {factor_str}. Expected 'n' or 'k'.")


@dataclass(frozen=True)
class BipartiteDims:
    n: int
    k: int

    def __post_init__(self):
        for name, value in (("n", self.n), ("k", self.k)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DimensionMismatchError(f"Dimension {name} must be an integer, got {value!r}")
            if value < 2:
                raise DimensionMismatchError(f"Dimension {name}={value} is out of the valid range: >= 2")

    @classmethod
    def fromSequence(cls, dims):
        """Build from a [n, k] pair as found in JSON payloads"""
        try:
            n, k = dims
        except (TypeError, ValueError):
            raise DimensionMismatchError(f"Expected a pair [n, k], got {dims!r}")
        return cls(int(n), int(k))

    @property
    def total(self):
        return self.n * self.k

    def toList(self):
        return [self.n, self.k]

    def checkOperator(self, m):
        if m.shape != (self.total, self.total):
            raise DimensionMismatchError(
                f"Operator of shape {m.shape} does not match dims {self.n}x{self.k} "
                f"(expected {self.total}x{self.total})")

    def checkVector(self, v):
        if v.shape != (self.total,):
            raise DimensionMismatchError(
                f"Vector of length {v.shape[0] if v.ndim else 0} does not match dims "
                f"{self.n}x{self.k} (expected {self.total})")


class LinAlg:
    hermTol = 1e-10
    psdTol = 1e-10
    unitaryTol = 1e-10

    @staticmethod
    def asComplexMatrix(m):
        """Copy into a finite 2-D complex array"""
        arr = np.array(m, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatchError(f"Expected a non-empty 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ConcurrenceError("Matrix entries must be finite (no NaN or Inf)")
        return arr

    @staticmethod
    def checkSquare(m):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"Expected a square matrix, got shape {m.shape}")

    @staticmethod
    def hermiticityDefect(m):
        return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0

    @classmethod
    def symmetrize(cls, m):
        """Return (m + m^H)/2, refusing matrices further than hermTol from Hermitian"""
        cls.checkSquare(m)
        defect = cls.hermiticityDefect(m)
        if defect > cls.hermTol:
            raise NonHermitianError(f"Matrix is not Hermitian: max |m - m^H| = {defect:.3e} > {cls.hermTol:.0e}")
        return (m + m.conj().T) / 2

    @classmethod
    def hermitianEigensystem(cls, m):
        """Eigenvalues (descending) and orthonormal eigenvector columns of a Hermitian matrix"""
        h = cls.symmetrize(np.asarray(m, dtype=complex))
        try:
            values, vectors = scipy.linalg.eigh(h)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            logger.error("eigh failed on a %dx%d matrix: %s", h.shape[0], h.shape[1], exc)
            raise ConvergenceFailureError(f"Hermitian eigendecomposition did not converge: {exc}") from exc
        return values[::-1].copy(), vectors[:, ::-1].copy()

    @classmethod
    def eigenvalues(cls, m):
        """Eigenvalues only, descending"""
        h = cls.symmetrize(np.asarray(m, dtype=complex))
        try:
            values = scipy.linalg.eigvalsh(h)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            logger.error("eigh failed on a %dx%d matrix: %s", h.shape[0], h.shape[1], exc)
            raise ConvergenceFailureError(f"Hermitian eigendecomposition did not converge: {exc}") from exc
        return values[::-1].copy()

    @classmethod
    def minEigenvalue(cls, m):
        return float(cls.eigenvalues(m)[-1])

    @staticmethod
    def partialTrace(rho, dims, which):
        """Trace out factor `which` (Factor.N or Factor.K); returns the operator on the other factor"""
        rho = np.asarray(rho, dtype=complex)
        dims.checkOperator(rho)
        factor = Factor.from_string(which)
        blocks = rho.reshape(dims.n, dims.k, dims.n, dims.k)
        if factor == Factor.K:
            return np.einsum('ijkj->ik', blocks)
        return np.einsum('ijil->jl', blocks)

    @staticmethod
    def partialTranspose(rho, dims):
        """Transpose the second factor's indices"""
        rho = np.asarray(rho, dtype=complex)
        dims.checkOperator(rho)
        blocks = rho.reshape(dims.n, dims.k, dims.n, dims.k)
        return blocks.transpose(0, 3, 2, 1).reshape(dims.total, dims.total)

    @classmethod
    def matrixSqrtPsd(cls, rho):
        """Hermitian PSD square root; eigenvalues down to -psdTol are clamped to zero"""
        values, vectors = cls.hermitianEigensystem(rho)
        if values[-1] < -cls.psdTol:
            raise NotPSDError(f"Matrix is not positive semidefinite: minimum eigenvalue {values[-1]:.3e}")
        roots = np.sqrt(np.clip(values, 0.0, None))
        return (vectors * roots) @ vectors.conj().T

    @staticmethod
    def tensorProduct(a, b):
        return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))

    @classmethod
    def localUnitary(cls, uA, uB):
        return cls.tensorProduct(uA, uB)

    @staticmethod
    def unitarityDefect(u):
        u = np.asarray(u, dtype=complex)
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1]))))

    @classmethod
    def checkUnitary(cls, u, dim=None):
        u = np.asarray(u, dtype=complex)
        cls.checkSquare(u)
        if dim is not None and u.shape[0] != dim:
            raise DimensionMismatchError(f"Unitary of size {u.shape[0]} does not act on a {dim}-dimensional factor")
        defect = cls.unitarityDefect(u)
        if defect > cls.unitaryTol:
            raise NotUnitaryError(f"Matrix is not unitary: max |U^H U - I| = {defect:.3e}")
        return u

    @staticmethod
    def randomUnitary(dim, rng):
        """Haar-random unitary from the QR decomposition of a complex Ginibre matrix"""
        ginibre = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
        q, r = np.linalg.qr(ginibre)
        phases = np.diagonal(r) / np.abs(np.diagonal(r))
        return q * phases
