# -*- coding: utf-8 -*-
"""
Concurrence formulas: flip operator, pure-state concurrence, the Wootters
2 x 2 formula and the projections of a 2 x K state onto 2 x 2 subspaces.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.special

from .Errors import DimensionMismatchError, NotPSDError, UnsupportedDimsError
from .LinAlg import BipartiteDims, Factor, LinAlg
from .States import PureState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Substate:
    i: int
    j: int
    matrix: np.ndarray   # rows/cols (0,i), (0,j), (1,i), (1,j); unnormalized
    concurrence: float

    @property
    def trace(self):
        return float(np.real(np.trace(self.matrix)))


class SubstateSet:
    """All K(K-1)/2 projections rho^(ij) of a 2 x K state in the basis {U|k>}"""

    def __init__(self, basisUnitary, substates):
        self.basisUnitary = basisUnitary
        self.substates = list(substates)

    def __len__(self):
        return len(self.substates)

    def __iter__(self):
        return iter(self.substates)

    def concurrences(self):
        return np.array([s.concurrence for s in self.substates])

    def squaredSum(self):
        return float(np.sum(self.concurrences() ** 2))

    def lowerBound(self):
        return math.sqrt(self.squaredSum())

    def traceSum(self):
        return sum(s.trace for s in self.substates)

    def entangledPairs(self, tol):
        return [s for s in self.substates if s.concurrence > tol]

    def toDict(self):
        return [{"i": s.i, "j": s.j, "trace": s.trace, "concurrence": s.concurrence} for s in self.substates]


class Concurrence:
    zeroClamp = 1e-12
    sigmaY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    spinFlip = np.kron(sigmaY, sigmaY)

    @staticmethod
    def flipOperator(a, dims):
        """F(A) = A + (tr A) I - I_N (x) tr_N A - tr_K A (x) I_K"""
        a = LinAlg.symmetrize(LinAlg.asComplexMatrix(a))
        dims.checkOperator(a)
        traceN = LinAlg.partialTrace(a, dims, Factor.N)
        traceK = LinAlg.partialTrace(a, dims, Factor.K)
        return (a + np.trace(a) * np.eye(dims.total)
                - np.kron(np.eye(dims.n), traceN)
                - np.kron(traceK, np.eye(dims.k)))

    @staticmethod
    def _minorSquares(amplitudes):
        """sum over 2x2 minors |M_ij M_i'j' - M_ij' M_i'j|^2, counting each ordered column pair"""
        total = 0.0
        for i, ii in itertools.combinations(range(amplitudes.shape[0]), 2):
            a, b = amplitudes[i], amplitudes[ii]
            minors = np.outer(a, b) - np.outer(b, a)
            total += float(np.sum(np.abs(minors) ** 2))
        return total

    @classmethod
    def pureConcurrence(cls, psi):
        """sqrt(2[<psi|psi>^2 - tr rho_N^2]), evaluated as 2*sqrt(sum of squared 2x2 minors)"""
        return math.sqrt(2.0 * cls._minorSquares(psi.amplitudeMatrix()))

    @staticmethod
    def pureConcurrenceTrace(psi):
        """The literal trace form; loses accuracy close to product states"""
        rhoN = psi.reducedFirst()
        radicand = 2.0 * (psi.normSquared() ** 2 - float(np.real(np.sum(np.abs(rhoN) ** 2))))
        return math.sqrt(max(radicand, 0.0))

    @classmethod
    def pureConcurrenceFlip(cls, psi):
        """sqrt(<psi|F(rho_psi)|psi>)"""
        value = float(np.real(np.vdot(psi.vector, cls.flipOperator(psi.projector(), psi.dims) @ psi.vector)))
        return math.sqrt(max(value, 0.0))

    @staticmethod
    def batchPureConcurrence(columns, k):
        """Concurrences of the columns of a (2k x L) array of unnormalized 2 x k vectors"""
        blocks = columns.reshape(2, k, -1)
        a, b = blocks[0], blocks[1]
        minors = a[:, None, :] * b[None, :, :] - b[:, None, :] * a[None, :, :]
        return np.sqrt(2.0 * np.sum(np.abs(minors) ** 2, axis=(0, 1)))

    @staticmethod
    def maximalConcurrence(n):
        return math.sqrt(2.0 * (n - 1) / n)

    @staticmethod
    def entanglementEntropy(psi):
        """-tr rho_N log2 rho_N of the normalized state, in bits"""
        probabilities = psi.normalized().schmidtCoefficients() ** 2
        return float(np.sum(scipy.special.entr(probabilities)) / math.log(2.0))

    @classmethod
    def averageConcurrence(cls, decomposition):
        return sum(w * cls.pureConcurrence(psi) for w, psi in decomposition.elements)

    @classmethod
    def woottersBatch(cls, stack):
        """Wootters concurrence of a stack (P, 4, 4) of Hermitian PSD matrices, traces <= 1"""
        stack = (stack + np.conj(np.swapaxes(stack, -1, -2))) / 2
        values, vectors = np.linalg.eigh(stack)
        if np.any(values[:, 0] < -LinAlg.psdTol):
            raise NotPSDError(f"2x2 state is not positive semidefinite: minimum eigenvalue {values.min():.3e}")
        roots = np.sqrt(np.clip(values, 0.0, None))
        sqrtRho = (vectors * roots[:, None, :]) @ np.conj(np.swapaxes(vectors, -1, -2))
        # singular values of sqrt(rho) YY sqrt(rho)^* are the square roots of eig(sqrt(rho) rho~ sqrt(rho))
        lambdas = np.linalg.svd(sqrtRho @ cls.spinFlip @ np.conj(sqrtRho), compute_uv=False)
        c = lambdas[:, 0] - np.sum(lambdas[:, 1:], axis=1)
        return np.where(c > cls.zeroClamp, c, 0.0)

    @classmethod
    def woottersConcurrence(cls, rho4):
        rho4 = LinAlg.asComplexMatrix(rho4)
        if rho4.shape != (4, 4):
            raise DimensionMismatchError(f"Wootters concurrence needs a 4x4 matrix, got {rho4.shape}")
        rho4 = LinAlg.symmetrize(rho4)
        return float(cls.woottersBatch(rho4[None, :, :])[0])

    @staticmethod
    def pairs(k):
        return list(itertools.combinations(range(k), 2))

    @classmethod
    def pairIndexTable(cls, k):
        """(P, 4) composite indices of (0,i), (0,j), (1,i), (1,j) for every pair i<j"""
        return np.array([[i, j, k + i, k + j] for i, j in cls.pairs(k)], dtype=int)

    @staticmethod
    def rotateSecondFactor(matrix, u):
        """(I_2 (x) U)^H rho (I_2 (x) U): coordinates in the basis |s> (x) U|k>"""
        local = np.kron(np.eye(2), u)
        return local.conj().T @ matrix @ local

    @staticmethod
    def _checkTwoByK(dims):
        if dims.n != 2:
            raise UnsupportedDimsError(f"Substate projections need a 2 x K system, got {dims.n} x {dims.k}")

    @classmethod
    def substateStack(cls, rotated, k):
        idx = cls.pairIndexTable(k)
        return rotated[idx[:, :, None], idx[:, None, :]]

    @classmethod
    def projectSubstates(cls, rho, u=None):
        dims = rho.dims
        cls._checkTwoByK(dims)
        u = np.eye(dims.k, dtype=complex) if u is None else LinAlg.checkUnitary(u, dims.k)
        stack = cls.substateStack(cls.rotateSecondFactor(rho.matrix, u), dims.k)
        values = cls.woottersBatch(stack)
        logger.debug("Projected %d substates, squared sum %.12g", len(values), float(np.sum(values ** 2)))
        substates = [Substate(i, j, stack[p].copy(), float(values[p]))
                     for p, (i, j) in enumerate(cls.pairs(dims.k))]
        return SubstateSet(u, substates)

    @classmethod
    def projectPureState(cls, psi, u, i, j):
        """P^(ij)|psi> in the basis {U|k>}, as a 2 x 2 vector"""
        k = psi.dims.k
        rotated = np.kron(np.eye(2), u).conj().T @ psi.vector
        return PureState(rotated[[i, j, k + i, k + j]], BipartiteDims(2, 2))

    @classmethod
    def pureProjectionIdentityResidual(cls, psi, u=None):
        """|C^2(psi) - sum_{i<j} C^2(P^(ij) psi)|"""
        cls._checkTwoByK(psi.dims)
        u = np.eye(psi.dims.k, dtype=complex) if u is None else LinAlg.checkUnitary(u, psi.dims.k)
        projected = sum(cls.pureConcurrence(cls.projectPureState(psi, u, i, j)) ** 2
                        for i, j in cls.pairs(psi.dims.k))
        return abs(cls.pureConcurrence(psi) ** 2 - projected)

    @classmethod
    def ofPureDensityMatrix(cls, rho):
        """Concurrence of a rank-one density matrix"""
        values, vectors = LinAlg.hermitianEigensystem(rho.matrix)
        return cls.pureConcurrence(PureState(vectors[:, 0] * math.sqrt(max(values[0], 0.0)), rho.dims))


