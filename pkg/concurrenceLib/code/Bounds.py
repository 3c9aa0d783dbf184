# -*- coding: utf-8 -*-
"""
Lower and upper bounds on the concurrence of 2 x K mixed states.

The lower bound is sqrt(sum_{i<j} C^2(rho^(ij))) maximized over the basis of
the K-dimensional factor; the upper bound is the average concurrence of a
numerically optimized decomposition. For 2 x 3 states an exactness
certificate exhibits one entangled pure state plus a separable remainder.
"""

import dataclasses
import enum
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.special

from .Concurrence import Concurrence, SubstateSet
from .Errors import DomainError, InvalidParamsError, RankTooHighError, UnsupportedDimsError
from .LinAlg import BipartiteDims, LinAlg
from .Optim import Optim, OptimizerConfig, OptimizerDiagnostics
from .States import Decomposition, PureState

logger = logging.getLogger(__name__)


class PptVerdict(enum.Enum):
    SEPARABLE_PPT = 'separable-PPT'
    PPT_ONLY = 'PPT only (possibly bound entangled)'
    ENTANGLED_NPT = 'entangled-NPT'

    @classmethod
    def from_string(cls, verdict_str):
        normalized_str = verdict_str.strip().lower()
        for verdict in cls:
            if verdict.value.lower() == normalized_str:
                return verdict
        raise ValueError(f"Invalid PPT verdict: {verdict_str}")


class ExactnessStatus(enum.Enum):
    CERTIFIED = 'certified'
    NOT_APPLICABLE = 'not-applicable'
    UNDECIDED = 'undecided'

    @classmethod
    def from_string(cls, status_str):
        normalized_str = status_str.strip().lower()
        for status in cls:
            if status.value == normalized_str:
                return status
        raise ValueError(f"Invalid exactness status: {status_str}")


@dataclass
class LowerBound:
    value: float
    unitary: np.ndarray
    substates: SubstateSet
    diagnostics: OptimizerDiagnostics = None


@dataclass
class UpperBound:
    value: float
    decomposition: Decomposition
    length: int
    rank: int
    diagnostics: OptimizerDiagnostics = None


@dataclass(frozen=True)
class PptResult:
    minEigenvalue: float
    verdict: PptVerdict


@dataclass
class ExactnessCertificate:
    status: ExactnessStatus
    value: float = None
    witness: PureState = None
    pair: tuple = None
    remainderMinEigenvalue: float = None
    remainderPptMinEigenvalue: float = None
    reason: str = ""

    @property
    def certified(self):
        return self.status == ExactnessStatus.CERTIFIED

    def toDict(self):
        d = {"status": self.status.value, "value": self.value, "pair": list(self.pair) if self.pair else None,
             "remainder_min_eigenvalue": self.remainderMinEigenvalue,
             "remainder_ppt_min_eigenvalue": self.remainderPptMinEigenvalue, "reason": self.reason}
        if self.witness is not None:
            d["witness"] = {"re": np.real(self.witness.vector).tolist(), "im": np.imag(self.witness.vector).tolist()}
        return d


@dataclass
class BoundReport:
    lbStandard: float
    lbOptimized: float
    optimalBasis: np.ndarray
    substates: SubstateSet
    ub: float
    decomposition: Decomposition
    eofLb: float
    pptMinEigenvalue: float
    pptVerdict: PptVerdict
    exactness: ExactnessCertificate
    numericallyCoincident: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def gap(self):
        return self.ub - self.lbOptimized

    def toDict(self):
        return {
            "lb_standard": self.lbStandard,
            "lb_optimized": self.lbOptimized,
            "optimal_basis": {"re": np.real(self.optimalBasis).tolist(), "im": np.imag(self.optimalBasis).tolist()},
            "substates": self.substates.toDict(),
            "ub": self.ub,
            "decomposition": self.decomposition.toDict(),
            "eof_lb": self.eofLb,
            "ppt_min_eigenvalue": self.pptMinEigenvalue,
            "ppt_verdict": self.pptVerdict.value,
            "exactness": self.exactness.toDict(),
            "numerically_coincident": self.numericallyCoincident,
            "diagnostics": self.diagnostics,
        }


class Bounds:
    entangledTol = 1e-7
    pptTol = 1e-10
    certificateTol = 1e-9
    coincidenceTol = 1e-6
    rankTol = 1e-12
    squaredSumTol = 1e-9
    penaltyWeights = (1e2, 1e4, 1e6)

    @staticmethod
    def _checkTwoByK(rho):
        if rho.dims.n != 2:
            raise UnsupportedDimsError(f"Bounds need a 2 x K state, got {rho.dims.n} x {rho.dims.k}")

    @classmethod
    def lowerBoundFixedBasis(cls, rho, u=None):
        """sqrt(sum_{i<j} C^2(rho^(ij))) in the basis {U|k>}; returns (value, SubstateSet)"""
        cls._checkTwoByK(rho)
        substates = Concurrence.projectSubstates(rho, u)
        return substates.lowerBound(), substates

    @classmethod
    def lowerBoundOptimized(cls, rho, cfg=None):
        """Maximize the fixed-basis bound over U = exp(iH) in U(K)"""
        cls._checkTwoByK(rho)
        cfg = cfg or OptimizerConfig()
        k = rho.dims.k
        matrix = rho.matrix

        def objective(params):
            u = Optim.unitaryFromParams(params, k)
            stack = Concurrence.substateStack(Concurrence.rotateSecondFactor(matrix, u), k)
            return math.sqrt(float(np.sum(Concurrence.woottersBatch(stack) ** 2)))

        value, params, diagnostics = Optim.maximize(objective, Optim.unitaryParamCount(k), cfg)
        u = Optim.unitaryFromParams(params, k)
        substates = Concurrence.projectSubstates(rho, u)
        logger.debug("Optimized lower bound %.12g (restart %d of %d)", substates.lowerBound(),
                     diagnostics.bestRestart, diagnostics.restarts)
        return LowerBound(substates.lowerBound(), u, substates, diagnostics)

    @classmethod
    def defaultLength(cls, rank, dims):
        return min(2 * rank, dims.total ** 2)

    @classmethod
    def eigenEnsemble(cls, rho):
        """Columns sqrt(lambda_k)|e_k> over the nonzero spectrum"""
        values, vectors = LinAlg.hermitianEigensystem(rho.matrix)
        rank = max(int(np.sum(values > cls.rankTol)), 1)
        return vectors[:, :rank] * np.sqrt(np.clip(values[:rank], 0.0, None))

    @staticmethod
    def decompositionColumns(ensemble, v):
        """|psi~_l> = sum_k V_lk W_k; any isometry V gives a decomposition of the same state"""
        return ensemble @ v.T

    @classmethod
    def decompositionFromIsometry(cls, rho, v):
        return Decomposition.fromColumns(cls.decompositionColumns(cls.eigenEnsemble(rho), v), rho.dims, rho)

    @classmethod
    def upperBound(cls, rho, cfg=None, length=None):
        """Minimize the average concurrence over decompositions of length L"""
        cls._checkTwoByK(rho)
        cfg = cfg or OptimizerConfig()
        dims = rho.dims
        ensemble = cls.eigenEnsemble(rho)
        rank = ensemble.shape[1]
        length = cls.defaultLength(rank, dims) if length is None else int(length)
        if length < rank:
            raise RankTooHighError(f"Decomposition length {length} is shorter than rank {rank}")
        if length > dims.total ** 2:
            raise InvalidParamsError(f"Decomposition length {length} exceeds (n*k)^2 = {dims.total ** 2}")

        def objective(params):
            v = Optim.isometryFromParams(params, length, rank)
            return float(np.sum(Concurrence.batchPureConcurrence(cls.decompositionColumns(ensemble, v), dims.k)))

        _, params, diagnostics = Optim.minimize(objective, Optim.isometryParamCount(length, rank), cfg)
        decomposition = Decomposition.fromColumns(
            cls.decompositionColumns(ensemble, Optim.isometryFromParams(params, length, rank)), dims, rho)
        value = Concurrence.averageConcurrence(decomposition)
        logger.debug("Upper bound %.12g with L=%d, rank=%d", value, length, rank)
        return UpperBound(value, decomposition, length, rank, diagnostics)

    @staticmethod
    def binaryEntropy(x):
        return float((scipy.special.entr(x) + scipy.special.entr(1.0 - x)) / math.log(2.0))

    @classmethod
    def entropyFromConcurrence(cls, c):
        """E(psi) = h((1 + sqrt(1 - C^2))/2) for a 2 x K pure state of concurrence C"""
        if c < 0.0 or c > 1.0 + cls.squaredSumTol:
            raise DomainError(f"Concurrence {c} is out of the valid range: [0, 1]")
        return cls.eofFromSquaredSum(min(c, 1.0) ** 2)

    @classmethod
    def eofFromSquaredSum(cls, s):
        """h((1 + sqrt(1 - s))/2) with s = sum_{i<j} C^2(rho^(ij))"""
        if s > 1.0 + cls.squaredSumTol:
            raise DomainError(f"Sum of squared substate concurrences {s:.12g} exceeds 1")
        s = min(max(s, 0.0), 1.0)
        if s == 0.0:
            return 0.0
        return cls.binaryEntropy((1.0 + math.sqrt(1.0 - s)) / 2.0)

    @classmethod
    def eofLowerBound(cls, rho, cfg=None, lowerBound=None):
        """Entanglement-of-formation bound in bits at the basis maximizing sum C^2(rho^(ij))"""
        lowerBound = lowerBound or cls.lowerBoundOptimized(rho, cfg)
        return cls.eofFromSquaredSum(lowerBound.substates.squaredSum())

    @classmethod
    def pptVerdict(cls, rho):
        minEigenvalue = LinAlg.minEigenvalue(LinAlg.partialTranspose(rho.matrix, rho.dims))
        if minEigenvalue < -cls.pptTol:
            verdict = PptVerdict.ENTANGLED_NPT
        elif rho.dims.total <= 6:
            # PPT is equivalent to separability for 2x2 and 2x3
            verdict = PptVerdict.SEPARABLE_PPT
        else:
            verdict = PptVerdict.PPT_ONLY
        return PptResult(minEigenvalue, verdict)

    @staticmethod
    def _remainderMargins(rotated, v, dims):
        remainder = rotated - np.outer(v, v.conj())
        return (LinAlg.minEigenvalue(remainder),
                LinAlg.minEigenvalue(LinAlg.partialTranspose(remainder, dims)))

    @staticmethod
    def _pairConcurrence(a):
        return Concurrence.pureConcurrence(PureState(a, BipartiteDims(2, 2)))

    @classmethod
    def _searchWitness(cls, rho, substates, target, cfg):
        """Look for |psi> in the image of the entangled pair with C(psi) = target and rho - |psi><psi| separable"""
        dims = rho.dims
        pair = substates.entangledPairs(cls.entangledTol)[0]
        u = substates.basisUnitary
        rotated = Concurrence.rotateSecondFactor(rho.matrix, u)
        idx = [pair.i, pair.j, dims.k + pair.i, dims.k + pair.j]

        def embed(a):
            v = np.zeros(dims.total, dtype=complex)
            v[idx] = a
            return v

        def rescaled(a):
            c = cls._pairConcurrence(a)
            return a * math.sqrt(target / c) if c > Concurrence.zeroClamp else a

        values, vectors = np.linalg.eigh((pair.matrix + pair.matrix.conj().T) / 2)
        start = vectors[:, -1]
        if cls._pairConcurrence(start) <= Concurrence.zeroClamp:
            start = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)
        start = rescaled(start)

        scale = max(math.sqrt(target), 1e-3)
        stageCfg = dataclasses.replace(cfg, step=cfg.step * scale, startScale=scale)
        center = start
        for stage, weight in enumerate(cls.penaltyWeights):
            def objective(params, center=center, weight=weight):
                a = center + params[:4] + 1j * params[4:]
                margin = min(cls._remainderMargins(rotated, embed(a), dims))
                return margin - weight * (cls._pairConcurrence(a) - target) ** 2

            value, params, _ = Optim.maximize(objective, 8, stageCfg)
            center = center + params[:4] + 1j * params[4:]
            logger.debug("Witness stage %d (penalty %.0e): objective %.3e", stage, weight, value)
            stageCfg = dataclasses.replace(stageCfg, restarts=1)

        best = None
        for a in (rescaled(center), start):
            margins = cls._remainderMargins(rotated, embed(a), dims)
            if best is None or min(margins) > min(best[1]):
                best = (a, margins)
        a, (psdMargin, pptMargin) = best
        witness = PureState(np.kron(np.eye(2), u) @ embed(a), dims)
        return witness, (pair.i, pair.j), psdMargin, pptMargin

    @classmethod
    def exactnessCertificate(cls, rho, cfg=None, lowerBound=None):
        if (rho.dims.n, rho.dims.k) != (2, 3):
            raise UnsupportedDimsError(f"Exactness certificate is defined for 2 x 3 states, got {rho.dims.n} x {rho.dims.k}")
        cfg = cfg or OptimizerConfig()
        lowerBound = lowerBound or cls.lowerBoundOptimized(rho, cfg)
        target = lowerBound.value

        candidates = [lowerBound.substates]
        if not np.allclose(lowerBound.unitary, np.eye(rho.dims.k)):
            standard = Concurrence.projectSubstates(rho)
            if standard.lowerBound() >= target - cls.coincidenceTol:
                candidates.append(standard)
        counts = [len(s.entangledPairs(cls.entangledTol)) for s in candidates]
        usable = [s for s, count in zip(candidates, counts) if count == 1]
        if not usable:
            reason = "no entangled substate" if max(counts) == 0 else "several entangled substates"
            return ExactnessCertificate(ExactnessStatus.NOT_APPLICABLE, reason=reason)

        attempt = None
        for substates in usable:
            witness, pair, psdMargin, pptMargin = cls._searchWitness(rho, substates, target, cfg)
            attempt = ExactnessCertificate(ExactnessStatus.UNDECIDED, target, witness, pair, psdMargin, pptMargin)
            if psdMargin >= -cls.certificateTol and pptMargin >= -cls.certificateTol:
                attempt.status = ExactnessStatus.CERTIFIED
                attempt.reason = "one entangled pure state plus a positive, PPT remainder"
                return attempt
        attempt.reason = "no witness with a separable remainder found"
        logger.warning("Exactness undecided: remainder margins %.3e (PSD), %.3e (PPT)",
                       attempt.remainderMinEigenvalue, attempt.remainderPptMinEigenvalue)
        return attempt

    @classmethod
    def report(cls, rho, cfg=None, ubLength=None):
        """Full BoundReport of a 2 x K state"""
        cls._checkTwoByK(rho)
        cfg = cfg or OptimizerConfig()
        started = time.perf_counter()
        lbStandard, _ = cls.lowerBoundFixedBasis(rho)
        lowerBound = cls.lowerBoundOptimized(rho, cfg)
        upperBound = cls.upperBound(rho, cfg, ubLength)
        eofLb = cls.eofLowerBound(rho, cfg, lowerBound)
        ppt = cls.pptVerdict(rho)
        if rho.dims.k == 3:
            exactness = cls.exactnessCertificate(rho, cfg, lowerBound)
        else:
            exactness = ExactnessCertificate(ExactnessStatus.NOT_APPLICABLE,
                                             reason="exactness certificate is defined for 2 x 3 states only")
        coincident = abs(upperBound.value - lowerBound.value) <= cls.coincidenceTol
        if coincident and not exactness.certified and lowerBound.value > cls.coincidenceTol:
            logger.warning("Lower and upper bound coincide numerically (%.9f) without a certificate",
                           lowerBound.value)
        diagnostics = {
            "lower_bound": lowerBound.diagnostics.toDict(),
            "upper_bound": upperBound.diagnostics.toDict(),
            "ub_length": upperBound.length,
            "rank": upperBound.rank,
            "wall_time": time.perf_counter() - started,
        }
        logger.info("lb=%.6f ub=%.6f ppt=%s exactness=%s", lowerBound.value, upperBound.value,
                    ppt.verdict.value, exactness.status.value)
        return BoundReport(lbStandard, lowerBound.value, lowerBound.unitary, lowerBound.substates,
                           upperBound.value, upperBound.decomposition, eofLb, ppt.minEigenvalue,
                           ppt.verdict, exactness, coincident, diagnostics)
