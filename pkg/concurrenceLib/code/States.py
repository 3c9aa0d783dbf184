# -*- coding: utf-8 -*-
"""
State types for 2 x K systems: density matrices, (unnormalized) pure states,
pure-state decompositions, random induced states and the rho_{x,y} family.
"""

import enum
import json
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .Errors import (ConcurrenceError, DimensionMismatchError, InvalidParamsError,
                     MalformedInputError, NotPSDError, TraceNotOneError)
from .LinAlg import BipartiteDims, LinAlg

logger = logging.getLogger(__name__)


def _asDims(dims):
    if isinstance(dims, BipartiteDims):
        return dims
    return BipartiteDims.fromSequence(dims)


class DensityMatrix:
    traceTol = 1e-10

    def __init__(self, matrix, dims):
        dims = _asDims(dims)
        m = LinAlg.asComplexMatrix(matrix)
        dims.checkOperator(m)
        m = LinAlg.symmetrize(m)
        trace = float(np.real(np.trace(m)))
        if abs(trace - 1.0) > self.traceTol:
            raise TraceNotOneError(f"Trace {trace:.12g} is out of the valid range: 1 +/- {self.traceTol:.0e}")
        if trace != 1.0:
            logger.debug("Renormalized trace %.15g to 1", trace)
        m = m / trace
        values = LinAlg.eigenvalues(m)
        if values[-1] < -LinAlg.psdTol:
            raise NotPSDError(f"Density matrix is not positive semidefinite: minimum eigenvalue {values[-1]:.3e}")
        m.flags.writeable = False
        self._matrix = m
        self._dims = dims
        self._eigenvalues = values

    @property
    def matrix(self):
        return self._matrix

    @property
    def dims(self):
        return self._dims

    def eigenvalues(self):
        """Descending spectrum"""
        return self._eigenvalues.copy()

    def rank(self, tol=1e-12):
        return int(np.sum(self._eigenvalues > tol))

    def purity(self):
        return float(np.real(np.trace(self._matrix @ self._matrix)))

    def transformed(self, unitary):
        """U rho U^H for a unitary acting on the full space"""
        u = LinAlg.checkUnitary(unitary, self._dims.total)
        return DensityMatrix(u @ self._matrix @ u.conj().T, self._dims)

    def mixedWith(self, other, t):
        """(1 - t) rho + t other"""
        if not 0.0 <= t <= 1.0:
            raise InvalidParamsError(f"Mixing weight {t} is out of the valid range: [0, 1]")
        if other.dims != self._dims:
            raise DimensionMismatchError("Cannot mix states on different dimensions")
        return DensityMatrix((1.0 - t) * self._matrix + t * other.matrix, self._dims)

    @classmethod
    def maximallyMixed(cls, dims):
        dims = _asDims(dims)
        return cls(np.eye(dims.total) / dims.total, dims)

    @classmethod
    def fromPureState(cls, psi):
        return cls(psi.normalized().projector(), psi.dims)

    def toDict(self):
        return {"dims": self._dims.toList(),
                "re": np.real(self._matrix).tolist(),
                "im": np.imag(self._matrix).tolist()}

    def toJson(self):
        return json.dumps(self.toDict())

    def save(self, path):
        with open(path, "w") as f:
            f.write(self.toJson())

    @classmethod
    def fromDict(cls, payload):
        if not isinstance(payload, dict):
            raise MalformedInputError("Density-matrix JSON must be an object with keys dims, re, im")
        missing = [key for key in ("dims", "re", "im") if key not in payload]
        if missing:
            raise MalformedInputError(f"Density-matrix JSON is missing keys: {missing}")
        try:
            re = np.array(payload["re"], dtype=float)
            im = np.array(payload["im"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(f"Matrix entries must be rectangular lists of numbers: {exc}") from exc
        if re.shape != im.shape:
            raise MalformedInputError(f"Real part {re.shape} and imaginary part {im.shape} differ in shape")
        return cls(re + 1j * im, BipartiteDims.fromSequence(payload["dims"]))

    @classmethod
    def fromJson(cls, text):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"Malformed JSON: {exc}") from exc
        return cls.fromDict(payload)

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.fromJson(f.read())

    def __repr__(self):
        return f"DensityMatrix(dims={self._dims.n}x{self._dims.k}, rank={self.rank()})"


class PureState:
    """Bipartite vector; the norm is kept, concurrence is linear in <psi|psi>"""

    def __init__(self, vector, dims):
        dims = _asDims(dims)
        v = np.array(vector, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ConcurrenceError("State amplitudes must be finite")
        dims.checkVector(v)
        v.flags.writeable = False
        self._vector = v
        self._dims = dims

    @property
    def vector(self):
        return self._vector

    @property
    def dims(self):
        return self._dims

    def normSquared(self):
        return float(np.real(np.vdot(self._vector, self._vector)))

    def norm(self):
        return math.sqrt(self.normSquared())

    def normalized(self):
        norm = self.norm()
        if norm == 0.0:
            raise InvalidParamsError("Cannot normalize the zero vector")
        return PureState(self._vector / norm, self._dims)

    def scaled(self, s):
        return PureState(s * self._vector, self._dims)

    def projector(self):
        return np.outer(self._vector, self._vector.conj())

    def amplitudeMatrix(self):
        """n x k coefficient matrix psi[i, j] = <i, j|psi>"""
        return self._vector.reshape(self._dims.n, self._dims.k)

    def reducedFirst(self):
        """rho_N = tr_K |psi><psi|"""
        a = self.amplitudeMatrix()
        return a @ a.conj().T

    def schmidtCoefficients(self):
        return np.linalg.svd(self.amplitudeMatrix(), compute_uv=False)

    @classmethod
    def product(cls, a, b):
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        return cls(np.kron(a, b), BipartiteDims(len(a), len(b)))

    def __repr__(self):
        return f"PureState(dims={self._dims.n}x{self._dims.k}, norm^2={self.normSquared():.6g})"


class Decomposition:
    weightTol = 1e-10
    normTol = 1e-10
    reconstructionTol = 1e-8

    def __init__(self, weights, states, target=None):
        weights = [float(w) for w in weights]
        states = list(states)
        if len(weights) != len(states) or not states:
            raise InvalidParamsError("A decomposition needs one weight per state and at least one element")
        dims = states[0].dims
        for w, psi in zip(weights, states):
            if not 0.0 < w <= 1.0 + self.weightTol:
                raise InvalidParamsError(f"Weight {w} is out of the valid range: (0, 1]")
            if psi.dims != dims:
                raise DimensionMismatchError("All decomposition elements must share the same dims")
            if abs(psi.normSquared() - 1.0) > self.normTol:
                raise InvalidParamsError(f"Decomposition states must be unit vectors, got norm^2 {psi.normSquared():.12g}")
        if abs(sum(weights) - 1.0) > self.weightTol:
            raise InvalidParamsError(f"Weights sum to {sum(weights):.12g}, expected 1")
        if len(states) > dims.total ** 2:
            raise InvalidParamsError(f"Decomposition length {len(states)} exceeds (n*k)^2 = {dims.total ** 2}")
        self._weights = weights
        self._states = states
        self._dims = dims
        if target is not None:
            residual = self.residual(target)
            if residual > self.reconstructionTol:
                raise ConcurrenceError(f"Decomposition does not reconstruct the state: residual {residual:.3e}")

    @classmethod
    def fromColumns(cls, columns, dims, target=None, dropTol=1e-14):
        """Subnormalized vectors (columns) -> weights <psi|psi> and unit states"""
        dims = _asDims(dims)
        columns = np.asarray(columns, dtype=complex)
        weights, states = [], []
        for col in columns.T:
            w = float(np.real(np.vdot(col, col)))
            if w <= dropTol:
                continue
            weights.append(w)
            states.append(PureState(col / math.sqrt(w), dims))
        return cls(weights, states, target)

    @property
    def weights(self):
        return list(self._weights)

    @property
    def states(self):
        return list(self._states)

    @property
    def dims(self):
        return self._dims

    @property
    def elements(self):
        return list(zip(self._weights, self._states))

    def __len__(self):
        return len(self._states)

    def reconstruct(self):
        rho = np.zeros((self._dims.total, self._dims.total), dtype=complex)
        for w, psi in self.elements:
            rho += w * psi.projector()
        return rho

    def residual(self, target):
        matrix = target.matrix if isinstance(target, DensityMatrix) else np.asarray(target)
        return float(np.max(np.abs(self.reconstruct() - matrix)))

    def toDict(self):
        return {"weights": self._weights,
                "re": [np.real(psi.vector).tolist() for psi in self._states],
                "im": [np.imag(psi.vector).tolist() for psi in self._states]}


@dataclass(frozen=True)
class FamilyParams:
    x: float
    y: float
    tol: float = 1e-12

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParamsError(f"Family parameters must be finite, got x={self.x}, y={self.y}")
        if self.y < -self.tol or self.x < self.y - self.tol or self.x + self.y > 1.0 + self.tol:
            raise InvalidParamsError(
                f"Family parameters x={self.x}, y={self.y} are out of the valid range: x >= y >= 0, x + y <= 1")


class FamilyClass(enum.Enum):
    SEPARABLE = 'separable'
    EXACT = 'exact'
    UNKNOWN = 'unknown'

    @classmethod
    def from_string(cls, class_str):
        normalized_str = class_str.strip().lower()
        for klass in cls:
            if klass.value == normalized_str:
                return klass
        raise ValueError(f"Invalid family classification: {class_str}")


@dataclass(frozen=True)
class FamilyConcurrence:
    classification: FamilyClass
    value: Optional[float]  # exact concurrence, None when unknown
    lower: float      # analytic lower value max(C~, 0)
    cTilde: float


class States:
    # x <= 1 - exactSlope * y is the regime where rho - C~|psi1><psi1| stays separable
    exactSlope = (3.0 * math.sqrt(5.0) - 1.0) / 2.0
    boundaryTol = 1e-12

    @staticmethod
    def makeDensityMatrix(m, dims):
        return DensityMatrix(m, dims)

    @staticmethod
    def deriveSeed(master, *key):
        """Per-item seed mixed from a master seed and an integer key via SeedSequence hashing"""
        seq = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in key))
        return int(seq.generate_state(1, dtype=np.uint64)[0])

    @staticmethod
    def randomPureState(dims, seed):
        dims = _asDims(dims)
        rng = np.random.default_rng(seed)
        z = rng.standard_normal(dims.total) + 1j * rng.standard_normal(dims.total)
        return PureState(z / np.linalg.norm(z), dims)

    @staticmethod
    def randomInducedState(mEnv, dims, seed):
        """Partial trace over an mEnv-dimensional environment of a Fubini-Study random pure state"""
        if isinstance(mEnv, bool) or not isinstance(mEnv, (int, np.integer)) or mEnv < 1:
            raise InvalidParamsError(f"Environment dimension {mEnv!r} is out of the valid range: integer >= 1")
        dims = _asDims(dims)
        rng = np.random.default_rng(seed)
        shape = (dims.total, int(mEnv))
        # variance 1/2 per real component
        z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
        z /= np.linalg.norm(z)
        logger.debug("Induced state: dims %s, environment %d", dims.toList(), mEnv)
        return DensityMatrix(z @ z.conj().T, dims)

    @staticmethod
    def familyBasisStates():
        """|psi1> = (|00> + |11>)/sqrt2, |psi2> = (|02> + |10>)/sqrt2 on 2 x 3"""
        dims = BipartiteDims(2, 3)
        psi1 = np.zeros(6, dtype=complex)
        psi1[0 * 3 + 0] = psi1[1 * 3 + 1] = 1.0 / math.sqrt(2.0)
        psi2 = np.zeros(6, dtype=complex)
        psi2[0 * 3 + 2] = psi2[1 * 3 + 0] = 1.0 / math.sqrt(2.0)
        return PureState(psi1, dims), PureState(psi2, dims)

    @classmethod
    def familyState(cls, params):
        psi1, psi2 = cls.familyBasisStates()
        matrix = (params.x * psi1.projector() + params.y * psi2.projector()
                  + (1.0 - params.x - params.y) / 6.0 * np.eye(6))
        return DensityMatrix(matrix, psi1.dims)

    @classmethod
    def familySuperposition(cls, theta, phi):
        psi1, psi2 = cls.familyBasisStates()
        vector = math.cos(theta) * psi1.vector + math.sin(theta) * np.exp(1j * phi) * psi2.vector
        return PureState(vector, psi1.dims)

    @classmethod
    def familyOptimalDecomposition(cls):
        """(|psi1> +/- |psi2>)/sqrt2 with weights 1/2, the optimal ensemble of rho_{1/2,1/2}"""
        plus = cls.familySuperposition(math.pi / 4, 0.0)
        minus = cls.familySuperposition(-math.pi / 4, 0.0)
        target = cls.familyState(FamilyParams(0.5, 0.5))
        return Decomposition([0.5, 0.5], [plus, minus], target)

    @staticmethod
    def cTilde(params):
        x, y = params.x, params.y
        return x - math.sqrt(max((1.0 - x + 2.0 * y) * (1.0 - x - y), 0.0)) / 3.0

    @classmethod
    def familyExactConcurrence(cls, params):
        x, y = params.x, params.y
        cTilde = cls.cTilde(params)
        separableEdge = -2.0 - y + 3.0 * math.sqrt(max(4.0 + 4.0 * y - 7.0 * y * y, 0.0))
        if 16.0 * x <= separableEdge + cls.boundaryTol:
            return FamilyConcurrence(FamilyClass.SEPARABLE, 0.0, 0.0, cTilde)
        if x <= 1.0 - cls.exactSlope * y + cls.boundaryTol and cTilde > 0.0:
            return FamilyConcurrence(FamilyClass.EXACT, cTilde, cTilde, cTilde)
        return FamilyConcurrence(FamilyClass.UNKNOWN, None, max(cTilde, 0.0), cTilde)
