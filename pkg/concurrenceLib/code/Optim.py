# -*- coding: utf-8 -*-
"""
Parametrizations of unitaries and isometries, and the restart-based
direct-search optimizer shared by the lower- and upper-bound searches.
"""

import dataclasses
import enum
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .Errors import DimensionMismatchError, InvalidParamsError

logger = logging.getLogger(__name__)


class OptimizerMethod(enum.Enum):
    NELDER_MEAD = 'nelder-mead'
    POWELL = 'powell'

    @classmethod
    def from_string(cls, method_str):
        if isinstance(method_str, cls):
            return method_str
        normalized_str = method_str.strip().lower()
        for method in cls:
            if method.value == normalized_str:
                return method
        raise ValueError(f"Invalid optimizer method: {method_str}. Expected 'nelder-mead' or 'powell'.")

    @property
    def scipyName(self):
        return {OptimizerMethod.NELDER_MEAD: 'Nelder-Mead', OptimizerMethod.POWELL: 'Powell'}[self]


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    maxIters: int = 2000
    tol: float = 1e-9
    step: float = 0.1
    seed: int = 0
    method: OptimizerMethod = OptimizerMethod.NELDER_MEAD
    startScale: float = math.pi
    polishRounds: int = 2
    workers: int = 1
    itersPerParam: int = 200

    def __post_init__(self):
        object.__setattr__(self, "method", OptimizerMethod.from_string(self.method))
        for name in ("restarts", "maxIters", "workers"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidParamsError(f"Optimizer {name}={value!r} is out of the valid range: integer >= 1")
        if not isinstance(self.polishRounds, (int, np.integer)) or self.polishRounds < 0:
            raise InvalidParamsError(f"Optimizer polishRounds={self.polishRounds!r} must be a non-negative integer")
        if not isinstance(self.itersPerParam, (int, np.integer)) or self.itersPerParam < 0:
            raise InvalidParamsError(f"Optimizer itersPerParam={self.itersPerParam!r} must be a non-negative integer")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise InvalidParamsError(f"Optimizer seed={self.seed!r} must be a non-negative integer")
        for name in ("tol", "step", "startScale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParamsError(f"Optimizer {name}={value!r} must be a positive number")

    def withSeed(self, seed):
        return dataclasses.replace(self, seed=int(seed))

    def scaledFor(self, dim):
        """
        Per-restart budget of at least itersPerParam * dim iterations. When that
        raises maxIters, the restart count shrinks so that restarts * maxIters
        stays close to the configured total; itersPerParam=0 disables scaling.
        """
        iters = max(self.maxIters, self.itersPerParam * int(dim))
        if iters == self.maxIters:
            return self
        restarts = max(1, math.ceil(self.restarts * self.maxIters / iters))
        return dataclasses.replace(self, restarts=restarts, maxIters=iters)

    def toDict(self):
        d = dataclasses.asdict(self)
        d["method"] = self.method.value
        return d


@dataclass
class RestartResult:
    index: int
    value: float
    params: np.ndarray
    iterations: int
    evaluations: int
    converged: bool


@dataclass
class OptimizerDiagnostics:
    restarts: int
    iterations: int
    evaluations: int
    converged: int
    bestRestart: int
    values: list = field(default_factory=list)
    wallTime: float = 0.0

    def toDict(self):
        return dataclasses.asdict(self)


class Optim:

    @staticmethod
    def unitaryParamCount(dim):
        return dim * dim

    @staticmethod
    def hermitianFromParams(params, dim):
        """dim diagonal entries, then real parts, then imaginary parts of the upper triangle (row-major)"""
        params = np.asarray(params, dtype=float)
        if params.shape != (dim * dim,):
            raise DimensionMismatchError(f"A {dim}x{dim} generator needs {dim * dim} parameters, got {params.size}")
        rows, cols = np.triu_indices(dim, 1)
        m = len(rows)
        h = np.diag(params[:dim]).astype(complex)
        upper = params[dim:dim + m] + 1j * params[dim + m:]
        h[rows, cols] = upper
        h[cols, rows] = upper.conj()
        return h

    @classmethod
    def unitaryFromParams(cls, params, dim):
        """U = exp(iH) through the eigendecomposition of H"""
        h = cls.hermitianFromParams(params, dim)
        if not np.any(h):
            return np.eye(dim, dtype=complex)
        values, vectors = np.linalg.eigh(h)
        return (vectors * np.exp(1j * values)) @ vectors.conj().T

    @staticmethod
    def isometryParamCount(rows, cols):
        return 2 * rows * cols

    @staticmethod
    def isometryFromParams(params, rows, cols):
        """rows x cols matrix with orthonormal columns: Gram-Schmidt of [I; 0] + X(params)"""
        if rows < cols:
            raise InvalidParamsError(f"An isometry needs rows >= cols, got {rows} x {cols}")
        params = np.asarray(params, dtype=float)
        if params.shape != (2 * rows * cols,):
            raise DimensionMismatchError(f"A {rows}x{cols} isometry needs {2 * rows * cols} parameters, got {params.size}")
        half = rows * cols
        x = params[:half].reshape(rows, cols) + 1j * params[half:].reshape(rows, cols)
        q, r = np.linalg.qr(np.eye(rows, cols) + x)
        d = np.diagonal(r)
        phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
        return q * phases

    @staticmethod
    def startingPoints(dim, cfg):
        """Zeros first, the rest uniform in [-startScale, startScale]^dim"""
        rng = np.random.default_rng(cfg.seed)
        starts = [np.zeros(dim)]
        for _ in range(cfg.restarts - 1):
            starts.append(rng.uniform(-cfg.startScale, cfg.startScale, dim))
        return starts

    @staticmethod
    def initialSimplex(x0, step):
        simplex = np.tile(x0, (len(x0) + 1, 1))
        simplex[1:] += step * np.eye(len(x0))
        return simplex

    @classmethod
    def _localSearch(cls, fun, x0, cfg, index):
        options = {"maxiter": cfg.maxIters}
        if cfg.method == OptimizerMethod.NELDER_MEAD:
            options.update(xatol=math.sqrt(cfg.tol), fatol=cfg.tol, adaptive=len(x0) > 8)
        else:
            options.update(xtol=math.sqrt(cfg.tol), ftol=cfg.tol)

        x, best = np.asarray(x0, dtype=float), float(fun(x0))
        iterations, evaluations, converged = 0, 1, False
        for polish in range(cfg.polishRounds + 1):
            if cfg.method == OptimizerMethod.NELDER_MEAD:
                options["initial_simplex"] = cls.initialSimplex(x, cfg.step)
            res = scipy.optimize.minimize(fun, x, method=cfg.method.scipyName, options=options)
            iterations += int(res.get("nit", 0))
            evaluations += int(res.nfev)
            converged = bool(res.success)
            improvement = best - float(res.fun)
            if float(res.fun) < best:
                x, best = np.asarray(res.x, dtype=float), float(res.fun)
            if improvement <= cfg.tol:
                break
        if not converged:
            logger.warning("Restart %d stopped at maxIters=%d with value %.3e", index, cfg.maxIters, best)
        logger.debug("Restart %d: value %.12g after %d iterations", index, best, iterations)
        return RestartResult(index, best, x, iterations, evaluations, converged)

    @classmethod
    def minimize(cls, objective, dim, cfg):
        """Best of the (dimension-scaled) restarts of local direct searches; returns (value, params, diagnostics)"""
        started = time.perf_counter()
        scaled = cfg.scaledFor(dim)
        if scaled is not cfg:
            logger.info("%d parameters: %d restarts of up to %d iterations", dim, scaled.restarts, scaled.maxIters)
            cfg = scaled

        def fun(p):
            return float(objective(np.asarray(p, dtype=float)))

        starts = cls.startingPoints(dim, cfg)
        if cfg.workers > 1 and len(starts) > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
                results = list(executor.map(lambda item: cls._localSearch(fun, item[1], cfg, item[0]),
                                            enumerate(starts)))
        else:
            results = [cls._localSearch(fun, x0, cfg, i) for i, x0 in enumerate(starts)]

        best = results[0]
        for result in results[1:]:
            if result.value < best.value:
                best = result
        diagnostics = OptimizerDiagnostics(
            restarts=len(results),
            iterations=sum(r.iterations for r in results),
            evaluations=sum(r.evaluations for r in results),
            converged=sum(r.converged for r in results),
            bestRestart=best.index,
            values=[r.value for r in results],
            wallTime=time.perf_counter() - started)
        return best.value, best.params, diagnostics

    @classmethod
    def maximize(cls, objective, dim, cfg):
        value, params, diagnostics = cls.minimize(lambda p: -objective(p), dim, cfg)
        diagnostics.values = [-v for v in diagnostics.values]
        return -value, params, diagnostics
