# -*- coding: utf-8 -*-

import unittest
import sys
import os
import math

import numpy as np

# Ensure the repository root is in the sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from concurrenceLib.code.States import (States, DensityMatrix, PureState, Decomposition, FamilyParams,
                                        FamilyClass)
from concurrenceLib.code.LinAlg import BipartiteDims, LinAlg
from concurrenceLib.code.Errors import (TraceNotOneError, NotPSDError, NonHermitianError, DimensionMismatchError,
                                        InvalidParamsError, MalformedInputError, ConcurrenceError)


class TestDensityMatrix(unittest.TestCase):

    def test_make(self):
        rho = States.makeDensityMatrix(np.eye(4) / 4, BipartiteDims(2, 2))
        self.assertEqual(rho.dims, BipartiteDims(2, 2))
        with self.assertRaises(TraceNotOneError):
            States.makeDensityMatrix(np.eye(6) / 3, (2, 3))

    def test_maximally_mixed(self):
        rho = DensityMatrix(np.eye(6) / 6, (2, 3))
        self.assertEqual(rho.rank(), 6)
        self.assertAlmostEqual(rho.purity(), 1 / 6, places=12)
        np.testing.assert_allclose(rho.matrix, DensityMatrix.maximallyMixed((2, 3)).matrix)

    def test_bell_projector(self):
        psi = PureState([1, 0, 0, 1], (2, 2)).normalized()
        rho = DensityMatrix.fromPureState(psi)
        self.assertEqual(rho.rank(), 1)
        self.assertAlmostEqual(rho.purity(), 1.0, places=12)

    def test_invalid(self):
        with self.assertRaises(TraceNotOneError):
            DensityMatrix(np.eye(6) / 12, (2, 3))
        with self.assertRaises(NotPSDError):
            DensityMatrix(np.diag([1.5, -0.5, 0, 0]), (2, 2))
        with self.assertRaises(NonHermitianError):
            DensityMatrix(np.array([[0.5, 0.1, 0, 0], [0, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), (2, 2))
        with self.assertRaises(DimensionMismatchError):
            DensityMatrix(np.eye(4) / 4, (2, 3))

    def test_immutable(self):
        rho = DensityMatrix(np.eye(4) / 4, (2, 2))
        with self.assertRaises(ValueError):
            rho.matrix[0, 0] = 1.0

    def test_transformed_and_mixed(self):
        rho = States.familyState(FamilyParams(0.5, 0.0))
        u = LinAlg.randomUnitary(6, np.random.default_rng(1))
        np.testing.assert_allclose(rho.transformed(u).eigenvalues(), rho.eigenvalues(), atol=1e-12)
        mixed = rho.mixedWith(DensityMatrix.maximallyMixed((2, 3)), 1.0)
        np.testing.assert_allclose(mixed.matrix, np.eye(6) / 6, atol=1e-15)
        with self.assertRaises(InvalidParamsError):
            rho.mixedWith(mixed, 1.5)

    def test_json(self):
        rho = States.randomInducedState(4, (2, 3), 11)
        restored = DensityMatrix.fromJson(rho.toJson())
        self.assertEqual(restored.dims, rho.dims)
        np.testing.assert_allclose(restored.matrix, rho.matrix, atol=1e-15)

    def test_malformed_json(self):
        with self.assertRaises(MalformedInputError):
            DensityMatrix.fromJson('{"dims": [2, 2], "re": [[1, 0], ')
        with self.assertRaises(MalformedInputError):
            DensityMatrix.fromJson('{"dims": [2, 2], "re": [[1]]}')
        with self.assertRaises(MalformedInputError):
            DensityMatrix.fromJson('[1, 2, 3]')
        with self.assertRaises(MalformedInputError):
            DensityMatrix.fromJson('{"dims": [2, 2], "re": [[1, "a"]], "im": [[0, 0]]}')


class TestPureState(unittest.TestCase):

    def test_norm_kept(self):
        psi = PureState([1, 0, 0, 1], (2, 2))
        self.assertAlmostEqual(psi.normSquared(), 2.0)
        self.assertAlmostEqual(psi.normalized().norm(), 1.0)
        self.assertAlmostEqual(psi.scaled(0.5).normSquared(), 0.5)
        with self.assertRaises(InvalidParamsError):
            PureState(np.zeros(4), (2, 2)).normalized()

    def test_schmidt(self):
        psi = PureState.product([1, 0], [0, 1, 0])
        np.testing.assert_allclose(psi.schmidtCoefficients(), [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(psi.reducedFirst(), np.diag([1.0, 0.0]))

    def test_dims_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            PureState(np.ones(5), (2, 3))


class TestDecomposition(unittest.TestCase):

    def test_family_optimal(self):
        decomposition = States.familyOptimalDecomposition()
        self.assertEqual(len(decomposition), 2)
        target = States.familyState(FamilyParams(0.5, 0.5))
        self.assertLess(decomposition.residual(target), 1e-12)

    def test_from_columns(self):
        rho = States.randomInducedState(3, (2, 3), 2)
        values, vectors = LinAlg.hermitianEigensystem(rho.matrix)
        columns = np.hstack([vectors[:, :3] * np.sqrt(values[:3]), np.zeros((6, 1))])
        decomposition = Decomposition.fromColumns(columns, rho.dims, rho)
        self.assertEqual(len(decomposition), 3)
        self.assertAlmostEqual(sum(decomposition.weights), 1.0, places=10)

    def test_invalid(self):
        psi = PureState([1, 0, 0, 0], (2, 2))
        with self.assertRaises(InvalidParamsError):
            Decomposition([0.5], [psi])
        with self.assertRaises(InvalidParamsError):
            Decomposition([1.0], [psi.scaled(2.0)])
        with self.assertRaises(ConcurrenceError):
            Decomposition([1.0], [psi], np.eye(4) / 4)


class TestRandomStates(unittest.TestCase):

    def test_pure_environment(self):
        rho = States.randomInducedState(1, (2, 3), 0)
        self.assertEqual(rho.rank(), 1)
        self.assertAlmostEqual(rho.purity(), 1.0, delta=1e-12)

    def test_rank(self):
        for m in (4, 6, 10):
            rho = States.randomInducedState(m, (2, 3), m)
            self.assertAlmostEqual(float(np.real(np.trace(rho.matrix))), 1.0, places=12)
            self.assertEqual(rho.rank(), min(m, 6))

    def test_deterministic(self):
        a = States.randomInducedState(6, (2, 3), 42)
        b = States.randomInducedState(6, (2, 3), 42)
        self.assertTrue(np.array_equal(a.matrix, b.matrix))
        c = States.randomInducedState(6, (2, 3), 43)
        self.assertFalse(np.array_equal(a.matrix, c.matrix))

    def test_invalid_environment(self):
        with self.assertRaises(InvalidParamsError):
            States.randomInducedState(0, (2, 3), 0)

    def test_derive_seed(self):
        self.assertEqual(States.deriveSeed(0, 4, 1), States.deriveSeed(0, 4, 1))
        self.assertNotEqual(States.deriveSeed(0, 4, 1), States.deriveSeed(0, 4, 2))
        self.assertNotEqual(States.deriveSeed(0, 4, 1), States.deriveSeed(1, 4, 1))

    def test_purity_falls_with_environment(self):
        means = {m: np.mean([States.randomInducedState(m, (2, 3), States.deriveSeed(0, m, i)).purity()
                             for i in range(50)]) for m in (4, 10)}
        self.assertLess(means[10], means[4])
        self.assertAlmostEqual(means[4], 10 / 25, delta=0.05)
        self.assertAlmostEqual(means[10], 16 / 61, delta=0.05)


class TestFamily(unittest.TestCase):

    def test_limits(self):
        np.testing.assert_allclose(States.familyState(FamilyParams(0, 0)).matrix, np.eye(6) / 6, atol=1e-15)
        psi1, _ = States.familyBasisStates()
        np.testing.assert_allclose(States.familyState(FamilyParams(1, 0)).matrix, psi1.projector(), atol=1e-15)
        half = States.familyState(FamilyParams(0.5, 0.5))
        self.assertEqual(half.rank(), 2)

    def test_invalid_params(self):
        for x, y in ((0.3, 0.5), (0.8, 0.3), (0.2, -0.1), (float('nan'), 0.0)):
            with self.assertRaises(InvalidParamsError):
                FamilyParams(x, y)

    def test_classification(self):
        boundary = States.familyExactConcurrence(FamilyParams(0.25, 0.0))
        self.assertEqual(boundary.classification, FamilyClass.SEPARABLE)
        self.assertEqual(boundary.value, 0.0)

        exact = States.familyExactConcurrence(FamilyParams(0.5, 0.0))
        self.assertEqual(exact.classification, FamilyClass.EXACT)
        self.assertAlmostEqual(exact.value, 1 / 3, places=12)

        pure = States.familyExactConcurrence(FamilyParams(1.0, 0.0))
        self.assertAlmostEqual(pure.value, 1.0, places=12)

        unknown = States.familyExactConcurrence(FamilyParams(0.5, 0.5))
        self.assertEqual(unknown.classification, FamilyClass.UNKNOWN)
        self.assertIsNone(unknown.value)
        self.assertAlmostEqual(unknown.lower, 0.5, places=12)

    def test_werner_line(self):
        for x in (0.3, 0.6, 0.9):
            self.assertAlmostEqual(States.cTilde(FamilyParams(x, 0.0)), (4 * x - 1) / 3, places=12)

    def test_werner_spectrum(self):
        for x in (0.0, 0.3, 0.5, 0.9):
            expected = [x + (1 - x) / 6] + [(1 - x) / 6] * 5
            np.testing.assert_allclose(States.familyState(FamilyParams(x, 0.0)).eigenvalues(), expected,
                                       atol=1e-12)

    def test_regions_partition_triangle(self):
        seen = set()
        for x in np.linspace(0, 1, 41):
            for y in np.linspace(0, 0.5, 21):
                if y > x + 1e-12 or x + y > 1 + 1e-12:
                    continue
                result = States.familyExactConcurrence(FamilyParams(x, y))
                seen.add(result.classification)
                self.assertAlmostEqual(result.lower, max(result.cTilde, 0.0), delta=1e-15)
                if result.classification == FamilyClass.SEPARABLE:
                    self.assertEqual(result.value, 0.0)
                    self.assertLessEqual(result.cTilde, 1e-9)
                elif result.classification == FamilyClass.EXACT:
                    self.assertEqual(result.value, result.cTilde)
                    self.assertGreater(result.cTilde, 0.0)
                    self.assertLessEqual(x, 1 - States.exactSlope * y + 1e-12)
                else:
                    self.assertEqual(result.classification, FamilyClass.UNKNOWN)
                    self.assertIsNone(result.value)
                    self.assertTrue(x > 1 - States.exactSlope * y or result.cTilde <= 0.0)
        self.assertEqual(seen, set(FamilyClass))

    def test_superposition(self):
        psi = States.familySuperposition(math.pi / 4, 0.3)
        self.assertAlmostEqual(psi.normSquared(), 1.0, places=12)


if __name__ == '__main__':
    unittest.main()
