__all__ = ["DenseTest", "DropoutTest", "NllLossTest", "SequentialTest"]

import unittest

import numpy as np

from newsgraph.nn.layers import *

def numericGradient(f, x, eps=1e-6):
    grad = np.zeros_like(x)
    for index in np.ndindex(*x.shape):
        saved = x[index]
        x[index] = saved + eps
        upper = f()
        x[index] = saved - eps
        lower = f()
        x[index] = saved
        grad[index] = (upper - lower) / (2 * eps)

    return grad

class NllLossTest(unittest.TestCase):
    def test_loss_is_the_mean_negative_log_probability_of_the_target(self):
        logits = np.log(np.array([[0.25, 0.75], [0.5, 0.5], [0.9, 0.1]]))
        loss, _ = nllLoss(logSoftmax(logits), [1, 0, 0], [True, False, True])
        self.assertAlmostEqual(loss, -(np.log(0.75) + np.log(0.9)) / 2, delta=1e-12)

    def test_the_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        logits = rng.standard_normal((5, 3))
        labels = [0, 2, 1, 1, 0]
        mask = [True, True, False, True, False]

        _, grad = nllLoss(logSoftmax(logits), labels, mask)
        numeric = numericGradient(lambda: nllLoss(logSoftmax(logits), labels, mask)[0], logits)
        self.assertTrue(np.allclose(grad, numeric, atol=1e-7))

    def test_unmasked_rows_get_no_gradient(self):
        _, grad = nllLoss(logSoftmax(np.ones((3, 2))), [0, 1, 0], [True, False, False])
        self.assertTrue((grad[1:] == 0).all())

    def test_an_empty_mask_raises_ValueError(self):
        self.assertRaises(ValueError, nllLoss, np.zeros((2, 2)), [0, 1], [False, False])

class DenseTest(unittest.TestCase):
    def test_backward_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        layer = Dense.initialize(rng, 4, 3)
        x = rng.standard_normal((6, 4))
        upstream = rng.standard_normal((6, 3))

        def objective():
            return float((layer.forward(x) * upstream).sum())

        layer.forward(x)
        dx = layer.backward(upstream)

        self.assertTrue(np.allclose(dx, numericGradient(objective, x), atol=1e-6))
        self.assertTrue(np.allclose(
            layer.gradients["weight"], numericGradient(objective, layer.weight), atol=1e-6,
        ))

        self.assertTrue(np.allclose(
            layer.gradients["bias"], numericGradient(objective, layer.bias), atol=1e-6,
        ))

    def test_initial_weights_lie_within_the_fan_in_bound(self):
        layer = Dense.initialize(np.random.default_rng(2), 16, 8)
        self.assertLessEqual(np.abs(layer.weight).max(), 0.25)
        self.assertTrue((layer.bias == 0).all())

class DropoutTest(unittest.TestCase):
    def test_evaluation_mode_is_the_identity(self):
        x = np.arange(6.0).reshape(2, 3)
        layer = Dropout(0.5, np.random.default_rng(0))
        self.assertIs(layer.forward(x), x)

    def test_kept_units_are_scaled_so_the_mean_is_preserved(self):
        layer = Dropout(0.25, np.random.default_rng(0))
        out = layer.forward(np.ones((200, 200)), training=True)

        self.assertTrue(np.isin(out, (0.0, 1.0 / 0.75)).all())
        self.assertAlmostEqual(out.mean(), 1.0, delta=0.02)

    def test_backward_reuses_the_forward_mask(self):
        layer = Dropout(0.5, np.random.default_rng(4))
        out = layer.forward(np.ones((3, 4)), training=True)
        self.assertTrue(np.array_equal(layer.backward(np.ones((3, 4))), out))

class SequentialTest(unittest.TestCase):
    def test_parameters_and_gradients_are_prefixed_by_layer_position(self):
        rng = np.random.default_rng(3)
        model = Sequential([Dense.initialize(rng, 2, 4), Relu(), Dense.initialize(rng, 4, 2)])

        self.assertEqual(
            sorted(model.parameters()),
            ["0.bias", "0.weight", "2.bias", "2.weight"],
        )

        x = rng.standard_normal((5, 2))
        model.forward(x)
        model.backward(np.ones((5, 2)))
        self.assertEqual(sorted(model.gradients()), sorted(model.parameters()))

if __name__ == "__main__":
    unittest.main()
