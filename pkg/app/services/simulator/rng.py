"""
Random Streams
Counter-based generator keyed by (seed, path_index); Gaussian draws by inverse CDF
"""
import numpy as np
from scipy.special import ndtri

# random() lies in [0, 1 - 2^-53]; the shift keeps u strictly inside (0, 1)
OPEN_SHIFT = 2.0 ** -54


def make_generator(seed: int, path_index: int = 0) -> np.random.Generator:
    """Independent substream per path: Philox keyed by SeedSequence(seed, spawn_key=(path_index,))."""
    sequence = np.random.SeedSequence(seed, spawn_key=(path_index,))
    return np.random.Generator(np.random.Philox(sequence))


def gaussian_draws(generator: np.random.Generator, n: int, mean: float, std: float) -> np.ndarray:
    """n draws of N(mean, std^2) as mean + std * Phi^-1(u)."""
    u = generator.random(n) + OPEN_SHIFT
    return mean + std * ndtri(u)
