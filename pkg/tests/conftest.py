from __future__ import annotations

import numpy as np

from selftesting import SchmidtCoefficients


def random_coefficients(d: int, seed: int) -> SchmidtCoefficients:
    """Seeded coefficient vector, strictly inside (0, 1), unsorted."""
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.2, 1.0, size=d)
    return SchmidtCoefficients(c / np.linalg.norm(c))
