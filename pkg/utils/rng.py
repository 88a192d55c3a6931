"""
Per-trial Gaussian noise streams.

Each trial owns an independent `numpy.random.Generator` seeded from the
entropy pair (seed, trial), and draw n of a trial is the n-th standard normal
of its stream. No generator is shared between trials, so trials can be drawn
in any order or in parallel with identical results.
"""

import numpy as np


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """The noise generator of one trial."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def standard_normals(seed: int, trials, n_antennas: int) -> np.ndarray:
    """
    Standard normal draws of shape (len(trials), n_antennas).

    Entry [t, n] depends only on (seed, trials[t], n).
    """
    if n_antennas < 1:
        raise ValueError("n_antennas must be at least 1")
    trials = np.atleast_1d(np.asarray(trials, dtype=np.int64))
    if trials.size == 0:
        return np.empty((0, n_antennas))
    return np.stack(
        [trial_generator(seed, t).standard_normal(n_antennas) for t in trials]
    )
