"""Shared helpers: seeded randomness and local-unitary scrambling."""

from __future__ import annotations

import numpy as np
import pytest

from nlwe.families import StateSet


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def apply_local_unitaries(s: StateSet, unitaries) -> StateSet:
    """Rotate every party's local states; preserves all inner products."""
    entries = []
    for m in range(s.n_states):
        if s.is_product(m):
            entries.append(tuple(
                unitaries[alpha] @ s.local_state(m, alpha)
                for alpha in range(s.parties)
            ))
        else:
            full = unitaries[0]
            for u in unitaries[1:]:
                full = np.kron(full, u)
            entries.append((full @ s.global_state(m),))
    return StateSet(s.dims, entries, s.priors)


def permute_states(s: StateSet, order) -> StateSet:
    return StateSet(
        s.dims,
        [s.states[i] for i in order],
        [s.priors[i] for i in order],
    )
