"""Built-in three-node, four-layer benchmark network.

A small multiweighted directed network with N = 3 nodes, n = 3 state
dimensions, and W = 4 weight layers coupled to the Chua-type node
dynamics. Individual layers are deliberately ill-behaved (not strongly
connected, with competitive negative weights); only the layer sums
satisfy the structural assumption. Both the free (synchronization) and
pinned (target-tracking) variants are provided.
"""

from __future__ import annotations

import numpy as np

from .network import MultiWeightNetwork, PinningConfig
from .regulator import Regulator

__all__ = [
    "BENCHMARK_OCMS",
    "BENCHMARK_ICMS",
    "BENCHMARK_T",
    "BENCHMARK_ELL",
    "BENCHMARK_X0",
    "BENCHMARK_PIN_GAIN",
    "BENCHMARK_PIN_TARGET",
    "benchmark_regulator",
    "benchmark_network",
]

BENCHMARK_OCMS = [
    np.array([[-3.0, 3.0, 0.0], [0.0, 0.0, 0.0], [3.0, 0.0, -3.0]]),
    np.array([[0.0, 0.0, 0.0], [0.0, -6.0, 6.0], [3.0, 0.0, -3.0]]),
    np.array([[2.0, -2.0, 0.0], [0.0, 0.0, 0.0], [4.0, 0.0, -4.0]]),
    np.array([[-2.0, 0.0, 2.0], [0.0, -5.0, 5.0], [4.0, 0.0, -4.0]]),
]

BENCHMARK_ICMS = [
    np.diag([7.0, 5.0, 6.0]),
    np.diag([7.0, 5.0, 6.0]),
    np.diag([6.0, -1.0, 1.0]),
    np.diag([6.0, 5.0, 7.0]),
]

BENCHMARK_T = 3.0
BENCHMARK_ELL = 2.0

# Initial node states, one row per node.
BENCHMARK_X0 = np.array(
    [
        [10.0, 15.0, 20.0],
        [25.0, 30.0, 35.0],
        [40.0, 45.0, 50.0],
    ]
)

BENCHMARK_PIN_GAIN = np.diag([11.0, 13.0, 15.0])
BENCHMARK_PIN_TARGET = np.array([4.0, 8.0, 12.0])


def benchmark_regulator() -> Regulator:
    """C(t) = (3 - t)**2, so C(0) = 9."""
    return Regulator(kind="power", T=BENCHMARK_T, ell=BENCHMARK_ELL)


def benchmark_network(eta: float, pinned: bool = False) -> MultiWeightNetwork:
    """The benchmark network at coupling strength eta.

    With pinned=True, node 1 receives diagonal feedback gain
    diag(11, 13, 15) toward the target started at (4, 8, 12).
    """
    pinning = None
    if pinned:
        pinning = PinningConfig(
            gain=BENCHMARK_PIN_GAIN.copy(),
            target_initial=BENCHMARK_PIN_TARGET.copy(),
        )
    return MultiWeightNetwork(
        ocms=[m.copy() for m in BENCHMARK_OCMS],
        icms=[m.copy() for m in BENCHMARK_ICMS],
        eta=eta,
        regulator=benchmark_regulator(),
        pinning=pinning,
    )
