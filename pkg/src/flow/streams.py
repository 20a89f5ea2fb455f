"""
Counter-based random streams.

Every draw is addressed by (seed, replica_id, stream, step_index, offset): the
Philox key holds (seed, replica_id), the counter holds the stream kind and the
step index, and the particle index is the offset of the draw inside the step.
A replica therefore reproduces bit-for-bit regardless of which worker thread
runs it or in which order replicas are scheduled.
"""

from dataclasses import dataclass

import numpy as np

INCREMENTS = 0
MERGE_UNIFORMS = 1
LIMIT_FIELD = 2
RANDOM_CONFIGS = 3


@dataclass(frozen=True)
class ReplicaStreams:
    """Random streams of one replica"""
    seed: int
    replica_id: int

    def generator(self, step_index: int, stream: int = INCREMENTS) -> np.random.Generator:
        bit_generator = np.random.Philox(
            key=np.array([self.seed, self.replica_id], dtype=np.uint64),
            counter=np.array([0, 0, stream, step_index], dtype=np.uint64),
        )
        return np.random.Generator(bit_generator)

    def step_generator(self, step_index: int) -> np.random.Generator:
        """Gaussian increments of step ``step_index``, one draw per particle"""
        return self.generator(step_index, INCREMENTS)

    def merge_generator(self, step_index: int) -> np.random.Generator:
        """Bridge-merge uniforms of step ``step_index``, one draw per adjacent pair"""
        return self.generator(step_index, MERGE_UNIFORMS)
