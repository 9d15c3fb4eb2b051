"""Seed splitting for reproducible sweeps.

Trial ``k`` of a sweep with master seed ``s`` draws from
``numpy.random.default_rng(trial_seed(s, k))``. The trial index is mixed
with the 64-bit golden-ratio constant and XOR-folded into the master seed,
so streams do not depend on the order in which trials run.
"""

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def trial_seed(master: int, index: int) -> int:
    return (int(master) ^ (((int(index) + 1) * GOLDEN) & MASK64)) & MASK64
