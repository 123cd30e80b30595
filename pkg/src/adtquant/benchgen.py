"""Seeded random benchmark generation.

Builds binary AND/OR trees by repeatedly merging two randomly chosen
subtrees under a random root, starting from single-basic-event trees with
uniform random success probabilities and PAC decoration (eps in [0, 0.05],
delta = 0.05).

The PRNG is a self-contained splitmix64 so identical (leaf count, seed)
pairs reproduce byte-identical models in any implementation:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state; z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output <- z XOR (z >> 31)

Doubles in [0,1) take the top 53 bits: (output >> 11) * 2^-53.  Bounded
integers use rejection-free modulo of the raw output (bias is irrelevant
here; the generator is a benchmark source, not a statistics tool).
"""

from __future__ import annotations

from .core import AdtError, AdtGraph, BasicEvent, Gate, PacParams, QuantAnnotation

_MASK = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit mixer PRNG (splitmix64)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def next_below(self, n: int) -> int:
        return self.next_u64() % n


def gen_benchmark(leaf_count: int, seed: int) -> AdtGraph:
    """Binary AND/OR tree with ``leaf_count`` leaves (2n-1 vertices)."""
    if leaf_count < 1:
        raise AdtError(f"leaf count must be >= 1, got {leaf_count}")
    rng = SplitMix64(seed)

    vertices: dict[str, BasicEvent | Gate] = {}
    input_edges: list[tuple[str, str]] = []
    roots: list[str] = []
    for i in range(1, leaf_count + 1):
        vid = f"be{i}"
        ann = QuantAnnotation(
            prob=rng.next_double(),
            prob_pac=PacParams(rng.next_double() * 0.05, 0.05),
        )
        vertices[vid] = BasicEvent("attacker", ann)
        roots.append(vid)

    gates = 0
    while len(roots) > 1:
        i = rng.next_below(len(roots))
        a = roots.pop(i)
        j = rng.next_below(len(roots))
        b = roots.pop(j)
        gates += 1
        gid = f"g{gates}"
        vertices[gid] = Gate("AND" if rng.next_u64() & 1 else "OR")
        input_edges.append((a, gid))
        input_edges.append((b, gid))
        roots.append(gid)

    return AdtGraph(vertices=vertices, input_edges=tuple(input_edges), goal=roots[0])
