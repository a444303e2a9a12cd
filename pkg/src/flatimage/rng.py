"""Counter-based deterministic random draws for the sampling pipeline.

Every random quantity is a pure function of (seed, stream index, word
counter), so sample i sees the same draws no matter how many samples
run before it, how often its neighbours retry, or how the work is split
across threads.
"""

from fractions import Fraction

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_LANE_STEP = 0xD1B54A32D192ED03  # distinct odd constant decorrelates streams


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a fixed bijective avalanche on 64-bit words."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


class SampleStream:
    """Word stream for one sample index under a fixed seed."""

    __slots__ = ("_base", "_k")

    def __init__(self, seed: int, index: int):
        if index < 0:
            raise ValueError("stream index must be nonnegative")
        self._base = mix64((mix64(seed) + index * _LANE_STEP) & _MASK)
        self._k = 0

    def next_word(self) -> int:
        w = mix64((self._base + self._k * _GOLDEN) & _MASK)
        self._k += 1
        return w

    def dyadic(self, bits: int) -> Fraction:
        """Uniform dyadic rational in [-1, 1) with denominator 2**bits."""
        m = (self.next_word() >> (63 - bits)) - (1 << bits)
        return Fraction(m, 1 << bits)

    def dyadic_open(self, bits: int) -> Fraction:
        """Uniform dyadic rational in the open interval (-1, 1)."""
        while True:
            r = self.dyadic(bits)
            if r != -1:
                return r


def stream_for(seed: int, lane: int, index: int) -> SampleStream:
    """Stream keyed by a small lane tag and a sample index.

    Lanes keep independent consumers (body sampler, boundary sampler,
    fallback probes) from ever sharing a stream at equal indices.
    """
    if not 0 <= lane < 16:
        raise ValueError("lane must be in 0..15")
    if index >> 59:
        raise ValueError("sample index too large")
    return SampleStream(seed, (lane << 59) | index)
