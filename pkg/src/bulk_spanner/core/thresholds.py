import math
from dataclasses import dataclass
from fractions import Fraction

MAX_DENOMINATOR = 10**9


def rational_power(n: int, exponent: float) -> Fraction:
    """n**exponent as a fixed rational, so every check that uses it stays exact."""
    return Fraction(math.pow(n, exponent)).limit_denominator(MAX_DENOMINATOR)


def rational_log(n: int) -> Fraction:
    return Fraction(math.log(max(n, 1))).limit_denominator(MAX_DENOMINATOR)


@dataclass(frozen=True)
class Thresholds:
    """
    Cost thresholds of the n^{4/5} algorithm for a guess tau:
    beta = n^{3/5}, upfront threshold tau/n^{4/5}, pay-per-use threshold
    n^{4/5} tau / k.
    """

    n: int
    k: int
    tau: Fraction
    beta: Fraction
    n45: Fraction

    @classmethod
    def for_guess(cls, n: int, k: int, tau: Fraction) -> "Thresholds":
        return cls(n=n, k=max(k, 1), tau=Fraction(tau), beta=rational_power(n, 0.6),
                   n45=rational_power(n, 0.8))

    @property
    def upfront(self) -> Fraction:
        return self.tau / self.n45

    @property
    def per_use(self) -> Fraction:
        return self.n45 * self.tau / self.k

    @property
    def flow_per_use(self) -> Fraction:
        """Right-hand side coefficient of the LP pay-per-use constraint."""
        return self.per_use / 2

    @property
    def sample_size(self) -> int:
        return math.ceil(3 * float(self.beta) * math.log(max(self.n, 2)))

    @property
    def fallback_limit(self) -> Fraction:
        return 4 * rational_power(self.n, 1.2)

    @property
    def sampling_factor(self) -> Fraction:
        """n^{4/5} ln n, the per-edge inclusion multiplier of the rounding."""
        return self.n45 * rational_log(self.n)
