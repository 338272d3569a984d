"""Relevance-probability estimators and binary-independence term weights.

Every weight here is a log-odds quantity

    w = log( p (1 - q) / (q (1 - p)) )

where ``p`` is the probability that the term occurs in a relevant document
and ``q`` the probability it occurs in a non-relevant one.  With no relevance
information, ``q`` is estimated as ``df / N`` and ``p`` by one of:

* a constant ``pi`` (Croft-Harper), giving ``pi' + log((N - df) / df)``
* ``pi / (pi + (1 - pi)(N - df) / N)`` (Robertson-Walker), giving
  ``pi' + log(N / df)``
* the lift estimate ``(df + L) / (N + L)``, giving ``log(1 + L / df)``

with ``pi' = log(pi / (1 - pi))``.  The closed forms are computed directly;
the test-suite checks them against the generic log-odds evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from rsjir.errors import DegenerateDocFreq, DegenerateProbability, NonpositiveLift

LOG_BASES = ("e", "2", "10")


def normalize_log_base(base) -> str:
    """Map ``e``/``2``/``10`` (str, int or float) to its canonical token."""
    if isinstance(base, str):
        token = base.strip().lower()
    elif base == math.e:
        token = "e"
    elif base in (2, 10):
        token = str(int(base))
    else:
        token = repr(base)
    if token not in LOG_BASES:
        raise ValueError(f"log base must be one of {', '.join(LOG_BASES)}; got {base!r}")
    return token


def log_in(x: float, base: str = "e") -> float:
    if base == "e":
        return math.log(x)
    if base == "2":
        return math.log2(x)
    if base == "10":
        return math.log10(x)
    raise ValueError(f"unsupported log base {base!r}")


class Probability(float):
    """A float constrained to the closed interval [0, 1]."""

    def __new__(cls, value):
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {value!r}")
        return super().__new__(cls, value)


@dataclass(frozen=True)
class TermStats:
    """Document frequency of one term together with the corpus size."""

    df: int
    corpus_size: int

    def __post_init__(self):
        if self.corpus_size < 1:
            raise ValueError(f"corpus_size must be >= 1, got {self.corpus_size}")
        if not 0 <= self.df <= self.corpus_size:
            raise ValueError(f"df must lie in [0, {self.corpus_size}], got {self.df}")


@dataclass(frozen=True)
class EstimatorParams:
    """Constant ``pi``, lift constant ``L`` and logarithm base."""

    pi: float = 0.5
    lift: float = 1.0
    log_base: str = "e"

    def __post_init__(self):
        if not 0.0 < self.pi < 1.0:
            raise DegenerateProbability(f"pi must lie strictly inside (0, 1), got {self.pi!r}")
        if not self.lift > 0.0:
            raise NonpositiveLift(f"lift must be > 0, got {self.lift!r}")
        object.__setattr__(self, "log_base", normalize_log_base(self.log_base))


LIFT_KINDS = ("const", "prop", "power", "scaled")


@dataclass(frozen=True)
class LiftFunction:
    """A lift that may depend on document frequency.

    ``const``  L(n) = L
    ``prop``   L(n) = c * n
    ``power``  L(n) = c * n ** beta
    ``scaled`` L(n) = alpha * N
    """

    kind: str
    c: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in LIFT_KINDS:
            raise ValueError(f"unknown lift-function kind {self.kind!r}")
        if not self.c > 0.0:
            raise NonpositiveLift(f"lift-function coefficient must be > 0, got {self.c!r}")
        if self.kind == "power" and not self.beta > 0.0:
            raise ValueError(f"power exponent must be > 0, got {self.beta!r}")

    @classmethod
    def constant(cls, lift):
        return cls("const", c=lift)

    @classmethod
    def proportional(cls, c):
        return cls("prop", c=c)

    @classmethod
    def power(cls, c, beta):
        return cls("power", c=c, beta=beta)

    @classmethod
    def scaled_corpus(cls, alpha):
        return cls("scaled", c=alpha)

    def __call__(self, df: int, corpus_size: int) -> float:
        if self.kind == "const":
            return self.c
        if self.kind == "prop":
            return self.c * df
        if self.kind == "power":
            return self.c * df ** self.beta
        return self.c * corpus_size

    @property
    def label(self) -> str:
        if self.kind == "const":
            return f"const,L={self.c:g}"
        if self.kind == "prop":
            return f"prop,c={self.c:g}"
        if self.kind == "power":
            return f"power,c={self.c:g},beta={self.beta:g}"
        return f"scaled,alpha={self.c:g}"


def _check_open(value: float, name: str) -> None:
    if not 0.0 < value < 1.0:
        raise DegenerateProbability(f"{name} must lie strictly inside (0, 1), got {value!r}")


def rsj_weight(p: float, q: float, log_base: str = "e") -> float:
    """Generic log-odds weight ``log(p(1-q) / (q(1-p)))``."""
    _check_open(p, "p")
    _check_open(q, "q")
    return log_in(p * (1 - q) / (q * (1 - p)), log_base)


def pi_prime(params: EstimatorParams) -> float:
    """``log(pi / (1 - pi))``; zero at ``pi = 0.5``."""
    _check_open(params.pi, "pi")
    return log_in(params.pi / (1.0 - params.pi), params.log_base)


def estimate_q_ch1(stats: TermStats) -> Probability:
    return Probability(stats.df / stats.corpus_size)


def estimate_p_ch2(params: EstimatorParams) -> Probability:
    return Probability(params.pi)


def estimate_p_rw(stats: TermStats, params: EstimatorParams) -> Probability:
    """Hyperbolic estimate rising from ``pi`` at df=0 to 1 at df=N."""
    pi = params.pi
    absent_fraction = (stats.corpus_size - stats.df) / stats.corpus_size
    return Probability(pi / (pi + (1.0 - pi) * absent_fraction))


def estimate_p_lift(stats: TermStats, lift_value: float) -> Probability:
    """Lifted estimate ``(df + L) / (N + L)``; never below ``df / N``."""
    if not lift_value > 0.0:
        raise NonpositiveLift(f"lift must be > 0, got {lift_value!r}")
    return Probability((stats.df + lift_value) / (stats.corpus_size + lift_value))


def estimate_p_lift_fn(stats: TermStats, f: LiftFunction) -> Probability:
    # prop/power give L(0) = 0 and hence p = 0 at df = 0; that is allowed here.
    lift_value = f(stats.df, stats.corpus_size)
    return Probability((stats.df + lift_value) / (stats.corpus_size + lift_value))


def _require_present(stats: TermStats) -> None:
    if stats.df == 0:
        raise DegenerateDocFreq("weight is undefined for a term with df = 0")


def weight_ch(stats: TermStats, params: EstimatorParams) -> float:
    """Croft-Harper weight ``pi' + log((N - df) / df)``; undefined at 0 and N."""
    _require_present(stats)
    if stats.df == stats.corpus_size:
        raise DegenerateDocFreq("Croft-Harper weight diverges for a term in every document")
    n, big_n = stats.df, stats.corpus_size
    return pi_prime(params) + log_in((big_n - n) / n, params.log_base)


def weight_rw(stats: TermStats, params: EstimatorParams) -> float:
    """Robertson-Walker weight ``pi' + log(N / df)``."""
    _require_present(stats)
    return pi_prime(params) + log_in(stats.corpus_size / stats.df, params.log_base)


def weight_lift(stats: TermStats, lift_value: float, log_base: str = "e") -> float:
    """Lift weight ``log(1 + L / df)``; with ``L = N`` this is the usual IDF."""
    _require_present(stats)
    if not lift_value > 0.0:
        raise NonpositiveLift(f"lift must be > 0, got {lift_value!r}")
    return log_in(1.0 + lift_value / stats.df, log_base)


def weight_lift_fn(stats: TermStats, f: LiftFunction, log_base: str = "e") -> float:
    """``log(1 + L(df) / df)`` with the lift evaluated at this term's df."""
    _require_present(stats)
    lift_value = f(stats.df, stats.corpus_size)
    if not lift_value > 0.0:
        raise NonpositiveLift(f"lift function {f.label} gave {lift_value!r} at df={stats.df}")
    return log_in(1.0 + lift_value / stats.df, log_base)


def usual_idf(stats: TermStats, log_base: str = "e") -> float:
    """``log(1 + N / df)``."""
    _require_present(stats)
    return log_in(1.0 + stats.corpus_size / stats.df, log_base)
