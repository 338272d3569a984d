"""Weight tables, estimator curves and the property-verification suite."""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from rsjir import weighting
from rsjir.errors import DegenerateDocFreq, NonpositiveLift
from rsjir.index import Document, InvertedIndex, build_index, term_stats
from rsjir.schemes import WeightingScheme
from rsjir.weighting import EstimatorParams, LiftFunction, TermStats

# ---------------------------------------------------------------------------
# Weight tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightRow:
    term: str
    df: int
    corpus_size: int
    weights: tuple[float | None, ...]  # None marks an undefined ("absent") cell


@dataclass(frozen=True)
class WeightTable:
    schemes: tuple[WeightingScheme, ...]
    rows: tuple[WeightRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["term", "df", "N", *(s.label for s in self.schemes)])
        for row in self.rows:
            cells = ["" if w is None else f"{w:.6f}" for w in row.weights]
            writer.writerow([row.term, row.df, row.corpus_size, *cells])
        return buf.getvalue()


def cell_weight(scheme: WeightingScheme, stats: TermStats) -> float | None:
    try:
        return scheme.weight(stats)
    except (DegenerateDocFreq, NonpositiveLift):
        return None


def weight_table(
    index: InvertedIndex,
    schemes: Sequence[WeightingScheme],
    terms: Iterable[str] | None = None,
) -> WeightTable:
    """One row per term (all indexed terms unless filtered), df desc then term asc.

    Filter terms missing from the index still get a row, with every cell absent.
    """
    chosen = index.terms() if terms is None else sorted(set(terms))
    rows = []
    for term in chosen:
        stats = term_stats(index, term)
        rows.append(
            WeightRow(term, stats.df, stats.corpus_size, tuple(cell_weight(s, stats) for s in schemes))
        )
    rows.sort(key=lambda r: (-r.df, r.term))
    return WeightTable(tuple(schemes), tuple(rows))


# ---------------------------------------------------------------------------
# Estimator curves
# ---------------------------------------------------------------------------


def estimator_curve(corpus_size: int, scheme: WeightingScheme, n_range: Iterable[int] | None = None):
    """``[(n, p_hat), ...]`` for the scheme's relevant-occurrence estimate."""
    if n_range is None:
        n_range = range(corpus_size + 1)
    points = []
    for n in n_range:
        if not 0 <= n <= corpus_size:
            raise ValueError(f"n={n} outside [0, {corpus_size}]")
        points.append((n, float(scheme.estimate_p(TermStats(n, corpus_size)))))
    return points


def curve_csv(points) -> str:
    lines = ["n,p_hat"]
    lines.extend(f"{n},{p:.6f}" for n, p in points)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

TOLERANCE = 1e-12


def deviation(value: float, reference: float) -> float:
    """Relative error with a unit floor, so weights near zero are judged absolutely."""
    return abs(value - reference) / max(1.0, abs(reference))


@dataclass(frozen=True)
class VerifyGrid:
    max_n: int = 200
    samples: int = 1000
    max_corpus: int = 10**6
    retrieval_trials: int = 100
    seed: int = 20070723

    def __post_init__(self):
        if self.max_n < 2:
            raise ValueError("max_n must be at least 2")


@dataclass(frozen=True)
class CheckResult:
    name: str
    grid: str
    passed: bool
    worst_deviation: float | None = None  # None for pure sign/order checks
    counterexample: str | None = None


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def worst_deviation(self) -> float:
        devs = [c.worst_deviation for c in self.checks if c.worst_deviation is not None]
        return max(devs, default=0.0)

    def summary_line(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"VERIFY {status} {len(self.checks)} {self.worst_deviation:.3e}"

    def render(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            dev = "" if c.worst_deviation is None else f"  worst_dev={c.worst_deviation:.3e}"
            lines.append(f"[{status}] {c.name}  ({c.grid}){dev}")
            if c.counterexample:
                lines.append(f"       counterexample: {c.counterexample}")
        lines.append(self.summary_line())
        return "\n".join(lines) + "\n"


PIS = (0.3, 0.5, 0.7)


def _lifts(n_total):
    return (1.0, n_total / 2, float(n_total), 2.0 * n_total)


class _Tracker:
    """Accumulate worst deviation and the first failing case for one check."""

    def __init__(self, name, grid, tolerance=None):
        self.name, self.grid, self.tolerance = name, grid, tolerance
        self.worst = 0.0 if tolerance is not None else None
        self.counterexample = None

    def fail(self, description):
        if self.counterexample is None:
            self.counterexample = description

    def compare(self, value, reference, description):
        try:
            d = deviation(value, reference)
        except (TypeError, ValueError, OverflowError):
            d = math.inf
        if math.isnan(d):
            d = math.inf
        self.worst = max(self.worst, d)
        if d > self.tolerance:
            self.fail(f"{description}: got {value!r}, expected {reference!r}")

    def require(self, ok, description):
        if not ok:
            self.fail(description)

    def result(self):
        return CheckResult(self.name, self.grid, self.counterexample is None, self.worst, self.counterexample)


def _exhaustive(max_n):
    for big_n in range(2, max_n + 1):
        for n in range(1, big_n):
            yield big_n, n


def _random_tuples(grid):
    rng = random.Random(grid.seed)
    for _ in range(grid.samples):
        big_n = rng.randint(2, grid.max_corpus)
        n = rng.randint(1, big_n - 1)
        pi = rng.choice(PIS)
        lift = rng.choice(_lifts(big_n))
        yield big_n, n, pi, lift


# The large-N oracle evaluates the estimators in exact rational arithmetic:
# for p_hat near 1 a float estimate loses most of 1 - p_hat to cancellation.
def _exact_p_rw(n, big_n, pi):
    pi = Fraction(pi)
    return pi / (pi + (1 - pi) * Fraction(big_n - n, big_n))


def _exact_p_lift(n, big_n, lift):
    lift = Fraction(lift)
    return (n + lift) / (big_n + lift)


def _check_identity_ch(wt, grid):
    t = _Tracker(
        "closed-form identity (CH)",
        f"N in 2..{grid.max_n} x n in 1..N-1 x pi in {PIS}; {grid.samples} random tuples N <= {grid.max_corpus}",
        TOLERANCE,
    )
    for big_n, n in _exhaustive(grid.max_n):
        stats = TermStats(n, big_n)
        q = wt.estimate_q_ch1(stats)
        for pi in PIS:
            params = EstimatorParams(pi=pi)
            t.compare(wt.weight_ch(stats, params), wt.rsj_weight(wt.estimate_p_ch2(params), q),
                      f"n={n} N={big_n} pi={pi}")
    for big_n, n, pi, _ in _random_tuples(grid):
        t.compare(wt.weight_ch(TermStats(n, big_n), EstimatorParams(pi=pi)),
                  wt.rsj_weight(Fraction(pi), Fraction(n, big_n)), f"n={n} N={big_n} pi={pi}")
    return t.result()


def _check_identity_rw(wt, grid):
    t = _Tracker(
        "closed-form identity (RW)",
        f"N in 2..{grid.max_n} x n in 1..N-1 x pi in {PIS}; {grid.samples} random tuples N <= {grid.max_corpus}",
        TOLERANCE,
    )
    for big_n, n in _exhaustive(grid.max_n):
        stats = TermStats(n, big_n)
        q = wt.estimate_q_ch1(stats)
        for pi in PIS:
            params = EstimatorParams(pi=pi)
            t.compare(wt.weight_rw(stats, params), wt.rsj_weight(wt.estimate_p_rw(stats, params), q),
                      f"n={n} N={big_n} pi={pi}")
    for big_n, n, pi, _ in _random_tuples(grid):
        t.compare(wt.weight_rw(TermStats(n, big_n), EstimatorParams(pi=pi)),
                  wt.rsj_weight(_exact_p_rw(n, big_n, pi), Fraction(n, big_n)), f"n={n} N={big_n} pi={pi}")
    return t.result()


def _check_identity_lift(wt, grid):
    t = _Tracker(
        "closed-form identity (lift)",
        f"N in 2..{grid.max_n} x n in 1..N-1 x L in {{1, N/2, N, 2N}}; "
        f"{grid.samples} random tuples N <= {grid.max_corpus}",
        TOLERANCE,
    )
    for big_n, n in _exhaustive(grid.max_n):
        stats = TermStats(n, big_n)
        q = wt.estimate_q_ch1(stats)
        for lift in _lifts(big_n):
            t.compare(wt.weight_lift(stats, lift), wt.rsj_weight(wt.estimate_p_lift(stats, lift), q),
                      f"n={n} N={big_n} L={lift}")
    for big_n, n, _, lift in _random_tuples(grid):
        t.compare(wt.weight_lift(TermStats(n, big_n), lift),
                  wt.rsj_weight(_exact_p_lift(n, big_n, lift), Fraction(n, big_n)), f"n={n} N={big_n} L={lift}")
    return t.result()


def _check_ch_anomaly(wt, grid):
    t = _Tracker("CH anomaly: weight < 0 iff n > N/2 (pi = 0.5)", f"N in 2..{grid.max_n}, n in 1..N-1")
    params = EstimatorParams(pi=0.5)
    for big_n, n in _exhaustive(grid.max_n):
        w = wt.weight_ch(TermStats(n, big_n), params)
        t.require((w < 0) == (2 * n > big_n), f"n={n} N={big_n} weight={w!r}")
    return t.result()


def _check_rw_positivity(wt, grid):
    pis = (0.5, 0.6, 0.75)
    t = _Tracker("RW positivity for pi >= 0.5", f"N in 2..{grid.max_n}, n in 1..N, pi in {pis}")
    for big_n in range(2, grid.max_n + 1):
        for n in range(1, big_n + 1):
            for pi in pis:
                w = wt.weight_rw(TermStats(n, big_n), EstimatorParams(pi=pi))
                t.require(w >= 0, f"n={n} N={big_n} pi={pi} weight={w!r}")
    return t.result()


def _check_lift_positivity(wt, grid):
    t = _Tracker("lift positivity", f"N in 2..{grid.max_n}, n in 1..N, L in {{1, N/2, N, 2N}}")
    for big_n in range(2, grid.max_n + 1):
        for n in range(1, big_n + 1):
            for lift in _lifts(big_n):
                w = wt.weight_lift(TermStats(n, big_n), lift)
                t.require(w > 0, f"n={n} N={big_n} L={lift} weight={w!r}")
    return t.result()


def _check_lift_dominance(wt, grid):
    t = _Tracker("lift dominance: p_lift >= n/N, equality iff n = N",
                 f"N in 2..{grid.max_n}, n in 0..N, L in {{1, N/2, N, 2N}}")
    for big_n in range(2, grid.max_n + 1):
        for n in range(0, big_n + 1):
            stats = TermStats(n, big_n)
            q = wt.estimate_q_ch1(stats)
            for lift in _lifts(big_n):
                p = wt.estimate_p_lift(stats, lift)
                ok = p >= q and ((p == q) == (n == big_n))
                t.require(ok, f"n={n} N={big_n} L={lift} p={p!r} n/N={q!r}")
    return t.result()


def _check_monotonicity(wt, grid):
    t = _Tracker("monotonicity: p_rw, p_lift increasing; lift weight decreasing",
                 f"N in 2..{grid.max_n}, pi in {PIS}, L in {{1, N/2, N, 2N}}")
    for big_n in range(2, grid.max_n + 1):
        for pi in PIS:
            params = EstimatorParams(pi=pi)
            ps = [wt.estimate_p_rw(TermStats(n, big_n), params) for n in range(big_n + 1)]
            t.require(all(a < b for a, b in zip(ps, ps[1:])), f"p_rw not increasing, N={big_n} pi={pi}")
        for lift in _lifts(big_n):
            ps = [wt.estimate_p_lift(TermStats(n, big_n), lift) for n in range(big_n + 1)]
            t.require(all(a < b for a, b in zip(ps, ps[1:])), f"p_lift not increasing, N={big_n} L={lift}")
            ws = [wt.weight_lift(TermStats(n, big_n), lift) for n in range(1, big_n + 1)]
            t.require(all(a > b for a, b in zip(ws, ws[1:])), f"lift weight not decreasing, N={big_n} L={lift}")
    return t.result()


def _check_bounds(wt, grid):
    t = _Tracker("bounds: p_rw in [pi, 1], p_lift in [L/(N+L), 1]",
                 f"N in 2..{grid.max_n}, n in 0..N, pi in {PIS}, L in {{1, N/2, N, 2N}}")
    for big_n in range(2, grid.max_n + 1):
        for n in range(big_n + 1):
            stats = TermStats(n, big_n)
            for pi in PIS:
                p = wt.estimate_p_rw(stats, EstimatorParams(pi=pi))
                t.require(pi <= p <= 1.0, f"p_rw={p!r} n={n} N={big_n} pi={pi}")
            for lift in _lifts(big_n):
                p = wt.estimate_p_lift(stats, lift)
                t.require(lift / (big_n + lift) <= p <= 1.0, f"p_lift={p!r} n={n} N={big_n} L={lift}")
    return t.result()


def _check_usual_idf(wt, grid):
    t = _Tracker("usual-IDF correspondence: lift weight at L = N is log(1 + N/n)",
                 f"N in 1..{grid.max_n}, n in 1..N, bitwise", 0.0)
    for big_n in range(1, grid.max_n + 1):
        for n in range(1, big_n + 1):
            t.compare(wt.weight_lift(TermStats(n, big_n), float(big_n)), math.log(1 + big_n / n),
                      f"n={n} N={big_n}")
    return t.result()


def _check_proportional(wt, grid):
    cs = (0.25, 1.0, 3.0)
    t = _Tracker("proportional lift function gives constant weight log(1 + c)",
                 f"N in 2..{grid.max_n}, n in 1..N, c in {cs}", TOLERANCE)
    for c in cs:
        f = LiftFunction.proportional(c)
        expected = math.log(1 + c)
        for big_n in range(2, grid.max_n + 1):
            for n in range(1, big_n + 1):
                t.compare(wt.weight_lift_fn(TermStats(n, big_n), f), expected, f"n={n} N={big_n} c={c}")
    return t.result()


def _check_log_base(wt, grid):
    t = _Tracker("log-base coherence: base-2 weight = base-e weight / ln 2",
                 f"N in 2..{grid.max_n}, n in 1..N-1, every scheme", TOLERANCE)
    ln2 = math.log(2)
    for big_n, n in _exhaustive(grid.max_n):
        stats = TermStats(n, big_n)
        for pi in PIS:
            e_params, b_params = EstimatorParams(pi=pi), EstimatorParams(pi=pi, log_base="2")
            t.compare(wt.weight_ch(stats, b_params), wt.weight_ch(stats, e_params) / ln2, f"CH n={n} N={big_n}")
            t.compare(wt.weight_rw(stats, b_params), wt.weight_rw(stats, e_params) / ln2, f"RW n={n} N={big_n}")
        for lift in _lifts(big_n):
            t.compare(wt.weight_lift(stats, lift, "2"), wt.weight_lift(stats, lift) / ln2, f"lift n={n} N={big_n}")
        t.compare(wt.rsj_weight(0.5, n / big_n, "2"), wt.rsj_weight(0.5, n / big_n) / ln2, f"rsj n={n} N={big_n}")
    return t.result()


def scheme_menu(log_base="e") -> list[WeightingScheme]:
    return [
        WeightingScheme.croft_harper(0.5, log_base),
        WeightingScheme.croft_harper(0.7, log_base),
        WeightingScheme.robertson_walker(0.5, log_base),
        WeightingScheme.robertson_walker(0.75, log_base),
        WeightingScheme.lift(1.0, log_base),
        WeightingScheme.lift(100.0, log_base),
        WeightingScheme.lift_function(LiftFunction.constant(10.0), log_base),
        WeightingScheme.lift_function(LiftFunction.proportional(1.0), log_base),
        WeightingScheme.lift_function(LiftFunction.power(1.0, 0.5), log_base),
        WeightingScheme.lift_function(LiftFunction.scaled_corpus(0.5), log_base),
        WeightingScheme.usual_idf(log_base),
    ]


def random_corpus(rng: random.Random, max_docs=50, max_vocab=20) -> list[Document]:
    vocab = [f"t{i}" for i in range(rng.randint(1, max_vocab))]
    docs = []
    for i in range(rng.randint(1, max_docs)):
        words = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
        docs.append(Document(f"d{i:02d}", " ".join(words)))
    rng.shuffle(docs)
    return docs


def _check_retrieval_oracle(grid):
    from rsjir.retrieval import Query, format_run, rank, rank_exhaustive

    t = _Tracker("retrieval oracle equivalence: rank() vs score-all-and-sort",
                 f"{grid.retrieval_trials} random corpora (<= 50 docs, vocab <= 20) x every scheme")
    rng = random.Random(grid.seed + 1)
    schemes = scheme_menu()
    for trial in range(grid.retrieval_trials):
        index = build_index(random_corpus(rng))
        vocab = index.terms() + ["zzz"]
        for qn in range(3):
            words = [rng.choice(vocab) for _ in range(rng.randint(1, 5))]
            query = Query.parse(f"q{qn}", " ".join(words))
            k = rng.randint(1, 60)
            for scheme in schemes:
                outcomes = []
                for fn in (rank, rank_exhaustive):
                    try:
                        outcomes.append(format_run([fn(index, query, scheme, k)], "t"))
                    except DegenerateDocFreq as exc:
                        outcomes.append(f"degenerate:{exc.term}")
                t.require(outcomes[0] == outcomes[1],
                          f"trial={trial} query={query.terms} scheme={scheme.label} k={k}")
    return t.result()


WEIGHTING_CHECKS = (
    _check_identity_ch,
    _check_identity_rw,
    _check_identity_lift,
    _check_ch_anomaly,
    _check_rw_positivity,
    _check_lift_positivity,
    _check_lift_dominance,
    _check_monotonicity,
    _check_bounds,
    _check_usual_idf,
    _check_proportional,
    _check_log_base,
)


def verify(grid: VerifyGrid | None = None, *, implementation=None, retrieval=True) -> VerificationReport:
    """Run every weighting property plus the retrieval oracle check.

    ``implementation`` defaults to :mod:`rsjir.weighting`; pass any object with
    the same functions to check a substitute (e.g. a deliberately broken one).
    """
    grid = grid or VerifyGrid()
    wt = implementation or weighting
    report = VerificationReport()
    for check in WEIGHTING_CHECKS:
        try:
            result = check(wt, grid)
        except Exception as exc:  # a crash is a failed check, not an aborted run
            result = CheckResult(check.__name__.removeprefix("_check_"), "", False, None,
                                 f"raised {type(exc).__name__}: {exc}")
        report.checks.append(result)
    if retrieval:
        try:
            report.checks.append(_check_retrieval_oracle(grid))
        except Exception as exc:
            report.checks.append(CheckResult("retrieval oracle equivalence", "", False, None,
                                             f"raised {type(exc).__name__}: {exc}"))
    return report


