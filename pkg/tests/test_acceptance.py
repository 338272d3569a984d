"""Exit criteria for the toolkit, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line (collected into the terminal summary).
"""

import contextlib
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from rsjir import weighting
from rsjir.analysis import deviation, random_corpus, scheme_menu
from rsjir.cli import main
from rsjir.errors import DegenerateDocFreq
from rsjir.index import build_index, dumps_index, load_index, save_index
from rsjir.retrieval import Query, format_run, rank, score_document
from rsjir.weighting import (
    EstimatorParams,
    LiftFunction,
    TermStats,
    estimate_p_lift,
    estimate_p_rw,
    weight_ch,
    weight_lift,
    weight_lift_fn,
    weight_rw,
)

TOL = 1e-12
MAX_N = 200


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append(f"AC{number:<2} FAIL  {title}")
        print(f"AC{number} FAIL {title}")
        raise
    elapsed = time.perf_counter() - start
    ACCEPTANCE_LINES.append(f"AC{number:<2} PASS  {title}  ({elapsed:.2f}s)")
    print(f"AC{number} PASS {title}")


def grid(max_n=MAX_N, include_n_equal=True):
    for big_n in range(2, max_n + 1):
        top = big_n if include_n_equal else big_n - 1
        for n in range(1, top + 1):
            yield big_n, n


def lifts(big_n):
    return (1.0, big_n / 2, float(big_n), 2.0 * big_n)


def test_ac01_closed_form_identities():
    with criterion(1, "closed forms equal generic log-odds weight, 1000 tuples, N <= 1e6, dev <= 1e-12, < 1 s"):
        rng = random.Random(1)
        tuples = []
        for _ in range(1000):
            big_n = rng.randint(2, 10**6)
            tuples.append((big_n, rng.randint(1, big_n - 1), rng.choice((0.3, 0.5, 0.7)),
                           rng.choice(lifts(big_n))))
        start = time.perf_counter()
        worst = 0.0
        for big_n, n, pi, lift in tuples:
            stats, params, q = TermStats(n, big_n), EstimatorParams(pi=pi), Fraction(n, big_n)
            fpi, flift = Fraction(pi), Fraction(lift)
            p_rw = fpi / (fpi + (1 - fpi) * Fraction(big_n - n, big_n))
            p_lift = (n + flift) / (big_n + flift)
            worst = max(
                worst,
                deviation(weight_ch(stats, params), weighting.rsj_weight(fpi, q)),
                deviation(weight_rw(stats, params), weighting.rsj_weight(p_rw, q)),
                deviation(weight_lift(stats, lift), weighting.rsj_weight(p_lift, q)),
            )
        elapsed = time.perf_counter() - start
        print(f"worst deviation {worst:.3e}, {elapsed:.3f}s")
        assert worst <= TOL
        assert elapsed < 1.0


def test_ac02_ch_anomaly():
    with criterion(2, "CH weight < 0 iff n > N/2 at pi = 0.5, N in 2..200, < 1 s"):
        start = time.perf_counter()
        params = EstimatorParams(pi=0.5)
        bad = [(big_n, n) for big_n, n in grid(include_n_equal=False)
               if (weight_ch(TermStats(n, big_n), params) < 0) != (2 * n > big_n)]
        assert bad == []
        assert time.perf_counter() - start < 1.0


def test_ac03_rw_and_lift_positivity():
    with criterion(3, "RW weight >= 0 for pi in {.5,.6,.75}; lift weight > 0 for L in {1,N,2N}"):
        for big_n, n in grid():
            s = TermStats(n, big_n)
            for pi in (0.5, 0.6, 0.75):
                assert weight_rw(s, EstimatorParams(pi=pi)) >= 0, (n, big_n, pi)
            for lift in (1.0, float(big_n), 2.0 * big_n):
                assert weight_lift(s, lift) > 0, (n, big_n, lift)


def test_ac04_lift_dominance():
    with criterion(4, "p_lift >= n/N with equality iff n = N, N <= 200"):
        for big_n in range(1, MAX_N + 1):
            for n in range(0, big_n + 1):
                s = TermStats(n, big_n)
                for lift in lifts(big_n):
                    p = estimate_p_lift(s, lift)
                    assert p >= n / big_n
                    assert (p == n / big_n) == (n == big_n), (n, big_n, lift)


def test_ac05_usual_idf_bitwise():
    with criterion(5, "lift weight at L = N is bitwise log(1 + N/n), N <= 200"):
        for big_n in range(1, MAX_N + 1):
            for n in range(1, big_n + 1):
                assert weight_lift(TermStats(n, big_n), big_n) == math.log(1 + big_n / n)


def test_ac06_monotonicity_and_bounds():
    with criterion(6, "p_rw in [pi,1] and p_lift in [L/(N+L),1] nondecreasing; lift weight decreasing"):
        for big_n in range(1, MAX_N + 1):
            for pi in (0.3, 0.5, 0.7):
                params = EstimatorParams(pi=pi)
                ps = [estimate_p_rw(TermStats(n, big_n), params) for n in range(big_n + 1)]
                assert all(pi <= p <= 1.0 for p in ps)
                assert all(a <= b for a, b in zip(ps, ps[1:]))
            for lift in lifts(big_n):
                ps = [estimate_p_lift(TermStats(n, big_n), lift) for n in range(big_n + 1)]
                assert all(lift / (big_n + lift) <= p <= 1.0 for p in ps)
                assert all(a <= b for a, b in zip(ps, ps[1:]))
                ws = [weight_lift(TermStats(n, big_n), lift) for n in range(1, big_n + 1)]
                assert all(a > b for a, b in zip(ws, ws[1:]))


def test_ac07_proportional_lift_constant_weight():
    with criterion(7, "Proportional(c) lift function gives log(1 + c) for every n, dev <= 1e-12"):
        worst = 0.0
        for c in (0.1, 0.5, 1.0, 2.0, 7.3):
            f, expected = LiftFunction.proportional(c), math.log(1 + c)
            for big_n, n in grid():
                worst = max(worst, deviation(weight_lift_fn(TermStats(n, big_n), f), expected))
        assert worst <= TOL


def _brute_force_run(index, query, scheme, k):
    scored = []
    for ordinal, doc_id in enumerate(index.doc_ids):
        s = score_document(index, ordinal, query, scheme)
        if s > 0:
            scored.append((doc_id, s))
    scored.sort(key=lambda x: (-x[1], x[0]))
    return "".join(f"{query.query_id} Q0 {d} {i} {s:.6f} t\n" for i, (d, s) in enumerate(scored[:k], 1))


def test_ac08_retrieval_oracle_equivalence():
    with criterion(8, "rank() equals brute-force score-and-sort on 100 random corpora, every scheme, < 5 s"):
        rng = random.Random(8)
        start = time.perf_counter()
        compared = 0
        for _ in range(100):
            index = build_index(random_corpus(rng, max_docs=50, max_vocab=20))
            for qn in range(3):
                words = [rng.choice(index.terms() + ["unseen"]) for _ in range(rng.randint(1, 6))]
                query = Query.parse(f"q{qn}", " ".join(words))
                k = rng.randint(1, 55)
                for scheme in scheme_menu():
                    try:
                        fast = format_run([rank(index, query, scheme, k)], "t")
                    except DegenerateDocFreq:
                        with pytest.raises(DegenerateDocFreq):
                            _brute_force_run(index, query, scheme, k)
                        continue
                    assert fast == _brute_force_run(index, query, scheme, k)
                    compared += 1
        assert compared > 2000
        assert time.perf_counter() - start < 5.0


def test_ac09_end_to_end_determinism(tmp_path, fixtures_dir):
    with criterion(9, "index + query on the 3-doc fixture: first line exact, runs byte-identical"):
        idx = tmp_path / "fixture.idx"
        cmd = [sys.executable, "-m", "rsjir"]
        subprocess.run(cmd + ["index", str(fixtures_dir / "three_docs.tsv"), str(idx)], check=True,
                       capture_output=True)
        runs = []
        for i in range(2):
            out = tmp_path / f"run{i}.txt"
            subprocess.run(cmd + ["query", str(idx), str(fixtures_dir / "queries.tsv"),
                                  "--scheme", "usualidf", "-o", str(out)], check=True, capture_output=True)
            runs.append(out.read_bytes())
        assert runs[0].decode().splitlines()[0] == "q1 Q0 d1 1 1.386294 usualidf"
        assert runs[0] == runs[1]


def test_ac10_index_round_trip(tmp_path):
    with criterion(10, "save/load preserves N, every df and every posting on 100 random corpora"):
        rng = random.Random(10)
        path = tmp_path / "r.idx"
        for _ in range(100):
            index = build_index(random_corpus(rng))
            save_index(index, path)
            loaded = load_index(path)
            assert loaded.corpus_size == index.corpus_size
            assert loaded.doc_ids == index.doc_ids
            assert loaded.terms() == index.terms()
            for term in index.terms():
                assert loaded.df(term) == index.df(term)
                assert loaded.posting(term) == index.posting(term)
            assert dumps_index(loaded) == path.read_text()


def test_ac11_verify_command_and_mutation(capsys, monkeypatch):
    with criterion(11, "verify exits 0 with worst dev <= 1e-12; a mutated lift weight is reported"):
        assert main(["verify"]) == 0
        summary = capsys.readouterr().out.splitlines()[-1].split()
        assert summary[:2] == ["VERIFY", "pass"]
        assert float(summary[3]) <= TOL

        monkeypatch.setattr(weighting, "weight_lift",
                            lambda stats, lift_value, log_base="e": weighting.log_in(lift_value / stats.df, log_base))
        assert main(["verify", "--max-n", "50", "--samples", "200", "--trials", "10"]) == 1
        out = capsys.readouterr().out
        assert "[FAIL] closed-form identity (lift)" in out
        assert out.splitlines()[-1].startswith("VERIFY fail")
