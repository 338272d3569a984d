"""Binary-independence term weighting with lift estimates, plus ranked retrieval."""

from rsjir.errors import (
    CorpusFormatError,
    DegenerateDocFreq,
    DegenerateProbability,
    DuplicateDocId,
    MalformedIndexFile,
    NonpositiveLift,
    RSJError,
    SchemeParseError,
    VersionMismatch,
)
from rsjir.index import (
    Document,
    InvertedIndex,
    PostingList,
    build_index,
    load_index,
    read_corpus,
    save_index,
    term_stats,
    tokenize,
)
from rsjir.retrieval import Query, RankedList, rank, read_queries, score_document, write_run
from rsjir.schemes import DEFAULT_SCHEME, WeightingScheme, parse_scheme
from rsjir.weighting import (
    EstimatorParams,
    LiftFunction,
    Probability,
    TermStats,
    estimate_p_ch2,
    estimate_p_lift,
    estimate_p_rw,
    estimate_q_ch1,
    pi_prime,
    rsj_weight,
    weight_ch,
    weight_lift,
    weight_lift_fn,
    weight_rw,
)

__version__ = "0.1.0"
