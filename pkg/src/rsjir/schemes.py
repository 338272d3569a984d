"""Weighting schemes: a tagged estimator choice plus its parameters.

Schemes are written on the command line as ``name[:key=value,...]``::

    usualidf
    ch:pi=0.5
    rw:pi=0.75
    lift:L=100
    liftfn:prop,c=1
    liftfn:power,c=1,beta=0.5
    liftfn:const,L=100
    liftfn:scaled,alpha=1

The canonical label (``ch(pi=0.5)``, ``liftfn(prop,c=1)``, ...) is accepted
by :func:`parse_scheme` as well, so labels round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from rsjir import weighting as wt
from rsjir.errors import SchemeParseError
from rsjir.weighting import EstimatorParams, LiftFunction, Probability, TermStats

KINDS = ("ch", "rw", "lift", "liftfn", "usualidf")


@dataclass(frozen=True)
class WeightingScheme:
    kind: str
    params: EstimatorParams = field(default_factory=EstimatorParams)
    lift_fn: LiftFunction | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if (self.kind == "liftfn") != (self.lift_fn is not None):
            raise ValueError("a lift function is required for, and only for, the liftfn scheme")

    # Constructors mirror the CLI grammar.
    @classmethod
    def croft_harper(cls, pi=0.5, log_base="e"):
        return cls("ch", EstimatorParams(pi=pi, log_base=log_base))

    @classmethod
    def robertson_walker(cls, pi=0.5, log_base="e"):
        return cls("rw", EstimatorParams(pi=pi, log_base=log_base))

    @classmethod
    def lift(cls, lift, log_base="e"):
        return cls("lift", EstimatorParams(lift=lift, log_base=log_base))

    @classmethod
    def lift_function(cls, f, log_base="e"):
        return cls("liftfn", EstimatorParams(log_base=log_base), f)

    @classmethod
    def usual_idf(cls, log_base="e"):
        return cls("usualidf", EstimatorParams(log_base=log_base))

    @property
    def log_base(self) -> str:
        return self.params.log_base

    @property
    def label(self) -> str:
        if self.kind == "ch":
            return f"ch(pi={self.params.pi:g})"
        if self.kind == "rw":
            return f"rw(pi={self.params.pi:g})"
        if self.kind == "lift":
            return f"lift(L={self.params.lift:g})"
        if self.kind == "liftfn":
            return f"liftfn({self.lift_fn.label})"
        return "usualidf"

    def with_log_base(self, log_base) -> "WeightingScheme":
        p = self.params
        return WeightingScheme(self.kind, EstimatorParams(p.pi, p.lift, log_base), self.lift_fn)

    def weight(self, stats: TermStats) -> float:
        """Closed-form term weight; raises DegenerateDocFreq where undefined."""
        if self.kind == "ch":
            return wt.weight_ch(stats, self.params)
        if self.kind == "rw":
            return wt.weight_rw(stats, self.params)
        if self.kind == "lift":
            return wt.weight_lift(stats, self.params.lift, self.log_base)
        if self.kind == "liftfn":
            return wt.weight_lift_fn(stats, self.lift_fn, self.log_base)
        return wt.weight_lift(stats, float(stats.corpus_size), self.log_base)

    def estimate_p(self, stats: TermStats) -> Probability:
        """Estimated occurrence probability of the term in relevant documents."""
        if self.kind == "ch":
            return wt.estimate_p_ch2(self.params)
        if self.kind == "rw":
            return wt.estimate_p_rw(stats, self.params)
        if self.kind == "lift":
            return wt.estimate_p_lift(stats, self.params.lift)
        if self.kind == "liftfn":
            return wt.estimate_p_lift_fn(stats, self.lift_fn)
        return wt.estimate_p_lift(stats, float(stats.corpus_size))


DEFAULT_SCHEME = WeightingScheme.usual_idf()


def _number(text, token):
    try:
        return float(text)
    except ValueError:
        raise SchemeParseError(f"expected a number in {token!r}") from None


def _key_values(tokens, allowed, spec):
    values = {}
    for token in tokens:
        key, sep, raw = token.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise SchemeParseError(
                f"unexpected token {token!r} in scheme {spec!r}; expected one of "
                + ", ".join(f"{k}=<number>" for k in allowed)
            )
        if key in values:
            raise SchemeParseError(f"duplicate key {key!r} in scheme {spec!r}")
        values[key] = _number(raw, token)
    return values


def parse_scheme(spec: str, log_base="e") -> WeightingScheme:
    """Parse a scheme descriptor such as ``lift:L=100`` or ``ch(pi=0.5)``."""
    text = spec.strip()
    if text.endswith(")") and "(" in text:
        name, _, rest = text[:-1].partition("(")
    else:
        name, _, rest = text.partition(":")
    name = name.strip().lower()
    tokens = [t.strip() for t in rest.split(",")] if rest.strip() else []

    try:
        if name in ("ch", "rw"):
            values = _key_values(tokens, ("pi",), spec)
            pi = values.get("pi", 0.5)
            ctor = WeightingScheme.croft_harper if name == "ch" else WeightingScheme.robertson_walker
            return ctor(pi=pi, log_base=log_base)
        if name == "lift":
            values = _key_values(tokens, ("L",), spec)
            if "L" not in values:
                raise SchemeParseError(f"scheme {spec!r} needs L=<number>")
            return WeightingScheme.lift(values["L"], log_base=log_base)
        if name == "usualidf":
            if tokens:
                raise SchemeParseError(f"unexpected token {tokens[0]!r}: usualidf takes no parameters")
            return WeightingScheme.usual_idf(log_base=log_base)
        if name == "liftfn":
            if not tokens:
                raise SchemeParseError(f"scheme {spec!r} needs a lift-function kind")
            fkind, params = tokens[0].lower(), tokens[1:]
            if fkind == "const":
                v = _key_values(params, ("L",), spec)
                if "L" not in v:
                    raise SchemeParseError(f"scheme {spec!r} needs L=<number>")
                f = LiftFunction.constant(v["L"])
            elif fkind == "prop":
                f = LiftFunction.proportional(_key_values(params, ("c",), spec).get("c", 1.0))
            elif fkind == "power":
                v = _key_values(params, ("c", "beta"), spec)
                f = LiftFunction.power(v.get("c", 1.0), v.get("beta", 0.5))
            elif fkind == "scaled":
                f = LiftFunction.scaled_corpus(_key_values(params, ("alpha",), spec).get("alpha", 1.0))
            else:
                raise SchemeParseError(
                    f"unknown lift-function kind {tokens[0]!r}; expected const, prop, power or scaled"
                )
            return WeightingScheme.lift_function(f, log_base=log_base)
    except SchemeParseError:
        raise
    except ValueError as exc:
        raise SchemeParseError(f"invalid scheme {spec!r}: {exc}") from None
    raise SchemeParseError(
        f"unknown scheme name {name!r} in {spec!r}; expected one of {', '.join(KINDS)}"
    )
