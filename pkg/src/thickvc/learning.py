"""Learning rules and sample-complexity machinery.

Two consistent learners: the enumeration learner walks a fixed order and
returns the first concept agreeing with the labels; the adversarial learner
is deliberately white-box, sees the target and the measure, and returns a
consistent concept as far from the target as possible. The adversarial rule
is not a legal learner; it exists to witness that consistency alone does
not force learning.

Both learners work on materialized ConceptClass instances and on the
structured FiniteCofiniteClass backend; structured classes always use their
canonical order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .domain import Concept, ConceptClass
from .errors import NoConsistentHypothesis, WorkLimitExceeded
from .fincofin import FCSet, FiniteCofiniteClass, fc_distance
from .measures import (
    DiscreteMeasure,
    SampleSeq,
    _draw_indices,
    symdiff_distance,
)
from .rng import derive_rng
from .shattering import DEFAULT_WORK_LIMIT


@dataclass(frozen=True)
class LabeledSample:
    """An ordered sample with 0/1 labels, one per drawn point."""

    points: SampleSeq
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != self.points.n:
            raise ValueError("labels and points have different lengths")
        if any(l not in (0, 1) for l in self.labels):
            raise ValueError("labels must be 0 or 1")


@dataclass(frozen=True)
class LearnerSpec:
    """Which rule to run; order applies to the enumeration kind only.

    The adversarial kind receives the target and measure at call time
    (white-box by design).
    """

    kind: str
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("enumeration", "adversarial"):
            raise ValueError(f"unknown learner kind {self.kind!r}")
        if self.order is not None:
            order = tuple(self.order)
            object.__setattr__(self, "order", order)
            if sorted(order) != list(range(len(order))):
                raise ValueError("order must be a permutation of 0..K-1")


def _member(target: Concept | FCSet, p: int) -> bool:
    if isinstance(target, Concept):
        return p in target
    return target.contains(p)


def label_sample(target: Concept | FCSet, points: SampleSeq) -> LabeledSample:
    """Label a sample by target membership."""
    return LabeledSample(
        points, tuple(1 if _member(target, p) else 0 for p in points.points)
    )


def _split_sample(sample: LabeledSample) -> tuple[set[int], set[int]]:
    pos = {p for p, l in zip(sample.points.points, sample.labels) if l}
    neg = {p for p, l in zip(sample.points.points, sample.labels) if not l}
    return pos, neg


def enumeration_learner(
    cls: ConceptClass | FiniteCofiniteClass,
    order: Sequence[int] | None,
    sample: LabeledSample,
) -> int:
    """Index of the order-least concept consistent with the sample.

    An empty sample returns the first index. Contradictory or unrealizable
    labels raise NoConsistentHypothesis.
    """
    pos, neg = _split_sample(sample)
    if pos & neg:
        raise NoConsistentHypothesis("a point is labeled both 1 and 0")
    if isinstance(cls, FiniteCofiniteClass):
        if order is not None:
            raise ValueError("structured classes use their canonical order only")
        return cls.rank(cls.least_consistent(pos, neg))
    seq: Iterable[int]
    if order is None:
        seq = range(len(cls.concepts))
    else:
        if sorted(order) != list(range(len(cls.concepts))):
            raise ValueError("order must be a permutation of the class indices")
        seq = order
    pmask = 0
    for p in pos:
        pmask |= 1 << p
    zmask = 0
    for p in neg:
        zmask |= 1 << p
    for idx in seq:
        b = cls.concepts[idx].bits
        if pmask & ~b == 0 and b & zmask == 0:
            return idx
    raise NoConsistentHypothesis("no concept in the class fits the labels")


def adversarial_consistent_learner(
    cls: ConceptClass | FiniteCofiniteClass,
    sample: LabeledSample,
    target: Concept | FCSet,
    measure: DiscreteMeasure,
) -> int:
    """Index of a consistent concept farthest from the target; ties go to
    the least index."""
    pos, neg = _split_sample(sample)
    if pos & neg:
        raise NoConsistentHypothesis("a point is labeled both 1 and 0")
    if isinstance(cls, FiniteCofiniteClass):
        fc, _d = cls.max_distance_consistent(pos, neg, target, measure)
        return cls.rank(fc)
    pmask = 0
    for p in pos:
        pmask |= 1 << p
    zmask = 0
    for p in neg:
        zmask |= 1 << p
    best: tuple[float, int] | None = None
    for idx, c in enumerate(cls.concepts):
        if pmask & ~c.bits or c.bits & zmask:
            continue
        d = symdiff_distance(measure, c, target)
        if best is None or d > best[0]:
            best = (d, idx)
    if best is None:
        raise NoConsistentHypothesis("no concept in the class fits the labels")
    return best[1]


@dataclass(frozen=True)
class ImageResult:
    """Set of indices a learner can output for one target at sample size n."""

    indices: frozenset[int]
    exhaustive: bool


def learner_image(
    cls: ConceptClass,
    order: Sequence[int] | None,
    target: Concept | int,
    n: int,
    *,
    mode: str = "exhaustive",
    trials: int | None = None,
    seed: int | None = None,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> ImageResult:
    """All outputs of the enumeration learner over samples of length n.

    The learner sees only which points got label 1 and which got 0, so the
    image over all m^n sequences equals the image over supports: the empty
    support for n = 0, else every nonempty support of size <= n (any such
    support is realized by a sequence with repetitions). Exhaustive mode
    walks the supports and refuses when their count passes the work limit;
    sampled mode draws uniform sequences instead and is flagged
    non-exhaustive.
    """
    if isinstance(cls, FiniteCofiniteClass):
        raise WorkLimitExceeded(
            "structured classes have no exhaustive image; materialize first"
        )
    if isinstance(target, int):
        target = cls.concepts[target]
    m = cls.domain.size
    if mode == "exhaustive":
        total = sum(math.comb(m, k) for k in range(1, min(n, m) + 1))
        if total > work_limit:
            raise WorkLimitExceeded(
                f"{total} supports exceed the work limit {work_limit}", work_limit
            )
        out = set()
        if n == 0:
            empty = LabeledSample(SampleSeq(()), ())
            out.add(enumeration_learner(cls, order, empty))
        else:
            from itertools import combinations

            for k in range(1, min(n, m) + 1):
                for tup in combinations(range(m), k):
                    pts = SampleSeq(tup)
                    out.add(
                        enumeration_learner(cls, order, label_sample(target, pts))
                    )
        return ImageResult(frozenset(out), True)
    if mode == "sampled":
        if trials is None or seed is None:
            raise ValueError("sampled mode needs trials and seed")
        out = set()
        for tr in range(trials):
            rng = derive_rng(seed, "image", tr)
            pts = SampleSeq(tuple(int(x) for x in rng.integers(0, m, size=n)))
            out.add(enumeration_learner(cls, order, label_sample(target, pts)))
        return ImageResult(frozenset(out), False)
    raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")


def sample_complexity_bound(epsilon: float, delta: float, d: int) -> int:
    """The fixed standard sample-size bound used across the package.

    ceil((128/eps^2) * (d * ln((2 e^2/eps) * ln(2 e/eps)) + ln(8/delta))),
    natural logarithms. Typical, far from optimal, and good enough to
    dominate every learning curve simulated here.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0,1), got {epsilon!r}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0,1), got {delta!r}")
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"d must be a positive int, got {d!r}")
    inner = (2.0 * math.e**2 / epsilon) * math.log(2.0 * math.e / epsilon)
    val = (128.0 / epsilon**2) * (d * math.log(inner) + math.log(8.0 / delta))
    return math.ceil(val)


@dataclass(frozen=True)
class PacReport:
    """Monte Carlo summary of a learner's error distribution."""

    mean_error: float
    errors: tuple[float, ...]
    frac_exceeding: dict[float, float]
    quantiles: dict[str, float]
    stderr_mean: float
    n: int
    trials: int
    seed: int
    n_atom_bound: float
    learner_kind: str
    no_hypothesis_count: int

    def frac_above(self, eps: float) -> float:
        return self.frac_exceeding[eps]


def _quantile_points(errors: list[float]) -> dict[str, float]:
    srt = sorted(errors)
    T = len(srt)
    out = {}
    for q in (0.5, 0.9, 0.99):
        k = max(0, math.ceil(q * T) - 1)
        out[f"q{int(q * 100)}"] = srt[k]
    out["max"] = srt[-1]
    return out


def pac_error_estimate(
    cls: ConceptClass | FiniteCofiniteClass,
    learner: LearnerSpec,
    target: Concept | FCSet | int,
    measure: DiscreteMeasure,
    n: int,
    trials: int,
    seed: int,
    *,
    epsilons: Sequence[float] = (),
    no_hypothesis: str = "raise",
    seed_path: tuple = (),
) -> PacReport:
    """Estimate the distribution of mu(learned vs target) over i.i.d. samples.

    Each trial draws its own generator from (seed, *seed_path, trial), so
    trials are reproducible individually and independent of scheduling. The
    consistency identity (learned concept agrees with every label) is
    asserted on every trial; a violation is a bug, not a statistic.
    no_hypothesis: "raise" propagates NoConsistentHypothesis, "full-error"
    counts the trial with error 1.0 and moves on.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if no_hypothesis not in ("raise", "full-error"):
        raise ValueError(f"bad no_hypothesis policy {no_hypothesis!r}")
    structured = isinstance(cls, FiniteCofiniteClass)
    if isinstance(target, int):
        if structured:
            target = cls.concept_at(target)
        else:
            target = cls.concepts[target]
    if structured and not isinstance(target, FCSet):
        raise ValueError("structured classes take FCSet targets")
    if not structured and not isinstance(target, Concept):
        raise ValueError("materialized classes take Concept targets")
    errors: list[float] = []
    nohyp = 0
    for tr in range(trials):
        rng = derive_rng(seed, "pac", *seed_path, tr)
        idx = _draw_indices(measure, n, rng)
        pts = np.unique(idx)  # consistency depends only on the labeled set
        try:
            if structured:
                inside = cls.label_points(target, pts)
                pos = frozenset(int(x) for x in pts[inside])
                neg = frozenset(int(x) for x in pts[~inside])
                if learner.kind == "enumeration":
                    if learner.order is not None:
                        raise ValueError(
                            "structured classes use their canonical order only"
                        )
                    fc = cls.least_consistent(pos, neg)
                    err = fc_distance(measure, fc, target)
                else:
                    fc, err = cls.max_distance_consistent(pos, neg, target, measure)
                got = cls.label_points(fc, pts)
                if not np.array_equal(got, inside):
                    raise AssertionError("learner output inconsistent with labels")
            else:
                sample = label_sample(
                    target, SampleSeq(tuple(int(x) for x in pts))
                )
                if learner.kind == "enumeration":
                    k = enumeration_learner(cls, learner.order, sample)
                else:
                    k = adversarial_consistent_learner(cls, sample, target, measure)
                learned = cls.concepts[k]
                for p, lab in zip(sample.points.points, sample.labels):
                    if (p in learned) != bool(lab):
                        raise AssertionError(
                            "learner output inconsistent with labels"
                        )
                err = symdiff_distance(measure, learned, target)
        except NoConsistentHypothesis:
            if no_hypothesis == "raise":
                raise
            nohyp += 1
            err = 1.0
        errors.append(float(err))
    mean = sum(errors) / trials
    var = sum((e - mean) ** 2 for e in errors) / trials
    report = PacReport(
        mean_error=mean,
        errors=tuple(errors),
        frac_exceeding={
            float(e): sum(1 for x in errors if x > e) / trials for e in epsilons
        },
        quantiles=_quantile_points(errors),
        stderr_mean=math.sqrt(var / trials),
        n=n,
        trials=trials,
        seed=seed,
        n_atom_bound=n * measure.atom_bound,
        learner_kind=learner.kind,
        no_hypothesis_count=nohyp,
    )
    return report
