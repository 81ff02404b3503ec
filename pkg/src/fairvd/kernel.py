"""Twin-cover kernelization for MSO1 model checking.

Two reduction rules, both parameterized by the quantifier counts of the
formula to be checked:

* twin rule: a class of vertices with equal closed neighbourhood and equal
  labels only needs ``2**q_S * q_v`` members;
* clique rule: among cliques of ``G - K`` with the same size, cover set and
  label multiset, only ``alpha = 2**(r*q_S) * (q_v + 1)`` are needed, where
  ``r`` bounds the clique size.

Removal order is deterministic (largest ids first), so the map from kernel
ids back to input ids is stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError, InvalidStateError
from .formula import DEFAULT_ATOM_BUDGET, Formula, evaluate
from .graph import LabeledGraph, induced_labeled
from .params import TwinCover, min_twin_cover, twin_classes, twin_cover_from_set

TWIN_RULE = "twin-rule"
CLIQUE_RULE = "clique-rule"


def twin_threshold(q_s: int, q_v: int) -> int:
    return 2 ** q_s * q_v


def clique_alpha(r: int, q_s: int, q_v: int) -> int:
    return 2 ** (r * q_s) * (q_v + 1)


def kernel_size_bound(k: int, q_s: int, q_v: int) -> int:
    """Upper bound on the kernel size for an unlabeled graph with twin cover ``k``."""
    return k + (q_v + 1) * q_v ** 2 * 2 ** (k + 2 * q_s + 2 ** q_s * q_s * q_v)


@dataclass
class KernelReport:
    reduced: LabeledGraph
    removed: list = field(default_factory=list)   # (input id, rule tag)
    keep: list = field(default_factory=list)      # kernel id -> input id
    cover: TwinCover | None = None
    bound: int | None = None

    def then(self, step: "KernelReport") -> "KernelReport":
        """Compose with a step applied to ``self.reduced``."""
        removed = self.removed + [(self.keep[v], tag) for v, tag in step.removed]
        keep = [self.keep[v] for v in step.keep]
        return KernelReport(step.reduced, removed, keep, step.cover, step.bound)

    def dump(self) -> str:
        lines = [f"removed {v} rule={tag}" for v, tag in self.removed]
        bound = "-" if self.bound is None else self.bound
        lines.append(f"kernel n={self.reduced.n} bound={bound}")
        return "\n".join(lines)


def _drop(lg: LabeledGraph, doomed: dict[int, str], cover: TwinCover | None) -> KernelReport:
    survivors = [v for v in range(lg.n) if v not in doomed]
    reduced, keep = induced_labeled(lg, survivors)
    new_cover = None
    if cover is not None:
        index = {old: new for new, old in enumerate(keep)}
        new_cover = twin_cover_from_set(reduced.graph,
                                        [index[c] for c in cover.cover if c in index])
    removed = sorted(doomed.items())
    return KernelReport(reduced, removed, keep, new_cover)


def reduce_twins(lg: LabeledGraph, q_s: int, q_v: int,
                 cover: TwinCover | None = None) -> KernelReport:
    """Shrink every twin class above the threshold, dropping its largest ids."""
    if q_s < 0 or q_v < 0:
        raise InvalidInputError("quantifier counts must be non-negative")
    limit = twin_threshold(q_s, q_v)
    doomed = {}
    for cls in twin_classes(lg):
        for v in cls[limit:]:
            doomed[v] = TWIN_RULE
    return _drop(lg, doomed, cover)


def labeled_type(lg: LabeledGraph, clique) -> tuple:
    return (len(clique.vertices), clique.cover_set,
            tuple(sorted(lg.label_vector(v) for v in clique.vertices)))


def reduce_cliques(lg: LabeledGraph, cover: TwinCover, q_s: int, q_v: int,
                   r: int | None = None, exempt_empty_cover: bool = False) -> KernelReport:
    """Delete whole cliques of a labeled type occurring more than ``alpha`` times.

    ``r`` is the clique size bound the caller vouches for; by default the
    largest clique present.  With ``exempt_empty_cover`` cliques attached to
    no cover vertex are never touched.
    """
    if q_s < 0 or q_v < 0:
        raise InvalidInputError("quantifier counts must be non-negative")
    largest = max((len(c) for c in cover.cliques), default=0)
    if r is None:
        r = largest
    elif largest > r:
        raise InvalidStateError(f"clique of size {largest} exceeds bound r={r}")
    alpha = clique_alpha(r, q_s, q_v)
    groups: dict = {}
    for c in cover.cliques:
        if exempt_empty_cover and not c.cover_set:
            continue
        groups.setdefault(labeled_type(lg, c), []).append(c)
    doomed = {}
    for members in groups.values():
        # cliques are ordered by smallest id; the tail goes
        for c in members[alpha:]:
            for v in c.vertices:
                doomed[v] = CLIQUE_RULE
    return _drop(lg, doomed, cover)


def kernelize(lg: LabeledGraph, q_s: int, q_v: int,
              exempt_empty_cover: bool = False) -> KernelReport:
    """Apply both rules until neither removes anything."""
    report = reduce_twins(lg, q_s, q_v)
    cover = min_twin_cover(report.reduced.graph)
    report.cover = cover
    while True:
        by_clique = reduce_cliques(report.reduced, report.cover, q_s, q_v,
                                   exempt_empty_cover=exempt_empty_cover)
        report = report.then(by_clique)
        by_twin = reduce_twins(report.reduced, q_s, q_v, report.cover)
        report = report.then(by_twin)
        if not by_clique.removed and not by_twin.removed:
            break
    if not lg.labels and not exempt_empty_cover:
        report.bound = kernel_size_bound(report.cover.k, q_s, q_v)
    return report


def model_check(g, sentence: Formula, budget: int = DEFAULT_ATOM_BUDGET):
    """Truth of a sentence, evaluated on its kernel.  Returns ``(truth, report)``."""
    if not sentence.is_sentence():
        raise InvalidInputError(f"formula has free variables {list(sentence.free)}")
    lg = g if isinstance(g, LabeledGraph) else LabeledGraph(g)
    report = kernelize(lg, sentence.q_s, sentence.q_v)
    if report.bound is not None and report.reduced.n > report.bound:
        raise InvalidStateError(f"kernel has {report.reduced.n} vertices, bound {report.bound}")
    return evaluate(report.reduced, sentence, budget=budget), report
