"""Key/response annotation comparison with precision, recall and F-measure.

Partial matches are weighted 0 (strict), 1 (lenient) or 1/2 (average).
The average formulas carry the half-weighted partial count in their
denominators too::

    P_avg = (C + P/2) / (C + F + P/2)
    R_avg = (C + P/2) / (C + M + P/2)
    F_beta = (beta^2 + 1) * P * R / (beta^2 * R + P)

A zero denominator yields 1.0 (nothing to get wrong).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .document import DEFAULT_SET, Annotation, Document, span_relation, COEXTENSIVE, OVERLAPPING
from .errors import MixedTypes, NonPositiveBeta

STRICT, LENIENT, AVERAGE = "strict", "lenient", "average"
CRITERIA = (STRICT, LENIENT, AVERAGE)
CORRECT, PARTIAL = "correct", "partial"
METRICS = ("precision", "recall", "f_measure")


@dataclass(frozen=True)
class DiffCounts:
    correct: int = 0
    partial: int = 0
    missing: int = 0
    false_positive: int = 0


@dataclass(frozen=True)
class Pairing:
    key_id: int
    response_id: int
    match_class: str


@dataclass
class MetricSet:
    beta: float = 1.0
    values: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def get(self, criterion: str, metric: str) -> float:
        return self.values[criterion][metric]

    @classmethod
    def from_counts(cls, counts: DiffCounts, beta: float = 1.0) -> "MetricSet":
        values = {}
        for c in CRITERIA:
            p, r = precision(counts, c), recall(counts, c)
            values[c] = {"precision": p, "recall": r, "f_measure": f_measure(p, r, beta)}
        return cls(beta, values)


@dataclass
class DiffReport:
    type_name: str
    pairings: List[Pairing]
    missing_ids: List[int]
    false_ids: List[int]
    counts: DiffCounts
    metrics: MetricSet
    key_doc: Optional[Document] = field(default=None, repr=False)
    response_doc: Optional[Document] = field(default=None, repr=False)


def _ratio(num: float, den: float) -> float:
    return 1.0 if den == 0 else num / den


def precision(counts: DiffCounts, criterion: str = AVERAGE) -> float:
    c, p, f = counts.correct, counts.partial, counts.false_positive
    if criterion == STRICT:
        return _ratio(c, c + f + p)
    if criterion == LENIENT:
        return _ratio(c + p, c + f + p)
    if criterion == AVERAGE:
        return _ratio(c + 0.5 * p, c + f + 0.5 * p)
    raise ValueError(f"unknown criterion {criterion!r}")


def recall(counts: DiffCounts, criterion: str = AVERAGE) -> float:
    c, p, m = counts.correct, counts.partial, counts.missing
    if criterion == STRICT:
        return _ratio(c, c + m + p)
    if criterion == LENIENT:
        return _ratio(c + p, c + m + p)
    if criterion == AVERAGE:
        return _ratio(c + 0.5 * p, c + m + 0.5 * p)
    raise ValueError(f"unknown criterion {criterion!r}")


def f_measure(precision: float, recall: float, beta: float = 1.0) -> float:
    if not beta > 0:
        raise NonPositiveBeta(f"beta must be positive, got {beta}")
    b2 = beta * beta
    den = b2 * recall + precision
    if den == 0:
        return 0.0
    return (b2 + 1) * precision * recall / den


def _same_features(a: Annotation, b: Annotation, names) -> bool:
    return all(a.features.get(n) == b.features.get(n) for n in names)


def match_annotations(key: Sequence[Annotation], response: Sequence[Annotation],
                      compare_features: Optional[Sequence[str]] = None
                      ) -> Tuple[DiffCounts, List[Pairing]]:
    """Pair key and response annotations of one type.

    Pass 1 pairs coextensive annotations (with equal ``compare_features``)
    as correct.  Pass 2 pairs what is left that overlaps as partial: keys
    are visited in ``(start, id)`` order and take the lowest available
    overlapping response, with augmenting-path reassignment so that no
    achievable pairing is lost.
    """
    types = {a.type_name for a in key} | {a.type_name for a in response}
    if len(types) > 1:
        raise MixedTypes(f"annotations of several types: {sorted(types)}")
    key = sorted(key, key=Annotation.sort_key)
    response = sorted(response, key=Annotation.sort_key)
    names = list(compare_features or ())

    pairings: List[Pairing] = []
    used = [False] * len(response)
    open_keys = []
    for k in key:
        for j, r in enumerate(response):
            if not used[j] and span_relation(k, r) == COEXTENSIVE and _same_features(k, r, names):
                used[j] = True
                pairings.append(Pairing(k.id, r.id, CORRECT))
                break
        else:
            open_keys.append(k)

    free = [j for j in range(len(response)) if not used[j]]
    adj = {k.id: [j for j in free if span_relation(k, response[j]) in (COEXTENSIVE, OVERLAPPING)]
           for k in open_keys}
    owner: Dict[int, int] = {}  # response index -> key id

    def augment(kid, seen):
        for j in adj[kid]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = kid
                return True
        return False

    for k in open_keys:
        augment(k.id, set())
    by_key = {kid: j for j, kid in owner.items()}
    for k in open_keys:
        if k.id in by_key:
            pairings.append(Pairing(k.id, response[by_key[k.id]].id, PARTIAL))

    correct = sum(1 for p in pairings if p.match_class == CORRECT)
    partial = len(pairings) - correct
    counts = DiffCounts(correct, partial, len(key) - len(pairings), len(response) - len(pairings))
    return counts, pairings


def diff_report(key_doc: Document, response_doc: Document, types: Sequence[str],
                beta: float = 1.0, compare_features=None,
                key_set: str = DEFAULT_SET, response_set: str = DEFAULT_SET) -> List[DiffReport]:
    if not beta > 0:
        raise NonPositiveBeta(f"beta must be positive, got {beta}")
    reports = []
    for t in types:
        ks = key_doc.sets[key_set].of_type(t) if key_set in key_doc.sets else []
        rs = response_doc.sets[response_set].of_type(t) if response_set in response_doc.sets else []
        counts, pairings = match_annotations(ks, rs, compare_features)
        paired_k = {p.key_id for p in pairings}
        paired_r = {p.response_id for p in pairings}
        reports.append(DiffReport(
            t, sorted(pairings, key=lambda p: p.key_id),
            [a.id for a in ks if a.id not in paired_k],
            [a.id for a in rs if a.id not in paired_r],
            counts, MetricSet.from_counts(counts, beta), key_doc, response_doc))
    return reports


# rendering

def _features_str(feats: Dict[str, str]) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in sorted(feats.items())) + "}"


def _one_line(s: str) -> str:
    return s.replace("\r", "\\r").replace("\n", "\\n").replace("\t", "\\t")


def _rows(report: DiffReport):
    """(key annotation or None, symbol, response annotation or None) rows."""
    kd, rd = report.key_doc, report.response_doc
    kset = {a.id: a for a in kd.all_annotations()} if kd else {}
    rset = {a.id: a for a in rd.all_annotations()} if rd else {}
    rows = [(kset.get(p.key_id), "=" if p.match_class == CORRECT else "~", rset.get(p.response_id))
            for p in report.pairings]
    rows += [(kset.get(i), "-?", None) for i in report.missing_ids]
    rows += [(None, "?-", rset.get(i)) for i in report.false_ids]
    rows.sort(key=lambda r: (r[0] or r[2]).start)
    return rows


def render_text(report: DiffReport) -> str:
    kd, rd = report.key_doc, report.response_doc
    header = ("Start", "End", "Key", "Features", "=?", "Start", "End", "Response", "Features")
    table = [header]
    for k, sym, r in _rows(report):
        left = (str(k.start), str(k.end), _one_line(kd.covered_text(k)), _features_str(k.features)) if k else ("",) * 4
        right = (str(r.start), str(r.end), _one_line(rd.covered_text(r)), _features_str(r.features)) if r else ("",) * 4
        table.append(left + (sym,) + right)
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = [f"Annotation type: {report.type_name}"]
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
    c = report.counts
    m = report.metrics
    lines.append("")
    lines.append(f"{'':22}{'Recall':>10}{'Precision':>11}{'F-measure':>11}")
    labels = [f"Correct: {c.correct}", f"Partially correct: {c.partial}",
              f"Missing: {c.missing}", f"False positives: {c.false_positive}"]
    grid = [""] + [
        f"{crit.title() + ':':<10}{m.get(crit, 'recall'):>10.2f}{m.get(crit, 'precision'):>11.2f}"
        f"{m.get(crit, 'f_measure'):>11.2f}"
        for crit in CRITERIA]
    for label, g in zip(labels, grid):
        lines.append(f"{label:<22}{g}".rstrip())
    return "\n".join(lines) + "\n"


def _record(doc: Optional[Document], ann: Optional[Annotation]):
    if ann is None:
        return None
    return {"start": ann.start, "end": ann.end,
            "coveredText": doc.covered_text(ann) if doc else None,
            "features": dict(sorted(ann.features.items()))}


_MATCH_NAMES = {"=": CORRECT, "~": PARTIAL, "-?": "missing", "?-": "false_positive"}


def render_records(report: DiffReport) -> List[str]:
    """JSON lines: one per row, then one summary record."""
    out = []
    for k, sym, r in _rows(report):
        out.append(json.dumps({
            "record": "pair", "type": report.type_name, "matchClass": _MATCH_NAMES[sym],
            "key": _record(report.key_doc, k), "response": _record(report.response_doc, r),
        }, ensure_ascii=False, sort_keys=True))
    c = report.counts
    out.append(json.dumps({
        "record": "summary", "type": report.type_name, "beta": report.metrics.beta,
        "correct": c.correct, "partial": c.partial, "missing": c.missing,
        "falsePositive": c.false_positive,
        "metrics": report.metrics.values,
    }, ensure_ascii=False, sort_keys=True))
    return out
