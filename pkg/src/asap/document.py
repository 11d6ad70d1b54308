"""Stand-off annotation model.

A :class:`Document` owns its text and any number of named
:class:`AnnotationSet` objects.  Annotations are typed spans over the text
(offsets count code points, i.e. Python ``str`` indices) carrying a flat
string-to-string feature map.  Annotation ids are allocated per document
from a monotonically increasing counter.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional

from .errors import InvertedSpan, OffsetOutOfBounds, OverlapNotNestable

DEFAULT_SET = ""

COEXTENSIVE = "coextensive"
OVERLAPPING = "overlapping"
DISJOINT = "disjoint"


@dataclass(frozen=True)
class Annotation:
    id: int
    type_name: str
    start: int
    end: int
    features: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def span(self):
        return (self.start, self.end)

    def __len__(self):
        return self.end - self.start

    def sort_key(self):
        return (self.start, self.id)


class AnnotationSet:
    """Annotations kept in ascending ``(start, id)`` order."""

    def __init__(self, name: str = DEFAULT_SET):
        self.name = name
        self._items: List[Annotation] = []

    def __iter__(self) -> Iterator[Annotation]:
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __repr__(self):
        return f"AnnotationSet({self.name!r}, {len(self._items)} annotations)"

    def _insert(self, ann: Annotation):
        bisect.insort(self._items, ann, key=Annotation.sort_key)

    def of_type(self, *type_names: str) -> List[Annotation]:
        wanted = set(type_names)
        return [a for a in self._items if a.type_name in wanted]

    def types(self):
        return sorted({a.type_name for a in self._items})

    def get(self, ann_id: int) -> Optional[Annotation]:
        for a in self._items:
            if a.id == ann_id:
                return a
        return None

    def remove_types(self, type_names: Iterable[str]) -> int:
        wanted = set(type_names)
        if not wanted:
            return 0
        kept = [a for a in self._items if a.type_name not in wanted]
        removed = len(self._items) - len(kept)
        self._items = kept
        return removed


class Document:
    def __init__(self, source_name: str, text: str):
        self.source_name = source_name
        self.text = text
        self.sets: Dict[str, AnnotationSet] = {DEFAULT_SET: AnnotationSet(DEFAULT_SET)}
        self.next_id = 0

    def __repr__(self):
        n = sum(len(s) for s in self.sets.values())
        return f"Document({self.source_name!r}, {len(self.text)} chars, {n} annotations)"

    def annotation_set(self, name: str = DEFAULT_SET) -> AnnotationSet:
        """Return the named set, creating it on first use."""
        if name not in self.sets:
            self.sets[name] = AnnotationSet(name)
        return self.sets[name]

    def add(self, type_name: str, start: int, end: int, features=None,
            set_name: str = DEFAULT_SET) -> int:
        return add_annotation(self, set_name, type_name, start, end, features)

    def covered_text(self, ann: Annotation) -> str:
        return self.text[ann.start:ann.end]

    def all_annotations(self) -> Iterator[Annotation]:
        for s in self.sets.values():
            yield from s


class Corpus:
    """An ordered collection of documents with unique source names."""

    def __init__(self, documents: Iterable[Document] = ()):
        self.documents: List[Document] = []
        for d in documents:
            self.append(d)

    def append(self, doc: Document):
        if any(d.source_name == doc.source_name for d in self.documents):
            raise ValueError(f"duplicate document name {doc.source_name!r}")
        self.documents.append(doc)

    def __iter__(self):
        return iter(self.documents)

    def __len__(self):
        return len(self.documents)


def create_document(source_name: str, text: str) -> Document:
    return Document(source_name, text)


def add_annotation(doc: Document, set_name: str, type_name: str, start: int,
                   end: int, features=None) -> int:
    """Add a span annotation and return its freshly allocated id."""
    n = len(doc.text)
    if start < 0 or end < 0 or start > n or end > n:
        raise OffsetOutOfBounds(
            f"span [{start},{end}) outside document of length {n}")
    if start > end:
        raise InvertedSpan(f"start {start} > end {end}")
    ann = Annotation(doc.next_id, type_name, start, end,
                     {str(k): str(v) for k, v in (features or {}).items()})
    doc.next_id += 1
    doc.annotation_set(set_name)._insert(ann)
    return ann.id


def annotations_of_type(doc: Document, set_name: str, type_name: str) -> List[Annotation]:
    s = doc.sets.get(set_name)
    if s is None:
        return []
    return s.of_type(type_name)


def span_relation(a: Annotation, b: Annotation) -> str:
    if a.start == b.start and a.end == b.end:
        return COEXTENSIVE
    if max(a.start, b.start) < min(a.end, b.end):
        return OVERLAPPING
    return DISJOINT


def crosses(a: Annotation, b: Annotation) -> bool:
    """True when the two spans overlap without one containing the other."""
    if a.start > b.start or (a.start == b.start and a.end < b.end):
        a, b = b, a
    return a.start < b.start < a.end < b.end


def check_nestable(annotations: Iterable[Annotation]):
    """Raise OverlapNotNestable for the first crossing pair found."""
    stack: List[Annotation] = []
    for ann in sorted(annotations, key=lambda a: (a.start, -a.end, a.id)):
        while stack and stack[-1].end <= ann.start:
            stack.pop()
        if stack and ann.end > stack[-1].end:
            raise OverlapNotNestable(stack[-1], ann)
        if ann.end > ann.start:
            stack.append(ann)


def nestable_subset(annotations: Iterable[Annotation], keep_first=()):
    """Drop annotations until the rest nest properly.

    Types listed in ``keep_first`` win conflicts; otherwise the
    earlier-added annotation wins.  Returns ``(kept, dropped)``.
    """
    rank = {t: i for i, t in enumerate(keep_first)}
    ordered = sorted(annotations,
                     key=lambda a: (rank.get(a.type_name, len(rank)), a.id))
    kept: List[Annotation] = []
    dropped: List[Annotation] = []
    for ann in ordered:
        if any(crosses(ann, k) for k in kept):
            dropped.append(ann)
        else:
            kept.append(ann)
    kept.sort(key=Annotation.sort_key)
    return kept, dropped
