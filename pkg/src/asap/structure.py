"""Structuring: from an annotated document to a unified six-facet pattern.

The facet annotations produced by the analysis rules mark section
headings only.  A section's content runs from the end of its heading to
the start of the next heading, and is placed into the unified model at
the path the facet-mapping table gives for the heading's type.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .document import DEFAULT_SET, Document
from .errors import MalformedInput, NoFacetsFound, StructureWarning, UnmappedLabel
from .inline_xml import escape_attr, escape_text

DEFAULT_STRIP_TYPES = ("Sentence", "Token", "SpaceToken", "Lookup")

FACETS = ("identification", "core", "relationships", "guidance", "evaluation", "management")

FACET_LABELS: Dict[str, str] = {
    **dict.fromkeys(("Name", "Identifier", "Author", "Keyword", "Classification",
                     "AbstractionLevel", "Domain", "TypeOfPattern", "Artifact",
                     "Role", "Collection"), "identification"),
    **dict.fromkeys(("Problem", "Context", "Solution"), "core"),
    **dict.fromkeys(("Alternative", "Similar", "Use", "Relationship"), "relationships"),
    "Guidance": "guidance",
    "Evaluation": "evaluation",
    "Management": "management",
}

RELATIONSHIP_KINDS = ("similar", "refinement", "subsequent", "anti-pattern", "alternative", "use")
ARTIFACT_USAGES = ("used", "produced")


# unified model

@dataclass
class Classification:
    type: Optional[str] = None
    category: Optional[str] = None
    abstraction_level: Optional[str] = None
    aspect: Optional[str] = None


@dataclass
class Origin:
    project: Optional[str] = None
    participants: Optional[str] = None


@dataclass
class ArtifactRef:
    text: str
    usage: str = "used"


@dataclass
class Identification:
    name: Optional[str] = None
    identifiers: List[str] = field(default_factory=list)
    authors: List[str] = field(default_factory=list)
    keywords: List[str] = field(default_factory=list)
    classification: Classification = field(default_factory=Classification)
    origin: Origin = field(default_factory=Origin)
    artifacts: List[ArtifactRef] = field(default_factory=list)


@dataclass
class Core:
    problem: Optional[str] = None
    context: Optional[str] = None
    solution: Optional[str] = None


@dataclass
class RelationshipRef:
    kind: str
    text: str


@dataclass
class Guidance:
    known_uses: Optional[str] = None
    example: Optional[str] = None
    literature: Optional[str] = None
    illustration: Optional[str] = None


@dataclass
class Evaluation:
    discussion: Optional[str] = None
    confidence: Optional[str] = None
    maturity: Optional[str] = None


@dataclass
class Management:
    version: Optional[str] = None
    creation_date: Optional[str] = None


@dataclass
class UnifiedPattern:
    identification: Identification = field(default_factory=Identification)
    core: Core = field(default_factory=Core)
    relationships: List[RelationshipRef] = field(default_factory=list)
    guidance: Guidance = field(default_factory=Guidance)
    evaluation: Evaluation = field(default_factory=Evaluation)
    management: Management = field(default_factory=Management)

    def leaves(self):
        """Yield ``(path, value)`` for every populated leaf."""
        yield from _leaves(self, "")


def _leaves(obj, prefix):
    for f in fields(obj):
        value = getattr(obj, f.name)
        path = f"{prefix}{camel(f.name)}"
        if is_dataclass(value):
            yield from _leaves(value, path + ".")
        elif isinstance(value, list):
            for i, item in enumerate(value):
                text = item if isinstance(item, str) else item.text
                yield f"{path}[{i}]", text
        elif value is not None:
            yield path, value


def camel(name: str) -> str:
    head, *rest = name.split("_")
    return head + "".join(p.title() for p in rest)


def snake(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


@dataclass(frozen=True)
class FacetSection:
    label: str
    heading_span: Tuple[int, int]
    content_span: Tuple[int, int]
    content_text: str


@dataclass
class ValidationReport:
    errors: List[Tuple[str, str]] = field(default_factory=list)
    warnings: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    def lines(self) -> List[str]:
        return ([f"ERROR {p} {m}" for p, m in self.errors]
                + [f"WARN {p} {m}" for p, m in self.warnings])

    def render(self) -> str:
        head = "valid" if self.valid else "invalid"
        head += f" ({len(self.errors)} errors, {len(self.warnings)} warnings)"
        return "\n".join([head] + ["  " + line for line in self.lines()]) + "\n"


# facet-mapping table

def _target(pattern: UnifiedPattern, path: str):
    """Resolve ``path`` to ``(container, attribute, extra)`` or raise ValueError."""
    parts = path.split(".")
    if parts[0] not in FACETS:
        raise ValueError(f"unknown facet {parts[0]!r}")
    if parts[0] == "relationships":
        if len(parts) != 2 or not parts[1]:
            raise ValueError("relationship paths look like relationships.<kind>")
        return pattern, "relationships", parts[1]
    if parts[:2] == ["identification", "artifacts"]:
        usage = parts[2] if len(parts) > 2 else "used"
        if len(parts) > 3 or usage not in ARTIFACT_USAGES:
            raise ValueError(f"artifact usage must be one of {ARTIFACT_USAGES}")
        return pattern.identification, "artifacts", usage
    obj = pattern
    for part in parts[:-1]:
        obj = getattr(obj, snake(part), None)
        if not is_dataclass(obj):
            raise ValueError(f"no such group {part!r} in {path!r}")
    attr = snake(parts[-1])
    if attr not in {f.name for f in fields(obj)} or is_dataclass(getattr(obj, attr)):
        raise ValueError(f"no such leaf {parts[-1]!r} in {path!r}")
    return obj, attr, None


def parse_facet_mapping(source: str, origin: str = "<mapping>") -> Dict[str, str]:
    mapping: Dict[str, str] = {}
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, sep, path = (s.strip() for s in line.partition("->"))
        if not sep or not label or not path:
            raise MalformedInput("expected 'Type -> facet.path'", lineno, 1, origin)
        try:
            _target(UnifiedPattern(), path)
        except ValueError as exc:
            raise MalformedInput(str(exc), lineno, raw.index(path) + 1, origin) from None
        mapping[label] = path
    return mapping


def load_facet_mapping(path) -> Dict[str, str]:
    path = Path(path)
    return parse_facet_mapping(path.read_text(encoding="utf-8"), str(path))


# operations

def strip_annotations(doc: Document, types: Sequence[str] = DEFAULT_STRIP_TYPES) -> int:
    """Remove every annotation of the given types from all sets."""
    return sum(s.remove_types(types) for s in doc.sets.values())


def extract_sections(doc: Document, labels: Optional[Iterable[str]] = None,
                     set_name: str = DEFAULT_SET) -> List[FacetSection]:
    labels = set(FACET_LABELS if labels is None else labels)
    aset = doc.sets.get(set_name)
    headings = [a for a in aset if a.type_name in labels] if aset else []
    if not headings:
        raise NoFacetsFound(doc.source_name)

    kept = []
    for h in headings:
        if kept and h.start < kept[-1].end:
            warnings.warn(f"{h.type_name} heading at {h.start} overlaps "
                          f"{kept[-1].type_name} at {kept[-1].start}; dropped",
                          StructureWarning, stacklevel=2)
            continue
        kept.append(h)

    text = doc.text
    if text[:kept[0].start].strip():
        warnings.warn(f"text before the first heading ({kept[0].start} chars) dropped",
                      StructureWarning, stacklevel=2)

    sections = []
    for i, h in enumerate(kept):
        stop = kept[i + 1].start if i + 1 < len(kept) else len(text)
        raw = text[h.end:stop]
        lead = len(raw) - len(raw.lstrip())
        body = raw.strip()
        start = h.end + lead if body else h.end
        if not body:
            warnings.warn(f"{h.type_name} heading at {h.start} has no content",
                          StructureWarning, stacklevel=2)
        sections.append(FacetSection(h.type_name, (h.start, h.end),
                                     (start, start + len(body)), body))
    return sections


def build_unified_pattern(sections: Sequence[FacetSection], mapping: Dict[str, str]) -> UnifiedPattern:
    pattern = UnifiedPattern()
    for sec in sections:
        path = mapping.get(sec.label)
        if path is None:
            raise UnmappedLabel(sec.label)
        obj, attr, extra = _target(pattern, path)
        if attr == "relationships":
            pattern.relationships.append(RelationshipRef(extra, sec.content_text))
        elif attr == "artifacts":
            obj.artifacts.append(ArtifactRef(sec.content_text, extra))
        elif isinstance(getattr(obj, attr), list):
            getattr(obj, attr).append(sec.content_text)
        elif getattr(obj, attr) is None:
            setattr(obj, attr, sec.content_text)
        else:
            warnings.warn(f"repeated {sec.label} section for {path}; keeping the first",
                          StructureWarning, stacklevel=2)
    return pattern


_ITEM_NAMES = {"identifiers": "identifier", "authors": "author", "keywords": "keyword",
               "artifacts": "artifact", "relationships": "relationship"}


def _render(obj) -> str:
    out = []
    for f in fields(obj):
        value = getattr(obj, f.name)
        tag = camel(f.name)
        if is_dataclass(value):
            inner = _render(value)
            if inner:
                out.append(f"<{tag}>{inner}</{tag}>")
        elif isinstance(value, list):
            if not value:
                continue
            item = _ITEM_NAMES[f.name]
            rendered = []
            for v in value:
                if isinstance(v, ArtifactRef):
                    rendered.append(f'<{item} usage="{escape_attr(v.usage)}">{escape_text(v.text)}</{item}>')
                elif isinstance(v, RelationshipRef):
                    rendered.append(f'<{item} kind="{escape_attr(v.kind)}">{escape_text(v.text)}</{item}>')
                else:
                    rendered.append(f"<{item}>{escape_text(v)}</{item}>")
            out.append(f"<{tag}>{''.join(rendered)}</{tag}>")
        elif value is not None:
            out.append(f"<{tag}>{escape_text(value)}</{tag}>")
    return "".join(out)


def emit_pattern_xml(pattern: UnifiedPattern) -> bytes:
    body = _render(pattern)
    if not body:
        return b"<processPattern/>"
    return f"<processPattern>{body}</processPattern>".encode("utf-8")


def validate_pattern(pattern: UnifiedPattern) -> ValidationReport:
    report = ValidationReport()
    core = pattern.core
    if not any((core.problem, core.context, core.solution)):
        report.errors.append(("core", "none of problem, context, solution is present"))
    if not pattern.identification.name:
        report.warnings.append(("identification.name", "pattern has no name"))
    for i, rel in enumerate(pattern.relationships):
        if rel.kind not in RELATIONSHIP_KINDS:
            report.warnings.append((f"relationships[{i}]", f"unknown relationship kind {rel.kind!r}"))
    for path, value in pattern.leaves():
        if value == "":
            report.warnings.append((path, "empty section content"))
    return report


def structure_document(doc: Document, mapping: Dict[str, str],
                       strip_types: Sequence[str] = DEFAULT_STRIP_TYPES):
    """strip -> extract -> build -> validate; returns ``(pattern, report)``.

    A document without facet headings yields an empty pattern (which then
    fails validation) rather than an exception.
    """
    strip_annotations(doc, strip_types)
    try:
        sections = extract_sections(doc, labels=mapping.keys())
    except NoFacetsFound:
        sections = []
    pattern = build_unified_pattern(sections, mapping)
    return pattern, validate_pattern(pattern)
