"""Inline-XML rendering of annotated documents.

The format wraps the document text in an ``<asapDoc name="...">`` root and
renders every selected annotation as an element named after its type, with
its features as attributes::

    <asapDoc name="p1"><Problem kind="Problem" rule="Problem1">Intent:</Problem> reuse</asapDoc>

Text outside elements is the document text verbatim (escaped), so offsets
can be recovered exactly by :func:`parse_inline_xml`.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import List, Optional, Sequence

from .document import DEFAULT_SET, Annotation, Document, check_nestable
from .errors import MalformedInput

ROOT_TAG = "asapDoc"
ALL = None

_TEXT_ESCAPES = str.maketrans({
    "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;",
    # a raw CR would be folded into LF by any conforming parser
    "\r": "&#13;",
})
_ATTR_ESCAPES = str.maketrans({
    "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;",
    # attribute-value normalisation turns raw whitespace controls into spaces
    "\n": "&#10;", "\r": "&#13;", "\t": "&#9;",
})


def escape_text(s: str) -> str:
    return s.translate(_TEXT_ESCAPES)


def escape_attr(s: str) -> str:
    return s.translate(_ATTR_ESCAPES)


def _open_tag(ann: Annotation, empty=False) -> str:
    attrs = "".join(f' {k}="{escape_attr(v)}"' for k, v in sorted(ann.features.items()))
    return f"<{ann.type_name}{attrs}{'/' if empty else ''}>"


def select(doc: Document, set_name: str = DEFAULT_SET,
           types: Optional[Sequence[str]] = ALL) -> List[Annotation]:
    aset = doc.sets.get(set_name)
    if aset is None:
        return []
    if types is ALL:
        return list(aset)
    return aset.of_type(*types)


def render_body(text: str, annotations: Sequence[Annotation]) -> str:
    check_nestable(annotations)
    # outer elements first at equal starts; zero-length elements after longer ones
    ordered = sorted(annotations, key=lambda a: (a.start, -a.end, a.id))
    out: List[str] = []
    stack: List[Annotation] = []
    pos = 0

    def emit_to(offset):
        nonlocal pos
        if offset > pos:
            out.append(escape_text(text[pos:offset]))
            pos = offset

    for ann in ordered:
        while stack and stack[-1].end <= ann.start:
            top = stack.pop()
            emit_to(top.end)
            out.append(f"</{top.type_name}>")
        emit_to(ann.start)
        if ann.start == ann.end:
            out.append(_open_tag(ann, empty=True))
        else:
            out.append(_open_tag(ann))
            stack.append(ann)
    while stack:
        top = stack.pop()
        emit_to(top.end)
        out.append(f"</{top.type_name}>")
    emit_to(len(text))
    return "".join(out)


def serialize_inline_xml(doc: Document, set_name: str = DEFAULT_SET,
                         types: Optional[Sequence[str]] = ALL) -> bytes:
    """Render the document text with the selected annotations inline.

    Raises OverlapNotNestable if two selected annotations cross.
    """
    return serialize_annotations(doc, select(doc, set_name, types))


def serialize_annotations(doc: Document, annotations: Sequence[Annotation]) -> bytes:
    body = render_body(doc.text, annotations)
    head = f'<?xml version="1.0" encoding="UTF-8"?>\n<{ROOT_TAG} name="{escape_attr(doc.source_name)}">'
    return (head + body + f"</{ROOT_TAG}>\n").encode("utf-8")


def parse_inline_xml(data: bytes, source_name: Optional[str] = None,
                     set_name: str = DEFAULT_SET) -> Document:
    """Rebuild a document from inline XML.

    Annotation ids are reassigned in document (pre-)order.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise MalformedInput(str(exc), line=line, column=col, source=source_name) from None
    if root.tag != ROOT_TAG:
        raise MalformedInput(f"root element must be <{ROOT_TAG}>, got <{root.tag}>",
                             line=1, column=0, source=source_name)

    parts: List[str] = []
    length = 0
    found = []  # (type, start, end, features) in pre-order

    def walk(el):
        nonlocal length
        if el.text:
            parts.append(el.text)
            length += len(el.text)
        for child in el:
            slot = len(found)
            found.append(None)
            start = length
            walk(child)
            found[slot] = (child.tag, start, length, dict(child.attrib))
            if child.tail:
                parts.append(child.tail)
                length += len(child.tail)

    walk(root)
    name = root.get("name")
    if name is None:
        name = source_name or ""
    doc = Document(name, "".join(parts))
    for type_name, start, end, feats in found:
        doc.add(type_name, start, end, feats, set_name=set_name)
    return doc
