from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from asap import (
    Corpus, Document, add_annotation, annotations_of_type, create_document,
    parse_inline_xml, serialize_inline_xml, span_relation,
)
from asap.document import COEXTENSIVE, DISJOINT, OVERLAPPING, nestable_subset
from asap.errors import (
    InvertedSpan, MalformedInput, OffsetOutOfBounds, OverlapNotNestable,
)


def test_add_and_query():
    doc = create_document("d", "Intent: reuse components")
    a = add_annotation(doc, "", "Problem", 0, 7, {"kind": "Problem"})
    b = add_annotation(doc, "", "Token", 0, 6)
    assert a != b
    probs = annotations_of_type(doc, "", "Problem")
    assert [(p.start, p.end, p.features) for p in probs] == [(0, 7, {"kind": "Problem"})]
    assert doc.covered_text(probs[0]) == "Intent:"
    assert annotations_of_type(doc, "missing", "Problem") == []


def test_feature_values_are_strings():
    doc = create_document("d", "abc")
    add_annotation(doc, "", "T", 0, 1, {"length": 1})
    assert doc.annotation_set().of_type("T")[0].features == {"length": "1"}


@pytest.mark.parametrize("start,end,exc", [
    (-1, 2, OffsetOutOfBounds), (0, 4, OffsetOutOfBounds), (5, 2, OffsetOutOfBounds),
    (2, 1, InvertedSpan),
])
def test_bad_offsets(start, end, exc):
    doc = create_document("d", "abc")
    with pytest.raises(exc):
        add_annotation(doc, "", "T", start, end)
    assert len(doc.annotation_set()) == 0


def test_zero_length_allowed():
    doc = create_document("d", "abc")
    add_annotation(doc, "", "Mark", 3, 3)
    assert doc.covered_text(doc.annotation_set().of_type("Mark")[0]) == ""


def test_span_relation_examples():
    doc = create_document("d", "0123456789")
    ids = [add_annotation(doc, "", "T", s, e) for s, e in [(0, 5), (0, 5), (3, 8), (5, 9)]]
    a, b, c, d = (doc.annotation_set().get(i) for i in ids)
    assert span_relation(a, b) == COEXTENSIVE
    assert span_relation(a, c) == OVERLAPPING
    assert span_relation(a, d) == DISJOINT  # touching spans do not overlap


def test_corpus_rejects_duplicate_names():
    corpus = Corpus([Document("a", ""), Document("b", "")])
    with pytest.raises(ValueError):
        corpus.append(Document("a", "x"))
    assert len(corpus) == 2


def test_inline_xml_example():
    doc = create_document("p", 'Intent: a < b & "c"')
    add_annotation(doc, "", "Problem", 0, 7, {"kind": "Problem", "rule": "Problem1"})
    xml = serialize_inline_xml(doc)
    assert xml == (b'<?xml version="1.0" encoding="UTF-8"?>\n'
                   b'<asapDoc name="p"><Problem kind="Problem" rule="Problem1">Intent:</Problem>'
                   b' a &lt; b &amp; &quot;c&quot;</asapDoc>\n')
    back = parse_inline_xml(xml)
    assert back.text == doc.text
    assert [(a.type_name, a.start, a.end, a.features) for a in back.annotation_set()] == \
        [("Problem", 0, 7, {"kind": "Problem", "rule": "Problem1"})]


def test_crossing_spans_refuse_to_serialize():
    doc = create_document("d", "abcdef")
    add_annotation(doc, "", "A", 0, 4)
    add_annotation(doc, "", "B", 2, 6)
    with pytest.raises(OverlapNotNestable):
        serialize_inline_xml(doc)
    kept, dropped = nestable_subset(doc.annotation_set(), keep_first=("B",))
    assert [a.type_name for a in kept] == ["B"] and [a.type_name for a in dropped] == ["A"]


def test_malformed_xml_reports_position():
    with pytest.raises(MalformedInput) as err:
        parse_inline_xml(b"<asapDoc>\n<A>x</B></asapDoc>")
    assert err.value.line == 2


def test_wrong_root_rejected():
    with pytest.raises(MalformedInput):
        parse_inline_xml(b"<other>x</other>")


# properties

TEXT = st.text(alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
               max_size=40).filter(lambda s: all(c in "\t\n\r" or ord(c) >= 0x20 for c in s))


@st.composite
def docs_with_spans(draw):
    text = draw(TEXT)
    n = len(text)
    spans = draw(st.lists(st.tuples(st.integers(0, n), st.integers(0, n)), max_size=12))
    return text, [(min(a, b), max(a, b)) for a, b in spans]


@given(docs_with_spans())
def test_ids_unique_and_set_ordered(case):
    text, spans = case
    doc = create_document("d", text)
    ids = [add_annotation(doc, "", "T", s, e) for s, e in spans]
    assert len(set(ids)) == len(ids)
    keys = [a.sort_key() for a in doc.annotation_set()]
    assert keys == sorted(keys)


@given(TEXT, st.integers(-5, 50), st.integers(-5, 50))
def test_offsets_either_valid_or_rejected(text, s, e):
    doc = create_document("d", text)
    try:
        add_annotation(doc, "", "T", s, e)
    except (OffsetOutOfBounds, InvertedSpan):
        assert len(doc.annotation_set()) == 0
    else:
        assert 0 <= s <= e <= len(text)


@given(docs_with_spans())
def test_span_relation_symmetric(case):
    text, spans = case
    doc = create_document("d", text)
    anns = [doc.annotation_set().get(add_annotation(doc, "", "T", s, e)) for s, e in spans]
    for a in anns:
        for b in anns:
            assert span_relation(a, b) == span_relation(b, a)


@settings(max_examples=200)
@given(docs_with_spans(), st.dictionaries(st.sampled_from(["kind", "rule", "x"]), TEXT, max_size=2))
def test_inline_xml_round_trip(case, feats):
    text, spans = case
    doc = create_document("name & <co>", text)
    for i, (s, e) in enumerate(spans):
        add_annotation(doc, "", f"T{i % 3}", s, e, feats)
    kept, _ = nestable_subset(doc.annotation_set())
    keep = {a.id for a in kept}
    clean = create_document(doc.source_name, text)
    for a in doc.annotation_set():
        if a.id in keep:
            add_annotation(clean, "", a.type_name, a.start, a.end, a.features)
    back = parse_inline_xml(serialize_inline_xml(clean))
    assert back.text == text and back.source_name == clean.source_name

    def view(d):
        return sorted((a.type_name, a.start, a.end, tuple(sorted(a.features.items())))
                      for a in d.annotation_set())
    assert view(back) == view(clean)
