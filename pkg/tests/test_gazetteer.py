from __future__ import annotations

import re
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from asap import create_document
from asap.config import resources_root
from asap.errors import EmptyListWarning, IndexNotFound, ListNotFound
from asap.gazetteer import LOOKUP, Gazetteer, GazetteerList, gazetteer_lookup, load_gazetteer
from asap.stages import tokenize

SOLUTION_TERMS = ["Activity", "Formal solution", "Intent", "process", "Rule", "Sample execution",
                  "Semi-formal solution", "Solution", "Solution modèle", "Solution démarche"]


@pytest.fixture(scope="module")
def bundled():
    return load_gazetteer(resources_root() / "lists" / "lists.def")


def lookups(text, gaz):
    doc = create_document("d", text)
    tokenize(doc)
    gazetteer_lookup(doc, gaz)
    return [(doc.covered_text(a), a.features) for a in doc.annotation_set().of_type(LOOKUP)]


def test_bundled_lists(bundled):
    assert len(bundled) == 21
    sol = bundled.list_named("solution.lst")
    assert sol.major_type == "solution"
    assert sol.entries == SOLUTION_TERMS


def test_longest_match_wins(bundled):
    got = [(t, f["majorType"]) for t, f in lookups("Semi-formal solution: draw it", bundled)
           if f["majorType"] == "solution"]
    assert got == [("Semi-formal solution", "solution")]


def test_case_insensitive_by_default(bundled):
    texts = [t for t, f in lookups("SOLUTION and solution", bundled) if f["majorType"] == "solution"]
    assert texts == ["SOLUTION", "solution"]


def test_token_anchoring(bundled):
    assert [t for t, f in lookups("Many solutions exist", bundled) if f["majorType"] == "solution"] == []


def test_space_gap_spans_one_line_break_not_a_blank_line(bundled):
    sol = [t for t, f in lookups("Formal\nsolution", bundled) if f["majorType"] == "solution"]
    assert sol == ["Formal\nsolution"]
    sol = [t for t, f in lookups("Formal\n\nsolution", bundled) if f["majorType"] == "solution"]
    assert sol == ["solution"]


def test_lookup_features():
    gaz = Gazetteer([GazetteerList("x.lst", "problem", "heading", False, ["Intent"])])
    assert lookups("Intent", gaz) == [("Intent", {"majorType": "problem", "minorType": "heading",
                                                  "list": "x.lst"})]


def test_case_sensitive_flag(tmp_path):
    (tmp_path / "n.lst").write_text("UML\n")
    (tmp_path / "lists.def").write_text("n.lst:notation::cs\n")
    gaz = load_gazetteer(tmp_path / "lists.def")
    assert [t for t, _ in lookups("uml UML", gaz)] == ["UML"]


def test_missing_index(tmp_path):
    with pytest.raises(IndexNotFound):
        load_gazetteer(tmp_path / "lists.def")


def test_missing_list(tmp_path):
    (tmp_path / "lists.def").write_text("gone.lst:x\n")
    with pytest.raises(ListNotFound):
        load_gazetteer(tmp_path / "lists.def")


def test_empty_list_skipped(tmp_path):
    (tmp_path / "e.lst").write_text("# nothing\n")
    (tmp_path / "f.lst").write_text("foo\n")
    (tmp_path / "lists.def").write_text("e.lst:empty\nf.lst:full\n")
    with pytest.warns(EmptyListWarning):
        gaz = load_gazetteer(tmp_path / "lists.def")
    assert [gl.major_type for gl in gaz.lists] == ["full"]


def test_each_list_reports_its_own_match(bundled):
    # "Intent" sits in both the problem and the solution list
    majors = sorted(f["majorType"] for t, f in lookups("Intent", bundled))
    assert majors == ["problem", "solution"]


# oracle: per list, scan left to right and take the longest regex match
# among the list's entries at every admissible token start

WORDS = ["solution", "Solution", "formal", "Semi", "-", "process", "processes", "rule", "Rule"]
SEPS = ["", " ", "  ", "\n", "\n\n", " \t"]
TOY_LISTS = [
    ("a.lst", ["solution", "Semi-formal solution", "formal solution", "process rule"]),
    ("b.lst", ["rule", "Solution", "solution solution"]),
]
_GAP = r"[ \t]*(?:\n[ \t]*)?"


def entry_regex(entry):
    pieces = re.findall(r"[A-Za-z]+|[^A-Za-z\s]|\s+", entry)
    out = []
    for p in pieces:
        out.append(r"(?=[ \t\n])" + _GAP if p.isspace() else re.escape(p))
    return re.compile("".join(out) + r"(?![A-Za-z])", re.IGNORECASE)


def oracle(text):
    found = set()
    for li, (_, entries) in enumerate(TOY_LISTS):
        regexes = [entry_regex(e) for e in entries]
        blocked = 0
        for i in range(len(text)):
            if i < blocked or text[i].isspace() or (i and text[i - 1].isalpha() and text[i].isalpha()):
                continue
            ends = [m.end() for r in regexes if (m := r.match(text, i))]
            if ends:
                found.add((i, max(ends), li))
                blocked = max(ends)
    return found


@settings(max_examples=300)
@given(st.lists(st.tuples(st.sampled_from(WORDS), st.sampled_from(SEPS)), max_size=12))
def test_matches_agree_with_regex_oracle(parts):
    text = "".join(w + s for w, s in parts)
    gaz = Gazetteer([GazetteerList(name, "m", None, False, list(entries)) for name, entries in TOY_LISTS])
    doc = create_document("d", text)
    tokenize(doc)
    gazetteer_lookup(doc, gaz)
    index = {name: i for i, (name, _) in enumerate(TOY_LISTS)}
    got = {(a.start, a.end, index[a.features["list"]]) for a in doc.annotation_set().of_type(LOOKUP)}
    assert got == oracle(text)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.sampled_from(WORDS), st.sampled_from(SEPS)), max_size=12))
def test_lookup_text_is_an_entry_modulo_whitespace(parts):
    text = "".join(w + s for w, s in parts)
    gaz = Gazetteer([GazetteerList(name, "m", None, False, list(entries)) for name, entries in TOY_LISTS])
    entries = {" ".join(e.split()).casefold() for _, es in TOY_LISTS for e in es}
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for covered, _ in lookups(text, gaz):
            assert " ".join(covered.split()).casefold() in entries
