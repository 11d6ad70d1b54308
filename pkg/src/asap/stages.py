"""Tokeniser and sentence splitter.

Both stages write into the default annotation set.  The tokeniser emits
``Token`` annotations (kind word/number/punctuation/symbol) and
``SpaceToken`` annotations (kind space) that together partition the text.
"""
from __future__ import annotations

import re
import unicodedata
from typing import List

from .document import DEFAULT_SET, Document
from .errors import AlreadyTokenized, MissingTokens

TOKEN = "Token"
SPACE_TOKEN = "SpaceToken"
SENTENCE = "Sentence"

WORD, NUMBER, PUNCTUATION, SYMBOL, SPACE = "word", "number", "punctuation", "symbol", "space"

TERMINATORS = frozenset(".!?")
CLOSERS = frozenset("\"')]}»’”")
ABBREVIATIONS = frozenset({
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "al.", "fig.", "figs.", "no.",
    "resp.", "approx.", "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "sec.",
    "ch.", "vol.", "pp.", "p.", "ed.", "eds.", "ref.", "viz.",
})
_LINE_BREAK = re.compile(r"\r\n|\r|\n|\u2028|\u2029")


def char_class(ch: str) -> str:
    if ch.isspace():
        return SPACE
    cat = unicodedata.category(ch)
    if cat[0] == "L":
        return WORD
    if cat == "Nd":
        return NUMBER
    if cat[0] == "P":
        return PUNCTUATION
    return SYMBOL


def orthography(word: str) -> str:
    if word.isupper():
        return "allCaps" if len(word) > 1 else "upperInitial"
    if word[0].isupper() and not any(c.isupper() for c in word[1:]):
        return "upperInitial"
    if not any(c.isupper() for c in word):
        return "lowercase"
    return "mixedCaps"


def split_tokens(text: str):
    """Yield ``(start, end, kind)`` triples partitioning ``text``."""
    i, n = 0, len(text)
    while i < n:
        kind = char_class(text[i])
        j = i + 1
        if kind in (WORD, NUMBER, SPACE):
            while j < n:
                nxt = char_class(text[j])
                # combining marks continue a word
                if nxt == kind or (kind == WORD and unicodedata.category(text[j])[0] == "M"):
                    j += 1
                else:
                    break
        yield i, j, kind
        i = j


def tokenize(doc: Document) -> int:
    """Add Token and SpaceToken annotations; return how many were added."""
    aset = doc.annotation_set(DEFAULT_SET)
    if aset.of_type(TOKEN, SPACE_TOKEN):
        raise AlreadyTokenized(doc.source_name)
    count = 0
    for start, end, kind in split_tokens(doc.text):
        s = doc.text[start:end]
        feats = {"string": s, "kind": kind, "length": str(end - start)}
        if kind == WORD:
            feats["orth"] = orthography(s)
        doc.add(SPACE_TOKEN if kind == SPACE else TOKEN, start, end, feats)
        count += 1
    return count


def _is_blank_line(space: str) -> bool:
    return len(_LINE_BREAK.findall(space)) >= 2


def _ends_with_abbreviation(text: str, end: int) -> bool:
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:end].lstrip("\"'([{«‘“").lower()
    return word in ABBREVIATIONS


def split_sentences(doc: Document) -> int:
    """Add non-overlapping Sentence annotations over the non-space text."""
    aset = doc.annotation_set(DEFAULT_SET)
    tokens = aset.of_type(TOKEN, SPACE_TOKEN)
    if not tokens:
        if doc.text:
            raise MissingTokens(doc.source_name)
        return 0
    text = doc.text
    spans: List[tuple] = []
    start = None
    last_end = None
    pending = False  # a terminator was seen; closers may still follow

    for tok in tokens:
        if tok.type_name == SPACE_TOKEN:
            if start is not None and (pending or _is_blank_line(text[tok.start:tok.end])):
                spans.append((start, last_end))
                start = None
            pending = False
            continue
        s = text[tok.start:tok.end]
        if start is None:
            start = tok.start
        last_end = tok.end
        if s in TERMINATORS:
            pending = not _ends_with_abbreviation(text, tok.end)
        elif not (pending and s in CLOSERS):
            pending = False
    if start is not None:
        spans.append((start, last_end))
    for s, e in spans:
        doc.add(SENTENCE, s, e)
    return len(spans)
