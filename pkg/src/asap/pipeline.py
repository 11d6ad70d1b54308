"""The analysis pipeline: tokenise, split, look up, transduce."""
from __future__ import annotations

from typing import Optional, Sequence

from .document import Document
from .gazetteer import Gazetteer, gazetteer_lookup
from .jape import Phase, run_phase
from .stages import split_sentences, tokenize


def run_pipeline(doc: Document, gaz: Optional[Gazetteer], phases: Sequence[Phase]) -> Document:
    """Run every stage over ``doc`` in order and return it.

    Phases run in list order, so later phases see what earlier ones added.
    """
    tokenize(doc)
    split_sentences(doc)
    if gaz is not None:
        gazetteer_lookup(doc, gaz)
    for phase in phases:
        run_phase(doc, phase)
    return doc
