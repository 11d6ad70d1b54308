"""Terminology lists and longest-match lookup over tokens.

An index file (``lists.def``) names one list per line::

    solution.lst:solution
    problem.lst:problem:heading
    names.lst:name::cs

i.e. ``file:majorType[:minorType[:flags]]``; the only flag is ``cs``
(case-sensitive matching).  List files hold one entry per line.

Entries are tokenised with the document tokeniser, so an entry matches a
run of Tokens.  A space inside an entry matches exactly one SpaceToken
(which must not contain a blank line); everything else must be adjacent.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .document import DEFAULT_SET, Document
from .errors import EmptyListWarning, IndexNotFound, ListNotFound
from .stages import SPACE, SPACE_TOKEN, TOKEN, _is_blank_line, split_tokens

LOOKUP = "Lookup"
ADJACENT, SPACED = "", " "

_END = object()


@dataclass
class GazetteerList:
    file_name: str
    major_type: str
    minor_type: Optional[str] = None
    case_sensitive: bool = False
    entries: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.entries:
            raise ValueError(f"gazetteer list {self.file_name} has no entries")
        for e in self.entries:
            if not e.strip():
                raise ValueError(f"blank entry in {self.file_name}")

    def features(self) -> Dict[str, str]:
        feats = {"majorType": self.major_type}
        if self.minor_type:
            feats["minorType"] = self.minor_type
        feats["list"] = self.file_name
        return feats


def entry_key(entry: str, fold: bool) -> Tuple[Tuple[str, str], ...]:
    """Token-level key for a phrase: ``((gap, form), ...)``."""
    key = []
    gap = ADJACENT
    for start, end, kind in split_tokens(entry.strip()):
        if kind == SPACE:
            gap = SPACED
            continue
        form = entry.strip()[start:end]
        key.append((gap, form.casefold() if fold else form))
        gap = ADJACENT
    return tuple(key)


class _Trie:
    def __init__(self):
        self.root: dict = {}

    def insert(self, key, value):
        node = self.root
        for part in key:
            node = node.setdefault(part, {})
        node.setdefault(_END, []).append(value)

    def __contains__(self, key):
        node = self.root
        for part in key:
            node = node.get(part)
            if node is None:
                return False
        return _END in node


class Gazetteer:
    """Compiled, read-only collection of gazetteer lists."""

    def __init__(self, lists: Sequence[GazetteerList]):
        self.lists: List[GazetteerList] = list(lists)
        self._folded = _Trie()
        self._exact = _Trie()
        self.index: Dict[tuple, List[Tuple[str, Optional[str], str]]] = {}
        for li, gl in enumerate(self.lists):
            trie = self._exact if gl.case_sensitive else self._folded
            for entry in gl.entries:
                key = entry_key(entry, fold=not gl.case_sensitive)
                trie.insert(key, li)
                self.index.setdefault((gl.case_sensitive, key), []).append(
                    (gl.major_type, gl.minor_type, gl.file_name))

    def __len__(self):
        return len(self.lists)

    def list_named(self, file_name: str) -> GazetteerList:
        for gl in self.lists:
            if gl.file_name == file_name:
                return gl
        raise KeyError(file_name)

    def matches(self, text: str, tokens) -> List[Tuple[int, int, int]]:
        """Leftmost-longest, non-overlapping matches per list.

        Returns ``(start, end, list_index)`` triples in start order.
        """
        seq = [(t.start, t.end, t.type_name == SPACE_TOKEN) for t in tokens]
        n = len(seq)
        found = []
        # per list, no match may start inside an earlier (longer) match
        blocked: Dict[int, int] = {}
        for i, (start, _, is_space) in enumerate(seq):
            if is_space:
                continue
            best: Dict[int, int] = {}
            for trie, fold in ((self._folded, True), (self._exact, False)):
                self._walk(text, seq, i, trie.root, ADJACENT, fold, best, n)
            for li in sorted(best):
                if start < blocked.get(li, 0):
                    continue
                found.append((start, best[li], li))
                blocked[li] = best[li]
        return found

    def _walk(self, text, seq, i, node, gap, fold, best, n):
        # iterative descent: each step consumes one non-space token
        while True:
            s, e, _ = seq[i]
            form = text[s:e]
            node = node.get((gap, form.casefold() if fold else form))
            if node is None:
                return
            for li in node.get(_END, ()):
                if e > best.get(li, -1):
                    best[li] = e
            j = i + 1
            if j >= n:
                return
            if seq[j][2]:
                if j + 1 >= n or _is_blank_line(text[seq[j][0]:seq[j][1]]):
                    return
                gap, i = SPACED, j + 1
            else:
                gap, i = ADJACENT, j


def read_list(path: Path) -> List[str]:
    entries = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return entries


def load_gazetteer(index_path) -> Gazetteer:
    index_path = Path(index_path)
    if not index_path.is_file():
        raise IndexNotFound(str(index_path))
    lists = []
    for raw in index_path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(":")
        file_name = parts[0].strip()
        major = parts[1].strip() if len(parts) > 1 else ""
        minor = parts[2].strip() if len(parts) > 2 and parts[2].strip() else None
        flags = {f.strip() for f in parts[3].split(",")} if len(parts) > 3 else set()
        path = index_path.parent / file_name
        if not path.is_file():
            raise ListNotFound(file_name)
        entries = read_list(path)
        if not entries:
            warnings.warn(f"gazetteer list {file_name} is empty", EmptyListWarning, stacklevel=2)
            continue
        lists.append(GazetteerList(file_name, major or Path(file_name).stem, minor,
                                   "cs" in flags, entries))
    return Gazetteer(lists)


def gazetteer_lookup(doc: Document, gaz: Gazetteer) -> int:
    """Annotate list-entry occurrences as Lookup annotations."""
    tokens = doc.annotation_set(DEFAULT_SET).of_type(TOKEN, SPACE_TOKEN)
    count = 0
    for start, end, li in gaz.matches(doc.text, tokens):
        doc.add(LOOKUP, start, end, gaz.lists[li].features())
        count += 1
    return count
