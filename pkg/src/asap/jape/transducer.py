"""Execution of parsed phases over a document.

A phase sees the annotations of its input types as a sequence ordered by
``(start, id)``.  After an annotation is consumed, matching continues with
the annotations at the nearest start offset at or after its end, so rules
need not mention anything that is not in the phase's input.

Patterns are matched by breadth-wise state expansion: every reachable
end state of a rule is enumerated (states are deduplicated by position),
and the control style picks among them.  This finds the true longest
match at each position, even where a greedy quantifier would otherwise
have to give back input.
"""
from __future__ import annotations

import warnings
from typing import Dict, List, NamedTuple, Optional, Tuple

from ..document import DEFAULT_SET, Document
from ..errors import MissingInputTypeWarning
from .model import (
    ONE, OPTIONAL, PLUS, STAR, Alternation, Constraint, Group, Phase, Rule,
    Sequence,
)


class State(NamedTuple):
    cursor: int
    last_end: int          # -1 until something is consumed
    consumed: Tuple[int, ...]
    bindings: Tuple[Tuple[str, int, int], ...]

    @property
    def key(self):
        return (self.cursor, self.last_end)

    def bind(self, label, start, end) -> "State":
        merged = []
        for name, s, e in self.bindings:
            if name == label:
                start, end = min(start, s), max(end, e)
            else:
                merged.append((name, s, e))
        merged.append((label, start, end))
        return self._replace(bindings=tuple(sorted(merged)))

    def span_of(self, label) -> Optional[Tuple[int, int]]:
        for name, s, e in self.bindings:
            if name == label:
                return s, e
        return None


def _dedup(states):
    seen = set()
    out = []
    for st in states:
        if st.key not in seen:
            seen.add(st.key)
            out.append(st)
    return out


class Matcher:
    def __init__(self, items):
        self.items = items
        n = self.n = len(items)
        starts = [a.start for a in items]
        # run_end[j]: first index after the run sharing items[j].start
        self.run_end = [0] * n
        for j in range(n - 1, -1, -1):
            self.run_end[j] = self.run_end[j + 1] if j + 1 < n and starts[j + 1] == starts[j] else j + 1
        # nxt[k]: first index after k whose start is at or past items[k].end
        self.nxt = [0] * n
        for k in range(n):
            j = k + 1
            end = items[k].end
            while j < n and starts[j] < end:
                j += 1
            self.nxt[k] = j

    def initial(self, pos) -> State:
        return State(pos, -1, (), ())

    def match(self, elem, states: List[State]) -> List[State]:
        if isinstance(elem, Constraint):
            out = []
            for st in states:
                if st.cursor >= self.n:
                    continue
                for c in range(st.cursor, self.run_end[st.cursor]):
                    ann = self.items[c]
                    if elem.accepts(ann):
                        out.append(State(self.nxt[c], ann.end, st.consumed + (c,), st.bindings))
            return _dedup(out)
        if isinstance(elem, Sequence):
            for e in elem.elements:
                states = self.match(e, states)
                if not states:
                    break
            return states
        if isinstance(elem, Alternation):
            out = []
            for st in states:
                for branch in elem.branches:
                    out.extend(self.match(branch, [st]))
            return _dedup(out)
        if isinstance(elem, Group):
            out = []
            for st in states:
                for res in self._repeat(elem, st):
                    if elem.binding:
                        taken = res.consumed[len(st.consumed):]
                        if taken:
                            res = res.bind(elem.binding, self.items[taken[0]].start,
                                           self.items[taken[-1]].end)
                    out.append(res)
            return _dedup(out)
        raise TypeError(f"not a pattern element: {elem!r}")

    def _repeat(self, group: Group, st: State) -> List[State]:
        q = group.quantifier
        if q == ONE:
            return self.match(group.element, [st])
        if q == OPTIONAL:
            return self.match(group.element, [st]) + [st]
        layers = [[st]]
        seen = {st.key}
        while True:
            nxt = [s for s in self.match(group.element, layers[-1]) if s.key not in seen]
            if not nxt:
                break
            seen.update(s.key for s in nxt)
            layers.append(nxt)
        # more repetitions first
        ordered = [s for layer in reversed(layers[1:]) for s in layer]
        if q == STAR:
            ordered.append(st)
        elif q != PLUS:
            raise ValueError(f"unknown quantifier {q!r}")
        return ordered

    def matches_at(self, rule: Rule, pos: int) -> List[State]:
        """Every distinct non-empty match of ``rule`` starting at ``pos``."""
        return [s for s in self.match(rule.pattern, [self.initial(pos)]) if s.consumed]

    def longest_at(self, rule: Rule, pos: int) -> Optional[State]:
        best = None
        for s in self.matches_at(rule, pos):
            if best is None or s.last_end > best.last_end:
                best = s
        return best


def _fire(doc: Document, rule: Rule, state: State, set_name: str) -> int:
    added = 0
    for action in rule.actions:
        span = state.span_of(action.label)
        if span is None:
            continue
        doc.add(action.new_type, span[0], span[1], action.features(), set_name=set_name)
        added += 1
    return added


def run_phase(doc: Document, phase: Phase, set_name: str = DEFAULT_SET) -> int:
    """Apply one phase to ``doc``; return the number of annotations added."""
    aset = doc.annotation_set(set_name)
    wanted = set(phase.input_types)
    items = [a for a in aset if a.type_name in wanted]
    if doc.text:
        present = {a.type_name for a in items}
        missing = [t for t in phase.input_types if t not in present]
        if missing:
            warnings.warn(f"phase {phase.name}: no {', '.join(missing)} annotations",
                          MissingInputTypeWarning, stacklevel=2)
    m = Matcher(items)
    added = 0
    pos = 0
    control = phase.control
    while pos < m.n:
        if control in ("all", "brill"):
            for rule in phase.rules:
                st = m.longest_at(rule, pos)
                if st is not None:
                    added += _fire(doc, rule, st, set_name)
            pos += 1
            continue

        chosen: Optional[Tuple[Rule, State]] = None
        for rule in phase.rules:
            st = m.longest_at(rule, pos)
            if st is None:
                continue
            if control == "first":
                chosen = (rule, st)
                break
            if chosen is None or (st.last_end, rule.priority) > (chosen[1].last_end, chosen[0].priority):
                chosen = (rule, st)
        if chosen is None:
            pos += 1
            continue
        added += _fire(doc, chosen[0], chosen[1], set_name)
        if control == "once":
            break
        pos = chosen[1].cursor
    return added


def run_phases(doc: Document, phases, set_name: str = DEFAULT_SET) -> Dict[str, int]:
    return {p.name: run_phase(doc, p, set_name) for p in phases}
