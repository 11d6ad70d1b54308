"""Parser for the JAPE subset.

::

    Phase: Problem
    Input: Token
    Options: control = appelt

    Rule: Problem1
    Priority: 10
    (
      ({Token.string == "Intent"} | {Token.string == "INTENT"})
      ({Token.string == ":"})+
    ):Problem
    -->
    :Problem.Problem = {kind = "Problem", rule = "Problem1"}

A file may hold several phases.  A multiphase index instead starts with
``MultiPhase: <name>`` followed by ``Phases:`` and the phase file names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

from ..errors import RuleSyntaxError, UnboundLabel, UnknownControl
from .model import (
    CONTROL_ALIASES, CONTROLS, ONE, QUANTIFIER_SYMBOLS, Action, Alternation,
    Constraint, Group, Phase, Predicate, Rule, Sequence, labels_in,
)

KEYWORDS = ("Phase", "Input", "Options", "Rule", "Priority", "MultiPhase", "Phases")

_LEXEME = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<arrow>-->)
  | (?P<number>-?\d+(?![\w]))
  | (?P<op>==|!=)
  | (?P<ident>[^\W\d]\w*)
  | (?P<punct>[{}()|?*+:.,=])
""", re.VERBOSE | re.DOTALL)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Tok:
    kind: str
    value: str
    line: int
    col: int


def lex(source: str) -> List[Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _LEXEME.match(source, pos)
        if m is None:
            raise RuleSyntaxError(line, pos - line_start + 1, "a token", source[pos])
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            value = text
            if kind == "string":
                value = re.sub(r"\\(.)", lambda e: _ESCAPES.get(e.group(1), e.group(1)), text[1:-1])
            toks.append(Tok(kind, value, line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.toks = lex(source)
        self.i = 0

    # token helpers

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind, value=None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def at_keyword(self, *names) -> bool:
        t = self.tok
        return (t.kind == "ident" and t.value in (names or KEYWORDS)
                and self.peek().kind == "punct" and self.peek().value == ":")

    def fail(self, expected):
        t = self.tok
        raise RuleSyntaxError(t.line, t.col, expected, t.value if t.kind != "eof" else "end of input")

    def expect(self, kind, value=None) -> Tok:
        if not self.at(kind, value):
            self.fail(repr(value) if value else kind)
        t = self.tok
        self.i += 1
        return t

    def keyword(self, name):
        if not self.at_keyword(name):
            self.fail(f"'{name}:'")
        self.i += 2

    def name(self) -> str:
        if self.tok.kind in ("ident", "number"):
            t = self.tok
            self.i += 1
            return t.value
        self.fail("a name")

    def value(self) -> str:
        if self.tok.kind in ("string", "ident", "number"):
            t = self.tok
            self.i += 1
            return t.value
        self.fail("a value")

    # grammar

    def multiphase(self) -> Tuple[str, List[str]]:
        self.keyword("MultiPhase")
        name = self.name()
        self.keyword("Phases")
        files = []
        while not self.at("eof"):
            parts = [self.name()]
            while self.at("punct", "."):
                self.i += 1
                parts.append(self.name())
            files.append(".".join(parts))
        return name, files

    def phases(self) -> List[Phase]:
        out = []
        while not self.at("eof"):
            out.append(self.phase())
        return out

    def phase(self) -> Phase:
        self.keyword("Phase")
        name = self.name()
        self.keyword("Input")
        inputs = []
        while self.tok.kind == "ident" and not self.at_keyword():
            inputs.append(self.name())
        if not inputs:
            self.fail("at least one input type")
        options = {}
        if self.at_keyword("Options"):
            self.i += 2
            while True:
                key = self.name()
                self.expect("punct", "=")
                options[key] = self.value()
                if not self.at("punct", ","):
                    break
                self.i += 1
        control = options.get("control", "appelt")
        control = CONTROL_ALIASES.get(control, control)
        if control not in CONTROLS:
            raise UnknownControl(options["control"])
        rules = []
        while self.at_keyword("Rule"):
            rules.append(self.rule())
        if not rules:
            self.fail("'Rule:'")
        return Phase(name, tuple(inputs), tuple(rules), control, options)

    def rule(self) -> Rule:
        line = self.tok.line
        self.keyword("Rule")
        name = self.name()
        priority = -1
        if self.at_keyword("Priority"):
            self.i += 2
            priority = int(self.expect("number").value)
        pattern = self.alternation()
        self.expect("arrow")
        actions = [self.action()]
        while self.at("punct", ","):
            self.i += 1
            actions.append(self.action())
        bound = labels_in(pattern)
        for a in actions:
            if a.label not in bound:
                raise UnboundLabel(name, a.label)
        return Rule(name, pattern, tuple(actions), priority, line)

    def sequence(self):
        elements = []
        while not (self.at("arrow") or (self.tok.kind == "punct" and self.tok.value in ("|", ")"))
                   or self.at("eof")):
            elements.append(self.element())
        if not elements:
            self.fail("a pattern element")
        return elements[0] if len(elements) == 1 else Sequence(tuple(elements))

    def alternation(self):
        branches = [self.sequence()]
        while self.at("punct", "|"):
            self.i += 1
            branches.append(self.sequence())
        return branches[0] if len(branches) == 1 else Alternation(tuple(branches))

    def element(self):
        if self.at("punct", "{"):
            inner = self.constraint()
            parenthesised = False
        elif self.at("punct", "("):
            self.i += 1
            inner = self.alternation()
            self.expect("punct", ")")
            parenthesised = True
        else:
            self.fail("'{' or '('")
        quant = ONE
        if self.tok.kind == "punct" and self.tok.value in QUANTIFIER_SYMBOLS:
            quant = QUANTIFIER_SYMBOLS[self.tok.value]
            self.i += 1
        binding = None
        if parenthesised and self.at("punct", ":") and self.peek().kind == "ident":
            self.i += 1
            binding = self.name()
        if quant == ONE and binding is None:
            return inner
        return Group(inner, quant, binding)

    def constraint(self) -> Constraint:
        self.expect("punct", "{")
        type_name = self.name()
        preds = []
        if self.at("punct", "."):
            preds.append(self.predicate())
            while self.at("punct", ","):
                self.i += 1
                t = self.tok
                other = self.name()
                if other != type_name:
                    raise RuleSyntaxError(t.line, t.col, f"type {type_name!r}", other)
                preds.append(self.predicate())
        self.expect("punct", "}")
        return Constraint(type_name, tuple(preds))

    def predicate(self) -> Predicate:
        self.expect("punct", ".")
        feature = self.name()
        if not self.at("op"):
            self.fail("'==' or '!='")
        op = self.tok.value
        self.i += 1
        return Predicate(feature, op, self.value())

    def action(self) -> Action:
        self.expect("punct", ":")
        label = self.name()
        self.expect("punct", ".")
        new_type = self.name()
        self.expect("punct", "=")
        self.expect("punct", "{")
        feats = []
        while not self.at("punct", "}"):
            key = self.name()
            self.expect("punct", "=")
            feats.append((key, self.value()))
            if not self.at("punct", ","):
                break
            self.i += 1
        self.expect("punct", "}")
        return Action(label, new_type, tuple(feats))


def parse_rule_file(source: str) -> List[Phase]:
    """Parse one or more phases from rule-language source text."""
    return _Parser(source).phases()


def parse_multiphase(source: str) -> Tuple[str, List[str]]:
    return _Parser(source).multiphase()


def is_multiphase(source: str) -> bool:
    toks = lex(source)
    return len(toks) > 1 and toks[0].kind == "ident" and toks[0].value == "MultiPhase"


def _phase_targets(path: Path, source: str) -> List[Path]:
    _, files = parse_multiphase(source)
    targets = []
    for name in files:
        target = path.parent / name
        if not target.suffix:
            target = target.with_suffix(".jape")
        targets.append(target)
    return targets


def rule_file_paths(path) -> List[Path]:
    """The file itself plus, for a MultiPhase index, every file it names."""
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    out = [path]
    if is_multiphase(source):
        for target in _phase_targets(path, source):
            out.extend(rule_file_paths(target))
    return out


def load_rules(path) -> List[Phase]:
    """Load phases from a rule file, following a MultiPhase index if present."""
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    if not is_multiphase(source):
        return parse_rule_file(source)
    phases: List[Phase] = []
    for target in _phase_targets(path, source):
        phases.extend(load_rules(target))
    return phases
