from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

CONTROLS = ("appelt", "all", "first", "once", "brill")
CONTROL_ALIASES = {"appel": "appelt"}

ONE, OPTIONAL, STAR, PLUS = "one", "optional", "star", "plus"
QUANTIFIER_SYMBOLS = {"?": OPTIONAL, "*": STAR, "+": PLUS}


@dataclass(frozen=True)
class Predicate:
    feature: str
    op: str  # "==" or "!="
    value: str

    def holds(self, features: Dict[str, str]) -> bool:
        if self.op == "==":
            return features.get(self.feature) == self.value
        return features.get(self.feature) != self.value


@dataclass(frozen=True)
class Constraint:
    type_name: str
    predicates: Tuple[Predicate, ...] = ()

    def accepts(self, ann) -> bool:
        return ann.type_name == self.type_name and all(p.holds(ann.features) for p in self.predicates)


@dataclass(frozen=True)
class Sequence:
    elements: Tuple["PatternElement", ...]


@dataclass(frozen=True)
class Alternation:
    branches: Tuple["PatternElement", ...]

    def __post_init__(self):
        if len(self.branches) < 2:
            raise ValueError("alternation needs at least two branches")


@dataclass(frozen=True)
class Group:
    element: "PatternElement"
    quantifier: str = ONE
    binding: Optional[str] = None


PatternElement = Union[Constraint, Sequence, Alternation, Group]


@dataclass(frozen=True)
class Action:
    label: str
    new_type: str
    feature_assignments: Tuple[Tuple[str, str], ...] = ()

    def features(self) -> Dict[str, str]:
        return dict(self.feature_assignments)


@dataclass(frozen=True)
class Rule:
    name: str
    pattern: PatternElement
    actions: Tuple[Action, ...]
    priority: int = -1
    line: int = 0


@dataclass(frozen=True)
class Phase:
    name: str
    input_types: Tuple[str, ...]
    rules: Tuple[Rule, ...]
    control: str = "appelt"
    options: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    def output_types(self):
        return sorted({a.new_type for r in self.rules for a in r.actions})


def labels_in(element: PatternElement):
    """All binding labels used anywhere inside a pattern element."""
    if isinstance(element, Group):
        found = set(labels_in(element.element))
        if element.binding:
            found.add(element.binding)
        return found
    if isinstance(element, (Sequence, Alternation)):
        children = element.elements if isinstance(element, Sequence) else element.branches
        found = set()
        for c in children:
            found |= labels_in(c)
        return found
    return set()


def constraints_in(element: PatternElement):
    if isinstance(element, Constraint):
        yield element
    elif isinstance(element, Group):
        yield from constraints_in(element.element)
    else:
        children = element.elements if isinstance(element, Sequence) else element.branches
        for c in children:
            yield from constraints_in(c)
