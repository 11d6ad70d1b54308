"""A small JAPE-style rule language: phases of annotation-pattern rules."""
from .model import (
    Action, Alternation, Constraint, Group, Phase, Predicate, Rule, Sequence,
)
from .parser import load_rules, parse_multiphase, parse_rule_file
from .transducer import Matcher, run_phase, run_phases

__all__ = [
    "Action", "Alternation", "Constraint", "Group", "Phase", "Predicate",
    "Rule", "Sequence", "load_rules", "parse_multiphase", "parse_rule_file",
    "Matcher", "run_phase", "run_phases",
]
