"""Checking kernel for opetopes and opetopic sets, in named and unnamed styles."""
from .address import STAR, Address, empty
from .coding import to_named, to_preopetope
from .counting import count, count_oracle
from .errors import DimensionError, NotAnOpetope, OpetopeError, ParseError, RuleViolation, ScriptError
from .named import EqTheory, NamedSequent, Term, Var, alpha_equivalent, source_bar
from .named_sets import OCMT, ocmt_isomorphic, os_materialize, os_repr
from .preopetope import ARROW, POINT, Degenerate, Nodes, Preopetope, integer
from .textio import parse_address, parse_preopetope, run_script, serialize_address, serialize_preopetope
from .unnamed import UnnamedSequent, derive, explain, is_opetope, target_of

__all__ = [
    "STAR", "Address", "empty",
    "to_named", "to_preopetope", "count", "count_oracle",
    "DimensionError", "NotAnOpetope", "OpetopeError", "ParseError", "RuleViolation", "ScriptError",
    "EqTheory", "NamedSequent", "Term", "Var", "alpha_equivalent", "source_bar",
    "OCMT", "ocmt_isomorphic", "os_materialize", "os_repr",
    "ARROW", "POINT", "Degenerate", "Nodes", "Preopetope", "integer",
    "parse_address", "parse_preopetope", "run_script", "serialize_address", "serialize_preopetope",
    "UnnamedSequent", "derive", "explain", "is_opetope", "target_of",
]
