"""Proof kernel for the connexive logic C.

Parsing and printing of formulas and R-expressions, derivation checking
for the sequent calculus G3C, its higher-order extension and the natural
deduction calculus, a terminating backward-search decision procedure,
a schema engine for user-defined connectives, and constructive witness
generators for the strict equivalences behind functional completeness.
"""

from .connectives import (ConnectiveDef, DefinitionError, GeneratedRules,
                          Registry, RuleSchema, collapse, defining_formula,
                          expand, gen_rules, load_definition,
                          load_definitions, load_registry,
                          standard_definitions)
from .derivation import Derivation, Verdict
from .g3c import (ProveResult, SearchBudget, as_g3_sequent, check_g3c,
                  identity_derivation, prove_g3c)
from .nc import check_nc
from .scinf import adjust, check_scinf, derive_starred, embed_g3c
from .sexpr import DerivationFile, read_derivation_file, write_derivation_file
from .syntax import (App, And, Atom, Fml, Formula, Imp, Neg, Or, ParseError,
                     RExpr, Ref, Seq, Sequent, formula_components, mk_neg,
                     parse_formula, parse_rexpr, parse_sequent, r_degree,
                     r_subformulas, render)
from .witnesses import (StrictEquivWitness, VerificationReport,
                        collapse_witness, definition_witness,
                        verify_definition)

__all__ = [name for name in dir() if not name.startswith("_")]
