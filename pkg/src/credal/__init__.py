"""Credal inference for probabilistic answer set programs.

Parse a program of probabilistic facts and normal rules, reduce it to the
part a ground query can reach through its well-founded reduct, and compute
the query's lower/upper probability over all answer-set distributions.
"""

from .bounds import (CredalUndefinedError, InnerValue, OuterValue,
                     ProbabilityInterval, ProbFactLimitError, SolveTimeout,
                     World, credal_bounds_2amc, credal_bounds_enumeration,
                     f_transform, inner_count, solve_query, world_probability)
from .ground import (CallGraph, DependencyGraph, GroundProgram, OlonError,
                     OlonWitness, build_call_graph, build_dependency_graph,
                     detect_olon, ground_program, relevant_subprogram)
from .residual import (CERTAIN_FALSE, CERTAIN_TRUE, UNDEFINED, FactEncoding,
                       ResidualProgram, decode_probabilistic_facts,
                       encode_probabilistic_facts, extract_residual)
from .stable import (AnswerSet, UndefinedAtomLimitError, enumerate_answer_sets,
                     gl_reduct, is_stable, iter_answer_sets, least_model,
                     project_answer_sets)
from .syntax import (Atom, Literal, ParseError, ProbFact, Program,
                     ProgramError, Query, Rule, Term, const, parse_program,
                     parse_query, render_program, var)
from .wfs import (ThreeValuedInterpretation, dynamically_stratified, gfp_of,
                  lfp_ot, wf_reduct, wfm)

__version__ = "0.1.0"
