"""Abstract-index expression engine: parser, canonicalizer, rewriter."""

from .canon import canonicalize, component_map, is_identically_zero
from .corpus import (
    IdentityCase,
    builtin_rules,
    parse_identity_file,
    run_identity_cases,
    shipped_corpus_text,
)
from .evaluate import component_eval
from .expr import Expr, Factor, Idx, Term
from .kernels import Kernel, KernelTable
from .parse import Parser
from .rewrite import RewriteRule, VerificationReport, apply_rules, verify_identity
from .weights import expr_weight, term_weight

__all__ = [
    "Expr",
    "Factor",
    "Idx",
    "IdentityCase",
    "Kernel",
    "KernelTable",
    "Parser",
    "RewriteRule",
    "Term",
    "VerificationReport",
    "apply_rules",
    "builtin_rules",
    "canonicalize",
    "component_eval",
    "component_map",
    "expr_weight",
    "is_identically_zero",
    "parse_identity_file",
    "run_identity_cases",
    "shipped_corpus_text",
    "term_weight",
    "verify_identity",
]
