"""Grammar-compressed self-index: RePair grammar, grammar tree, grid search."""
from ._backend import COMPILED
from .extract import extract
from .grammar import (Grammar, GrammarWarning, PreprocessedGrammar, check_invariants,
                      preprocess, read_grammar, repair_compress, write_grammar)
from .index_build import GrammarIndex, IndexOptions, build_index
from .search import LocateStats, count, locate
from .serialize import IndexFormatError, load, save

__all__ = ["COMPILED", "Grammar", "GrammarWarning", "PreprocessedGrammar", "GrammarIndex",
           "IndexOptions", "IndexFormatError", "LocateStats", "build_index", "check_invariants",
           "count", "extract", "load", "locate", "preprocess", "read_grammar",
           "repair_compress", "save", "write_grammar"]
__version__ = "0.1.0"
