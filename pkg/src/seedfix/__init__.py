"""Fixing seeded knockout tournaments: exact counting, structural and randomized fixers."""

from .core import (
    Bracket,
    MatchLog,
    Matching,
    PreconditionError,
    SeedAssignment,
    SizeCapError,
    TfpError,
    TfpInstance,
    TournamentGraph,
    any_valid_bracket,
    canonicalize,
    is_valid_bracket,
    max_bipartite_matching,
    replay_bracket,
)
from .counting import count_valid_winning_brackets, extract_winning_bracket, subset_convolution
from .formats import FormatError, format_bracket, format_instance, parse_bracket, parse_instance
from .oracle import count_winners_bruteforce, is_knockout_winner_bruteforce
from .probabilistic import Model, RandomModelConfig, fix_seeded_random, sample_tournament
from .reductions import reduce_to_seeded_constant, reduce_to_seeded_half
from .structural import (
    Counterexample,
    classify_player,
    fix_king_two_seeds,
    fix_superking_two_seeds,
    fix_ultraking,
    make_counterexample,
)

__all__ = [name for name in dir() if not name.startswith("_")]
