"""Exact entropy toolkit for perfect piecewise-linear maps of the real line."""
from .intervals import Interval, IntervalUnion, parse_rational, format_rational
from .plmap import PLMap, compose, iterate, evaluate, classify_ends, is_perfect, laps, lap_count
from .covers import CoCompactSet, CoCompactCover, join, minimal_subcover_count, cover_entropy_sequence
from .entropy import EntropyEstimate, bowen_counts, hd_estimate, lap_entropy, spectral_entropy, markov_entropy
from .compactify import CompactTypeMetric, conjugate, extend, ball_trace, cocompactify_ball_cover
from .horseshoe import HorseshoeCertificate, verify, search, refine_chain, itinerary_point, entropy_lower_bound

__version__ = "0.1.0"
