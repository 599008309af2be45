"""Exact membership testing for the pedigree polytope."""
from .core import CharVector, Pedigree, Tour, pedigree_to_tour, tour_to_pedigree
from .membership import Verdict, decide

__all__ = ["CharVector", "Pedigree", "Tour", "Verdict", "decide", "pedigree_to_tour", "tour_to_pedigree"]
