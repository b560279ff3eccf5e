"""Constructive recognition of exceptional groups of Lie type over finite fields."""

from .chevalley import random_conjugate, standard_copy
from .gf import field_create, parse_field_spec
from .presentations import evaluate_relations, relation_set
from .recog import compute_high_weight, recognize

__all__ = ["compute_high_weight", "evaluate_relations", "field_create", "parse_field_spec",
           "random_conjugate", "recognize", "relation_set", "standard_copy"]
