"""The ``.tmc`` model and pipeline language."""

from .parser import parse_expr, parse_model_file
from .printer import print_expr, print_file
from .semantics import Document, Entity, ExpectResult, eval_poly, load_document
