"""Embedding exporter for the abstract-segmentation engine's vector files."""

from . import cli
from .cli import export_embeddings
from .encoders import EncoderLoadError, TokenHashEncoder, load_encoder

__version__ = "0.1.0"
