"""opsig: opcode-level CFG signatures for malware family detection.

The pipeline: parse opcode listings, split methods into MD5-marked basic
blocks, serialize the marked CFGs as signatures, mine discriminative opcode
ngrams with TF-IDF to pick characteristic methods, and scan programs against
a signature dictionary by subgraph correspondence.
"""

from .cfg import BasicBlock, Cfg, build_cfg, split_blocks
from .listing import Instruction, ListingError, MethodListing, categorize, parse_listing
from .matching import MatchResult, build_correspondence, hopcroft_karp, match
from .ngrams import Document, extract_ngrams, idf, select_reference, tf
from .scanner import ScanReport, evaluate, scan
from .signature import CodecError, Dictionary, Signature, decode, encode, from_cfg

__version__ = "0.1.0"

__all__ = [
    "BasicBlock",
    "Cfg",
    "CodecError",
    "Dictionary",
    "Document",
    "Instruction",
    "ListingError",
    "MatchResult",
    "MethodListing",
    "ScanReport",
    "Signature",
    "build_cfg",
    "build_correspondence",
    "categorize",
    "decode",
    "encode",
    "evaluate",
    "extract_ngrams",
    "from_cfg",
    "hopcroft_karp",
    "idf",
    "match",
    "parse_listing",
    "scan",
    "select_reference",
    "split_blocks",
    "tf",
]
