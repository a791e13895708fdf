"""Exact toolkit for extremal set families over [n] = {1, ..., n}.

Subpackages: setfam (bitset families and predicates), multilinear (exact
polynomial arithmetic and rank), certificates (independence certificates
with non-shadow augmentation), bounds (closed-form extremal bounds),
search (exhaustive clique-based extremal search), cli (JSON reports).
"""

__version__ = "0.1.0"

from .setfam import Family, IntersectionSpec, SetWord  # noqa: F401
from .multilinear import LinearForm, Poly  # noqa: F401
from .bounds import BoundValue  # noqa: F401
from .certificates import CertificateReport, NonShadowSet, StructureReport  # noqa: F401
from .search import AuditReport, CompatGraph, SearchResult  # noqa: F401
