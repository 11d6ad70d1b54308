"""Rule-based analysis and structuring of software process-pattern texts."""

__version__ = "0.1.0"

from .document import (  # noqa: E402
    Annotation, AnnotationSet, Corpus, Document, add_annotation,
    annotations_of_type, create_document, span_relation,
)
from .inline_xml import parse_inline_xml, serialize_inline_xml  # noqa: E402
