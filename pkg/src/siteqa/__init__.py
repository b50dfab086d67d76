"""siteqa: question-answering search over a single website's content.

Indexes a free-text corpus and an RDF knowledge graph, answers questions
through a KGQA branch and an extractive-text branch, and fuses the two with
a confidence-threshold fallback pipeline.
"""

__version__ = "0.1.0"
