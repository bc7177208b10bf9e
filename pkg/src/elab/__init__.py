"""Landscape features of transformed benchmark instances.

Subpackages and modules:

- ``problems``: the five base benchmark functions
- ``transforms``: instance descriptors and their evaluation
- ``sampling``: Latin hypercube designs
- ``features``: the 55 landscape features
- ``stats``: KS / EMD comparisons and their aggregates
- ``experiment``: configuration, pipeline, figures and the CLI
"""

__version__ = "0.1.0"
