"""htk: a kernel for finite, set-enriched higher theories.

Construct, validate, and transform bounded presentations of iterated
theorizations of operads/multicategories, together with the graded /
delooping / base-change machinery built on top of them.
"""

__version__ = "0.1.0"
