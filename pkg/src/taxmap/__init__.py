"""taxmap: map free-text phrases to concepts in an arbitrary taxonomy.

Pipeline: embed taxonomy nodes from random-walk neighborhoods, embed
words (whole-token or subword), train a sequence-to-vector regression
between the two spaces, retrieve nearest concepts exactly.
"""

__version__ = "0.1.0"
