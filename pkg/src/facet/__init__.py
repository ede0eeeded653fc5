"""facet: design-space exploration for parameterized UI components.

Statically ranks component properties by visual impact, samples mimetic and
distinct variations via a coverage-guided prompt loop, measures design-space
coverage, and serves an interactive explorer.
"""

__version__ = "0.1.0"
