"""Eye-region makeup residue toolkit.

Subpackages cover the full desk-scale loop: pixel primitives
(:mod:`eyevis.imaging`), landmark-driven eye localization
(:mod:`eyevis.landmarks`), residue visualization (:mod:`eyevis.residue`),
the quantitative evaluation harness (:mod:`eyevis.evaluation`), session and
trend persistence (:mod:`eyevis.store`), and the HTTP service plus batch CLI
(:mod:`eyevis.service`, :mod:`eyevis.cli`).
"""

__version__ = "0.1.0"
