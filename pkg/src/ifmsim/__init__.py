"""Discrete simulator for interaction-free measurement and its entanglement.

Modules
-------
qstate          photon (x) object states, partial trace, Jacobi eigensolver, entropy
interferometer  staged Mach-Zehnder evolution, detector statistics, post-selection
dicke           probe/target collision model and null-result conditioning
montecarlo      seeded single-shot sampling and frequency checks
cli             command-line front end
"""

__version__ = "0.1.0"
