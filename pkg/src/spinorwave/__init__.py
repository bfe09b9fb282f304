"""spinorwave: two-spinor electromagnetic identities and conformal-time modes.

Subpackages:

* ``core``     -- concrete epsilon-formalism spinor algebra (the brute-force
  oracle for every algebraic identity),
* ``symbolic`` -- abstract-index expression engine and derivation verifier,
* ``em``       -- Maxwell bivector / wave-function conversions and diagnostics,
* ``frw``      -- conformal-time mode integration on FRW backgrounds.
"""

__version__ = "0.1.0"
