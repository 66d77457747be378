"""
Numerical constants that form part of the library's contract.

Tolerances are absolute unless the name says otherwise.
"""

#: Relative tolerance for Hermiticity of xi and symmetry of eta, scaled by
#: max(1, max|entry|).
HERMITICITY_RTOL = 1e-12

#: Tolerance for the four BT block identities.
BT_ATOL = 1e-10

#: Relative tolerance for M^dagger diag(Omega, Omega) M against the block matrix.
RECONSTRUCTION_RTOL = 1e-9

#: Relative gap below which two frequencies count as degenerate.
DEGENERACY_RTOL = 1e-9

#: Distance to the closed negative real axis at which ln M is refused.
BRANCH_CUT_ATOL = 1e-8

#: |det(u - v)| below which the coordinate frame is singular.
SINGULAR_FRAME_ATOL = 1e-12

#: Anti-Hermiticity tolerance for generators handed to the oracle.
ANTI_HERMITIAN_ATOL = 1e-10

#: Largest total degree of a single multi-index derivative request.
MAX_HERMITE_DEGREE = 60

#: Largest number of entries in one Hermite table.
MAX_HERMITE_TABLE = 2_000_000

#: Largest truncated Hilbert-space dimension the oracle will assemble.
MAX_DENSE_DIM = 20000

#: Squeeze values closer than this (relative) share a degenerate block.
SQUEEZE_DEGENERACY_RTOL = 1e-9

#: Below this, cosh r is treated as exactly 1 (r clamped to 0).
COSH_CLAMP_ATOL = 1e-14

#: Report schema version written into every CLI report.
REPORT_SCHEMA_VERSION = 1

#: CLI exit codes; a stable contract for scripting.
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_ERROR = 3
