"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can map
failures to exit codes and tests can match on the cause rather than the
message text.
"""


class AlgmeshError(Exception):
    """Base class for all package errors."""

    code = "error"


class ArityError(AlgmeshError):
    """Point dimension does not match the polynomial's variable count."""

    code = "arity"


class RootsDiverged(AlgmeshError):
    """The simultaneous root iteration failed to converge."""

    code = "roots_diverged"

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class LambdaTooSmall(AlgmeshError):
    """Base mesh parameter lambda must exceed the certified degree."""

    code = "lambda_too_small"


class NotMonicNormalized(AlgmeshError):
    """Equation parameters violate total degree >= distinguished degree."""

    code = "not_monic_normalized"


class BaseTooCoarse(AlgmeshError):
    """Base mesh degree index is below the required lift index."""

    code = "base_too_coarse"


class DiscriminantEverywhere(AlgmeshError):
    """No candidate point avoids the discriminant set."""

    code = "discriminant_everywhere"


class NotOptimal(AlgmeshError):
    """Lambda rule does not keep the mesh constant bounded in n."""

    code = "not_optimal"


class NoPoints(AlgmeshError):
    """An operation that needs a nonempty point set received none."""

    code = "no_points"


class RankDeficient(AlgmeshError):
    """Requested basis size exceeds the numerically independent columns."""

    code = "rank_deficient"

    def __init__(self, message, diag=None):
        super().__init__(message)
        self.diag = diag


class DegenerateMesh(AlgmeshError):
    """Fewer independent sample rows than basis functions."""

    code = "degenerate_mesh"


class InterpSingular(AlgmeshError):
    """The interpolation node system is singular."""

    code = "interp_singular"


class ZeroFunction(AlgmeshError):
    """Relative error is undefined for an identically zero sample."""

    code = "zero_function"


class SurfaceFormatError(AlgmeshError):
    """A surface description violates the required triangular monic form."""

    code = "surface_format"
