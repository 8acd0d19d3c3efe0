"""Exception taxonomy for model construction, validation, and the CLI.

Every error raised on bad user input derives from ValueError so callers can
catch the whole family at once; the CLI maps subfamilies to exit codes.
"""


class SgmError(ValueError):
    """Base class for all package-specific errors."""


class PresentationError(SgmError):
    """A finitely generated abelian group presentation is malformed."""


class DegreeError(SgmError):
    """A cohomology degree is out of range or inconsistent."""


class OwnershipError(SgmError):
    """An element was used with a group or model it does not belong to."""


class BuildError(SgmError):
    """A manifold description cannot be realized by the builders."""


class UnsupportedProductError(BuildError):
    """A product of manifolds falls outside the supported torsion range."""


class ModelValidationError(SgmError):
    """A cohomology model fails a structural consistency check."""


class ModelFileError(SgmError):
    """A model file is syntactically or structurally invalid."""


class ParseError(SgmError):
    """A manifold description string does not parse.

    Carries enough position information to point at the offending token.
    """

    def __init__(self, message, line=None, col=None, expected=None):
        super().__init__(message)
        self.line = line
        self.col = col
        self.expected = tuple(expected) if expected else ()


class InapplicableError(SgmError):
    """An obstruction rule was invoked outside its hypotheses."""


class OptionsError(SgmError):
    """An analysis or CLI option is out of its allowed range."""
