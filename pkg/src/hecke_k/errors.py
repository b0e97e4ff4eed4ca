"""Exception hierarchy.

Every error carries a diagnostic ``code`` so the command line layer can map
failures to exit statuses without string matching.
"""


class HeckeKError(Exception):
    code = "ERROR"

    def __init__(self, message, *, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DimensionError(HeckeKError, ValueError):
    code = "DIMENSION"


class IllDefinedMapError(HeckeKError, ValueError):
    code = "ILL_DEFINED"


class NonZeroCompositeError(HeckeKError, ValueError):
    code = "NONZERO_COMPOSITE"


class CategoryError(HeckeKError, ValueError):
    code = "FUNCTORIALITY"


class FunctorialityError(HeckeKError, ValueError):
    code = "FUNCTORIALITY"


class ConditionSubError(HeckeKError, ValueError):
    code = "CONDITION_SUB"


class DanglingReferenceError(HeckeKError, KeyError):
    code = "REFERENCE"

    def __str__(self):
        return self.args[0] if self.args else ""


class BoundaryError(HeckeKError, ValueError):
    code = "BOUNDARY"


class InstanceError(HeckeKError, ValueError):
    code = "INVALID_INSTANCE"


class CrossCheckError(HeckeKError, AssertionError):
    code = "CROSS_CHECK"


class DocumentError(HeckeKError, ValueError):
    code = "PARSE"


class WrongKindError(HeckeKError, ValueError):
    code = "WRONG_KIND"
