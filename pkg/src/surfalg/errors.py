"""Exception hierarchy.

Every error carries a stable ``code`` string used in CLI output.
"""


class SurfAlgError(Exception):
    code = "SurfAlgError"

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.context:
            out["context"] = {k: _plain(v) for k, v in self.context.items()}
        return out


def _plain(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)


def _make(name, base):
    return type(name, (base,), {"code": name})


# validation errors (CLI exit code 2)
class ValidationError(SurfAlgError):
    code = "ValidationError"


class QuiverError(ValidationError):
    code = "QuiverError"


InvalidQuiver = _make("InvalidQuiver", QuiverError)
NotTwoRegular = _make("NotTwoRegular", QuiverError)
FNotPermutation = _make("FNotPermutation", QuiverError)
FCycleNotLength1Or3 = _make("FCycleNotLength1Or3", QuiverError)
FNotFollowingArrows = _make("FNotFollowingArrows", QuiverError)
Disconnected = _make("Disconnected", QuiverError)
FewerThanTwoVertices = _make("FewerThanTwoVertices", QuiverError)
UnknownArrow = _make("UnknownArrow", QuiverError)
APrimeUndefined = _make("APrimeUndefined", QuiverError)
InvalidWeights = _make("InvalidWeights", QuiverError)


class SurfaceError(ValidationError):
    code = "SurfaceError"


InvalidSurface = _make("InvalidSurface", SurfaceError)
ResultNotTwoRegular = _make("ResultNotTwoRegular", SurfaceError)
EmptyEdgeSet = _make("EmptyEdgeSet", SurfaceError)
UnknownEdge = _make("UnknownEdge", SurfaceError)
MissingEpsilonValue = _make("MissingEpsilonValue", SurfaceError)
NotBoundaryEdge = _make("NotBoundaryEdge", SurfaceError)
OrbitMismatch = _make("OrbitMismatch", SurfaceError)


class AlgebraError(ValidationError):
    code = "AlgebraError"


AssumptionViolated = _make("AssumptionViolated", AlgebraError)
PossiblySingular = _make("PossiblySingular", AlgebraError)


class MutationError(ValidationError):
    code = "MutationError"


NotVirtualOrbit = _make("NotVirtualOrbit", MutationError)
OrbitRepeated = _make("OrbitRepeated", MutationError)
TooFewVertices = _make("TooFewVertices", MutationError)
SingularSpherical = _make("SingularSpherical", MutationError)
LocalShapeError = _make("LocalShapeError", MutationError)


class TiltingError(ValidationError):
    code = "TiltingError"


SpecMismatch = _make("SpecMismatch", TiltingError)
UnsupportedShift = _make("UnsupportedShift", TiltingError)


# internal consistency failures: these indicate a bug, not bad input
class InternalError(SurfAlgError):
    code = "InternalError"


ClosedFormMismatch = _make("ClosedFormMismatch", InternalError)
SocleViolation = _make("SocleViolation", InternalError)
IdentityFailed = _make("IdentityFailed", InternalError)


class OracleError(SurfAlgError):
    code = "OracleError"


CapExceeded = _make("CapExceeded", OracleError)
InconsistentRelations = _make("InconsistentRelations", OracleError)
