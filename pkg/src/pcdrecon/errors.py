"""Exception types. Every error carries a stable machine-readable ``code``."""


class PCDReconError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _jsonable(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    return str(value)


class InvalidGraphError(PCDReconError):
    code = "INVALID_GRAPH"

    def __init__(self, report):
        codes = sorted({v.code for v in report.violations})
        super().__init__("graph failed validation: " + ", ".join(codes))
        self.report = report


class UnknownRouteError(PCDReconError, KeyError):
    code = "UNKNOWN_ROUTE"


class TreeConsistencyError(PCDReconError):
    code = "TREE_CONSISTENCY_VIOLATION"


class NotInternalError(PCDReconError, ValueError):
    code = "NOT_INTERNAL"


class NotOnAnyRouteError(PCDReconError, ValueError):
    code = "NOT_ON_ANY_ROUTE"


class ModeMismatchError(PCDReconError, ValueError):
    code = "MODE_MISMATCH"


class MergeConflictError(PCDReconError):
    code = "MERGE_CONFLICT"


class InconsistentPCDError(PCDReconError):
    code = "INCONSISTENT_PCD"


class WeightConflictError(InconsistentPCDError):
    code = "WEIGHT_CONFLICT"


class BoundaryMismatchError(PCDReconError, ValueError):
    code = "BOUNDARY_MISMATCH"


class UnsatisfiableParamsError(PCDReconError, ValueError):
    code = "UNSATISFIABLE_PARAMS"


class SchemaError(PCDReconError, ValueError):
    code = "SCHEMA_ERROR"
