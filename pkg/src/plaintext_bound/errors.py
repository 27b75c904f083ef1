"""Exception hierarchy shared by every module.

Each error carries a short ``code`` so the CLI can emit structured JSON.
"""


class BoundError(Exception):
    code = "error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ParameterError(BoundError, ValueError):
    code = "parameter_error"


class DomainError(BoundError, ValueError):
    code = "domain_error"


class RangeError(BoundError, OverflowError):
    code = "range_error"


class ResourceError(BoundError, RuntimeError):
    code = "resource_error"


class WordlistParseError(BoundError, ValueError):
    code = "parse_error"

    def __init__(self, line_no: int, line: str):
        super().__init__(f"line {line_no}: {line!r} contains a non-letter character")
        self.line_no = line_no
        self.line = line

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["line"] = self.line_no
        return d
