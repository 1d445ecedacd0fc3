from enum import Enum


class VerdictMethod(str, Enum):
    STRUCTURAL = "structural"
    SAMPLED = "sampled"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class ExitStatus(int, Enum):
    OK = 0
    INPUT_ERROR = 1
    INCONSISTENT = 2

    @classmethod
    def for_report(cls, theorem_consistent: bool) -> "ExitStatus":
        return cls.OK if theorem_consistent else cls.INCONSISTENT
