"""Exception hierarchy shared across the pipeline.

Exit-code mapping used by the CLI: DataError -> 2, TrainingError -> 3,
ConfigError -> 4.
"""


class PipelineError(Exception):
    pass


class DataError(PipelineError):
    pass


class MissingColumn(DataError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing column: {name}")


class NonNumericCell(DataError):
    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"non-numeric cell {value!r} at row {row}, column {col}")


class OutOfRange(DataError):
    def __init__(self, row, col, value, expected):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            f"value {value!r} at row {row}, column {col} outside {expected}"
        )


class EmptyData(DataError):
    pass


class InsufficientRows(DataError):
    pass


class TrainingError(PipelineError):
    pass


class SingleClass(TrainingError):
    pass


class TooFewMinority(TrainingError):
    pass


class DimensionMismatch(PipelineError):
    pass


class LengthMismatch(PipelineError):
    pass


class NonBinary(PipelineError):
    pass


class EmptyNode(PipelineError):
    pass


class BadParams(PipelineError):
    pass


class FeatureMismatch(PipelineError):
    pass


class FoldDegenerate(TrainingError):
    pass


class ConfigError(PipelineError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"config error at {key}: {message}")
