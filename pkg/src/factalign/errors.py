"""Exception hierarchy shared across the toolkit.

The three branches map onto CLI exit codes: ConfigError -> 2,
BackendError -> 3, DataError -> 4.
"""


class FactalignError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FactalignError):
    """Invalid or incomplete configuration (bad flag, missing endpoint, cap <= 0)."""


class DataError(FactalignError):
    """Problem with input data (unknown dataset, malformed record, missing file)."""


class BackendError(FactalignError):
    """A scorer backend failed to produce a usable alignment matrix."""


class UnknownDatasetError(DataError):
    """Dataset id not present in the registry."""

    def __init__(self, dataset_id: str):
        self.dataset_id = dataset_id
        super().__init__(f"unknown dataset id: {dataset_id!r}")


class LabelError(DataError):
    """Raw label does not fit the dataset's declared label scheme."""

    def __init__(self, dataset_id: str, field: str, value, reason: str):
        self.dataset_id = dataset_id
        self.field = field
        self.value = value
        super().__init__(
            f"dataset {dataset_id!r}: field {field!r} with value {value!r} rejected: {reason}"
        )


class DegenerateInputError(DataError):
    """Input that cannot be scored (empty claim or context after segmentation)."""


class TransportError(BackendError):
    """Remote call failed at the transport level after exhausting retries."""


class InvalidRequestError(BackendError):
    """Remote side rejected the request as invalid (HTTP 422)."""


class ShapeError(BackendError):
    """Alignment matrix has the wrong dimensions."""

    def __init__(self, expected, actual):
        self.expected = tuple(expected)
        self.actual = tuple(actual)
        super().__init__(f"alignment matrix shape mismatch: expected {self.expected}, got {self.actual}")


class MatrixInvariantError(BackendError):
    """Alignment matrix rows are negative or do not sum to 1 within tolerance."""


class FixtureKeyError(BackendError):
    """Fixture backend has no recorded matrix for the requested sample id."""

    def __init__(self, sample_id):
        self.sample_id = sample_id
        super().__init__(f"no recorded alignment matrix for sample id {sample_id!r}")
