import bisect
import io
import json
import logging
from pathlib import Path
from typing import BinaryIO, Iterable, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from config import sim_config
from exceptions import (
    DuplicateValue,
    EmptyDataset,
    ParseError,
    QubitLimitExceeded,
    UnknownDatasetSpec,
    ValueOutOfRange,
)

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / "data"
BUNDLED_DATASETS = {
    "table-a": DATA_DIR / "table_a.csv",
    "table-b": DATA_DIR / "table_b.csv",
}

DatasetFormat = Literal["csv", "json"]
Source = Union[str, Path, bytes, BinaryIO]


class EncodedDataset(BaseModel):
    """
    Purpose:
        A validated set of distinct non-negative integers together with the
        number of qubits used to binary-encode them. The values are the codes:
        item v lives in basis state |v>.

    Fields:
        values (tuple[int, ...]):
            Distinct values, stored sorted ascending.
        n_qubits (int):
            Number of code bits; every value is < 2**n_qubits.
        size (int):
            Number of items.
        true_min (int):
            Smallest value. Kept for post-hoc verification only; the search
            drivers never read it.
    """

    model_config = ConfigDict(frozen=True)

    values: Tuple[int, ...]
    n_qubits: int
    size: int
    true_min: int

    @classmethod
    def from_values(cls, values: Iterable[int], n_qubits: Optional[int] = None) -> "EncodedDataset":
        items = list(values)
        if not items:
            raise EmptyDataset()

        seen = set()
        for v in items:
            if v in seen:
                raise DuplicateValue(v)
            seen.add(v)

        if n_qubits is None:
            n_qubits = max(1, max(items).bit_length())
        elif n_qubits < 1:
            raise QubitLimitExceeded(n_qubits, sim_config.statevector_qubit_limit)

        for v in items:
            if v >= 2 ** n_qubits:
                raise ValueOutOfRange(v, n_qubits)

        ordered = tuple(sorted(items))
        return cls(values=ordered, n_qubits=n_qubits, size=len(ordered), true_min=ordered[0])

    @property
    def n_codes(self) -> int:
        return 2 ** self.n_qubits

    def count_at_most(self, threshold: int) -> int:
        """Actual marked count M: number of values <= threshold."""
        if threshold < 0:
            return 0
        return bisect.bisect_right(self.values, threshold)

    def __contains__(self, value: int) -> bool:
        i = bisect.bisect_left(self.values, value)
        return i < self.size and self.values[i] == value


# Encoding helpers
def encode_value(value: int, n_qubits: int) -> str:
    """Binary code of `value` on `n_qubits` bits, most significant first."""
    if value < 0 or value >= 2 ** n_qubits:
        raise ValueOutOfRange(value, n_qubits)
    return format(value, f"0{n_qubits}b")


def decode_bits(bits: str) -> int:
    if not bits or any(ch not in "01" for ch in bits):
        raise ParseError(f"Not a bit string: {bits!r}")
    return int(bits, 2)


# Parsing
def _read_text(source: Source) -> Tuple[str, Optional[str]]:
    """Return (text, suffix) for a path, raw bytes or a binary stream."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            return path.read_text(encoding="utf-8"), path.suffix.lower().lstrip(".") or None
        except OSError as e:
            raise ParseError(f"Cannot read dataset file {path}: {e}") from e
    if isinstance(source, bytes):
        raw = source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
    else:
        raise ParseError(f"Unsupported dataset source type: {type(source).__name__}")
    try:
        text = raw.decode("utf-8") if isinstance(raw, bytes) else str(raw)
    except UnicodeDecodeError as e:
        raise ParseError(f"Dataset is not valid UTF-8: {e}") from e
    return text, None


def _parse_int(token: str, where: str) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise ParseError(f"Not a decimal integer at {where}: {token!r}")
    if value < 0:
        raise ParseError(f"Negative value at {where}: {value}")
    return value


def _parse_csv(text: str) -> list:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip().rstrip(",").strip()
        if not content:
            continue
        values.append(_parse_int(content, f"line {lineno}"))
    return values


def _parse_json(text: str) -> list:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e}") from e
    if not isinstance(payload, list):
        raise ParseError("JSON dataset must be a flat array of integers")
    values = []
    for i, item in enumerate(payload):
        # bool is an int subclass; reject it explicitly
        if isinstance(item, bool) or not isinstance(item, int):
            raise ParseError(f"Item {i} is not an integer: {item!r}")
        if item < 0:
            raise ParseError(f"Negative value at item {i}: {item}")
        values.append(item)
    return values


def load_dataset(
    source: Source,
    format: Optional[DatasetFormat] = None,
    n_qubits: Optional[int] = None,
) -> EncodedDataset:
    """
    Purpose:
        Read a dataset file (CSV: one integer per line with optional `#`
        comments; JSON: flat array) and validate it.

    Args:
        source: path, raw bytes or binary stream.
        format: "csv" or "json". Inferred from the file suffix when omitted,
            csv otherwise.
        n_qubits: code width. Inferred as ceil(log2(max + 1)), at least 1.

    Returns:
        EncodedDataset

    Raises:
        ParseError, DuplicateValue, ValueOutOfRange, EmptyDataset
    """
    text, suffix = _read_text(source)
    fmt = format or (suffix if suffix in ("csv", "json") else "csv")
    if fmt == "json":
        values = _parse_json(text)
    elif fmt == "csv":
        values = _parse_csv(text)
    else:
        raise ParseError(f"Unsupported dataset format: {fmt!r}")

    dataset = EncodedDataset.from_values(values, n_qubits=n_qubits)
    logger.debug(f"Loaded dataset: size={dataset.size}, n_qubits={dataset.n_qubits}")
    return dataset


def emit_csv(dataset: EncodedDataset) -> str:
    """Canonical CSV: sorted ascending, one value per line."""
    return "".join(f"{v}\n" for v in dataset.values)


def full_range_dataset(n_qubits: int, max_qubits: Optional[int] = None) -> EncodedDataset:
    """All codes 0..2**n - 1; the uniform case where the d'+1 estimate is exact."""
    limit = sim_config.statevector_qubit_limit if max_qubits is None else max_qubits
    if n_qubits < 1 or n_qubits > limit:
        raise QubitLimitExceeded(n_qubits, limit)
    size = 2 ** n_qubits
    # values are valid by construction
    return EncodedDataset.model_construct(
        values=tuple(range(size)), n_qubits=n_qubits, size=size, true_min=0
    )


def resolve_dataset(spec: str, n_qubits: Optional[int] = None) -> EncodedDataset:
    """
    Resolve a dataset reference used by the CLI and the HTTP surface:
    `full:<n>`, a bundled name (`table-a`, `table-b`) or a file path.
    """
    if spec.startswith("full:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise UnknownDatasetSpec(f"Bad full-range dataset spec: {spec!r}", spec=spec)
        return full_range_dataset(n)
    if spec in BUNDLED_DATASETS:
        return load_dataset(BUNDLED_DATASETS[spec], format="csv", n_qubits=n_qubits or 6)
    path = Path(spec)
    if not path.exists():
        raise UnknownDatasetSpec(f"Dataset not found: {spec!r}", spec=spec)
    return load_dataset(path, n_qubits=n_qubits)
