"""Tab-separated report output and small argument helpers shared by the CLI and the tasks."""
import re
from typing import Iterable, List, Sequence, TextIO

_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$")


def header_line(command: str, seed: int) -> str:
    return f"# cloneforge {command} seed={seed}"


def write_tsv(out: TextIO, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    out.write("\t".join(header) + "\n")
    for row in rows:
        out.write("\t".join(str(cell) for cell in row) + "\n")


def parse_n_values(text: str) -> List[int]:
    """'6' -> [6], '5..10' -> [5, ..., 10], '3,5..6' -> [3, 5, 6]."""
    values: List[int] = []
    for part in str(text).split(","):
        match = _RANGE.match(part)
        if not match:
            raise ValueError(f"Invalid n value {part!r}; use N or A..B")
        low = int(match.group(1))
        high = int(match.group(2)) if match.group(2) else low
        if high < low:
            raise ValueError(f"Empty range {part!r}")
        values.extend(range(low, high + 1))
    return values
