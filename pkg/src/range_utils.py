"""Parsing utilities for template lists, depth ranges and bond grids."""

import logging
from typing import Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)


class IntRange:
    """Inclusive integer range, e.g. a depth sweep."""

    def __init__(self, start: int, end: Optional[int] = None):
        """
        Initialize range.

        Args:
            start: First value
            end: Last value (if None, same as start)
        """
        self.start = start
        self.end = end if end is not None else start

        if self.start > self.end:
            raise ValueError(f"Range start {self.start} is after range end {self.end}")

    def values(self) -> List[int]:
        return list(range(self.start, self.end + 1))

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __repr__(self) -> str:
        if self.start == self.end:
            return f"IntRange({self.start})"
        return f"IntRange({self.start}..{self.end})"


class RangeParser:
    """Parser for the CLI range syntax."""

    # Supported range separators
    SEPARATORS = ["..", ":", "-", " to "]

    @classmethod
    def parse_int(cls, text: str) -> int:
        text = text.strip()
        try:
            return int(text)
        except ValueError:
            raise ValueError(f"Invalid integer: '{text}'")

    @classmethod
    def parse_int_range(cls, text: str) -> IntRange:
        """
        Parse an integer range.

        Supported formats:
        - Single value: "3"
        - Range: "1..15", "1:15", "1-15", "1 to 15"

        Raises:
            ValueError: If the string is not a valid range
        """
        text = text.strip()
        for sep in cls.SEPARATORS:
            if sep in text:
                parts = text.split(sep, 1)
                if len(parts) == 2 and parts[0].strip() and parts[1].strip():
                    return IntRange(cls.parse_int(parts[0]), cls.parse_int(parts[1]))
        return IntRange(cls.parse_int(text))

    @classmethod
    def parse_int_list(cls, text: str) -> List[int]:
        """Parse "1,2,4" (ranges allowed as items: "1..3,4")."""
        values: List[int] = []
        for item in text.split(","):
            if not item.strip():
                continue
            for value in cls.parse_int_range(item).values():
                if value not in values:
                    values.append(value)
        if not values:
            raise ValueError(f"Empty list: '{text}'")
        return values

    @classmethod
    def parse_bond_grid(cls, text: str) -> List[float]:
        """
        Parse a bond grid.

        Supported formats:
        - Explicit list: "0.7,0.9,1.1"
        - Inclusive stepped range: "0.3..2.1:0.2"

        Raises:
            ValueError: If the grid is malformed or empty
        """
        text = text.strip()
        if ".." in text:
            span, _, step_text = text.partition(":")
            start_text, _, stop_text = span.partition("..")
            try:
                start = float(start_text)
                stop = float(stop_text)
                step = float(step_text) if step_text else 0.2
            except ValueError:
                raise ValueError(f"Invalid bond grid: '{text}'")
            return make_bond_grid(start, stop, step)
        try:
            grid = [float(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise ValueError(f"Invalid bond grid: '{text}'")
        if not grid:
            raise ValueError(f"Empty bond grid: '{text}'")
        return grid

    @classmethod
    def validate_depth_range(cls, depth_range: IntRange, max_depth: int = 30) -> Tuple[bool, Optional[str]]:
        """
        Validate a depth range.

        Returns:
            Tuple of (is_valid, warning_message)
        """
        if depth_range.start < 1:
            return False, f"Depth must be at least 1, got {depth_range.start}"

        if depth_range.end > max_depth:
            warning = (
                f"Depth range ends at {depth_range.end}, beyond the recommended maximum of {max_depth}. "
                f"Runtime grows quickly with depth."
            )
            logger.warning(warning)
            return True, warning

        return True, None


def make_bond_grid(start: float, stop: float, step: float) -> List[float]:
    """Inclusive grid start, start+step, ..., stop rounded to 10 decimals."""
    if step <= 0:
        raise ValueError(f"Bond grid step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"Bond grid stop {stop} is below start {start}")
    count = int(round((stop - start) / step)) + 1
    grid = [round(start + i * step, 10) for i in range(count)]
    if grid[-1] > stop + 1e-9:
        grid.pop()
    return grid


def parse_depth_caps(text: str) -> Dict[int, int]:
    """Parse per-template depth caps "1=10,3=12"; "none" clears all caps."""
    text = text.strip()
    if text.lower() == "none":
        return {}
    caps: Dict[int, int] = {}
    for item in text.split(","):
        if not item.strip():
            continue
        template, sep, cap = item.partition("=")
        if not sep:
            raise ValueError(f"Expected 'template=cap', got '{item.strip()}'")
        caps[RangeParser.parse_int(template)] = RangeParser.parse_int(cap)
    return caps
