"""Utility functions for indlift."""
import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np


class CustomJSONEncoder(json.JSONEncoder):
    """JSON encoder for enums, numpy scalars, tuples-as-lists and models with to_dict."""

    def default(self, obj: Any) -> Any:
        """Override the default method to handle custom serialization.

        Args:
            obj: The object to serialize

        Returns:
            A JSON serializable object
        """
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, (set, frozenset)):
            return sorted(obj, key=repr)
        if hasattr(obj, "to_dict") and callable(obj.to_dict):
            return obj.to_dict()
        if hasattr(obj, "model_dump") and callable(obj.model_dump):
            return obj.model_dump()
        if is_dataclass(obj) and not isinstance(obj, type):
            return asdict(obj)
        return super().default(obj)


def canonical_dumps(payload: Any) -> str:
    """Deterministic JSON text: two-space indent and a trailing newline."""
    return json.dumps(payload, cls=CustomJSONEncoder, indent=2, ensure_ascii=False) + "\n"


def read_json(path: Union[str, Path]) -> Any:
    """Read a JSON document."""
    return json.loads(Path(path).read_text(encoding="utf-8"))
