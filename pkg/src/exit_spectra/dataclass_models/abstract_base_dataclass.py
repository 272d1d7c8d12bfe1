from abc import ABC
from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Any, Dict, List

import numpy as np


def to_plain(obj: Any) -> Any:
    """Convert enums, numpy values and containers to JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class AbstractBaseDataClass(ABC):
    """Base class of the report records.

    Methods:
        to_dict: Converts the record to a JSON-ready dictionary.
        set_params: Sets fields from a dictionary, ignoring unknown keys.
    """

    def to_dict(self, exclude_keys: List[str] | None = None) -> dict:
        """Convert the record to a dictionary of plain Python values.

        Args:
            exclude_keys (List[str] | None): Keys to drop.

        Returns:
            dict: Enums become their values, numpy values become floats, ints
            and lists.
        """
        data_dict = asdict(self)
        if exclude_keys:
            for key in exclude_keys:
                data_dict.pop(key, None)
        return to_plain(data_dict)

    def set_params(self, params: Dict[str, Any]) -> None:
        """Update fields from ``params``.

        Keys that are not fields are ignored, as are None values.

        Args:
            params (Dict[str, Any]): New field values.
        """
        names = {field.name for field in fields(self.__class__)}
        for key, value in params.items():
            if key in names and value is not None:
                setattr(self, key, value)
