import hashlib
import json
from fractions import Fraction
from typing import Any

# Bump whenever mode ordering, signs or the vertex-operator expansion change.
CONVENTION_VERSION = "1"


def _default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return obj.numerator
        return [obj.numerator, obj.denominator]
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"Object of type {type(obj).__name__} is not serializable")


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys and no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=_default)


def content_hash(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
