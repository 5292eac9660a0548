"""Exception hierarchy shared by all modules.

Every error carries a ``details`` dict so the command line driver can emit a
machine-readable error object without knowing the concrete class.
"""

from __future__ import annotations

from typing import Any


class IpomsetError(ValueError):
    """Base class for every error raised by this package."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": str(self),
            **{k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        if isinstance(value, (set, frozenset)):
            items.sort(key=repr)
        return items
    return repr(value)


# core
class NotAPartialOrder(IpomsetError):
    pass


class NotTotal(IpomsetError):
    pass


class InterfaceViolation(IpomsetError):
    pass


class NotInterval(IpomsetError):
    pass


class InterfaceMismatch(IpomsetError):
    pass


# steps
class NotASubset(IpomsetError):
    pass


class KindMismatch(IpomsetError):
    pass


class NotCoherent(IpomsetError):
    pass


# subsume
class NotApplicable(IpomsetError):
    pass


class SizeLimitExceeded(IpomsetError):
    pass


# hda
class UnknownCell(IpomsetError):
    pass


class MissingFace(IpomsetError):
    pass


class FaceConclistMismatch(IpomsetError):
    pass


class PrecubicalViolation(IpomsetError):
    pass


class InvalidPath(IpomsetError):
    pass


# sta
class LabelMismatch(IpomsetError):
    pass


class UnknownState(IpomsetError):
    pass


# notation / input files
class LosetSyntaxError(IpomsetError):
    pass


class MixedKindLetter(LosetSyntaxError):
    pass


class FormatError(IpomsetError):
    """A model file does not follow the expected JSON layout."""
