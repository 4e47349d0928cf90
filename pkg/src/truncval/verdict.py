"""Three-valued answers for checks that are only semi-decidable."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

__all__ = ["Verdict", "YES", "NO", "UNKNOWN"]

YES = "Yes"
NO = "No"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    """``No`` always carries a witness; ``Yes`` names the certificate used."""

    status: str
    certificate: str | None = None
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (YES, NO, UNKNOWN):
            raise ValueError(f"bad verdict status {self.status!r}")
        if self.status == NO and self.witness is None:
            raise ValueError("a No verdict needs a witness")
        if self.status == YES and not self.certificate:
            raise ValueError("a Yes verdict needs a certificate name")

    @classmethod
    def yes(cls, certificate: str, **details) -> "Verdict":
        return cls(YES, certificate, None, details)

    @classmethod
    def no(cls, witness: dict, certificate: str | None = None, **details) -> "Verdict":
        return cls(NO, certificate, witness, details)

    @classmethod
    def unknown(cls, **details) -> "Verdict":
        return cls(UNKNOWN, None, None, details)

    @property
    def label(self) -> str:
        """Display label; exhaustive-sample successes read as ``Unfalsified``."""
        if self.status == YES and self.certificate and self.certificate.startswith("unfalsified"):
            return "Unfalsified"
        return self.status

    def __bool__(self):
        return self.status == YES

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.label}
        if self.certificate:
            out["certificate"] = self.certificate
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out
