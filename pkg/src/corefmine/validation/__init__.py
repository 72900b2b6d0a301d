from .agreement import AgreementReport, agreement
from .service import ValidationService, make_server, serve
from .store import (REJECT_REASONS, VERDICTS, Judgment, TaskStore,
                    ValidationTask)

__all__ = [
    "AgreementReport", "agreement", "ValidationService", "make_server",
    "serve", "REJECT_REASONS", "VERDICTS", "Judgment", "TaskStore",
    "ValidationTask",
]
