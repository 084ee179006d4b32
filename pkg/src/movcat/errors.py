"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Violation:
    """One broken law, with the ids that witness it."""

    law: str
    ids: tuple
    detail: str = ""

    def __str__(self) -> str:
        ids = ", ".join(str(i) for i in self.ids)
        text = f"{self.law} ({ids})"
        return f"{text}: {self.detail}" if self.detail else text


class MovcatError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(MovcatError):
    """Input data does not describe a well-formed value (CLI exit status 2)."""


class DiagnosticError(InvalidInput):
    """An error carrying a list of :class:`Violation` records."""

    def __init__(self, message: str, violations: Sequence[Violation] = ()):
        self.violations = list(violations)
        if self.violations:
            message = message + ": " + "; ".join(str(v) for v in self.violations[:5])
            if len(self.violations) > 5:
                message += f"; ... ({len(self.violations)} total)"
        super().__init__(message)

    @property
    def laws(self) -> set[str]:
        return {v.law for v in self.violations}


class DuplicateId(DiagnosticError):
    pass


class DanglingReference(DiagnosticError):
    pass


class LawViolation(DiagnosticError):
    pass


class UnknownObject(InvalidInput):
    pass


class UnknownMorphism(InvalidInput):
    pass


class NotComposable(MovcatError):
    pass


class NotClosed(DiagnosticError):
    pass


class EmptyFactorList(InvalidInput):
    pass


class InvalidSubcategory(DiagnosticError):
    pass


class CodomainMismatch(InvalidInput):
    pass


# movability
class IncompleteFactorTable(DiagnosticError):
    pass


class WitnessViolation(DiagnosticError):
    pass


class NotInitial(InvalidInput):
    pass


class InvalidNullFamily(DiagnosticError):
    pass


class NotARetraction(InvalidInput):
    pass


class MissingSourceWitness(InvalidInput):
    pass


class InvalidFunctorData(DiagnosticError):
    pass


class FactorMismatch(InvalidInput):
    pass


class NoPullback(MovcatError):
    pass


# inverse systems
class SystemInvalid(DiagnosticError):
    pass


class NotDirected(SystemInvalid):
    pass


class FunctorialityViolation(SystemInvalid):
    pass


class PhaseMismatch(SystemInvalid):
    pass


class NotComparable(InvalidInput):
    pass


class AE1Violation(DiagnosticError):
    pass


class AE2Violation(DiagnosticError):
    pass


class G1Violation(DiagnosticError):
    pass


class G2Violation(DiagnosticError):
    pass


# theorem harness
class ExpansionInvalid(DiagnosticError):
    def __init__(self, message: str, violations: Sequence[Violation] = (), report=None):
        super().__init__(message, violations)
        self.report = report


class AE1Failure(ExpansionInvalid):
    pass


class AE2Failure(ExpansionInvalid):
    pass


class ThreadVerificationFailure(DiagnosticError):
    """A proof construction produced a thread that does not verify (a bug certificate)."""


class WitnessVerificationFailure(DiagnosticError):
    """A proof construction produced a witness that does not verify (a bug certificate)."""


# workspace / cli
class WorkspaceSyntaxError(InvalidInput):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)


class UnresolvedReference(InvalidInput):
    def __init__(self, name: str, context: str = ""):
        self.name = name
        super().__init__(f"unresolved reference {name!r}" + (f" in {context}" if context else ""))


class UnknownCommand(InvalidInput):
    pass


class SizeOverflow(MovcatError):
    pass
