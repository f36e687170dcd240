"""Exception hierarchy for the mquare package.

Every error raised by the library derives from :class:`MquareError` so
callers (notably the CLI) can distinguish domain failures from bugs.
"""

from __future__ import annotations


class MquareError(Exception):
    """Base class for all mquare errors."""


# --- catalog lookups ---------------------------------------------------


class UnknownRequirement(MquareError):
    """A requirement id outside MQR01..MQR19 was used."""


class UnknownMeasure(MquareError):
    """A measure id that is not in the built-in catalog was used."""


# --- measurement -------------------------------------------------------


class MissingElement(MquareError):
    """A required measure element (e.g. A or B) was not recorded."""


class WrongKindInput(MquareError):
    """Recorded data does not fit the measure's measurement function."""


class OutOfRangeInput(MquareError):
    """A numeric input violates its documented range."""


class IllFormedCriteria(MquareError):
    """Decision criteria are inconsistent with the measure's orientation."""


# --- formulas ----------------------------------------------------------


class FormulaSyntaxError(MquareError):
    """Aggregation formula text could not be parsed.

    Carries the character offset of the failure and a hint naming the
    expected tokens.
    """

    def __init__(self, offset: int, message: str):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.hint = message


class UnboundIdentifier(MquareError):
    """A formula references an alias with no value in the environment."""

    def __init__(self, name: str, location: str | None = None):
        where = f" in {location}" if location else ""
        super().__init__(f"unbound identifier {name!r}{where}")
        self.name = name
        self.location = location


class DivisionByZero(MquareError):
    """A formula divided by an expression that evaluated to zero."""


# --- plans and scorecards ----------------------------------------------


class PlanFormatError(MquareError):
    """A plan file is structurally unreadable (bad JSON shape or values)."""


class PlanInvalid(MquareError):
    """A plan has ERROR-severity validation findings.

    The findings are attached so callers can render them.
    """

    def __init__(self, findings):
        self.findings = list(findings)
        summary = "; ".join(f"{f.code}: {f.message}" for f in self.findings)
        super().__init__(f"plan has {len(self.findings)} blocking finding(s): {summary}")


class MissingResult(MquareError):
    """A selected measure has no result to score."""


class PlanScorecardMismatch(MquareError):
    """A scorecard was produced from a different plan than the one given."""


# --- sessions ----------------------------------------------------------


class SessionFormatError(MquareError):
    """A session file is structurally unreadable."""


class UnselectedMeasure(MquareError):
    """A session entry references a measure the plan did not select."""


class EmptySessionSet(MquareError):
    """Consolidation was asked to merge zero sessions."""


class MixedPlan(MquareError):
    """Sessions being consolidated do not all target the same plan."""


# --- metamodel analysis ------------------------------------------------


class MmdlParseError(MquareError):
    """A metamodel text file violates the .mmdl grammar."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownConcept(MquareError):
    """A reference, generalization, or root names a concept that does not exist."""

    def __init__(self, name: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown concept {name!r}{where}")
        self.name = name
        self.line = line


class CyclicGeneralization(MquareError):
    """The extends relation contains a cycle."""


class NoRoot(MquareError):
    """Instantiation analysis requires a declared root concept."""


class MandatoryContainmentCycle(MquareError):
    """Mandatory containments force an infinite instantiation chain."""
