"""Exception types shared across the package."""

from __future__ import annotations


class StructureError(ValueError):
    """Structurally invalid input: rank mismatch, bad index, malformed literal."""


class DomainError(ValueError):
    """Input outside an operation's mathematical domain (e.g. k = 0 shift power)."""


class ClassificationError(RuntimeError):
    """A black-box module failed one of the classification requirements.

    ``violated`` names the broken requirement:

    * ``"cartan-freeness"``      -- a Cartan generator does not act by multiplication
    * ``"center-annihilation"``  -- some graded central element does not kill 1
    * ``"loop-scaling"``         -- X(a).1 is not lambda^a * (X.1)
    * ``"shift-scalar-consistency"`` -- the per-direction scalars disagree across rows
    * ``"witt-scalar-consistency"``  -- derivation sector inconsistent with loop sector
    * ``"generator-pattern"``    -- x_i.1 / y_i.1 match no admissible factor pattern
    """

    def __init__(self, violated: str, details: str = ""):
        self.violated = violated
        self.details = details
        msg = violated if not details else f"{violated}: {details}"
        super().__init__(msg)
