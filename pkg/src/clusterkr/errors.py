"""Exception hierarchy.

Two failure families are kept strictly apart so callers (and the CLI exit
codes) can tell user mistakes from engine bugs:

* ``UsageError`` -- bad input: invalid rank, frozen vertex mutated, malformed
  sequence, parameter out of range.  CLI exit code 1.
* ``EngineFault`` -- an internal invariant broke: a division that the Laurent
  phenomenon guarantees to be exact was not, a c-vector lost sign coherence,
  the two g-vector computations disagreed.  These are bugs, never user
  errors.  CLI exit code 2.
"""

from __future__ import annotations


class UsageError(ValueError):
    """Invalid input or parameters supplied by the caller."""


class EngineFault(RuntimeError):
    """An internal invariant was violated; indicates a bug in the engine."""

    def __init__(self, message: str, **context: object) -> None:
        self.context = dict(context)
        if context:
            detail = ", ".join(f"{k}={v!r}" for k, v in context.items())
            message = f"{message} [{detail}]"
        super().__init__(message)


class NonExactDivision(EngineFault):
    """Exact division left a remainder.

    Inside a mutation this signals a Laurent-phenomenon violation and aborts
    the computation; the mutation layer re-raises with seed/vertex/step
    context attached.
    """
