"""Error hierarchy for the inertia toolkit.

Every failure raised by the math modules derives from InertiaError so the
management commands can turn it into a CommandError with one except clause.
"""


class InertiaError(Exception):
    """Root of every error raised by the inertia app."""


class PrecisionError(InertiaError):
    """Not enough certified digits left to decide the answer."""


class ReducibleError(InertiaError):
    """A polynomial expected to be irreducible has a factor over the base."""


class PresentationError(InertiaError):
    """The extension cannot be presented as an unramified or eisenstein step."""


class HenselError(InertiaError):
    """The seed does not satisfy the strong Hensel hypothesis."""


class NotAUnitError(InertiaError):
    pass


class LevelError(InertiaError):
    """Filtration levels out of range or in the wrong order."""


class CharacterError(InertiaError):
    """Character data inconsistent with its group or level."""


class FilterError(InertiaError):
    pass


class BudgetError(InertiaError):
    """A search ran out of its configured budget."""


class CatalogError(InertiaError):
    """Missing, corrupt or incomplete catalog."""


class ExpressionError(InertiaError):
    """Malformed element or curve expression."""


class ClassificationError(InertiaError):
    pass
