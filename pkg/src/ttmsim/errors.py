"""Exception hierarchy shared by all simulator modules."""

from __future__ import annotations


class TTMError(Exception):
    """Base class for simulator errors."""


class ConflictError(TTMError):
    """A conducting component joins a +V driver to a -V driver."""

    def __init__(self, component):
        self.component = tuple(sorted(component))
        shown = ", ".join(self.component[:8])
        if len(self.component) > 8:
            shown += ", ..."
        super().__init__(f"short between +V and -V in component {{{shown}}}")


class FloatingError(TTMError):
    """An observed node has no driven path and no retained charge."""

    def __init__(self, nodes):
        self.nodes = tuple(sorted(nodes))
        super().__init__(f"floating node(s): {', '.join(self.nodes)}")


class PromiseViolation(TTMError):
    """Truth table is neither balanced nor constant."""


class RedundantInput(TTMError):
    """The chosen answer variable never affects the function."""


class SecretZero(TTMError):
    """The all-zero secret string is not a valid Simon instance."""


class BudgetExceeded(TTMError):
    """The Simon run used up its data budget without a verified secret."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"no verified secret after {report.data_elements} data elements"
        )
