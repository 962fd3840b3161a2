"""Exceptions raised by the quota tree toolkit."""


class QuotaTreesError(Exception):
    """Base class for every error raised by this package."""


class QuotaSpecError(QuotaTreesError, ValueError):
    """Quota, portfolio or other per-vertex vector does not fit the graph."""


class InfeasibleError(QuotaTreesError):
    """No quota forest exists for the requested (graph, quota, portfolio)."""


class EnumerationBoundError(QuotaTreesError):
    """Brute-force enumeration refused because the quota is too large."""


class InvalidInventoryError(QuotaTreesError):
    """Edge inventory cannot be realised by a quota forest."""


class SamplingError(QuotaTreesError):
    """Sampler reached a state with no completions left."""


class InputFormatError(QuotaTreesError):
    """
    Input document could not be read.

    :param source: file name or other label of the document.
    :param position: position of the problem inside the document.
    :param problem: human readable description.
    """

    def __init__(self, source: str, position: str, problem: str) -> None:
        self.source = source
        self.position = position
        self.problem = problem
        super().__init__(f"{source}:{position}: {problem}")
