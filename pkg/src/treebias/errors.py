"""Exception hierarchy shared by all treebias modules."""


class TreeBiasError(Exception):
    """Base class for all errors raised by this package."""


# -- tree construction -------------------------------------------------------

class CycleDetected(TreeBiasError):
    """The edge set contains a cycle (or a self-loop)."""


class Disconnected(TreeBiasError):
    """The edge set does not connect all vertices."""


class DuplicateEdge(TreeBiasError):
    """The same undirected edge was given twice."""


class UnknownRoot(TreeBiasError):
    """The requested root is not a vertex of the tree."""


class UnknownVertex(TreeBiasError):
    """A vertex id outside 0..n-1 was used."""


# -- enumeration / exploration -----------------------------------------------

class SizeOutOfRange(TreeBiasError):
    """Requested tree size outside the supported enumeration range."""


class NoBranchingPoint(TreeBiasError):
    """The tree is a path; there is no vertex of degree >= 3."""


# -- probability mass functions ----------------------------------------------

class NotNormalized(TreeBiasError):
    """Weights do not sum to 1 within tolerance."""


class NegativeWeight(TreeBiasError):
    """A probability weight is negative."""


class DuplicateKey(TreeBiasError):
    """The same support point was given twice."""


class ZeroMean(TreeBiasError):
    """Size-biasing is undefined for a distribution with mean 0."""


class InvalidRate(TreeBiasError):
    """Poisson rate must be strictly positive."""


# -- exact density evaluation --------------------------------------------------

class HypothesisNotMet(TreeBiasError):
    """A check was requested whose hypothesis fails for the given pmf."""


# -- simulation ----------------------------------------------------------------

class InsufficientDepth(TreeBiasError):
    """The sampled tree is too shallow to type the requested generations."""


class AllExtinct(TreeBiasError):
    """Every replica went extinct; no surviving tree to average over."""


class MemoryCapExceeded(TreeBiasError):
    """Sampling would materialize more vertices than the configured cap."""
