"""Exception hierarchy. Every refusal is loud and specific; nothing is guessed."""


class DensitreeError(Exception):
    """Base class for all library errors."""


class HorizonError(DensitreeError):
    """An operation needed data beyond a set's evaluation horizon."""


class DescriptorError(DensitreeError):
    """A set descriptor is malformed (construction or parse time)."""


class ConditionError(DensitreeError):
    """A Mathias/Silver condition violates its invariants."""


class TreeError(DensitreeError):
    """Structural failure on a tree slice."""


class NoStemError(TreeError):
    """No (unique least) splitting node inside the classified range."""


class AmbiguousSplitSuccessorError(TreeError):
    """splsuc is not unique within the slice."""


class ShallowSliceError(TreeError):
    """The slice is too shallow to certify the requested quantity."""


class ConstructionError(DensitreeError):
    """A generator's hypothesis failed on the given inputs."""


class UndecidedError(ConstructionError):
    """The horizon cannot certify a verdict either way."""


class InfeasibleParityError(ConstructionError):
    """The collapse encoder cannot reach the requested parity within budget."""


class BlockHypothesisError(ConstructionError):
    """A collapse block has fewer free coordinates than the hypothesis requires."""


class SearchCapError(DensitreeError):
    """An exhaustive search exceeded its configured cap."""
