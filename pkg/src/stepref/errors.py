"""Exception types shared across the package."""


class StepRefError(Exception):
    pass


class DimensionError(StepRefError):
    """Operand shapes do not satisfy an operation's contract."""


class ConfigError(StepRefError):
    """Inconsistent or unsupported configuration."""


class VocabularyError(StepRefError):
    """Token outside the fixed vocabulary."""


class GenerationError(StepRefError):
    """Scene or query generation failed within its retry budget."""


class ProtocolError(StepRefError):
    """Training-phase ordering or prerequisite violated."""


class EvaluationError(StepRefError):
    """A checked evaluation produced a non-finite or invalid value."""
