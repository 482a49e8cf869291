"""Exception types shared across the package.

The CLI maps DataError/ConfigError (and any other CopycatError) to exit
code 1; argparse usage problems exit with 2.
"""


class CopycatError(ValueError):
    """Base class for all domain errors raised by this package."""


class DataError(CopycatError):
    """Malformed or inconsistent input data (CSV cells, shapes, labels)."""


class ConfigError(CopycatError):
    """Invalid configuration value or unknown configuration key."""


class TrainingError(CopycatError):
    """Training diverged or was asked to do something unsupported."""


class CopyIntegrityError(CopycatError):
    """A copy violated a hard postcondition (e.g. nonzero training error
    for an unbounded tree)."""
