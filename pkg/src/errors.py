"""This file contains the exceptions raised across the simulateCSD package"""


class SimulateCSDError(Exception):
    """Base class for every error raised by this package"""


class ConfigurationError(SimulateCSDError, ValueError):
    """A profile, cluster, scheduler or scenario description is invalid"""


class UnknownProfileError(ConfigurationError, KeyError):
    """A builtin workload profile was requested by a name that does not exist"""

    def __str__(self):
        # KeyError quotes its argument, keep the plain message
        return str(self.args[0]) if self.args else ""


class ReferenceCountError(ConfigurationError):
    """A power derivation was asked to divide by a zero reference CSD count"""


class ProtocolViolationError(SimulateCSDError):
    """A scheduler transition or wire message broke the ack/assign protocol"""


class AccountingError(SimulateCSDError, ValueError):
    """Per-node item counts do not add up to the workload total"""


class ThroughputError(SimulateCSDError, ValueError):
    """A throughput argument is zero, negative, or inconsistent with its pair"""


class HarnessTimeoutError(SimulateCSDError):
    """A live worker stayed silent longer than the coordinator timeout"""
