"""Exception hierarchy shared across the simulator."""


class SimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(SimError):
    """Invalid or unknown configuration value. Carries the key path."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class ParseError(SimError):
    """Malformed input text. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class AddressingError(SimError):
    """Row or register index out of range."""


class IntegrationOverflowError(SimError):
    """Membrane integration produced a non-finite value."""

    def __init__(self, neuron: int):
        super().__init__(f"non-finite state in neuron {neuron}")
        self.neuron = neuron


class OrderingError(SimError):
    """Event times handed to a stateful element went backwards."""


class FitUnderdeterminedError(SimError):
    """Amplitude sequence carries no depression signature to fit."""


class CalibrationError(SimError):
    """Calibration failed for a device instance."""

    def __init__(self, instance_id: int, message: str):
        super().__init__(f"instance {instance_id}: {message}")
        self.instance_id = instance_id


class ExecutionError(SimError):
    """Playback program violated an execution contract."""
