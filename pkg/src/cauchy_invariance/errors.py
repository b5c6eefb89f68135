"""Exception types shared across the package."""


class PoleError(ZeroDivisionError):
    """A complex evaluation landed on (or within tolerance of) a pole."""


class DomainError(ValueError):
    """Input lies outside the domain of a map (off-circle, out-of-strip, log 0)."""


class InvalidParamsError(ValueError):
    pass


class InvalidStartError(ValueError):
    """Orbit start point is a pole of the map or otherwise unusable."""


class OrbitTerminated(RuntimeError):
    def __init__(self, step, reason):
        super().__init__(f"orbit terminated early at step {step}: {reason}")
        self.step = step
        self.reason = reason


class MaxStepsExceeded(RuntimeError):
    pass


class EmptySampleError(ValueError):
    pass


class InvalidConfigError(ValueError):
    pass
