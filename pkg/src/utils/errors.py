"""Exception hierarchy shared by every module; each error knows its CLI exit code."""


class ToolkitError(Exception):
    exit_code = 2

    def __init__(self, message: str, module: str = ""):
        self.module = module
        super().__init__(f"{module}: {message}" if module else message)


class ParameterError(ToolkitError, ValueError):
    """Invalid family or command parameter; `field` names the culprit."""

    def __init__(self, field: str, message: str, module: str = "graph_core"):
        self.field = field
        super().__init__(f"invalid parameter '{field}': {message}", module)


class ArgumentError(ToolkitError, ValueError):
    pass


class InputError(ToolkitError):
    pass


class MetricError(ToolkitError, ValueError):
    pass


class UnsupportedError(ToolkitError):
    pass


class OrientationError(ToolkitError):
    pass


class CapacityError(ToolkitError):
    exit_code = 3


class PreconditionError(ToolkitError):
    exit_code = 3


class ConvergenceError(ToolkitError):
    exit_code = 3

    def __init__(self, message: str, residual: float, module: str = "spectral"):
        self.residual = residual
        super().__init__(f"{message} (achieved residual {residual:.3e})", module)
