"""Exception types shared across the package."""


class HaltedMachineStepped(RuntimeError):
    pass


class NotHalted(RuntimeError):
    pass


class MachineParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ZeroNotEncodable(ValueError):
    pass


class MalformedCode(ValueError):
    pass


class MalformedProgram(MalformedCode):
    pass


class BudgetTooSmall(LookupError):
    """No program inside the enumeration budget produced the target."""


class DomainMismatch(ValueError):
    pass


class FiberNotViolating(ValueError):
    pass


class MachineDidNotHalt(RuntimeError):
    pass


class HeatProgramDidNotHalt(RuntimeError):
    pass


class HeatOutputUnparseable(ValueError):
    pass


class FunctionParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
