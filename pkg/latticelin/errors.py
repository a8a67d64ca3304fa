__all__ = [
    'LatticeError', 'InputError', 'ParseError', 'CapacityError',
    'NoSolution', 'VerificationError', 'BoundViolation',
    'ConflictError', 'LatticeCheckFailed'
]


class LatticeError(Exception):
    """Base class for all errors.

    Every error carries the exit code the command line surface
    returns for it.
    """
    code = 2
    reason = 'Error'

    def __init__(self, error):
        self.error = error
        self.fmt = '{0.reason} ({0.code}): {0.error}'.format(self)
        super().__init__(self.fmt)


class InputError(LatticeError):
    """Raised for malformed input (bad index, bad token, bad flag)"""
    reason = 'Invalid input'


class ParseError(InputError):
    """Raised when a graph, preference or state text cannot be parsed.

    Attributes
    ----------
    filename: str or None
        The file being parsed, None for inline text
    lineno: int or None
        1-based line number of the offending line
    """
    reason = 'Parse error'

    def __init__(self, error, filename=None, lineno=None):
        self.filename = filename
        self.lineno = lineno
        where = []
        if filename:
            where.append(str(filename))
        if lineno is not None:
            where.append('line {}'.format(lineno))
        if where:
            error = '{}: {}'.format(', '.join(where), error)
        super().__init__(error)


class CapacityError(LatticeError):
    """Raised if an enumeration or search would exceed its cap"""
    reason = 'Capacity exceeded'

    def __init__(self, error, size=None, cap=None):
        self.size = size
        self.cap = cap
        super().__init__(error)


class NoSolution(LatticeError):
    """Raised when a proposer exhausts his preference list"""
    code = 1
    reason = 'No solution'

    def __init__(self, state, node):
        self.state = state
        self.node = node
        super().__init__('node {} exhausted its choices'.format(node))


class VerificationError(LatticeError):
    """Base class for every failed machine check"""
    code = 3
    reason = 'Verification failed'

    def __init__(self, error, counterexample=None):
        self.counterexample = counterexample
        super().__init__(error)


class BoundViolation(VerificationError):
    """Raised when a run exceeds its step budget.

    The partial trace is kept in ``trace``.
    """
    reason = 'Bound exceeded'

    def __init__(self, error, trace=None):
        self.trace = trace
        super().__init__(error)


class ConflictError(VerificationError):
    """Raised if a synchronous step cannot be serialized"""
    reason = 'Write conflict'


class LatticeCheckFailed(VerificationError):
    """Raised if a structural lattice property does not hold"""
    reason = 'Lattice check failed'
