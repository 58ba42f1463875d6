
class PragmaticError(Exception):
    """
    Base class for all the errors raised by this package. The exit_code attribute is the code the
    command line interface exits with when one of these escapes a command.
    """
    exit_code = 1


class InvalidDistributionError(PragmaticError, ValueError):
    """
    This exception is raised when a vector (or matrix) of numbers can't be used as a probability
    distribution, for example because it has a negative entry or doesn't sum to 1.
    """
    exit_code = 2

    def __init__(self, reason, values=None):
        super().__init__(f'Invalid probability distribution: {reason}')
        self.reason = reason
        self.values = values


class ZeroPriorError(InvalidDistributionError):
    """
    This exception is raised when a prior has an entry that isn't strictly positive. Priors must be
    strictly positive otherwise the divergence of a posterior from them can be infinite.
    """
    exit_code = 3

    def __init__(self, index, value):
        PragmaticError.__init__(self, f'Prior entry {index} is {value} but every prior '
                                      f'probability must be strictly positive')
        self.reason = 'zero prior entry'
        self.values = None
        self.index = index
        self.value = value


class DimensionMismatchError(PragmaticError, ValueError):
    """
    This exception is raised when two distributions (or a distribution and an ensemble) that must
    be over the same outcome space have different sizes.
    """
    exit_code = 2

    def __init__(self, what, expected, actual):
        super().__init__(f'Dimension mismatch for {what}: expected {expected}, got {actual}')
        self.what = what
        self.expected = expected
        self.actual = actual


class DegenerateDistributionError(PragmaticError, ValueError):
    """
    This exception is raised when a prefix code is requested for a distribution with fewer than two
    outcomes that can actually occur.
    """
    exit_code = 2

    def __init__(self, positive):
        super().__init__(f'A prefix code needs at least 2 outcomes with positive probability, '
                         f'this distribution has {positive}')
        self.positive = positive


class InvalidParameterError(PragmaticError, ValueError):
    """
    This exception is raised when a scalar parameter (an interpolation weight, a payout
    probability, a win/trial count, a window size...) is outside its allowed range.
    """
    exit_code = 2

    def __init__(self, name, value, allowed):
        super().__init__(f'Invalid value for {name}: {value} (must be {allowed})')
        self.name = name
        self.value = value
        self.allowed = allowed


class NotDefinitiveError(PragmaticError, ValueError):
    """
    This exception is raised when an operation that only makes sense for a pragmatically
    definitive ensemble is given an ensemble that isn't.
    """
    exit_code = 2

    def __init__(self, messages):
        super().__init__(f'The ensemble is not pragmatically definitive, these messages do not '
                         f'have unit vector posteriors: {", ".join(map(str, messages))}')
        self.messages = messages


class MissingLabelError(PragmaticError, ValueError):
    """
    This exception is raised when a usefulness partition is requested but some messages in the
    ensemble haven't been given a usefulness label.
    """
    exit_code = 2

    def __init__(self, messages):
        super().__init__(f'No usefulness label for messages: {", ".join(map(str, messages))}')
        self.messages = messages


class InputParseError(PragmaticError):
    """
    This exception is raised when an input file isn't valid JSON.
    """
    exit_code = 2

    def __init__(self, path, line, column, message):
        super().__init__(f'Could not parse {path} at line {line}, column {column}: {message}')
        self.path = path
        self.line = line
        self.column = column


class SchemaError(PragmaticError):
    """
    This exception is raised when an input file is valid JSON but doesn't have the structure we
    expect for the kind of data it should contain.
    """
    exit_code = 2

    def __init__(self, path, reason):
        super().__init__(f'{path} does not match the expected schema: {reason}')
        self.path = path
        self.reason = reason


class SourceMismatchError(PragmaticError, ValueError):
    """
    This exception is raised when a message source can't be used to sample messages from a given
    ensemble.
    """
    exit_code = 4

    def __init__(self, reason):
        super().__init__(f'Message source does not match the ensemble: {reason}')
        self.reason = reason


class StationaryMismatchError(SourceMismatchError):
    """
    This exception is raised when a Markov message source's stationary distribution isn't the
    ensemble's message distribution, in which case the running averages would not converge to the
    ensemble's pragmatic information.
    """

    def __init__(self, stationary, message_probs):
        PragmaticError.__init__(self, f'Markov source stationary distribution {list(stationary)} '
                                      f'does not match the ensemble message probabilities '
                                      f'{list(message_probs)}')
        self.reason = 'stationary distribution mismatch'
        self.stationary = stationary
        self.message_probs = message_probs


class ReducibleChainError(SourceMismatchError):
    """
    This exception is raised when a transition matrix describes a chain in which some messages can
    never be reached from some others.
    """

    def __init__(self, unreachable):
        PragmaticError.__init__(self, f'Transition matrix is not irreducible, unreachable '
                                      f'(from, to) pairs: {unreachable}')
        self.reason = 'reducible chain'
        self.unreachable = unreachable


class ConvergenceError(PragmaticError):
    """
    This exception is raised when the power iteration for a stationary distribution doesn't settle
    within its iteration budget.
    """
    exit_code = 4

    def __init__(self, iterations, change):
        super().__init__(f'Power iteration did not converge after {iterations} iterations '
                         f'(last change {change:.3e})')
        self.iterations = iterations
        self.change = change


class PropertyViolationError(PragmaticError):
    """
    This exception is raised when one of the verification suite's checks finds an instance that
    breaks the property it checks. The instance is kept so it can be serialised and reproduced.
    """
    exit_code = 1

    def __init__(self, check, counterexample):
        super().__init__(f'Property violated: {check}')
        self.check = check
        self.counterexample = counterexample
