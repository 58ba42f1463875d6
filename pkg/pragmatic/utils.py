import abc
import enum
import math
from contextlib import contextmanager
from datetime import datetime

import click
import numpy as np

# every number we print is formatted with this many significant digits
SIGNIFICANT_DIGITS = 12


@enum.unique
class OutputFormat(enum.Enum):
    CSV = 'csv'
    JSON = 'json'


class Config:
    """
    Class encapsulating the options the pragmatic commands read from the YAML config file. All of
    the options are optional, the commands fall back to their own defaults.
    """

    def __init__(self, **options):
        self._options = options

    def opt(self, config_option, default=None):
        """
        Convenience method to retrieve an option that may or may not be defined.

        :param config_option: a dot-delimited string describing the option, e.g. "verify.trials"
        :param default: the value to return if the option isn't set
        :return: the option's value or the default
        """
        config_value = self._options
        levels = config_option.split('.')
        for i, k in enumerate(levels):
            if not isinstance(config_value, dict):
                return default
            config_value = config_value.get(k, {} if i < len(levels) - 1 else default)
        return config_value


def fmt(value):
    """
    Formats the given number with 12 significant digits, the precision used for all output.

    :param value: a number
    :return: the formatted string
    """
    return f'{value:.{SIGNIFICANT_DIGITS}g}'


def rounded(value):
    """
    Rounds the given float to 12 significant digits so that JSON output matches the CSV output.
    """
    return float(fmt(value))


def fsum(values):
    """
    Exactly rounded floating point sum of the given values.

    :param values: an iterable (or numpy array) of numbers
    :return: a float
    """
    if isinstance(values, np.ndarray):
        values = values.ravel().tolist()
    return math.fsum(values)


@contextmanager
def task(message, done='Done', time=True):
    """
    Handy context manager for printing basic info about the start and end of a task. The message
    passed is printed in yellow first with "... " appended and then the context manager yields. When
    the context collapses the passed done message is printed in green. Everything goes to stderr so
    that data written to stdout is left untouched.

    :param message: the task message
    :param done: the done message
    :param time: whether to time the execution and print it as part of the done message
    """
    click.secho(f'{message}... ', fg='yellow', nl=False, err=True)
    start = datetime.now()
    yield
    end = datetime.now()
    if time:
        done = f'{done} [took {end - start}]'
    click.secho(done, fg='green', err=True)


class Step(abc.ABC):
    """
    This class represents a step in a run, for example one of the checks in the verification suite.
    """

    @property
    @abc.abstractmethod
    def message(self):
        """
        This is the message used for the task output, indicating to users what is currently
        happening.

        :return: a string message (this will be passed directly to the task context manager above
        """
        pass

    @abc.abstractmethod
    def run(self, context):
        """
        Abstract function to be overwritten with actual step logic.

        :param context: a Context object
        """
        pass


class Context:
    """
    One object of this type is passed around to all the commands and steps in the run to store
    global state.
    """

    def __init__(self, config, out=None, output_format=OutputFormat.CSV):
        """
        :param config: a Config object
        :param out: the Path to write data output to, or None for stdout
        :param output_format: the OutputFormat for data output
        """
        self.config = config
        self.out = out
        self.output_format = output_format
        self.results = []

    @property
    def progress(self):
        """
        Value for tqdm's disable parameter: None lets tqdm decide based on whether we're on a TTY,
        True turns the bars off.
        """
        return None if self.config.opt('progress', True) else True

    def emit(self, text):
        """
        Writes the given data text to the output path if there is one, otherwise to stdout. Lines
        always end with LF.

        :param text: the text to write
        """
        if not text.endswith('\n'):
            text = f'{text}\n'
        if self.out is None:
            click.echo(text, nl=False)
        else:
            with open(self.out, 'w', newline='\n') as f:
                f.write(text)

    def run_steps(self, steps):
        """
        Runs all the given steps in order, collecting whatever each one returns in the results
        list.

        :param steps: the steps to run
        :return: the list of results from this run, in step order
        """
        results = []
        for step in steps:
            with task(step.message):
                results.append(step.run(self))
        self.results.extend(results)
        return results
