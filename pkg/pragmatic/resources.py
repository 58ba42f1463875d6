import enum
import hashlib
import json
import numbers
from pathlib import Path

from pragmatic.ensemble import MessageEnsemble, UsefulnessLabel
from pragmatic.errors import InputParseError, SchemaError
from pragmatic.joint import JointEnsemble

# path to the pragmatic/data directory
data_dir = Path(__file__).parent / 'data'


@enum.unique
class Fixture(enum.Enum):
    """
    The example inputs shipped in the pragmatic/data directory.
    """
    # the two Boolean decision makers, their joint ensemble and each one's own ensemble
    BOOLEAN_JOINT = 'boolean_joint'
    BOOLEAN_DELTA = 'boolean_delta'
    BOOLEAN_DELTA_PRIME = 'boolean_delta_prime'
    # a Markov chain over Delta''s messages with the same long run message frequencies
    BOOLEAN_DELTA_PRIME_MARKOV = 'boolean_delta_prime_markov'
    # the first play of a one armed bandit
    BANDIT_T0 = 'bandit_t0'
    SINGLE_MESSAGE = 'single_message'
    PRODUCT_JOINT = 'product_joint'
    # Delta' learns nothing whatever m' is sent
    IGNORING_JOINT = 'ignoring_joint'

    @property
    def path(self):
        return data_dir / f'{self.value}.json'

    @property
    def is_joint(self):
        return self in (Fixture.BOOLEAN_JOINT, Fixture.PRODUCT_JOINT, Fixture.IGNORING_JOINT)


def digest(path):
    """
    The sha256 hex digest of the file at the given path, used to identify inputs in reports.
    """
    with open(path, 'rb') as f:
        return hashlib.sha256(f.read()).hexdigest()


def load_json(path):
    """
    Reads the JSON file at the given path.

    :param path: the Path of the file
    :return: the parsed data
    """
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputParseError(path, e.lineno, e.colno, e.msg)


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _vector(path, value, what):
    if not isinstance(value, list) or not value or not all(map(_is_number, value)):
        raise SchemaError(path, f'{what} must be a non-empty array of numbers')
    return value


def _matrix(path, value, what):
    if not isinstance(value, list) or not value:
        raise SchemaError(path, f'{what} must be a non-empty array of rows')
    rows = [_vector(path, row, f'each row of {what}') for row in value]
    if len({len(row) for row in rows}) != 1:
        raise SchemaError(path, f'the rows of {what} must all have the same length')
    return rows


def _object(path, value, keys):
    if not isinstance(value, dict):
        raise SchemaError(path, 'expected a JSON object')
    missing = [key for key in keys if key not in value]
    if missing:
        raise SchemaError(path, f'missing keys: {", ".join(missing)}')
    return value


def parse_distribution(data, path='<data>'):
    return _vector(path, data, 'a distribution')


def parse_ensemble(data, path='<data>'):
    """
    Builds a MessageEnsemble from data in the ensemble schema:

        {"prior": [...], "messages": [{"label": "...", "prob": x, "posterior": [...]}, ...]}

    Each message may also have a "usefulness" key, one of irrelevant, disinformative or useful.

    :param data: the parsed JSON data
    :param path: where the data came from, for error messages
    :return: a 2-tuple of the MessageEnsemble and a dict of usefulness labels keyed by message
             index, or None if no message has one
    """
    _object(path, data, ('prior', 'messages'))
    prior = _vector(path, data['prior'], 'prior')
    messages = data['messages']
    if not isinstance(messages, list) or not messages:
        raise SchemaError(path, 'messages must be a non-empty array')

    labels = []
    probs = []
    posteriors = []
    usefulness = {}
    for m, message in enumerate(messages):
        _object(path, message, ('prob', 'posterior'))
        if not _is_number(message['prob']):
            raise SchemaError(path, f'message {m} prob must be a number')
        label = message.get('label', str(m))
        if not isinstance(label, str):
            raise SchemaError(path, f'message {m} label must be a string')
        labels.append(label)
        probs.append(message['prob'])
        posteriors.append(_vector(path, message['posterior'], f'message {m} posterior'))
        if 'usefulness' in message:
            try:
                usefulness[m] = UsefulnessLabel(message['usefulness'])
            except ValueError:
                allowed = ', '.join(label.value for label in UsefulnessLabel)
                raise SchemaError(path, f'message {m} usefulness must be one of {allowed}')
    if len(set(labels)) != len(labels):
        raise SchemaError(path, 'message labels must be unique')

    ensemble = MessageEnsemble(prior, probs, posteriors, labels=labels)
    return ensemble, (usefulness or None)


def parse_joint(data, path='<data>'):
    """
    Builds a JointEnsemble from data in the joint ensemble schema:

        {"joint_prior": [[...]], "message_probs": [[...]], "posteriors": {"m,m'": [[...]]}}

    Pairs of messages with no posterior get the joint prior.
    """
    _object(path, data, ('joint_prior', 'message_probs', 'posteriors'))
    joint_prior = _matrix(path, data['joint_prior'], 'joint_prior')
    message_probs = _matrix(path, data['message_probs'], 'message_probs')
    if not isinstance(data['posteriors'], dict):
        raise SchemaError(path, 'posteriors must be an object keyed by "m,m\'"')

    n_m, n_m_prime = len(message_probs), len(message_probs[0])
    posteriors = {}
    for key, value in data['posteriors'].items():
        try:
            m, m_prime = (int(part) for part in key.split(','))
        except ValueError:
            raise SchemaError(path, f'posterior key {key!r} is not of the form "m,m\'"')
        if not (0 <= m < n_m and 0 <= m_prime < n_m_prime):
            raise SchemaError(path, f'posterior key {key!r} is outside the {n_m}x{n_m_prime} '
                                    f'message grid')
        posteriors[(m, m_prime)] = _matrix(path, value, f'posterior {key}')
    return JointEnsemble.from_mapping(joint_prior, message_probs, posteriors)


def parse_transition(data, path='<data>'):
    return _matrix(path, data, 'a transition matrix')


def read_distribution(path):
    return parse_distribution(load_json(path), path)


def read_ensemble(path):
    return parse_ensemble(load_json(path), path)


def read_joint(path):
    return parse_joint(load_json(path), path)


def read_transition(path):
    return parse_transition(load_json(path), path)


def load_fixture(fixture):
    """
    Loads one of the shipped fixtures. Ensemble fixtures come back as a MessageEnsemble (without
    their usefulness labels, see read_ensemble for those), joint fixtures as a JointEnsemble and
    the Markov fixture as a transition matrix.
    """
    fixture = Fixture(fixture)
    if fixture.is_joint:
        return read_joint(fixture.path)
    if fixture == Fixture.BOOLEAN_DELTA_PRIME_MARKOV:
        return read_transition(fixture.path)
    return read_ensemble(fixture.path)[0]


def ensemble_to_dict(e, usefulness=None):
    """
    Converts a MessageEnsemble into the ensemble schema, the inverse of parse_ensemble.
    """
    messages = []
    for m, (label, prob, posterior) in enumerate(zip(e.labels, e.message_probs, e.posteriors)):
        message = {'label': label, 'prob': prob, 'posterior': posterior.to_list()}
        if usefulness and m in usefulness:
            message['usefulness'] = UsefulnessLabel(usefulness[m]).value
        messages.append(message)
    return {'prior': e.prior.to_list(), 'messages': messages}


def joint_to_dict(j):
    """
    Converts a JointEnsemble into the joint ensemble schema, the inverse of parse_joint.
    """
    n_m, n_m_prime = j.message_probs.shape
    return {
        'joint_prior': j.joint_prior.tolist(),
        'message_probs': j.message_probs.tolist(),
        'posteriors': {f'{m},{m_prime}': j.posteriors[m, m_prime].tolist()
                       for m in range(n_m) for m_prime in range(n_m_prime)},
    }


def dumps(data):
    # dump the data nicely
    return json.dumps(data, ensure_ascii=False, indent=2)
