import inspect
import pickle
import sqlite3 as sqlite
import threading
from collections.abc import MutableMapping
from contextlib import closing, contextmanager
from functools import wraps

from .errors import InputError
from .scheduler import DAEMON_KINDS

CACHE_FORMAT = 1


def typecasted(func):
    """Decorator that converts arguments via annotations.

    Only arguments the caller passes are converted, defaults are used as is.
    """
    signature = inspect.signature(func)

    @wraps(func)
    def wrapper(*args, **kwargs):
        bound = signature.bind(*args, **kwargs)
        for name, value in bound.arguments.items():
            converter = signature.parameters[name].annotation
            if converter is not inspect.Parameter.empty:
                bound.arguments[name] = converter(value)
        return func(*bound.args, **bound.kwargs)
    return wrapper


DAEMON_ALIASES = {
    'random': 'central-random',
    'central': 'central-random',
    'max-id': 'central-max-id',
    'maxid': 'central-max-id',
    'sync': 'synchronous',
    'stale': 'stale-async',
    'async': 'stale-async'
}


def daemon_kind(kind):
    kind = str(kind).strip().lower().replace('_', '-')
    kind = DAEMON_ALIASES.get(kind, kind)
    if kind not in DAEMON_KINDS:
        raise InputError('Invalid daemon passed: {}, expected one of {}'.format(kind, ', '.join(DAEMON_KINDS)))
    return kind


def non_negative(value):
    if value is None:
        return None
    if isinstance(value, float) and not value.is_integer():
        raise InputError('Expected a non-negative integer, got {!r}'.format(value))
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise InputError('Expected a non-negative integer, got {!r}'.format(value))
    if number < 0:
        raise InputError('Expected a non-negative integer, got {!r}'.format(value))
    return number


def positive(value):
    number = non_negative(value)
    if number is not None and number < 1:
        raise InputError('Expected a positive integer, got {!r}'.format(value))
    return number


def seed_value(value):
    """Any integer, reduced to 64 bits."""
    try:
        return int(value) & (2 ** 64 - 1)
    except (TypeError, ValueError):
        raise InputError('Invalid seed passed: {!r}'.format(value))


def caps_tuple(value):
    """``'2,3'`` or an iterable of ints into a tuple of positive caps."""
    if isinstance(value, str):
        parts = [p for p in value.replace(' ', '').split(',') if p]
    else:
        parts = list(value)
    if not parts:
        raise InputError('Invalid caps passed: {!r}'.format(value))
    return tuple(positive(p) for p in parts)


class SqliteDict(MutableMapping):
    """Pickled transition systems in one sqlite3 table, keyed by fingerprint.

    Rows written with another ``CACHE_FORMAT`` or that no longer unpickle
    read as missing, so the engine enumerates again and overwrites them.
    """

    def __init__(self, filename, table_name='transition_systems'):
        self.filename = filename
        self.table_name = table_name
        self._lock = threading.RLock()
        with self.connection() as con:
            con.execute('create table if not exists `%s` (key PRIMARY KEY, format INTEGER, value BLOB)' % self.table_name)

    @contextmanager
    def connection(self):
        with self._lock, closing(sqlite.connect(self.filename)) as con:
            with con:
                yield con

    def __getitem__(self, key):
        with self.connection() as con:
            row = con.execute('select format, value from `%s` where key=?' % self.table_name, (key,)).fetchone()
        if row is None or row[0] != CACHE_FORMAT:
            raise KeyError(key)
        try:
            return pickle.loads(row[1])
        except (pickle.UnpicklingError, AttributeError, ImportError, EOFError):
            raise KeyError(key)

    def __setitem__(self, key, item):
        with self.connection() as con:
            con.execute('insert or replace into `%s` (key, format, value) values (?, ?, ?)' % self.table_name,
                        (key, CACHE_FORMAT, pickle.dumps(item, protocol=pickle.HIGHEST_PROTOCOL)))

    def __delitem__(self, key):
        with self.connection() as con:
            if not con.execute('delete from `%s` where key=?' % self.table_name, (key,)).rowcount:
                raise KeyError(key)

    def __iter__(self):
        with self.connection() as con:
            keys = [row[0] for row in con.execute('select key from `%s`' % self.table_name)]
        yield from keys

    def __len__(self):
        with self.connection() as con:
            return con.execute('select count(key) from `%s`' % self.table_name).fetchone()[0]

    def __repr__(self):
        return '<SqliteDict {} table={}>'.format(self.filename, self.table_name)
