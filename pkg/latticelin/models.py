import json

from box import Box

__all__ = ['BaseModel', 'ExecutionTrace', 'Report', 'CONVERGED', 'NO_SOLUTION', 'BOUND_EXCEEDED']

CONVERGED = 'Converged'
NO_SOLUTION = 'NoSolution'
BOUND_EXCEEDED = 'BoundExceeded'


class BaseModel:
    """This class is the base class for all documents, its a
    wrapper around `python-box`_ which allows access to data
    via dot notation. Documents are what the engine hands out
    and what the command line prints.

    .. _python-box: https://github.com/cdgriffith/Box

    Example
    -------

    Accessing data via dot notation:

    .. code-block:: python

        trace = engine.run('IN,IN,IN,IN', daemon='central-max-id')
        trace['daemon']['kind']
        # Same as
        trace.daemon.kind

    Attributes
    ----------
    raw_data: dict
        The plain data being wrapped
    """

    def __init__(self, data):
        self.from_data(data)

    def from_data(self, data):
        self.raw_data = data
        self._boxed_data = Box(data)
        return self

    def __getattr__(self, attr):
        if attr.startswith('_'):
            raise AttributeError(attr)
        try:
            return getattr(self._boxed_data, attr)
        except AttributeError:
            return None

    def __getitem__(self, item):
        try:
            return self._boxed_data[item]
        except KeyError:
            raise KeyError('No such key: {}'.format(item))

    def to_dict(self):
        return self._boxed_data.to_dict()

    def to_json(self):
        """Deterministic JSON text: insertion order, two-space indent."""
        return json.dumps(self.to_dict(), indent=2) + '\n'

    def __repr__(self):
        _type = self.__class__.__name__
        return "<{}: {}>".format(_type, self.raw_data)


class ExecutionTrace(BaseModel):
    """One run of an algorithm under a daemon.

    The JSON fields are ``algorithm``, ``graph_file``, ``daemon``,
    ``initial``, ``final``, ``outcome``, ``moves`` and ``move_count``.

    Attributes
    ----------
    initial_state: tuple
        Global state the run started from
    final_state: tuple
        Global state the run stopped in
    steps: List[Move]
        Moves in commit order; synchronous rounds share a step number
    """

    def __init__(self, alg, daemon, initial, steps, final, outcome, graph_file=None, init_source=None):
        self.alg = alg
        self.daemon_config = daemon
        self.initial_state = initial
        self.final_state = final
        self.steps = list(steps)
        self.outcome_kind = outcome
        data = {
            'algorithm': alg.name,
            'graph_file': graph_file,
            'daemon': daemon.to_dict(),
            'initial': alg.format_state(initial),
            'final': alg.format_state(final),
            'outcome': outcome,
            'moves': [m.to_dict(alg) for m in self.steps],
            'move_count': len(self.steps)
        }
        if init_source is not None:
            data['init_source'] = init_source
        super().__init__(data)

    @property
    def converged(self):
        return self.outcome_kind == CONVERGED

    def movers(self):
        return [m.node for m in self.steps]

    def revisits(self):
        """Nodes that move more than once, in first-repeat order."""
        seen, repeated = set(), []
        for node in self.movers():
            if node in seen and node not in repeated:
                repeated.append(node)
            seen.add(node)
        return repeated

    def is_monotone(self, order=None):
        """Every move goes up in the per-node order (default ``<``)."""
        order = order or (lambda i, x, y: x < y)
        return all(order(m.node, m.old, m.new) for m in self.steps)

    def replay(self):
        """Re-apply the moves to the initial state and return the result."""
        s = list(self.initial_state)
        for m in self.steps:
            if s[m.node - 1] != m.old:
                raise ValueError('move {} does not start from the replayed value'.format(m))
            s[m.node - 1] = m.new
        return tuple(s)


class Report(BaseModel):
    """Verification report.

    ``{checks: [{name, pass, counterexample?}], stats: {...},
    discrepancies: [...], notes: [...]}``
    """

    def __init__(self, stats=None):
        super().__init__({'checks': [], 'stats': dict(stats or {}), 'discrepancies': [], 'notes': []})

    def _sync(self):
        self.from_data(self.raw_data)

    def add_check(self, name, ok, counterexample=None):
        entry = {'name': name, 'pass': bool(ok)}
        if not ok and counterexample is not None:
            entry['counterexample'] = counterexample
        self.raw_data['checks'].append(entry)
        self._sync()
        return bool(ok)

    def add_discrepancy(self, example, documented, observed):
        self.raw_data['discrepancies'].append({'example': example, 'documented': documented, 'observed': observed})
        self._sync()

    def add_note(self, note):
        self.raw_data['notes'].append(note)
        self._sync()

    def update_stats(self, **stats):
        self.raw_data['stats'].update(stats)
        self._sync()

    def extend(self, other, prefix=None):
        for entry in other.raw_data['checks']:
            entry = dict(entry)
            if prefix:
                entry['name'] = '{}:{}'.format(prefix, entry['name'])
            self.raw_data['checks'].append(entry)
        self.raw_data['discrepancies'].extend(other.raw_data['discrepancies'])
        self.raw_data['notes'].extend(other.raw_data['notes'])
        self._sync()
        return self

    def check(self, name):
        for entry in self.raw_data['checks']:
            if entry['name'] == name:
                return entry
        raise KeyError('No such check: {}'.format(name))

    def failures(self):
        return [c for c in self.raw_data['checks'] if not c['pass']]

    @property
    def passed(self):
        return not self.failures()
