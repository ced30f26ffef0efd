"""
Module to read yaml config file and return python object after input parameter consistency is first checked
"""

import yaml

from ..compute.kernels import KernelFamily

EXPERIMENT_KINDS = ['continuous_oscillator', 'discrete_oscillator', 'convergence_1d', 'fill_distance']
TRAINING_KINDS = ['continuous_oscillator', 'discrete_oscillator']


class ConfigError(ValueError):
    """invalid or inconsistent configuration"""


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_vector(value):
    return isinstance(value, (list, tuple)) and len(value) > 0 and all(_is_number(v) for v in value)


class ConfigReader:
    """
    Parser of the yaml experiment configuration file

    The file has the sections experiment, training, kernel, solver, dynamics and
    evaluation; every field has a default and a validating setter. See
    config/*.yml for templates of every experiment kind.

    """

    def __init__(self, path=None, overrides=None):
        """
        ConfigReader __init__ method.

        Initializes the ConfigReader object with default parameters.
        Optionally, if the path to the config file is provided in `path`, the
        config yaml file is read at initialization, and `overrides` of the
        form 'section.key=value' are applied afterwards.

        Parameters
        ----------
        path : str, optional
            Path to yaml config file.
        overrides : list of str, optional

        """

        self.experiment = Experiment()
        self.training   = Training()
        self.kernel     = Kernel()
        self.solver     = Solver()
        self.dynamics   = Dynamics()
        self.evaluation = Evaluation()

        if path:
            self.read_config(path)
        if overrides:
            self.apply_overrides(overrides)

    @property
    def sections(self):
        return {'experiment': self.experiment,
                'training': self.training,
                'kernel': self.kernel,
                'solver': self.solver,
                'dynamics': self.dynamics,
                'evaluation': self.evaluation}

    def read_config(self, path):
        """
        Reads yaml config file provided in `path`

        Parameters
        ----------
        path: str
            Path to yaml config file

        """
        try:
            with open(path, 'r') as f:
                self.yaml_config = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError('cannot read config file {}: {}'.format(path, e))
        if not isinstance(self.yaml_config, dict):
            raise ConfigError('config file {} must contain a mapping of sections'.format(path))

        for (section_name, fields) in self.yaml_config.items():
            for (key, value) in (fields or {}).items():
                self.set_field(section_name, key, value)
        self.check_input_consistency()

    def set_field(self, section_name, key, value):
        """
        Assign one field through its validating setter

        Raises
        ------
        ConfigError
            for unknown sections or keys and for values the setter rejects
        """
        try:
            if section_name not in self.sections:
                raise NameError('Unrecognized configfile section:{}'.format(section_name))
            section = self.sections[section_name]
            if key not in section.fields:
                raise NameError('Unrecognized configfile field:{}, key:{}'.format(section_name, key))
            setattr(section, key, value)
        except (AssertionError, NameError, TypeError, ValueError) as e:
            raise ConfigError(str(e))

    def apply_overrides(self, overrides):
        """
        Apply command-line overrides 'section.key=value'; values are parsed as yaml scalars or lists
        """
        for item in overrides:
            if '=' not in item or '.' not in item.split('=', 1)[0]:
                raise ConfigError('override {} is not of the form section.key=value'.format(item))
            name, raw = item.split('=', 1)
            section_name, key = name.strip().split('.', 1)
            try:
                value = yaml.safe_load(raw)
            except yaml.YAMLError as e:
                raise ConfigError('cannot parse override {}: {}'.format(item, e))
            self.set_field(section_name, key, value)
        self.check_input_consistency()

    def check_input_consistency(self):
        kind = self.experiment.kind
        if kind in TRAINING_KINDS:
            p_b = self.training.p_b
            vanishing = self.training.c_b == 0 and (p_b is None or all(p == 0 for p in p_b))
            if vanishing and self.training.c_tau is None:
                raise ConfigError('normalisation (c_b, p_b) must not vanish without c_tau (zero posterior mean)')
            d = 2
            if self.training.tau_component >= d:
                raise ConfigError('training.tau_component must be below {}'.format(d))
            region = self.training.region
            if region is not None and len(region) not in (1, 2 * d):
                raise ConfigError('training.region needs 1 or {} [low, high] pairs'.format(2 * d))
            if p_b is not None and len(p_b) != d:
                raise ConfigError('training.p_b must have {} entries'.format(d))
            if self.training.xbar_b is not None and len(self.training.xbar_b) != 2 * d:
                raise ConfigError('training.xbar_b must have {} entries'.format(2 * d))
            if kind == 'continuous_oscillator' and len(self.dynamics.initial) != 2 * d:
                raise ConfigError('dynamics.initial must have {} entries'.format(2 * d))
        if kind == 'convergence_1d':
            if self.training.region is not None and len(self.training.region) not in (1, 2):
                raise ConfigError('training.region needs 1 or 2 [low, high] pairs for convergence_1d')

    def to_dict(self):
        return {name: section.to_dict() for (name, section) in self.sections.items()}

    def dump(self):
        return yaml.safe_dump(self.to_dict(), default_flow_style=None, sort_keys=False)

    def write_config(self, path):
        """
        Writes the fully-parameterized config file in output location given by `path`

        Parameters
        ----------
        path: str
            Path to output file

        """
        with open(path, 'w') as f:
            f.write(self.dump())

    def __repr__(self):
        out = str(self.__class__) + '\n'
        for (name, section) in self.sections.items():
            for (key, value) in section.to_dict().items():
                out = out + '{}.{}: {}\n'.format(name, key, value)
        return out


class _Section:
    fields = ()

    def to_dict(self):
        return {key: getattr(self, key) for key in self.fields}

    def __repr__(self):
        out = str(self.__class__) + '\n'
        for (key, value) in self.to_dict().items():
            out = out + '{}: {}\n'.format(key, value)
        return out


class Experiment(_Section):
    fields = ('kind', 'output_dir', 'name')

    def __init__(self):
        self._kind       = 'continuous_oscillator'
        self._output_dir = 'output'
        self._name       = None

    @property
    def kind(self):
        return self._kind

    @property
    def output_dir(self):
        return self._output_dir

    @property
    def name(self):
        return self._name

    @kind.setter
    def kind(self, value):
        assert value in EXPERIMENT_KINDS, "{} is not an allowed experiment kind".format(value)
        self._kind = value

    @output_dir.setter
    def output_dir(self, value):
        assert isinstance(value, str) and value, "output_dir must be a nonempty path"
        self._output_dir = value

    @name.setter
    def name(self, value):
        assert value is None or isinstance(value, str), "name must be a string"
        self._name = value


class Training(_Section):
    fields = ('M', 'alpha', 'dt', 'substeps', 'region', 'xbar_b', 'c_b', 'p_b', 'c_tau', 'tau_shift', 'tau_component',
              'observations')

    def __init__(self):
        self._M             = 80
        self._alpha         = 0.1
        self._dt            = 0.1
        self._substeps      = 10
        self._region        = None
        self._xbar_b        = None
        self._c_b           = 0.0
        self._p_b           = None
        self._c_tau         = 1.0
        self._tau_shift     = None
        self._tau_component = 0
        self._observations = None

    @property
    def M(self):
        return self._M

    @property
    def alpha(self):
        return self._alpha

    @property
    def dt(self):
        return self._dt

    @property
    def substeps(self):
        return self._substeps

    @property
    def region(self):
        return self._region

    @property
    def xbar_b(self):
        return self._xbar_b

    @property
    def c_b(self):
        return self._c_b

    @property
    def p_b(self):
        return self._p_b

    @property
    def c_tau(self):
        return self._c_tau

    @property
    def tau_shift(self):
        return self._tau_shift

    @property
    def tau_component(self):
        return self._tau_component

    @property
    def observations(self):
        return self._observations

    @M.setter
    def M(self, value):
        assert isinstance(value, int) and not isinstance(value, bool) and value >= 0, \
            "M must be a non-negative integer"
        self._M = value

    @alpha.setter
    def alpha(self, value):
        assert _is_number(value), "alpha must be a number"
        self._alpha = float(value)

    @dt.setter
    def dt(self, value):
        assert _is_number(value) and value > 0, "dt must be a number > 0"
        self._dt = float(value)

    @substeps.setter
    def substeps(self, value):
        assert isinstance(value, int) and value > 0, "substeps must be a positive integer"
        self._substeps = value

    @region.setter
    def region(self, value):
        assert value is None or (isinstance(value, list) and
                                 all(_is_vector(pair) and len(pair) == 2 and pair[0] < pair[1] for pair in value)), \
            "region must be a list of [low, high] pairs with low < high"
        self._region = None if value is None else [[float(lo), float(hi)] for (lo, hi) in value]

    @xbar_b.setter
    def xbar_b(self, value):
        assert value is None or _is_vector(value), "xbar_b must be a list of numbers"
        self._xbar_b = None if value is None else [float(v) for v in value]

    @c_b.setter
    def c_b(self, value):
        assert _is_number(value), "c_b must be a number"
        self._c_b = float(value)

    @p_b.setter
    def p_b(self, value):
        assert value is None or _is_vector(value), "p_b must be a list of numbers"
        self._p_b = None if value is None else [float(v) for v in value]

    @c_tau.setter
    def c_tau(self, value):
        assert value is None or (_is_number(value) and value != 0), "c_tau must be a nonzero number or null"
        self._c_tau = None if value is None else float(value)

    @tau_shift.setter
    def tau_shift(self, value):
        assert value is None or (_is_number(value) and value != 0), "tau_shift must be a nonzero number or null"
        self._tau_shift = None if value is None else float(value)

    @tau_component.setter
    def tau_component(self, value):
        assert isinstance(value, int) and not isinstance(value, bool) and value >= 0, \
            "tau_component must be a non-negative integer"
        self._tau_component = value

    @observations.setter
    def observations(self, value):
        assert value is None or (isinstance(value, str) and value), "observations must be a csv path"
        self._observations = value


class Kernel(_Section):
    fields = ('family', 'lengthscale')

    def __init__(self):
        self._family      = KernelFamily.SQUARED_EXPONENTIAL.value
        self._lengthscale = 1.0

    @property
    def family(self):
        return self._family

    @property
    def lengthscale(self):
        return self._lengthscale

    @family.setter
    def family(self, value):
        assert value in [f.value for f in KernelFamily], "{} is not an allowed kernel family".format(value)
        self._family = value

    @lengthscale.setter
    def lengthscale(self, value):
        assert _is_number(value) and value > 0, "lengthscale must be a number > 0"
        self._lengthscale = float(value)


class Solver(_Section):
    _allowed_methods = ['auto', 'eigh', 'features']
    fields = ('jitter', 'rtol', 'range_tol', 'method', 'max_features', 'n_workers')

    def __init__(self):
        self._jitter       = 0.0
        self._rtol         = None
        self._range_tol    = 1e-8
        self._method       = 'auto'
        self._max_features = 4000
        self._n_workers    = 1

    @property
    def jitter(self):
        return self._jitter

    @property
    def rtol(self):
        return self._rtol

    @property
    def range_tol(self):
        return self._range_tol

    @property
    def method(self):
        return self._method

    @property
    def max_features(self):
        return self._max_features

    @property
    def n_workers(self):
        return self._n_workers

    @jitter.setter
    def jitter(self, value):
        assert _is_number(value) and value >= 0, "jitter must be a number >= 0"
        self._jitter = float(value)

    @rtol.setter
    def rtol(self, value):
        assert value is None or (_is_number(value) and 0 < value < 1), "rtol must be null or a number in range (0, 1)"
        self._rtol = None if value is None else float(value)

    @range_tol.setter
    def range_tol(self, value):
        assert _is_number(value) and value > 0, "range_tol must be a number > 0"
        self._range_tol = float(value)

    @method.setter
    def method(self, value):
        assert value in self._allowed_methods, "{} is not an allowed solver method".format(value)
        self._method = value

    @max_features.setter
    def max_features(self, value):
        assert isinstance(value, int) and not isinstance(value, bool) and value > 0, \
            "max_features must be a positive integer"
        self._max_features = value

    @n_workers.setter
    def n_workers(self, value):
        assert isinstance(value, int) and value > 0, "n_workers must be a positive integer"
        self._n_workers = value


class Dynamics(_Section):
    fields = ('initial', 'horizon', 'dt', 'steps', 'newton_tol', 'max_iter', 'fd_jacobian')

    def __init__(self):
        self._initial     = [0.2, 0.1, 0.0, 0.0]
        self._horizon     = 100.0
        self._dt          = 0.01
        self._steps       = 1000
        self._newton_tol  = 1e-12
        self._max_iter    = 50
        self._fd_jacobian = False

    @property
    def initial(self):
        return self._initial

    @property
    def horizon(self):
        return self._horizon

    @property
    def dt(self):
        return self._dt

    @property
    def steps(self):
        return self._steps

    @property
    def newton_tol(self):
        return self._newton_tol

    @property
    def max_iter(self):
        return self._max_iter

    @property
    def fd_jacobian(self):
        return self._fd_jacobian

    @initial.setter
    def initial(self, value):
        assert _is_vector(value), "initial must be a list of numbers"
        self._initial = [float(v) for v in value]

    @horizon.setter
    def horizon(self, value):
        assert _is_number(value) and value > 0, "horizon must be a number > 0"
        self._horizon = float(value)

    @dt.setter
    def dt(self, value):
        assert _is_number(value) and value > 0, "dt must be a number > 0"
        self._dt = float(value)

    @steps.setter
    def steps(self, value):
        assert isinstance(value, int) and value >= 0, "steps must be a non-negative integer"
        self._steps = value

    @newton_tol.setter
    def newton_tol(self, value):
        assert _is_number(value) and value > 0, "newton_tol must be a number > 0"
        self._newton_tol = float(value)

    @max_iter.setter
    def max_iter(self, value):
        assert isinstance(value, int) and value > 0, "max_iter must be a positive integer"
        self._max_iter = value

    @fd_jacobian.setter
    def fd_jacobian(self, value):
        assert isinstance(value, bool), "fd_jacobian must be boolean"
        self._fd_jacobian = value


class Evaluation(_Section):
    _allowed_slices = ['position', 'velocity']
    _allowed_observables = ['EL', 'DEL', 'Ham', 'Mm', 'value', 'accel_error']
    fields = ('slice', 'grid', 'observable', 'M_list', 'mesh', 'fill_dims', 'fill_max_M', 'probe_resolution')

    def __init__(self):
        self._slice            = 'position'
        self._grid             = 50
        self._observable       = 'EL'
        self._M_list           = [2, 4, 8, 16, 32, 64]
        self._mesh             = [10, 11]
        self._fill_dims        = [1, 2]
        self._fill_max_M       = 400
        self._probe_resolution = 100

    @property
    def slice(self):
        return self._slice

    @property
    def grid(self):
        return self._grid

    @property
    def observable(self):
        return self._observable

    @property
    def M_list(self):
        return self._M_list

    @property
    def mesh(self):
        return self._mesh

    @property
    def fill_dims(self):
        return self._fill_dims

    @property
    def fill_max_M(self):
        return self._fill_max_M

    @property
    def probe_resolution(self):
        return self._probe_resolution

    @slice.setter
    def slice(self, value):
        assert value in self._allowed_slices, "{} is not an allowed slice".format(value)
        self._slice = value

    @grid.setter
    def grid(self, value):
        assert isinstance(value, int) and value >= 2, "grid must be an integer >= 2"
        self._grid = value

    @observable.setter
    def observable(self, value):
        assert value in self._allowed_observables, "{} is not an allowed observable".format(value)
        self._observable = value

    @M_list.setter
    def M_list(self, value):
        assert isinstance(value, list) and value and all(isinstance(m, int) and m > 0 for m in value), \
            "M_list must be a list of positive integers"
        self._M_list = sorted(value)

    @mesh.setter
    def mesh(self, value):
        assert isinstance(value, list) and len(value) == 2 and all(isinstance(n, int) and n >= 2 for n in value), \
            "mesh must be [n_x, n_v] with integers >= 2"
        self._mesh = value

    @fill_dims.setter
    def fill_dims(self, value):
        assert isinstance(value, list) and value and all(v in (1, 2) for v in value), \
            "fill_dims must be a list drawn from [1, 2]"
        self._fill_dims = value

    @fill_max_M.setter
    def fill_max_M(self, value):
        assert isinstance(value, int) and value >= 4, "fill_max_M must be an integer >= 4"
        self._fill_max_M = value

    @probe_resolution.setter
    def probe_resolution(self, value):
        assert isinstance(value, int) and value >= 10, "probe_resolution must be an integer >= 10"
        self._probe_resolution = value
