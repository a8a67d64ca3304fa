from .algorithms import MdsAlgorithm, RampAlgorithm, SmpAlgorithm, SmpInstance, ramp_fixture
from .client import Engine
from .errors import *
from .graph import Graph, parse_graph, read_graph
from .scheduler import Daemon, run

############
# METADATA #
############

__version__ = '1.0.0'
__title__ = 'latticelin'
__license__ = 'MIT'
