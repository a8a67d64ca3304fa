from .mds import MdsAlgorithm
from .smp import SmpAlgorithm, SmpInstance
from .ramp import RampAlgorithm, ramp_fixture

ALGORITHMS = ('mds', 'smp', 'ramp')
