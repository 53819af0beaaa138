"""Two-boundary quantum mechanics toolkit.

Modules
-------
tsvf          pre/post-selected states: ABL probabilities, weak values, dephasing
walk          time-symmetric lattice walk with rejection sampling and an exact oracle
interference  HBT pair rates, beam-splitter outputs, stationary-phase double slit
laser         photon-number rate equation and RK4 integration
cli           ``twoboundary`` command-line front end
"""

from . import interference, laser, tsvf, walk
from .errors import (
    ComputationError,
    ConfigError,
    DegenerateObservableError,
    ImpossibleBoundaryError,
    InputError,
    NoStationaryPointError,
    StateSpaceTooLargeError,
    TwoBoundaryError,
    UndefinedWeakValueError,
)

__version__ = "0.1.0"
