"""This package is divided into submodules, but everything is imported in the root."""

# flake8: noqa
from .polyalg import *
from .peakon_model import *
from .forward_spectral import *
from .cont_frac import *
from .inverse_dirichlet import *
from .inverse_periodic import *
from .trace_validation import *
from .collection import *
from .record import *
from .hydrator import *
from .nested import *
from .store import *
from .store_factory import *
from .records import *

__version__ = '0.1.0'
