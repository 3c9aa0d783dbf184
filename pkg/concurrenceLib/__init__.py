# -*- coding: utf-8 -*-

from .code import Errors
from .code import LinAlg
from .code import States
from .code import Concurrence
from .code import Optim
from .code import Bounds
from .code import Cli
