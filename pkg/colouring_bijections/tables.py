"""
Reference maps shipped with the package and their verification.

The blocks below are the printed tables, kept as text so that the rows can
be compared against recomputation cell by cell. Coordinates:

    H3            (i,j,k)
    L3            (i,j)
    alpha tables  h = c^u b^j written (u,j), u mod 9, j mod 3
    f/A/B/C       h = b^j c^m written (j,m), j mod 9, m mod 3

All maps of the last two kinds are read as maps of C9xC3 with labels (a,b).
Columns of the f/A/B/C blocks are ordered (lambda, ell) = (0,0), (0,1), ..., (2,2).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple, Union

import structlog

from .exceptions import PermFileError, TableMismatchError
from .groups import FiniteGroup, Label, build_from_spec
from .perm_maps import Perm, load_perm

logger = structlog.get_logger(__name__)


_H3_TABLE = """\
# x | sigma | Delta1 | Delta2 | Delta3
(0,0,0) | (0,0,0) | (0,0,0) | (0,0,0) | (0,0,0)
(0,0,1) | (2,0,1) | (2,0,2) | (2,0,0) | (2,0,1)
(0,0,2) | (1,2,1) | (1,2,0) | (1,2,2) | (1,2,1)
(0,1,0) | (1,2,2) | (1,0,0) | (1,1,2) | (1,2,0)
(0,1,1) | (1,0,1) | (1,1,0) | (1,2,0) | (1,0,2)
(0,1,2) | (0,0,1) | (0,1,0) | (0,2,2) | (0,0,1)
(0,2,0) | (0,0,2) | (0,2,2) | (0,1,2) | (0,0,2)
(0,2,1) | (2,0,2) | (2,2,1) | (2,1,1) | (2,0,0)
(0,2,2) | (2,2,1) | (2,1,1) | (2,0,2) | (2,2,2)
(1,0,0) | (1,1,2) | (2,1,2) | (0,1,1) | (1,1,1)
(1,0,1) | (1,0,0) | (2,0,1) | (0,0,2) | (1,0,0)
(1,0,2) | (0,1,0) | (1,1,2) | (2,1,0) | (0,1,2)
(1,1,0) | (0,1,1) | (1,2,1) | (2,0,1) | (0,1,0)
(1,1,1) | (2,1,0) | (0,2,0) | (1,0,2) | (2,1,1)
(1,1,2) | (2,2,0) | (0,0,1) | (1,1,0) | (2,2,0)
(1,2,0) | (0,1,2) | (1,0,2) | (2,2,0) | (0,1,1)
(1,2,1) | (1,0,2) | (2,2,2) | (0,1,0) | (1,0,1)
(1,2,2) | (2,2,2) | (0,1,2) | (1,0,0) | (2,2,1)
(2,0,0) | (1,1,1) | (0,1,1) | (2,1,2) | (1,1,2)
(2,0,1) | (1,2,0) | (0,2,1) | (2,2,1) | (1,2,2)
(2,0,2) | (0,2,1) | (2,2,0) | (1,2,1) | (0,2,0)
(2,1,0) | (0,2,0) | (2,0,0) | (1,1,1) | (0,2,2)
(2,1,1) | (2,1,2) | (1,2,2) | (0,0,1) | (2,1,2)
(2,1,2) | (2,0,0) | (1,1,1) | (0,2,0) | (2,0,2)
(2,2,0) | (1,1,0) | (0,0,2) | (2,2,2) | (1,1,0)
(2,2,1) | (0,2,2) | (2,1,0) | (1,0,1) | (0,2,1)
(2,2,2) | (2,1,1) | (1,0,1) | (0,2,1) | (2,1,0)
"""


_L3_TABLE = """\
# x | sigma | Delta1 | Delta2 | Delta3
(0,0) | (0,0) | (0,0) | (0,0) | (0,0)
(0,1) | (2,0) | (2,1) | (5,2) | (5,0)
(0,2) | (4,1) | (4,0) | (7,2) | (7,1)
(1,0) | (3,1) | (7,1) | (2,1) | (6,1)
(1,1) | (1,2) | (8,0) | (0,1) | (4,2)
(1,2) | (7,1) | (2,0) | (6,2) | (4,1)
(2,0) | (4,2) | (0,2) | (2,2) | (7,2)
(2,1) | (6,0) | (8,1) | (1,2) | (6,0)
(2,2) | (4,0) | (6,2) | (8,1) | (7,0)
(3,0) | (1,1) | (4,1) | (7,1) | (1,1)
(3,1) | (0,1) | (3,2) | (6,0) | (0,1)
(3,2) | (7,2) | (1,1) | (7,0) | (1,2)
(4,0) | (5,1) | (3,1) | (1,1) | (8,1)
(4,1) | (2,2) | (3,0) | (4,1) | (2,2)
(4,2) | (3,0) | (7,2) | (5,1) | (3,0)
(5,0) | (1,0) | (6,0) | (5,0) | (1,0)
(5,1) | (8,2) | (7,0) | (3,1) | (5,2)
(5,2) | (8,1) | (1,0) | (3,2) | (2,1)
(6,0) | (8,0) | (5,0) | (2,0) | (8,0)
(6,1) | (2,1) | (8,2) | (8,0) | (5,1)
(6,2) | (0,2) | (6,1) | (3,0) | (0,2)
(7,0) | (6,2) | (1,2) | (8,2) | (3,2)
(7,1) | (7,0) | (5,1) | (0,2) | (4,0)
(7,2) | (5,2) | (0,1) | (1,0) | (8,2)
(8,0) | (3,2) | (5,2) | (4,2) | (6,2)
(8,1) | (6,1) | (2,2) | (4,0) | (3,1)
(8,2) | (5,0) | (4,2) | (6,1) | (2,0)
"""


_ALPHA_TABLE = """\
# h=(u,j) | alpha0 | Delta1 alpha0 | Delta2 alpha0 | alpha1 | Delta2 alpha1 | alpha2 | Delta2 alpha2 | T1 | T2
(0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0)
(1,0) | (2,0) | (3,0) | (1,0) | (2,0) | (1,0) | (2,0) | (1,0) | (3,0) | (3,0)
(2,0) | (7,1) | (0,1) | (5,1) | (7,2) | (5,2) | (2,1) | (0,1) | (0,2) | (4,1)
(3,0) | (2,1) | (5,1) | (8,1) | (2,2) | (8,2) | (0,2) | (6,2) | (5,2) | (3,2)
(4,0) | (6,1) | (1,1) | (2,1) | (3,1) | (8,1) | (8,1) | (4,1) | (7,1) | (3,1)
(5,0) | (1,0) | (6,0) | (5,0) | (1,0) | (5,0) | (1,0) | (5,0) | (6,0) | (6,0)
(6,0) | (8,2) | (5,2) | (2,2) | (4,2) | (7,2) | (8,2) | (2,2) | (1,2) | (5,2)
(7,0) | (2,2) | (0,2) | (4,2) | (1,1) | (3,1) | (3,1) | (5,1) | (8,1) | (1,1)
(8,0) | (7,2) | (6,2) | (8,2) | (4,1) | (5,1) | (7,2) | (8,2) | (3,1) | (6,2)
(0,1) | (3,0) | (3,1) | (3,2) | (3,0) | (3,2) | (3,0) | (3,2) | (6,1) | (0,1)
(1,1) | (3,1) | (4,2) | (2,0) | (1,2) | (0,1) | (8,0) | (7,2) | (5,0) | (6,1)
(2,1) | (8,1) | (1,2) | (6,0) | (8,1) | (6,0) | (1,1) | (8,0) | (4,2) | (0,2)
(3,1) | (8,0) | (2,1) | (5,2) | (7,0) | (4,2) | (2,2) | (8,1) | (4,1) | (2,0)
(4,1) | (4,0) | (8,1) | (0,2) | (4,0) | (0,2) | (4,0) | (0,2) | (2,1) | (5,1)
(5,1) | (5,2) | (1,0) | (0,1) | (0,1) | (4,0) | (0,1) | (4,0) | (8,2) | (2,2)
(6,1) | (1,2) | (7,0) | (4,1) | (8,2) | (2,1) | (4,2) | (7,1) | (8,0) | (7,0)
(7,1) | (5,1) | (3,2) | (7,0) | (5,1) | (7,0) | (4,1) | (6,0) | (6,2) | (8,2)
(8,1) | (6,2) | (5,0) | (7,1) | (0,2) | (1,1) | (5,2) | (6,1) | (2,0) | (1,0)
(0,2) | (4,2) | (4,1) | (4,0) | (3,2) | (3,0) | (5,1) | (5,2) | (0,1) | (8,0)
(1,2) | (7,0) | (8,2) | (6,1) | (5,0) | (4,1) | (3,2) | (2,0) | (3,2) | (7,1)
(2,2) | (5,0) | (7,2) | (3,1) | (8,0) | (6,1) | (5,0) | (3,1) | (7,2) | (1,2)
(3,2) | (1,1) | (4,0) | (7,2) | (5,2) | (2,0) | (7,1) | (4,2) | (5,1) | (4,0)
(4,2) | (3,2) | (7,1) | (8,0) | (6,1) | (2,2) | (6,0) | (2,1) | (7,0) | (4,2)
(5,2) | (6,0) | (2,2) | (1,1) | (2,1) | (6,2) | (6,1) | (1,2) | (4,0) | (5,0)
(6,2) | (0,2) | (6,1) | (3,0) | (7,1) | (1,2) | (7,0) | (1,1) | (1,0) | (7,2)
(7,2) | (4,1) | (2,0) | (6,2) | (6,2) | (8,0) | (1,2) | (3,0) | (1,1) | (2,1)
(8,2) | (0,1) | (8,0) | (1,2) | (6,0) | (7,1) | (6,2) | (7,0) | (2,2) | (8,1)
"""


_F_TABLE = """\
# h=(j,m) | (0,0) | (0,1) | (0,2) | (1,0) | (1,1) | (1,2) | (2,0) | (2,1) | (2,2)
(0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0)
(0,1) | (1,0) | (1,0) | (1,2) | (1,0) | (1,1) | (1,0) | (7,2) | (1,1) | (6,2)
(0,2) | (2,0) | (5,2) | (5,0) | (5,2) | (2,0) | (2,2) | (4,0) | (2,2) | (4,0)
(1,0) | (5,2) | (1,1) | (1,1) | (7,2) | (8,1) | (4,0) | (0,1) | (8,0) | (0,1)
(1,1) | (8,0) | (7,1) | (7,1) | (4,2) | (4,0) | (5,1) | (4,2) | (7,1) | (2,1)
(1,2) | (6,0) | (6,1) | (3,0) | (3,1) | (3,2) | (7,2) | (5,2) | (4,2) | (6,0)
(2,0) | (6,1) | (5,1) | (5,1) | (4,1) | (6,1) | (5,2) | (7,0) | (7,0) | (0,2)
(2,1) | (0,2) | (2,0) | (2,0) | (1,1) | (7,2) | (8,0) | (3,2) | (1,2) | (5,0)
(2,2) | (3,2) | (3,2) | (6,0) | (6,1) | (1,0) | (7,0) | (0,2) | (6,2) | (7,1)
(3,0) | (4,1) | (7,0) | (7,2) | (7,0) | (7,0) | (2,1) | (5,1) | (5,2) | (4,1)
(3,1) | (1,1) | (0,2) | (0,2) | (0,1) | (4,2) | (4,2) | (4,1) | (4,0) | (7,0)
(3,2) | (2,1) | (4,0) | (4,2) | (4,0) | (0,1) | (6,0) | (8,0) | (3,1) | (5,1)
(4,0) | (4,2) | (8,1) | (8,0) | (2,1) | (7,1) | (1,1) | (1,1) | (0,2) | (4,2)
(4,1) | (8,1) | (2,2) | (2,1) | (8,2) | (1,2) | (0,1) | (5,0) | (8,2) | (1,0)
(4,2) | (7,2) | (6,2) | (3,2) | (3,0) | (3,1) | (3,2) | (3,1) | (2,0) | (3,2)
(5,0) | (7,0) | (8,2) | (8,2) | (5,1) | (5,2) | (1,2) | (1,2) | (8,1) | (3,0)
(5,1) | (2,2) | (4,2) | (4,0) | (2,2) | (6,0) | (3,0) | (7,1) | (4,1) | (7,2)
(5,2) | (5,0) | (3,1) | (6,1) | (6,2) | (2,2) | (4,1) | (2,2) | (5,0) | (8,2)
(6,0) | (8,2) | (2,1) | (2,2) | (0,2) | (5,0) | (6,2) | (8,2) | (2,1) | (5,2)
(6,1) | (3,1) | (0,1) | (0,1) | (8,1) | (8,0) | (7,1) | (3,0) | (7,2) | (3,1)
(6,2) | (0,1) | (8,0) | (8,1) | (2,0) | (0,2) | (8,1) | (6,0) | (3,0) | (2,2)
(7,0) | (3,0) | (5,0) | (5,2) | (3,2) | (3,0) | (5,0) | (1,0) | (0,1) | (2,0)
(7,1) | (1,2) | (6,0) | (3,1) | (5,0) | (5,1) | (0,2) | (6,1) | (1,0) | (1,2)
(7,2) | (6,2) | (4,1) | (4,1) | (1,2) | (2,1) | (2,0) | (2,1) | (6,1) | (8,1)
(8,0) | (7,1) | (1,2) | (1,0) | (6,0) | (6,2) | (6,1) | (6,2) | (3,2) | (6,1)
(8,1) | (4,0) | (3,0) | (6,2) | (8,0) | (8,2) | (8,2) | (2,0) | (6,0) | (1,1)
(8,2) | (5,1) | (7,2) | (7,0) | (7,1) | (4,1) | (3,1) | (8,1) | (5,1) | (8,0)
"""


_A_TABLE = """\
# h=(j,m) | (0,0) | (0,1) | (0,2) | (1,0) | (1,1) | (1,2) | (2,0) | (2,1) | (2,2)
(0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0)
(0,1) | (1,1) | (1,1) | (1,0) | (1,1) | (1,2) | (1,1) | (7,0) | (1,2) | (6,0)
(0,2) | (2,2) | (5,1) | (5,2) | (5,1) | (2,2) | (2,1) | (4,2) | (2,1) | (4,2)
(1,0) | (6,2) | (2,2) | (2,0) | (2,2) | (3,2) | (8,2) | (7,1) | (6,1) | (7,0)
(1,1) | (0,1) | (8,0) | (8,1) | (8,0) | (8,2) | (0,1) | (2,0) | (5,0) | (0,1)
(1,2) | (7,2) | (7,1) | (4,1) | (7,0) | (7,2) | (2,0) | (3,1) | (2,2) | (4,1)
(2,0) | (8,1) | (7,0) | (7,2) | (3,1) | (5,0) | (4,0) | (3,0) | (3,2) | (5,0)
(2,1) | (2,0) | (4,0) | (4,2) | (0,2) | (6,2) | (7,2) | (8,0) | (6,2) | (1,2)
(2,2) | (5,1) | (5,0) | (8,0) | (5,0) | (0,1) | (6,0) | (5,1) | (2,0) | (3,1)
(3,0) | (7,1) | (1,0) | (1,2) | (1,0) | (1,0) | (5,1) | (8,1) | (8,2) | (7,1)
(3,1) | (4,2) | (3,0) | (3,0) | (3,2) | (7,0) | (7,0) | (7,2) | (7,1) | (1,1)
(3,2) | (5,0) | (7,2) | (7,1) | (7,2) | (3,0) | (0,2) | (2,2) | (6,0) | (8,0)
(4,0) | (8,2) | (3,2) | (3,2) | (0,1) | (5,2) | (8,0) | (2,1) | (1,0) | (5,1)
(4,1) | (3,2) | (6,1) | (6,1) | (6,0) | (8,1) | (7,1) | (6,1) | (0,1) | (2,0)
(4,2) | (2,1) | (1,2) | (7,0) | (1,2) | (1,1) | (1,0) | (4,0) | (3,0) | (4,0)
(5,0) | (3,0) | (4,1) | (4,0) | (7,1) | (7,1) | (3,0) | (0,2) | (7,0) | (2,1)
(5,1) | (7,0) | (0,2) | (0,2) | (4,0) | (8,0) | (5,2) | (6,2) | (3,1) | (6,1)
(5,2) | (1,2) | (8,2) | (2,1) | (8,1) | (4,0) | (6,1) | (1,1) | (4,1) | (7,2)
(6,0) | (5,2) | (8,1) | (8,2) | (6,2) | (2,0) | (3,2) | (5,2) | (8,1) | (2,2)
(6,1) | (0,2) | (6,2) | (6,2) | (5,2) | (5,1) | (4,2) | (0,1) | (4,0) | (0,2)
(6,2) | (6,0) | (5,2) | (5,0) | (8,2) | (6,1) | (5,0) | (3,2) | (0,2) | (8,1)
(7,0) | (1,0) | (3,1) | (3,1) | (4,2) | (4,1) | (6,2) | (5,0) | (4,2) | (6,2)
(7,1) | (8,0) | (4,2) | (1,1) | (6,1) | (6,0) | (1,2) | (1,2) | (5,2) | (5,2)
(7,2) | (4,1) | (2,1) | (2,2) | (2,1) | (3,1) | (3,1) | (6,0) | (1,1) | (3,2)
(8,0) | (6,1) | (0,1) | (0,1) | (2,0) | (2,1) | (2,2) | (8,2) | (5,1) | (8,2)
(8,1) | (3,1) | (2,0) | (5,1) | (4,1) | (4,2) | (4,1) | (4,1) | (8,0) | (3,0)
(8,2) | (4,0) | (6,0) | (6,0) | (3,0) | (0,2) | (8,1) | (1,0) | (7,2) | (1,0)
"""


_B_TABLE = """\
# h=(j,m) | (0,0) | (0,1) | (0,2) | (1,0) | (1,1) | (1,2) | (2,0) | (2,1) | (2,2)
(0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0)
(0,1) | (1,2) | (1,2) | (1,1) | (1,2) | (1,0) | (1,2) | (7,1) | (1,0) | (6,1)
(0,2) | (2,1) | (5,0) | (5,1) | (5,0) | (2,1) | (2,0) | (4,1) | (2,0) | (4,1)
(1,0) | (4,2) | (0,1) | (0,1) | (6,2) | (7,1) | (3,0) | (8,1) | (7,0) | (8,1)
(1,1) | (7,2) | (6,0) | (6,0) | (3,1) | (3,2) | (4,0) | (3,1) | (6,0) | (1,0)
(1,2) | (5,1) | (5,2) | (2,1) | (2,2) | (2,0) | (6,0) | (4,0) | (3,0) | (5,1)
(2,0) | (4,1) | (3,1) | (3,1) | (2,1) | (4,1) | (3,2) | (5,0) | (5,0) | (7,2)
(2,1) | (7,1) | (0,2) | (0,2) | (8,0) | (5,1) | (6,2) | (1,1) | (8,1) | (3,2)
(2,2) | (1,0) | (1,0) | (4,1) | (4,2) | (8,1) | (5,1) | (7,0) | (4,0) | (5,2)
(3,0) | (1,1) | (4,0) | (4,2) | (4,0) | (4,0) | (8,1) | (2,1) | (2,2) | (1,1)
(3,1) | (7,0) | (6,1) | (6,1) | (6,0) | (1,1) | (1,1) | (1,0) | (1,2) | (4,2)
(3,2) | (8,2) | (1,1) | (1,0) | (1,1) | (6,2) | (3,1) | (5,1) | (0,2) | (2,2)
(4,0) | (0,2) | (4,1) | (4,0) | (7,1) | (3,1) | (6,1) | (6,1) | (5,2) | (0,2)
(4,1) | (4,0) | (7,1) | (7,0) | (4,1) | (6,1) | (5,0) | (1,2) | (4,1) | (6,2)
(4,2) | (3,0) | (2,0) | (8,0) | (8,1) | (8,2) | (8,0) | (8,2) | (7,1) | (8,0)
(5,0) | (2,0) | (3,2) | (3,2) | (0,1) | (0,2) | (5,2) | (5,2) | (3,1) | (7,0)
(5,1) | (6,1) | (8,1) | (8,2) | (6,1) | (1,2) | (7,2) | (2,0) | (8,0) | (2,1)
(5,2) | (0,1) | (7,2) | (1,2) | (1,0) | (6,0) | (8,2) | (6,0) | (0,1) | (3,0)
(6,0) | (2,2) | (5,1) | (5,2) | (3,2) | (8,0) | (0,2) | (2,2) | (5,1) | (8,2)
(6,1) | (6,0) | (3,0) | (3,0) | (2,0) | (2,2) | (1,0) | (6,2) | (1,1) | (6,0)
(6,2) | (3,2) | (2,1) | (2,2) | (5,1) | (3,0) | (2,2) | (0,1) | (6,1) | (5,0)
(7,0) | (5,0) | (7,0) | (7,2) | (5,2) | (5,0) | (7,0) | (3,0) | (2,1) | (4,0)
(7,1) | (3,1) | (8,2) | (5,0) | (7,2) | (7,0) | (2,1) | (8,0) | (3,2) | (3,1)
(7,2) | (8,0) | (6,2) | (6,2) | (3,0) | (4,2) | (4,1) | (4,2) | (8,2) | (1,2)
(8,0) | (8,1) | (2,2) | (2,0) | (7,0) | (7,2) | (7,1) | (7,2) | (4,2) | (7,1)
(8,1) | (5,2) | (4,2) | (7,1) | (0,2) | (0,1) | (0,1) | (3,2) | (7,2) | (2,0)
(8,2) | (6,2) | (8,0) | (8,1) | (8,2) | (5,2) | (4,2) | (0,2) | (6,2) | (0,1)
"""


_C_TABLE = """\
# h=(j,m) | (0,0) | (0,1) | (0,2) | (1,0) | (1,1) | (1,2) | (2,0) | (2,1) | (2,2)
(0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0) | (0,0)
(0,1) | (1,0) | (1,0) | (1,2) | (1,0) | (1,1) | (1,0) | (7,2) | (1,1) | (6,2)
(0,2) | (2,0) | (5,2) | (5,0) | (5,2) | (2,0) | (2,2) | (4,0) | (2,2) | (4,0)
(1,0) | (5,2) | (1,2) | (1,0) | (1,2) | (2,2) | (7,2) | (6,1) | (5,1) | (6,0)
(1,1) | (8,0) | (7,2) | (7,0) | (7,2) | (7,1) | (8,0) | (1,2) | (4,2) | (8,0)
(1,2) | (6,0) | (6,2) | (3,2) | (6,1) | (6,0) | (1,1) | (2,2) | (1,0) | (3,2)
(2,0) | (6,1) | (5,0) | (5,2) | (1,1) | (3,0) | (2,0) | (1,0) | (1,2) | (3,0)
(2,1) | (0,2) | (2,2) | (2,1) | (7,1) | (4,1) | (5,1) | (6,2) | (4,1) | (8,1)
(2,2) | (3,2) | (3,1) | (6,1) | (3,1) | (7,2) | (4,1) | (3,2) | (0,1) | (1,2)
(3,0) | (4,1) | (7,0) | (7,2) | (7,0) | (7,0) | (2,1) | (5,1) | (5,2) | (4,1)
(3,1) | (1,1) | (0,2) | (0,2) | (0,1) | (4,2) | (4,2) | (4,1) | (4,0) | (7,0)
(3,2) | (2,1) | (4,0) | (4,2) | (4,0) | (0,1) | (6,0) | (8,0) | (3,1) | (5,1)
(4,0) | (4,2) | (8,2) | (8,2) | (5,1) | (1,2) | (4,0) | (7,1) | (6,0) | (1,1)
(4,1) | (8,1) | (2,0) | (2,0) | (2,2) | (4,0) | (3,0) | (2,0) | (5,0) | (7,2)
(4,2) | (7,2) | (6,0) | (3,1) | (6,0) | (6,2) | (6,1) | (0,1) | (8,1) | (0,1)
(5,0) | (7,0) | (8,1) | (8,0) | (2,1) | (2,1) | (7,0) | (4,2) | (2,0) | (6,1)
(5,1) | (2,2) | (4,1) | (4,1) | (8,2) | (3,2) | (0,1) | (1,1) | (7,0) | (1,0)
(5,2) | (5,0) | (3,0) | (6,2) | (3,2) | (8,1) | (1,2) | (5,2) | (8,2) | (2,0)
(6,0) | (8,2) | (2,1) | (2,2) | (0,2) | (5,0) | (6,2) | (8,2) | (2,1) | (5,2)
(6,1) | (3,1) | (0,1) | (0,1) | (8,1) | (8,0) | (7,1) | (3,0) | (7,2) | (3,1)
(6,2) | (0,1) | (8,0) | (8,1) | (2,0) | (0,2) | (8,1) | (6,0) | (3,0) | (2,2)
(7,0) | (3,0) | (5,1) | (5,1) | (6,2) | (6,1) | (8,2) | (7,0) | (6,2) | (8,2)
(7,1) | (1,2) | (6,1) | (3,0) | (8,0) | (8,2) | (3,1) | (3,1) | (7,1) | (7,1)
(7,2) | (6,2) | (4,2) | (4,0) | (4,2) | (5,2) | (5,2) | (8,1) | (3,2) | (5,0)
(8,0) | (7,1) | (1,1) | (1,1) | (3,0) | (3,1) | (3,2) | (0,2) | (6,1) | (0,2)
(8,1) | (4,0) | (3,2) | (6,0) | (5,0) | (5,1) | (5,0) | (5,0) | (0,2) | (4,2)
(8,2) | (5,1) | (7,1) | (7,1) | (4,1) | (1,0) | (0,2) | (2,1) | (8,0) | (2,1)
"""


_BLOCKS = {
    "H3": _H3_TABLE,
    "L3": _L3_TABLE,
    "alpha": _ALPHA_TABLE,
    "f": _F_TABLE,
    "A": _A_TABLE,
    "B": _B_TABLE,
    "C": _C_TABLE,
}

_PAIR_COLUMNS = [(lam, ell) for lam in range(3) for ell in range(3)]


@dataclass(frozen=True)
class EmbeddedTable:
    """One printed map: identifier, the group it acts on, and its (input, output) rows."""
    table_id: str
    group_spec: str
    entries: Tuple[Tuple[Label, Label], ...]

    def as_perm(self) -> Perm:
        group = build_from_spec(self.group_spec)
        images = [0] * group.order
        for source, target in self.entries:
            images[group.label_index[source]] = group.label_index[target]
        return Perm(group, images)


def _parse_cell(cell: str) -> Label:
    return tuple(int(v) for v in cell.strip()[1:-1].split(","))


@lru_cache(maxsize=None)
def parsed_block(name: str) -> Tuple[Tuple[Label, ...], ...]:
    rows = []
    for line in _BLOCKS[name].splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(tuple(_parse_cell(cell) for cell in line.split("|")))
    return tuple(rows)


def _column(name: str, column: int, table_id: str, spec: str) -> EmbeddedTable:
    rows = parsed_block(name)
    return EmbeddedTable(table_id, spec, tuple((row[0], row[column]) for row in rows))


def embedded_tables() -> List[EmbeddedTable]:
    """Every shipped map: the two sigma columns, the three alphas and the 36 f/A/B/C maps."""
    tables = [
        _column("H3", 1, "H3-sigma", "H3"),
        _column("L3", 1, "L3-sigma", "L3"),
    ]
    for lam, column in enumerate((1, 4, 6)):
        tables.append(_column("alpha", column, f"alpha({lam})", "C9xC3"))
    for name in ("f", "A", "B", "C"):
        for offset, (lam, ell) in enumerate(_PAIR_COLUMNS):
            tables.append(_column(name, 1 + offset, f"{name}({lam},{ell})", "C9xC3"))
    return tables


@lru_cache(maxsize=None)
def h3_sigma() -> Perm:
    """The shipped colouring bijection of H3."""
    return _column("H3", 1, "H3-sigma", "H3").as_perm()


@lru_cache(maxsize=None)
def l3_sigma() -> Perm:
    """The shipped colouring bijection of L3."""
    return _column("L3", 1, "L3-sigma", "L3").as_perm()


@lru_cache(maxsize=None)
def alpha_map(lam: int) -> Perm:
    """alpha_lambda as a map of C9xC3, (u,j) -> (u',j')."""
    column = (1, 4, 6)[lam]
    return _column("alpha", column, f"alpha({lam})", "C9xC3").as_perm()


@lru_cache(maxsize=None)
def f_map(lam: int, ell: int) -> Perm:
    """f_(lambda, ell) as a map of C9xC3, (j,m) -> (j',m')."""
    return _column("f", 1 + 3 * lam + ell, f"f({lam},{ell})", "C9xC3").as_perm()


# --------------------------------------------------------------------------
# Verification

@dataclass
class TableCheck:
    """Outcome for one group of printed columns."""
    table: str
    passed: bool = True
    cells_checked: int = 0
    permutations_checked: int = 0
    failures: List[str] = field(default_factory=list)


@dataclass
class TablesReport:
    checks: List[TableCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class _Checker:
    def __init__(self, table: str, group: FiniteGroup, strict: bool):
        self.result = TableCheck(table)
        self.group = group
        self.strict = strict

    def cell(self, row: Label, column: str, expected: int, printed: Label) -> None:
        self.result.cells_checked += 1
        expected_label = self.group.labels[expected]
        if expected_label != printed:
            self._fail(str(row), f"{column}: expected {_fmt(expected_label)}, got {_fmt(printed)}",
                       _fmt(expected_label), _fmt(printed))

    def permutation(self, column: str, values: List[Label]) -> None:
        self.result.permutations_checked += 1
        if len(set(values)) != self.group.order:
            self._fail("-", f"{column} is not a permutation", "permutation", f"{len(set(values))} distinct values")

    def _fail(self, row: str, message: str, expected: str, got: str) -> None:
        self.result.passed = False
        self.result.failures.append(f"row {row}: {message}" if row != "-" else message)
        if self.strict:
            raise TableMismatchError(self.result.table, row, expected, got)


def _fmt(label: Label) -> str:
    return "(" + ",".join(str(c) for c in label) + ")"


def _check_sigma_table(name: str, strict: bool) -> TableCheck:
    group = build_from_spec(name)
    idx = group.label_index
    table, inv = group.table, group.inv_list
    checker = _Checker(f"{name}-sigma", group, strict)
    rows = parsed_block(name)
    for x_label, s_label, d1_label, d2_label, d3_label in rows:
        x, s = idx[x_label], idx[s_label]
        d2 = table[inv[x]][s]
        checker.cell(x_label, "Delta1", table[s][x], d1_label)
        checker.cell(x_label, "Delta2", d2, d2_label)
        checker.cell(x_label, "Delta3", table[d2][x], d3_label)
    for column, title in enumerate(("x", "sigma", "Delta1", "Delta2", "Delta3")):
        checker.permutation(title, [row[column] for row in rows])
    return checker.result


def _check_alpha_table(strict: bool) -> TableCheck:
    group = build_from_spec("C9xC3")
    idx = group.label_index
    table, inv = group.table, group.inv_list
    z = idx[(3, 0)]
    checker = _Checker("alpha", group, strict)
    rows = parsed_block("alpha")
    for row in rows:
        h_label = row[0]
        h, a0, a1, a2 = idx[h_label], idx[row[1]], idx[row[4]], idx[row[6]]
        j = h_label[1]
        checker.cell(h_label, "Delta1 alpha0", table[a0][h], row[2])
        checker.cell(h_label, "Delta2 alpha0", table[inv[h]][a0], row[3])
        checker.cell(h_label, "Delta2 alpha1", table[inv[h]][a1], row[5])
        checker.cell(h_label, "Delta2 alpha2", table[inv[h]][a2], row[7])
        checker.cell(h_label, "T1", table[table[group.power(z, j)][h]][a1], row[8])
        checker.cell(h_label, "T2", table[table[group.power(z, 2 * j)][h]][a2], row[9])
    titles = ("h", "alpha0", "Delta1 alpha0", "Delta2 alpha0", "alpha1", "Delta2 alpha1",
              "alpha2", "Delta2 alpha2", "T1", "T2")
    for column, title in enumerate(titles):
        checker.permutation(title, [row[column] for row in rows])
    return checker.result


def _check_pair_tables(strict: bool) -> TableCheck:
    group = build_from_spec("C9xC3")
    idx = group.label_index
    table, inv = group.table, group.inv_list
    checker = _Checker("f/A/B/C", group, strict)
    f_rows, a_rows, b_rows, c_rows = (parsed_block(name) for name in ("f", "A", "B", "C"))
    for r, f_row in enumerate(f_rows):
        h_label = f_row[0]
        j, m = h_label
        h = idx[h_label]
        for offset, (lam, ell) in enumerate(_PAIR_COLUMNS):
            column = 1 + offset
            f = idx[f_row[column]]
            q = idx[((3 * lam * j) % 9, (ell * j) % 3)]
            checker.cell(h_label, f"A({lam},{ell})", table[table[q][h]][f], a_rows[r][column])
            checker.cell(h_label, f"B({lam},{ell})", table[inv[h]][f], b_rows[r][column])
            checker.cell(h_label, f"C({lam},{ell})", table[q][f], c_rows[r][column])
    for name, rows in (("f", f_rows), ("A", a_rows), ("B", b_rows), ("C", c_rows)):
        for offset, (lam, ell) in enumerate(_PAIR_COLUMNS):
            checker.permutation(f"{name}({lam},{ell})", [row[1 + offset] for row in rows])
    return checker.result


def data_file_name(table_id: str) -> str:
    """h3_sigma.perm, alpha0.perm, f_12.perm, ..."""
    if table_id.endswith("-sigma"):
        return table_id.split("-")[0].lower() + "_sigma.perm"
    name, args = table_id.rstrip(")").split("(")
    digits = args.replace(",", "")
    return f"alpha{digits}.perm" if name == "alpha" else f"{name}_{digits}.perm"


def check_data_files(data_dir: Union[str, Path], strict: bool = False) -> TableCheck:
    """Compare the permutation files under data_dir with the embedded sigma, alpha and f columns."""
    data_dir = Path(data_dir)
    group = build_from_spec("C9xC3")
    checker = _Checker("data files", group, strict)
    for table in embedded_tables():
        if table.table_id[0] in "ABC":
            continue
        path = data_dir / data_file_name(table.table_id)
        checker.result.permutations_checked += 1
        try:
            stored = load_perm(path)
        except PermFileError as exc:
            checker._fail(path.name, str(exc), "readable file", "error")
            continue
        expected = table.as_perm()
        if stored.group.name != expected.group.name or stored != expected:
            checker._fail(path.name, f"{path.name} differs from {table.table_id}", table.table_id, path.name)
    return checker.result


def verify_tables(strict: bool = False, data_dir: Optional[Union[str, Path]] = None) -> TablesReport:
    """
    Recompute every derived column of the shipped tables and check all columns are permutations.

    Args:
        strict: Raise TableMismatchError on the first disagreement instead of collecting it
        data_dir: Also compare the permutation files in this directory with the embedded columns

    Returns:
        TablesReport with one TableCheck per table family
    """
    checks = [
        _check_sigma_table("H3", strict),
        _check_sigma_table("L3", strict),
        _check_alpha_table(strict),
        _check_pair_tables(strict),
    ]
    if data_dir is not None:
        checks.append(check_data_files(data_dir, strict))
    report = TablesReport(checks)
    logger.info(
        "Verified tables",
        passed=report.passed,
        cells=sum(c.cells_checked for c in checks),
        permutations=sum(c.permutations_checked for c in checks),
    )
    return report
