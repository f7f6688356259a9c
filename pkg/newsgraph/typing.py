__all__ = [
    "Any",
    "BoolArray",
    "Callable",
    "ClassVar",
    "Collection",
    "Dict",
    "FloatArray",
    "FrozenSet",
    "Generic",
    "Hashable",
    "IntArray",
    "Iterable",
    "Iterator",
    "List",
    "Literal",
    "Mapping",
    "NamedTuple",
    "Optional",
    "PathLike",
    "Sequence",
    "Set",
    "Tuple",
    "Type",
    "TypeVar",
    "Union",
    "cast",
    "final",
    "overload",
]

import os

from typing import Any
from typing import Callable
from typing import ClassVar
from typing import Generic
from typing import Literal
from typing import NamedTuple
from typing import Optional
from typing import TypeVar
from typing import Union
from typing import cast
from typing import final
from typing import overload

from builtins import dict as Dict
from builtins import frozenset as FrozenSet
from builtins import list as List
from builtins import set as Set
from builtins import tuple as Tuple
from builtins import type as Type
from collections.abc import Collection
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]
BoolArray = npt.NDArray[np.bool_]

PathLike = Union[str, "os.PathLike[str]"]
