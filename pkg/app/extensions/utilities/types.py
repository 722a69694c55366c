from typing import TypeAlias
import numpy as np
import numpy.typing as npt


JSON: TypeAlias = dict[str, "JSON"] | list["JSON"] | str | int | float | bool | None
"""Type alias for JSON objects"""


ComplexMatrix: TypeAlias = npt.NDArray[np.complex128]
"""Type alias for dense complex matrices (and column vectors). Row-major, `complex128`."""


RealVector: TypeAlias = npt.NDArray[np.float64]
"""Type alias for real vectors, such as eigenvalue lists."""


SeedLike: TypeAlias = int | np.random.SeedSequence
"""Type alias for anything accepted as the root of a reproducible random stream."""
