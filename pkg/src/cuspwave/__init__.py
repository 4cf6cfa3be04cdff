"""cuspwave: pseudospectral solvers and operator algebra for Tricomi-type
degenerate hyperbolic equations d_t^2 u - t^m Lap u = f."""

__version__ = "0.1.0"
