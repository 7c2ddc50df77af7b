"""Exact combinatorial mirrors of tropical hypersurfaces and complete intersections."""

from .algebra import ChartExpression, LaurentPolynomial, NovikovSeries, expr_pow, rational, series_invert
from .ci import CIDatum, CIMirror, build_ci_mirror, realized_tuples
from .critlocus import ALL, EMPTY, ModificationSpec, ReducedGraph, count_check, modify
from .errors import (
    CutoffRequired,
    DegenerateInput,
    MinimizerNotRealized,
    NotClosedTrivalent,
    NotInvertible,
    NotRegular,
    ParseError,
    TropMirrorError,
    ValidationError,
    WrongDimension,
    ZeroSeries,
)
from .mirror import (
    AmbientToricData,
    Mirror,
    build_mirror,
    build_W0,
    build_W0H,
    singular_fiber_components,
    vanishing_order,
)
from .pipeline import JobOptions, JobSpec, parse_input, run, serialize_job
from .tropical import (
    WeightedPointSet,
    build_tropical_complex,
    curve_graph,
    is_maximal,
    lower_hull_subdivision,
    shoot_ray,
    tropical_value,
)
from .wallcross import WallTransform, apply_flux, apply_wall, build_converse

__version__ = "0.1.0"
