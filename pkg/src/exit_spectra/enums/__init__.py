from .enums import (
    BoundSide,
    Command,
    ComparisonDirection,
    MeshFormat,
    Provenance,
    WarpingKind,
)
from .dataclass_enums import ReportTypes, SurfaceTypes
