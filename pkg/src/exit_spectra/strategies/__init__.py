from .surface_generators import (
    CatenoidGenerator,
    DiskGenerator,
    HelicoidGenerator,
    SphereCapGenerator,
    SurfaceGeneratorStrategy,
)
