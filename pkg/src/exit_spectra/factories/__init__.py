from .dataclass_factory import ReportFactory
from .strategy_factory import SurfaceGeneratorFactory
