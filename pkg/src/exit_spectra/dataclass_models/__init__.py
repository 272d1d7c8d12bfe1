from .abstract_base_dataclass import AbstractBaseDataClass, to_plain
from .concrete_dataclasses import *
