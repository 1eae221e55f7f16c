from .fields import ConfigFieldsManager, FloatList, TableKind
from .state import Field
from .factory import BoundaryData, FieldFactory
from .calculus import NumericCalculator

__all__ = [
    "ConfigFieldsManager",
    "FloatList",
    "TableKind",
    "Field",
    "BoundaryData",
    "FieldFactory",
    "NumericCalculator",
]
