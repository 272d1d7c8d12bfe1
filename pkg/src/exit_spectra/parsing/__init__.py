from .radial_expression import (
    FUNCTIONS,
    Jet,
    RadialExpression,
    parse_expression,
    parse_radial_expression,
    tokenize,
)
