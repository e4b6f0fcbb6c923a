"""Valued-field arithmetic for covred"""

from covred.arithmetic.valued_field import FieldContext, Element, val, residue, uniformizer_power
from covred.arithmetic.residual import ResidualPoly
from covred.arithmetic.newton import PolynomialV, newton_polygon, root_valuations

__all__ = [
    'FieldContext', 'Element', 'val', 'residue', 'uniformizer_power',
    'ResidualPoly', 'PolynomialV', 'newton_polygon', 'root_valuations',
]
