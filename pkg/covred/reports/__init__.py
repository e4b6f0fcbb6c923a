"""Atlas and worked-example reports"""

from covred.reports.atlas import build_atlas
from covred.reports.example import worked_example_models, write_worked_example

__all__ = ['build_atlas', 'worked_example_models', 'write_worked_example']
