"""
Reports package
"""

from .models import (
    ChainModel,
    CoverBallModel,
    DemoReportModel,
    ExperimentReportModel,
    GeneratorReportModel,
    SpectrumReportModel,
    VerdictModel,
    validate_report,
)
from .writer import canonical, to_csv, to_json, write_csv, write_json, write_text

__all__ = [
    'ChainModel', 'CoverBallModel', 'DemoReportModel', 'ExperimentReportModel',
    'GeneratorReportModel', 'SpectrumReportModel', 'VerdictModel', 'validate_report',
    'canonical', 'to_csv', 'to_json', 'write_csv', 'write_json', 'write_text',
]
