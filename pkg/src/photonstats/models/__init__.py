"""Concrete matter models exposing counting-field-dressed Liouvillians."""

from .jc import JcParams, JaynesCummingsModel
from .lambda_system import LambdaParams, LambdaModel, LambdaPeriodicModel

__all__ = [
    "JcParams",
    "JaynesCummingsModel",
    "LambdaParams",
    "LambdaModel",
    "LambdaPeriodicModel",
]
