# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Numerical translating solitons of mean curvature flow: closed forms, Dirichlet solves of the
translator equation, delta-wings over strips and the coefficient-to-curvature map on ellipsoids.
"""

__version__ = "0.1.0"
__author__ = "The translator_lab Authors"

from .main import run

__all__ = ["run"]
