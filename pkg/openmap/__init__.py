"""Effective openness of maps on Euclidean space, with exact rational arithmetic."""

from openmap.const import DOMAIN
from openmap.errors import OpenMapError
from openmap.names.budget import Budget, NotYet

__all__ = ["DOMAIN", "Budget", "NotYet", "OpenMapError"]
