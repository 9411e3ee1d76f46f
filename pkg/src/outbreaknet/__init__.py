"""Reconstruct and analyse outbreak transmission networks from surveillance reports."""

__version__ = "0.1.0"
# Revision of the data contracts (file schemas, JSON field names, CLI flags).
CONTRACT_REVISION = "rev1"
