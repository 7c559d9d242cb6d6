"""Application delivery layer package."""
