"""Framework-agnostic domain layer: configuration, models, identities and errors."""
