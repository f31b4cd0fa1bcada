class NumericalError(RuntimeError):
    """Internal numerical failure (non-finite intermediate state)."""
