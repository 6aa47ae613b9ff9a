"""Locale-independent numeric text formatting for emitted files."""


def sig15(x: float) -> str:
    """Format a float with 15 significant digits, C-locale decimal point."""
    return format(float(x), ".15g")
