import math

from modsymm.config import settings


def format_scientific(value: float | None) -> str:
    """
    Render a number for the CSV tables.

    Finite values use scientific notation with CSV_SIGNIFICANT_DIGITS
    significant digits and a '.' decimal point. None renders as an empty
    field and non-finite values as the failure mark.
    """
    if value is None:
        return ""
    if not math.isfinite(value):
        return settings.CSV_FAILED_MARK
    return f"{value:.{settings.CSV_SIGNIFICANT_DIGITS - 1}e}"
