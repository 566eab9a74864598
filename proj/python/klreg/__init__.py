"""Kummer-Leopoldt constant and normalized p-adic regulator toolkit."""

try:
    from ._klreg import (  # type: ignore[attr-defined]
        analyze,
        analyze_file,
        fundamental_unit,
        narrow_class_group,
        oracle,
        scan,
        selftest,
        snf_divisors,
        UsageError,
        PrecisionError,
        BudgetError,
        __version__,
    )
except ImportError:  # in-tree builds put the extension directly on sys.path
    from _klreg import (  # type: ignore[no-redef]
        analyze,
        analyze_file,
        fundamental_unit,
        narrow_class_group,
        oracle,
        scan,
        selftest,
        snf_divisors,
        UsageError,
        PrecisionError,
        BudgetError,
        __version__,
    )

__all__ = [
    "analyze",
    "analyze_file",
    "fundamental_unit",
    "narrow_class_group",
    "oracle",
    "scan",
    "selftest",
    "snf_divisors",
    "UsageError",
    "PrecisionError",
    "BudgetError",
    "__version__",
]
