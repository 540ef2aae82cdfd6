from .scan_logger import ScanLogger, create_scan_logger  # noqa: F401
