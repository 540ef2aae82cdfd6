"""
Scan logger for cubiclab
Writes a per-run log file and, optionally, a console echo of scan progress
"""
import logging
import os
import sys
from datetime import datetime


class ScanLogger:
    """Run logger for family scans

    It owns the handlers of the ``cubiclab`` logger, so the DEBUG records of
    the library modules (precision escalation, relation counts, lattice
    changes) end up in the same file as the scan progress.
    """

    def __init__(self, log_file_path=None, console_level='WARNING', scan_name="cubiclab scan"):
        """
        Args:
            log_file_path: Path to the log file. If None, uses default naming
            console_level: Level for console output ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL', 'OFF')
            scan_name: Name of the scan for the log header
        """
        if log_file_path is None:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file_path = f"scan_log_{timestamp}.txt"

        self.log_file_path = log_file_path
        self.console_level = console_level
        self.scan_name = scan_name

        self.logger = logging.getLogger('cubiclab')
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()

        file_handler = logging.FileHandler(log_file_path, mode='w', encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter('%(asctime)s | %(levelname)-8s | %(message)s',
                                                    datefmt='%H:%M:%S'))
        self.logger.addHandler(file_handler)

        if console_level.upper() != 'OFF':
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(getattr(logging, console_level.upper()))
            console_handler.setFormatter(logging.Formatter('%(message)s'))
            self.logger.addHandler(console_handler)

        self.current_b = None
        self.current_phase = None
        self.findings = 0

    def log_scan_start(self, parameters=None):
        self.logger.info("=" * 80)
        self.logger.info(f"{self.scan_name.upper()} LOG")
        self.logger.info("=" * 80)
        self.logger.info(f"Started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        self.logger.info(f"Log file: {self.log_file_path}")
        for key, value in (parameters or {}).items():
            self.logger.info(f"{key}: {value}")
        self.logger.info("=" * 80)

    def set_b(self, b):
        self.current_b = b
        self.logger.info("")
        self.logger.info(f"b = {b}, m = {8 * b ** 3 + 3}")
        self.logger.info("-" * 40)

    def set_phase(self, phase_name):
        self.current_phase = phase_name
        self.logger.info(f"  {phase_name}")

    def log_finding(self, description):
        """Something a reader of the scan should look at: a failed identity, an erratum candidate, an error"""
        self.findings += 1
        prefix = f"b = {self.current_b}: " if self.current_b is not None else ""
        self.logger.warning(f"FINDING: {prefix}{description}")

    def log_phase_summary(self, summary):
        self.logger.info(f"    {summary}")

    def log_scan_end(self, summary_stats=None):
        self.logger.info("")
        self.logger.info("=" * 80)
        self.logger.info("SCAN COMPLETED")
        self.logger.info(f"findings: {self.findings}")
        for key, value in (summary_stats or {}).items():
            self.logger.info(f"{key}: {value}")
        self.logger.info("=" * 80)

    def close(self):
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)


def create_scan_logger(config, scan_path, scan_name="cubiclab scan"):
    """
    Factory function to create a scan logger from configuration

    Args:
        config: Configuration dictionary with a ``logging`` section
        scan_path: Directory that receives the log file
        scan_name: Name of the scan

    Returns:
        ScanLogger instance or None if logging is disabled
    """
    logging_config = config.get('logging', {})

    if not logging_config.get('scan_logging', True):
        return None
    log_filename = logging_config.get('log_filename', 'scan_log.txt')
    os.makedirs(scan_path, exist_ok=True)
    return ScanLogger(log_file_path=os.path.join(scan_path, log_filename),
                      console_level=logging_config.get('console_level', 'WARNING'),
                      scan_name=scan_name)
