#!/usr/bin/env python3
"""
Resource monitoring for long simulator runs
Samples CPU and memory of the current process while sweeps execute
"""

import logging
import threading
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, List, Optional

import psutil

logger = logging.getLogger("resource_monitor")


@dataclass
class ResourceStats:
    """Resource usage statistics"""

    timestamp: datetime
    cpu_percent: float  # of one core, for this process
    rss_mb: float
    system_memory_percent: float
    memory_total_mb: float
    thread_count: int
    cpu_count: int


class ResourceMonitor:
    """Samples the simulator process in a daemon thread"""

    def __init__(self, interval_seconds: int = 5):
        """
        Args:
            interval_seconds: Interval between measurements in seconds
        """
        self.interval_seconds = interval_seconds
        self.is_running = False
        self.monitor_thread: Optional[threading.Thread] = None
        self.stats_history: List[ResourceStats] = []
        self._process = psutil.Process()
        self._stop_event = threading.Event()

    def _get_resource_stats(self) -> ResourceStats:
        """Get current resource usage statistics"""
        with self._process.oneshot():
            cpu_percent = self._process.cpu_percent(interval=None)
            rss = self._process.memory_info().rss
            threads = self._process.num_threads()
        memory = psutil.virtual_memory()
        return ResourceStats(
            timestamp=datetime.now(),
            cpu_percent=cpu_percent,
            rss_mb=rss / (1024 * 1024),
            system_memory_percent=memory.percent,
            memory_total_mb=memory.total / (1024 * 1024),
            thread_count=threads,
            cpu_count=psutil.cpu_count() or 1,
        )

    def _monitor_loop(self):
        logger.info(f"🚀 Resource monitoring started (interval: {self.interval_seconds}s)")
        self._record()
        while not self._stop_event.wait(self.interval_seconds):
            self._record()

    def _record(self):
        stats = self._get_resource_stats()
        self.stats_history.append(stats)
        logger.debug(
            "📊 RESOURCES | CPU: %.1f%% | RSS: %.1f MB | SYS MEM: %.1f%% | THREADS: %d",
            stats.cpu_percent,
            stats.rss_mb,
            stats.system_memory_percent,
            stats.thread_count,
        )

    def start_monitoring(self):
        """Start resource monitoring in a separate thread"""
        if self.is_running:
            logger.warning("Resource monitoring is already running")
            return
        self.is_running = True
        self._stop_event.clear()
        self.monitor_thread = threading.Thread(
            target=self._monitor_loop, name="ResourceMonitor", daemon=True
        )
        self.monitor_thread.start()

    def stop_monitoring(self):
        """Stop resource monitoring and log the summary"""
        if not self.is_running:
            return
        self.is_running = False
        self._stop_event.set()
        if self.monitor_thread and self.monitor_thread.is_alive():
            self.monitor_thread.join(timeout=2)
        logger.info("🛑 Resource monitoring stopped")
        self._log_summary()

    def _log_summary(self):
        summary = self.get_stats_summary()
        if not summary:
            return
        logger.info("=" * 60)
        logger.info("🖥️  RESOURCE USAGE SUMMARY")
        logger.info(
            f"📈 CPU avg {summary['cpu_average']}%, peak {summary['cpu_peak']}% "
            f"({summary['cpu_count']} cores available)"
        )
        logger.info(
            f"🔥 RSS avg {summary['rss_average_mb']} MB, peak {summary['rss_peak_mb']} MB "
            f"of {summary['memory_total_mb']} MB"
        )
        logger.info(f"📊 MEASUREMENTS TAKEN: {summary['measurements_count']}")
        logger.info("=" * 60)

    def get_stats_summary(self) -> Dict:
        """Get a summary of resource statistics"""
        if not self.stats_history:
            return {}
        count = len(self.stats_history)
        return {
            "cpu_average": round(sum(s.cpu_percent for s in self.stats_history) / count, 2),
            "cpu_peak": round(max(s.cpu_percent for s in self.stats_history), 2),
            "rss_average_mb": round(sum(s.rss_mb for s in self.stats_history) / count, 2),
            "rss_peak_mb": round(max(s.rss_mb for s in self.stats_history), 2),
            "system_memory_peak_percent": round(
                max(s.system_memory_percent for s in self.stats_history), 2
            ),
            "memory_total_mb": round(self.stats_history[0].memory_total_mb, 2),
            "cpu_count": self.stats_history[0].cpu_count,
            "measurements_count": count,
        }


class monitored:
    """Context manager: `with monitored(interval): ...`; interval 0 disables monitoring"""

    def __init__(self, interval_seconds: int):
        self.monitor = ResourceMonitor(interval_seconds) if interval_seconds > 0 else None

    def __enter__(self) -> Optional[ResourceMonitor]:
        if self.monitor is not None:
            self.monitor.start_monitoring()
        return self.monitor

    def __exit__(self, *exc):
        if self.monitor is not None:
            self.monitor.stop_monitoring()
        return False
