"""Streaming sorter: feeds spikes to a dendrite from a worker thread"""

import logging
import queue
import threading
from typing import Optional, Sequence

import numpy as np

from config import WINDOW
from .core import Dendrite
from .counters import OpCounters

logger = logging.getLogger(__name__)


class StreamingSorter:
    def __init__(self, dendrite: Dendrite, counters: Optional[OpCounters] = None,
                 report_every: int = WINDOW):
        """
        Online sorter with a single writer thread.

        Args:
            dendrite: Dendrite that learns from the stream
            counters: Optional operation counters updated on every step
            report_every: Log progress after this many spikes
        """
        self.dendrite = dendrite
        self.counters = counters
        self.report_every = report_every
        self.spike_queue = queue.Queue()
        self.cids = []
        self.running = True
        self.error = None
        self.sorter_thread = None

    def sorter_worker(self):
        """Background thread that sorts spikes in arrival order"""
        while self.running or not self.spike_queue.empty():
            try:
                features = self.spike_queue.get(timeout=0.1)
            except queue.Empty:
                continue

            if self.error is not None:
                continue
            try:
                self.cids.append(self.dendrite.step(features, self.counters))
            except Exception as e:
                logger.error(f"[SORTER] Failed on spike {len(self.cids) + 1}: {e}")
                self.error = e
                continue

            if len(self.cids) % self.report_every == 0:
                logger.debug(f"[SORTER] Sorted {len(self.cids)} spikes")

    def add_spike(self, features: Sequence[int]):
        """Add a discretized feature vector to the sorting queue"""
        self.spike_queue.put(np.asarray(features))

    def start(self):
        """Start the sorter thread"""
        self.sorter_thread = threading.Thread(target=self.sorter_worker, daemon=True)
        self.sorter_thread.start()

    def finalize(self) -> np.ndarray:
        """Drain the queue, stop the sorter thread and return the CId sequence"""
        self.running = False
        self.sorter_thread.join()
        if self.error is not None:
            raise self.error
        logger.debug(f"[SORTER] Finished: {len(self.cids)} spikes sorted")
        return np.asarray(self.cids, dtype=np.int64)

    def sort(self, stream: Sequence[Sequence[int]]) -> np.ndarray:
        """Sort a whole stream and return its CIds"""
        self.start()
        for features in stream:
            self.add_spike(features)
        return self.finalize()
