"""
This file contains the synthetic stand-in for per-item inference work: a
calibrated busy-wait by default, or a plain sleep.
"""

# External imports
import time
from typing import Sequence
from scipy import stats


SPIN = "spin"
SLEEP = "sleep"
MODES = (SPIN, SLEEP)


def _kernel(iterations: int) -> int:
    # Integer LCG, enough to keep one core busy without allocating
    acc = 1
    for _ in range(iterations):
        acc = (acc * 1103515245 + 12345) & 0x7FFFFFFF
    return acc


class SyntheticWork:
    """
    Burns wall-clock time standing in for processing a batch.

    In spin mode the kernel cost is measured once (seconds per iteration,
    from a least-squares fit over a few timed trials) and work runs in
    kernel chunks of about chunk_seconds until the deadline passes.
    """
    def __init__(self, mode: str = SPIN, chunk_seconds: float = 0.001):
        if mode not in MODES:
            raise ValueError(f"Work mode must be one of {', '.join(MODES)}, got '{mode}'")
        self.mode = mode
        self.chunk_seconds = chunk_seconds
        self.seconds_per_iteration = None
        self.chunk_iterations = 1

    def calibrate(self, trials: Sequence[int] = (5_000, 10_000, 20_000, 40_000)) -> float:
        """
        Fit elapsed seconds against kernel iterations.

        Returns:
            float: seconds per kernel iteration
        """
        elapsed = []
        for iterations in trials:
            started = time.perf_counter()
            _kernel(iterations)
            elapsed.append(time.perf_counter() - started)

        fit = stats.linregress(list(trials), elapsed)
        # A noisy fit can come out flat, fall back to the mean cost
        slope = fit.slope if fit.slope > 0 else sum(elapsed) / sum(trials)
        self.seconds_per_iteration = slope
        self.chunk_iterations = max(1, int(self.chunk_seconds / slope))
        return slope

    def run_for(self, seconds: float) -> float:
        """Occupy the caller for seconds, returning the time actually spent"""
        started = time.perf_counter()
        if seconds <= 0:
            return 0.0
        if self.mode == SLEEP:
            time.sleep(seconds)
        else:
            if self.seconds_per_iteration is None:
                self.calibrate()
            deadline = started + seconds
            while time.perf_counter() < deadline:
                _kernel(self.chunk_iterations)
        return time.perf_counter() - started

    def process_batch(self, count: int, rate: float) -> float:
        """Work for count items at rate items/sec"""
        return self.run_for(count / rate)

    def achieved_rate(self, rate: float, sample_seconds: float = 0.05) -> float:
        """
        items/sec actually delivered when asked for rate, from one short
        sample of sample_seconds worth of items.
        """
        if self.mode == SPIN and self.seconds_per_iteration is None:
            self.calibrate()
        spent = self.run_for(sample_seconds)
        return rate * sample_seconds / spent if spent > 0 else rate
