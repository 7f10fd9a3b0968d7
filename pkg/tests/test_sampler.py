"""Sampling loop: accumulator arithmetic, lifecycle, dump tap, robustness."""

from __future__ import annotations

import threading
import time

import pytest

import pmt
from helpers import ScriptedGpuReader, wait_for
from pmt.backends.synthetic import SyntheticBackend, SyntheticProfile
from pmt.core import CounterKind
from pmt.errors import (
    DumpAlreadyActiveError,
    DumpNotActiveError,
    IntervalTooSmallError,
    SensorStoppedError,
)
from pmt.sampler import EnergyAccumulator, Sampler, SamplerConfig, prime, tick
from pmt.trace import parse_trace

POWER = CounterKind.INSTANTANEOUS_POWER
ENERGY = CounterKind.CUMULATIVE_ENERGY


class TestTick:
    def test_power_left_rectangle(self):
        acc = EnergyAccumulator(kind=POWER)
        prime(acc, 20.0, 0.0)
        tick(acc, 40.0, POWER, 0.1)
        # previous power (20 W) spans the interval; the new sample is stored
        assert acc.accumulated_joules == pytest.approx(2.0, abs=1e-5)
        assert acc.last_power_watts == 40.0

    def test_energy_microjoule_delta(self):
        acc = EnergyAccumulator(kind=ENERGY, max_range=10**12)
        prime(acc, 1_000_000, 0.0)
        tick(acc, 1_500_000, ENERGY, 0.1)
        assert acc.accumulated_joules == pytest.approx(0.5, abs=1e-5)
        assert acc.watts_now == pytest.approx(5.0, rel=1e-6)

    def test_ramp_matches_bruteforce_left_sum(self):
        # 0 -> 100 W over 1 s sampled every 10 ms
        steps = 100
        dt = 0.01
        watts = [100.0 * i / steps for i in range(steps + 1)]
        expected = sum(watts[i] * dt for i in range(steps))  # 49.5
        assert expected == pytest.approx(49.5)
        acc = EnergyAccumulator(kind=POWER)
        prime(acc, watts[0], 0.0)
        for w in watts[1:]:
            tick(acc, w, POWER, dt)
        assert acc.accumulated_joules == pytest.approx(expected, abs=1e-3)

    def test_energy_wrap_corrected_mid_run(self):
        acc = EnergyAccumulator(kind=ENERGY, max_range=1000)
        prime(acc, 990, 0.0)
        tick(acc, 40, ENERGY, 0.1)
        assert acc.accumulated_uj == 50

    def test_accumulation_is_non_decreasing(self):
        acc = EnergyAccumulator(kind=POWER)
        prime(acc, 5.0, 0.0)
        previous = 0
        for w in (5.0, 0.0, 0.0, 17.0, 3.0):
            tick(acc, w, POWER, 0.05)
            assert acc.accumulated_quanta >= previous
            previous = acc.accumulated_quanta


class TestConfigValidation:
    def test_interval_below_backend_minimum_rejected(self):
        backend = SyntheticBackend(config={"min_interval_ms": 500})
        with pytest.raises(IntervalTooSmallError):
            Sampler(backend, SamplerConfig(interval_ms=5))

    def test_interval_at_minimum_accepted(self, sensors):
        reader = ScriptedGpuReader(power_fn=lambda t: 250_000)
        sensor = sensors("nvml", config={"reader": reader, "interval_ms": 10})
        assert sensor.interval_ms == 10

    def test_create_rejects_small_interval(self):
        with pytest.raises(IntervalTooSmallError):
            pmt.create("synthetic", min_interval_ms=500, interval_ms=5)

    def test_nonpositive_interval_rejected(self):
        with pytest.raises(IntervalTooSmallError):
            SamplerConfig(interval_ms=0)


class TestIntegration:
    def test_zero_point_at_creation(self, sensors):
        sensor = sensors("synthetic", power_watts=30, interval_ms=100)
        state = sensor.read()
        assert state.joules_total <= 30 * 0.1 + 1e-6
        assert state.joules_per_channel == (state.joules_total,)

    def test_constant_power_one_second(self, sensors):
        sensor = sensors("synthetic", power_watts=30, interval_ms=100)
        start = sensor.read()
        time.sleep(1.0)
        end = sensor.read()
        measured = pmt.joules(start, end)
        expected = 30.0 * pmt.seconds(start, end)
        assert abs(measured - expected) <= 30.0 * 2 * 0.1  # two-interval bound

    @pytest.mark.parametrize(
        "profile_config",
        [
            {"power_watts": 200.0},
            {"shape": "ramp", "base_watts": 0.0, "peak_watts": 100.0, "duration_s": 0.4},
            {"shape": "square", "base_watts": 10.0, "peak_watts": 90.0, "period_s": 0.2},
        ],
        ids=["constant", "ramp", "square"],
    )
    def test_energy_matches_closed_form_within_two_intervals(self, sensors, profile_config):
        interval_s = 0.05
        backend = SyntheticBackend(config=profile_config)
        sampler = Sampler(backend, SamplerConfig(interval_ms=50))
        sampler.start()
        try:
            time.sleep(0.6)
        finally:
            sampler.stop()
        state = sampler.read()
        oracle = backend.profile.energy_between(0.0, state.timestamp)
        bound = backend.profile.peak_watts * 2 * interval_s
        assert abs(state.joules_total - oracle) <= bound + 1e-9

    def test_live_snapshot_differences_add_exactly(self, sensors):
        sensor = sensors("synthetic", power_watts=123.456, interval_ms=10)
        states = []
        for _ in range(5):
            time.sleep(0.08)
            states.append(sensor.read())
        for a, b, c in zip(states, states[1:], states[2:]):
            assert pmt.joules(a, c) == pmt.joules(a, b) + pmt.joules(b, c)

    def test_two_sensors_do_not_disturb_each_other(self, sensors):
        a = sensors("synthetic-a", power_watts=10, interval_ms=20)
        b = sensors("synthetic-b", power_watts=70, interval_ms=20)
        start_a, start_b = a.read(), b.read()
        time.sleep(0.5)
        end_a, end_b = a.read(), b.read()
        for sensor, start, end, watts in ((a, start_a, end_a, 10), (b, start_b, end_b, 70)):
            span = pmt.seconds(start, end)
            assert abs(pmt.joules(start, end) - watts * span) <= watts * 2 * 0.02 + 1e-9


class TestSnapshotConsistency:
    def test_concurrent_reads_see_consistent_monotone_states(self, sensors):
        sensor = sensors("synthetic", power_watts=50, interval_ms=5)
        collected: list[list] = [[] for _ in range(4)]
        stop = threading.Event()

        def reader(bucket):
            while not stop.is_set():
                bucket.append(sensor.read())

        threads = [threading.Thread(target=reader, args=(b,)) for b in collected]
        for t in threads:
            t.start()
        time.sleep(0.4)
        stop.set()
        for t in threads:
            t.join()
        states = sorted((s for b in collected for s in b), key=lambda s: s.timestamp)
        assert states
        for s in states:
            assert s.joules_total == sum(s.joules_per_channel)
        for earlier, later in zip(states, states[1:]):
            assert later.joules_total >= earlier.joules_total
            assert later.timestamp >= earlier.timestamp


class TestLifecycle:
    def test_read_after_stop_returns_last_state(self, sensors):
        sensor = sensors("synthetic", power_watts=30, interval_ms=20)
        time.sleep(0.1)
        sensor.stop()
        frozen = sensor.read()
        time.sleep(0.05)
        again = sensor.read()
        assert again == frozen

    def test_double_stop_is_noop(self, sensors):
        sensor = sensors("synthetic", power_watts=30, interval_ms=20)
        sensor.stop()
        sensor.stop()

    def test_stop_completes_within_two_intervals(self, sensors):
        sensor = sensors("synthetic", power_watts=30, interval_ms=200)
        time.sleep(0.25)
        t0 = time.monotonic()
        sensor.stop()
        assert time.monotonic() - t0 <= 2 * 0.2

    def test_backend_failure_freezes_and_raises_on_read(self, sensors):
        def power_fn(t):
            if t > 0.15:
                raise RuntimeError("scripted mid-run failure")
            return 100_000

        sensor = sensors("nvml", config={"reader": ScriptedGpuReader(power_fn=power_fn),
                                         "interval_ms": 20})
        assert wait_for(lambda: sensor.stopped, timeout=3.0)
        with pytest.raises(SensorStoppedError):
            sensor.read()


class TestDump:
    def test_tick_counting_and_levels(self, sensors, tmp_path):
        path = tmp_path / "dump.txt"
        sensor = sensors("synthetic", power_watts=30, interval_ms=100, dump_path=path)
        time.sleep(1.0)
        sensor.stop()
        end = sensor.read()
        trace = parse_trace(path)
        expected_records = end.timestamp / 0.1
        assert abs(len(trace.records) - (expected_records + 1)) <= 2
        for record in trace.records:
            assert record.watts_total == pytest.approx(30.0, rel=1e-6)

    def test_dump_agrees_with_paired_reads(self, sensors, tmp_path):
        path = tmp_path / "dump.txt"
        sensor = sensors("synthetic", power_watts=80, interval_ms=50, dump_path=path)
        start = sensor.read()
        time.sleep(0.8)
        sensor.stop()
        end = sensor.read()
        trace = parse_trace(path)
        integral = sum(
            trace.records[i].watts_total
            * (trace.records[i + 1].timestamp - trace.records[i].timestamp)
            for i in range(len(trace.records) - 1)
        )
        assert integral == pytest.approx(pmt.joules(start, end), rel=0.01)

    def test_record_spacing_within_bounds(self, sensors, tmp_path):
        path = tmp_path / "dump.txt"
        h = 0.05
        sensor = sensors("synthetic", power_watts=30, interval_ms=50, dump_path=path)
        time.sleep(1.0)
        sensor.stop()
        records = parse_trace(path).records
        assert len(records) >= 10
        for a, b in zip(records, records[1:]):
            spacing = b.timestamp - a.timestamp
            assert spacing > 0
            assert 0.5 * h <= spacing <= 5 * h

    def test_dump_state_machine(self, sensors, tmp_path):
        sensor = sensors("synthetic", power_watts=30, interval_ms=20)
        with pytest.raises(DumpNotActiveError):
            sensor.stop_dump()
        sensor.start_dump(tmp_path / "a.txt")
        with pytest.raises(DumpAlreadyActiveError):
            sensor.start_dump(tmp_path / "b.txt")
        time.sleep(0.15)
        sensor.stop_dump()
        sensor.start_dump(tmp_path / "c.txt")
        time.sleep(0.15)
        sensor.stop_dump()
        for name in ("a.txt", "c.txt"):
            assert len(parse_trace(tmp_path / name).records) >= 1

    def test_unwritable_dump_path_is_io_error(self, sensors, tmp_path):
        sensor = sensors("synthetic", power_watts=30, interval_ms=20)
        with pytest.raises(OSError):
            sensor.start_dump(tmp_path / "missing-dir" / "dump.txt")
        # sensor still usable afterwards
        sensor.start_dump(tmp_path / "ok.txt")
        time.sleep(0.1)
        sensor.stop_dump()
