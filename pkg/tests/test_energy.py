import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secoff.energy import (
    EnergyParams,
    TaskSpec,
    check_helper_energy,
    check_legit_energy,
    check_ue_energy,
    computation_energy,
    helper_flight_energy,
    helper_transmit_energy,
    legit_cpu_frequency,
    local_cpu_frequency,
    max_feasible_speed,
    ue_offload_energy,
)
from secoff.rates import Mode, PowerConfig

POWER = PowerConfig()
ENERGY = EnergyParams()


class TestFrequencies:
    def test_local_20kb(self):
        assert local_cpu_frequency(TaskSpec(163840, 1000), 1.0) == pytest.approx(1.6384e8)

    def test_local_unit(self):
        assert local_cpu_frequency(TaskSpec(1, 1), 1.0) == 1.0

    def test_local_30kb_worst(self):
        assert local_cpu_frequency(TaskSpec(245760, 1200), 1.0) == pytest.approx(2.94912e8)

    def test_legit_no_offloaders(self):
        tasks = [TaskSpec(204800, 1100)] * 3
        assert legit_cpu_frequency([0, 0, 0], tasks, 1.0) == 0.0

    def test_legit_singleton_equals_local(self):
        task = TaskSpec(163840, 1000)
        assert legit_cpu_frequency([1], [task], 1.0) == local_cpu_frequency(task, 1.0)

    def test_legit_ten_offloaders(self):
        tasks = [TaskSpec(204800, 1100)] * 10
        assert legit_cpu_frequency([1] * 10, tasks, 1.0) == pytest.approx(2.2528e9)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            legit_cpu_frequency([1, 0], [TaskSpec(1, 1)], 1.0)


class TestComputationEnergy:
    def test_zero(self):
        assert computation_energy(0.0, 1e-27, 1.0) == 0.0

    def test_mid(self):
        assert computation_energy(2.2e8, 1e-27, 1.0) == pytest.approx(1.0648e-2)

    def test_legit_scale(self):
        e = computation_energy(2.2528e9, 1e-27, 1.0)
        assert e == pytest.approx(11.4333, rel=1e-4)
        assert e < ENERGY.e_l

    def test_cubic(self):
        assert computation_energy(2.0, 1.0, 1.0) == pytest.approx(8.0)


class TestHelperEnergies:
    def test_jam_is_z_independent(self):
        for z in ([0] * 10, [1] * 10, [1, 0] * 5):
            assert helper_transmit_energy(Mode.JAM, z, POWER, 1.0, 10) == pytest.approx(0.08)

    def test_relay_no_offloaders(self):
        assert helper_transmit_energy(Mode.RELAY, [0] * 10, POWER, 1.0, 10) == 0.0

    def test_relay_all_offload(self):
        assert helper_transmit_energy(Mode.RELAY, [1] * 10, POWER, 1.0, 10) == pytest.approx(0.006)

    def test_relay_linear_in_offloaders(self):
        e1 = helper_transmit_energy(Mode.RELAY, [1] + [0] * 9, POWER, 1.0, 10)
        e4 = helper_transmit_energy(Mode.RELAY, [1] * 4 + [0] * 6, POWER, 1.0, 10)
        assert e4 == pytest.approx(4 * e1)

    def test_flight_zero(self):
        assert helper_flight_energy((0.0, 0.0), 9.65, 1.0) == 0.0

    def test_flight_vmax(self):
        assert helper_flight_energy((20.0, 0.0), 9.65, 1.0) == pytest.approx(1930.0)

    def test_flight_quadratic_scaling(self):
        base = helper_flight_energy((3.0, 4.0), 9.65, 1.0)
        assert base == pytest.approx(120.625)
        assert helper_flight_energy((6.0, 8.0), 9.65, 1.0) == pytest.approx(4 * base)

    @given(st.floats(0.0, 2 * math.pi))
    @settings(max_examples=50)
    def test_flight_rotation_invariant(self, theta):
        v = (10.0 * math.cos(theta), 10.0 * math.sin(theta))
        assert helper_flight_energy(v, 9.65, 1.0) == pytest.approx(
            helper_flight_energy((10.0, 0.0), 9.65, 1.0), rel=1e-12)


class TestFeasibilityChecks:
    def test_ue_offload_jam(self):
        task = TaskSpec(204800, 1100)
        assert check_ue_energy(1, Mode.JAM, task, POWER, ENERGY, 10)
        assert ue_offload_energy(Mode.JAM, POWER, 1.0, 10) == pytest.approx(0.01)

    def test_ue_offload_relay(self):
        task = TaskSpec(204800, 1100)
        assert check_ue_energy(1, Mode.RELAY, task, POWER, ENERGY, 10)
        assert ue_offload_energy(Mode.RELAY, POWER, 1.0, 10) == pytest.approx(0.005)

    def test_ue_local_worst_case_infeasible(self):
        # the largest Table-range task cannot be computed locally in time
        task = TaskSpec(245760, 1200)
        assert computation_energy(local_cpu_frequency(task, 1.0), 1e-27, 1.0) == pytest.approx(0.0256494, rel=1e-5)
        assert not check_ue_energy(0, Mode.JAM, task, POWER, ENERGY, 10)

    def test_ue_local_typical_feasible(self):
        assert check_ue_energy(0, Mode.JAM, TaskSpec(204800, 1100), POWER, ENERGY, 10)

    def test_legit_no_offloaders(self):
        assert check_legit_energy([0] * 10, [TaskSpec(204800, 1100)] * 10, ENERGY)

    def test_legit_binding_case(self):
        # ten maximal tasks exceed the 24 J computation budget
        tasks = [TaskSpec(245760, 1200)] * 10
        assert not check_legit_energy([1] * 10, tasks, ENERGY)

    def test_helper_at_speed_limit(self):
        assert check_helper_energy(Mode.JAM, [1] * 10, (20.0, 0.0), POWER, ENERGY, 10)

    def test_helper_binding_with_heavy_airframe(self):
        heavy = EnergyParams(mass=30.0)
        assert not check_helper_energy(Mode.JAM, [0] * 10, (20.0, 0.0), POWER, heavy, 10)

    def test_helper_feasible_over_whole_action_box(self):
        # worst case over |v| <= v_max is the corner speed with jam transmit
        worst = helper_flight_energy((20.0, 0.0), ENERGY.mass, ENERGY.delta) + 0.08
        assert worst <= ENERGY.e_h
        assert max_feasible_speed(POWER, ENERGY) > 20.0


class TestValidation:
    def test_task_positive(self):
        with pytest.raises(ValueError):
            TaskSpec(0, 100)

    def test_energy_params_positive(self):
        with pytest.raises(ValueError):
            EnergyParams(kappa=0.0)

    def test_negative_frequency_rejected(self):
        with pytest.raises(ValueError):
            computation_energy(-1.0, 1e-27, 1.0)
