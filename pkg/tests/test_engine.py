import pytest
from hypothesis import given, strategies as st

from mpsim import (
    AimdParams,
    EngineParams,
    SimConfig,
    StrategyKind,
    apportion_loss,
    default_topology,
    rtt_instantaneous,
    run,
    timeseries_csv,
    update_cwnd,
)

AIMD = AimdParams()


def config(strategy="min_rtt", agents=10, steps=300, seed=0, epsilon=0.1):
    return SimConfig(
        topology=default_topology(),
        strategy=StrategyKind(strategy, epsilon=epsilon),
        num_agents=agents,
        engine=EngineParams(steps=steps),
        seed=seed,
    )


class TestRttInstantaneous:
    def test_below_capacity_is_base(self):
        assert rtt_instantaneous(20.0, 40.0, 50.0, 10.0) == 20.0

    def test_overload_adds_queue_delay(self):
        assert rtt_instantaneous(20.0, 100.0, 50.0, 10.0) == 30.0

    def test_half_capacity(self):
        assert rtt_instantaneous(50.0, 50.0, 100.0, 10.0) == 50.0

    def test_invalid_capacity(self):
        with pytest.raises(ValueError):
            rtt_instantaneous(20.0, 10.0, 0.0, 10.0)


class TestApportionLoss:
    def test_symmetric_split(self):
        losses, overflow = apportion_loss([30.0, 30.0], 50.0)
        assert overflow == 10.0
        assert losses == [5.0, 5.0]

    def test_proportional_split(self):
        losses, overflow = apportion_loss([40.0, 10.0], 25.0)
        assert overflow == 25.0
        assert losses == [20.0, 5.0]

    def test_under_capacity(self):
        losses, overflow = apportion_loss([10.0, 10.0], 50.0)
        assert overflow == 0.0
        assert losses == [0.0, 0.0]

    @given(st.lists(st.floats(0.0, 100.0), min_size=1, max_size=20),
           st.floats(0.0, 150.0))
    def test_conservation(self, loads, capacity):
        losses, overflow = apportion_loss(loads, capacity)
        assert overflow == max(0.0, sum(loads) - capacity)
        assert abs(sum(losses) - overflow) <= 1e-9
        assert all(l >= 0 for l in losses)


class TestUpdateCwnd:
    def test_loss_halves(self):
        assert update_cwnd(4.0, True, 20.0, 10.0, AIMD) == 2.0

    def test_floor_clamp(self):
        assert update_cwnd(1.0, True, 20.0, 10.0, AIMD) == 1.0

    def test_one_increment_per_rtt(self):
        cwnd = 1.0
        for _ in range(2):
            cwnd = update_cwnd(cwnd, False, 20.0, 10.0, AIMD)
        assert cwnd == 2.0

    def test_growth_scales_with_rtt(self):
        assert update_cwnd(1.0, False, 50.0, 10.0, AIMD) == pytest.approx(1.2)


class TestParamValidation:
    def test_beta_range(self):
        with pytest.raises(ValueError):
            AimdParams(beta=1.0)

    def test_steps_positive(self):
        with pytest.raises(ValueError):
            EngineParams(steps=0)

    def test_agents_positive(self):
        with pytest.raises(ValueError):
            config(agents=0)


class TestSingleSteps:
    def test_single_agent_first_step(self):
        telemetry = run(config(agents=1, steps=1))
        record = telemetry.records[0]
        assert record.loads == (1.0, 0.0, 0.0)
        assert record.overflows == (0.0, 0.0, 0.0)
        assert record.inst_rtts == (20.0, 50.0, 80.0)

    def test_sixty_agents_overflow_and_floor(self):
        # 60 windows of 1.0 on a 50 Mbps path: overflow 10, every agent
        # takes a 1/6 Mbps share and halves onto the floor
        telemetry = run(config(agents=60, steps=1))
        record = telemetry.records[0]
        assert record.loads[0] == 60.0
        assert record.overflows[0] == pytest.approx(10.0)
        losses, overflow = apportion_loss([1.0] * 60, 50.0)
        assert overflow == pytest.approx(10.0)
        assert losses[0] == pytest.approx(1 / 6)
        assert telemetry.final_cwnds == (1.0,) * 60

    def test_herd_at_500_overloads_path_one(self):
        telemetry = run(config(agents=500, steps=50))
        for record in telemetry.records[10:]:
            assert sum(record.loads) >= 500.0
            assert record.overflows[0] >= 450.0


class TestRun:
    def test_determinism(self):
        a = run(config("epsilon_greedy", agents=40, steps=120, seed=9))
        b = run(config("epsilon_greedy", agents=40, steps=120, seed=9))
        assert a.records == b.records
        assert a.final_cwnds == b.final_cwnds
        assert timeseries_csv(a) == timeseries_csv(b)

    def test_seed_changes_epsilon_run(self):
        a = run(config("epsilon_greedy", agents=40, steps=120, seed=1))
        b = run(config("epsilon_greedy", agents=40, steps=120, seed=2))
        assert a.records != b.records

    def test_round_robin_three_agents_rotate_together(self):
        telemetry = run(config("round_robin", agents=3, steps=3))
        for t, record in enumerate(telemetry.records):
            active = t % 3
            for i, load in enumerate(record.loads):
                if i == active:
                    assert load > 0
                else:
                    assert load == 0.0

    def test_single_agent_sawtooth(self):
        # one flow grows half a packet per step until it crests the
        # 50 Mbps path, then halves and climbs again
        telemetry = run(config(agents=1, steps=300))
        loads = [r.loads[0] for r in telemetry.records]
        overflowed = [r.step for r in telemetry.records if sum(r.overflows) > 0]
        assert loads[:4] == [1.0, 1.5, 2.0, 2.5]
        assert max(loads) <= 51.0
        assert overflowed and overflowed[0] == 99
        # recovery after the first crest: halved, not reset to zero
        assert loads[100] == pytest.approx(50.5 / 2)

    def test_telemetry_length_matches_steps(self):
        telemetry = run(config(steps=17))
        assert len(telemetry.records) == 17
        assert [r.step for r in telemetry.records] == list(range(17))

    def test_attribute_aware_never_touches_high_cost_path(self):
        for agents in (1, 10, 100):
            telemetry = run(config("attribute_aware", agents=agents, steps=100))
            assert all(r.loads[2] == 0.0 for r in telemetry.records)

    def test_overflow_identity_and_goodput_cap(self):
        caps = default_topology().capacities()
        telemetry = run(config("round_robin", agents=120, steps=100))
        for record in telemetry.records:
            for load, overflow, cap in zip(record.loads, record.overflows, caps):
                assert overflow == max(0.0, load - cap)
                assert load - overflow <= cap + 1e-12

    def test_cwnd_never_below_floor(self):
        telemetry = run(config("round_robin", agents=200, steps=100))
        assert all(c >= 1.0 for c in telemetry.final_cwnds)

    def test_rtt_view_at_least_base(self):
        telemetry = run(config("min_load", agents=150, steps=100))
        bases = (20.0, 50.0, 80.0)
        for record in telemetry.records:
            for rtt, base in zip(record.inst_rtts, bases):
                assert rtt >= base


class TestHerdInvariant:
    @pytest.mark.parametrize("agents", [51, 80, 200])
    def test_min_rtt_herd_overflows_every_step(self, agents):
        # once N * floor exceeds the low-latency path's capacity the herd
        # can never drain it
        telemetry = run(config("min_rtt", agents=agents, steps=60))
        assert all(r.overflows[0] > 0 for r in telemetry.records)


class TestTimeseriesCsv:
    def test_columns_and_shape(self):
        telemetry = run(config(agents=2, steps=4))
        lines = timeseries_csv(telemetry).strip().split("\n")
        assert lines[0] == "step,path_id,load_mbps,overflow_mbps,inst_rtt_ms"
        assert len(lines) == 1 + 4 * 3
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "1"
