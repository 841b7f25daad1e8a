"""Engine behavior: steps, schedulers, traces, meta-moves, bounds, labels."""

import pytest

from proxyline import (
    ConfigurationError,
    PolicyKind,
    PolicySpec,
    Scenario,
    Scheduler,
    Space,
    StopReason,
    check_bound_invariant,
    classify_meta_steps,
    detect_meta_moves,
    monotone_median_check,
    run_dynamics,
    step,
    true_median,
    wm_winner,
)
from proxyline.dynamics import replay_consistent, trace_is_monotone
from proxyline.fixtures import (
    appendix_a_policies,
    appendix_a_scenario,
    example1_scenario,
    fig3_scenario,
    fig5_scenario,
)

MONO = PolicySpec(PolicyKind.MONOTONE_BETTER_RESPONSE, fraction=0.5, truth_oriented=True)


class TestStep:
    def test_example2_monotone_mover_wins(self):
        sc = example1_scenario()
        rec = step(sc, sc.truthful_state(), 1, MONO)
        assert rec is not None
        assert 0.0 < rec.to_pos < 1.5
        assert rec.winner_after == 1
        assert rec.wm_after == rec.to_pos

    def test_empty_better_response_set_passes(self):
        sc = fig3_scenario()
        for j in range(sc.num_proxies):
            assert step(sc, sc.truthful_state(), j, MONO) is None

    def test_appendix_a_first_best_response_is_10(self):
        sc = appendix_a_scenario()
        rec = step(sc, sc.truthful_state(), 4, PolicySpec(PolicyKind.DISCRETE_BEST_RESPONSE))
        assert rec is not None
        assert rec.to_pos == 10.0
        assert rec.winner_after == 4

    def test_truth_override_beats_script(self):
        sc = Scenario((0.25, -3.0), (0.0,))
        spec = PolicySpec(PolicyKind.SCRIPTED, positions=(0.4,), truth_oriented=True)
        rec = step(sc, [2.0, -0.5], 0, spec)
        assert rec is not None and rec.to_pos == 0.25  # the peak, not the script

    def test_rejected_nonimproving_script_passes(self):
        sc = example1_scenario()
        spec = PolicySpec(PolicyKind.SCRIPTED, positions=(-4.0,))
        assert step(sc, sc.truthful_state(), 1, spec) is None


class TestRunDynamics:
    def test_one_sided_scenario_immediate_pne(self):
        sc = fig3_scenario()
        trace = run_dynamics(sc, Scheduler.round_robin(), [MONO] * 4, max_steps=10)
        assert trace.stop_reason == StopReason.PNE
        assert not trace.records
        assert trace.final_outcome() == wm_winner(sc, sc.truthful_state())[1]

    def test_appendix_a_scripted_reaches_pne_at_5(self):
        sc = appendix_a_scenario()
        trace = run_dynamics(
            sc, Scheduler.scripted([4, 1, 2, 3, 0, 4]), appendix_a_policies(), max_steps=20
        )
        assert trace.stop_reason == StopReason.PNE
        assert trace.final_outcome() == 5.0
        assert [r.mover for r in trace.records] == [4, 1, 2, 3, 0, 4]

    def test_example3_oscillates(self):
        sc = example1_scenario()
        pols = [PolicySpec(PolicyKind.OSCILLATING_ALPHA, alpha1=0.25, decay=0.5)] * 2
        trace = run_dynamics(sc, Scheduler.round_robin(), pols, max_steps=200)
        assert trace.stop_reason == StopReason.OSCILLATION_DETECTED
        assert trace.limit_delta == pytest.approx(0.5, abs=1e-6)

    def test_max_steps_respected(self):
        sc = example1_scenario()
        pols = [PolicySpec(PolicyKind.OSCILLATING_ALPHA, alpha1=0.25, decay=0.5)] * 2
        trace = run_dynamics(sc, Scheduler.round_robin(), pols, max_steps=3)
        assert trace.stop_reason == StopReason.MAX_STEPS
        assert len(trace.records) == 3

    def test_replay_consistency(self):
        sc = appendix_a_scenario()
        trace = run_dynamics(
            sc, Scheduler.scripted([4, 1, 2, 3, 0, 4]), appendix_a_policies(), max_steps=20
        )
        assert replay_consistent(trace)

    def test_validation_errors(self):
        sc = example1_scenario()
        with pytest.raises(ConfigurationError):
            run_dynamics(sc, Scheduler.round_robin(), [MONO] * 2, max_steps=0)
        with pytest.raises(ConfigurationError):
            run_dynamics(sc, Scheduler.scripted([5]), [MONO] * 2, max_steps=5)
        with pytest.raises(ConfigurationError):
            run_dynamics(sc, Scheduler.round_robin(), [MONO], max_steps=5)
        with pytest.raises(ConfigurationError):  # oscillating needs continuous space
            run_dynamics(
                appendix_a_scenario(),
                Scheduler.round_robin(),
                [PolicySpec(PolicyKind.OSCILLATING_ALPHA)] * 5,
                max_steps=5,
            )
        with pytest.raises(ConfigurationError):  # discrete best response needs a grid
            run_dynamics(
                sc, Scheduler.round_robin(),
                [PolicySpec(PolicyKind.DISCRETE_BEST_RESPONSE)] * 2, max_steps=5,
            )
        with pytest.raises(ConfigurationError):  # minimax needs partial information
            run_dynamics(
                sc, Scheduler.round_robin(),
                [PolicySpec(PolicyKind.MINIMAX_REGRET)] * 2, max_steps=5,
            )


def fig5_trace():
    sc = fig5_scenario()
    pols = [
        PolicySpec(PolicyKind.SCRIPTED),
        PolicySpec(PolicyKind.SCRIPTED, positions=(2.0, 3.0)),
    ]
    return run_dynamics(sc, Scheduler.scripted([1, 1]), pols, max_steps=2)


class TestMetaMoves:
    def test_fig5_single_segment_rising_inside(self):
        trace = fig5_trace()
        assert [r.delta_after for r in trace.records] == [2.0, 3.0]
        segments = detect_meta_moves(trace)
        assert len(segments) == 1
        seg = segments[0]
        assert seg.length == 1
        assert seg.entry_delta == 4.0
        assert seg.exit_delta == 3.0
        assert seg.exit_delta > trace.records[0].delta_after  # rose inside the meta
        assert seg.exit_delta < seg.entry_delta  # but net-decreased

    def test_winner_self_moves_make_no_segments(self):
        # a reigning winner improving in place never counts as an arrival
        sc = Scenario((2.0, 3.0), (0.0,))
        pols = [PolicySpec(PolicyKind.SCRIPTED, positions=(2.0,)), PolicySpec(PolicyKind.SCRIPTED)]
        trace = run_dynamics(
            sc, Scheduler.scripted([0]), pols, max_steps=1, initial_declared=[0.0, 3.0]
        )
        assert len(trace.records) == 1
        assert trace.records[0].mover == trace.records[0].winner_before
        assert detect_meta_moves(trace) == []

    def test_appendix_a_every_arrival_is_length_zero(self):
        sc = appendix_a_scenario()
        trace = run_dynamics(
            sc, Scheduler.scripted([4, 1, 2, 3, 0, 4]), appendix_a_policies(), max_steps=20
        )
        segments = detect_meta_moves(trace)
        assert len(segments) == 6
        assert all(seg.length == 0 for seg in segments)


class TestBoundInvariant:
    def test_appendix_a_trace_within_truthful_ball(self):
        sc = appendix_a_scenario()
        trace = run_dynamics(
            sc, Scheduler.scripted([4, 1, 2, 3, 0, 4]), appendix_a_policies(), max_steps=20
        )
        assert trace.initial_delta == 11.0
        assert check_bound_invariant(trace)

    def test_example3_trace_within_ball(self):
        sc = example1_scenario()
        pols = [PolicySpec(PolicyKind.OSCILLATING_ALPHA, alpha1=0.25, decay=0.5)] * 2
        trace = run_dynamics(sc, Scheduler.round_robin(), pols, max_steps=200)
        assert check_bound_invariant(trace)

    def test_empty_trace_trivially_true(self):
        sc = fig3_scenario()
        trace = run_dynamics(sc, Scheduler.round_robin(), [MONO] * 4, max_steps=5)
        assert not trace.records and check_bound_invariant(trace)


class TestClassification:
    def test_big_small_rule(self):
        trace = fig5_trace()
        labels = classify_meta_steps(trace, alpha=0.9)
        assert len(labels) == 1
        assert labels[0].big  # 3.0 < 0.9 * 4.0

        labels_tight = classify_meta_steps(trace, alpha=0.5)
        assert not labels_tight[0].big  # 3.0 >= 0.5 * 4.0

    def test_example3_tail_goes_small(self):
        sc = example1_scenario()
        pols = [PolicySpec(PolicyKind.OSCILLATING_ALPHA, alpha1=0.25, decay=0.5)] * 2
        trace = run_dynamics(sc, Scheduler.round_robin(), pols, max_steps=200)
        labels = classify_meta_steps(trace, alpha=0.9)
        assert all(not lab.big for lab in labels[-10:])

    def test_discrete_monotone_all_big_at_paper_rate(self):
        # initial distance 11; halving proposals beat alpha = 1 - 1/11 throughout
        sc = Scenario((-11.0, 14.0), (-1.0, 0.0, 1.0), Space.discrete(1.0))
        assert true_median(sc) == 0.0
        trace = run_dynamics(sc, Scheduler.round_robin(), [MONO, MONO], max_steps=50)
        assert trace.initial_delta == 11.0
        assert trace.stop_reason == StopReason.PNE
        assert trace.final_outcome() == 0.0
        labels = classify_meta_steps(trace, alpha=1.0 - 1.0 / 11.0)
        assert labels and all(lab.big for lab in labels)

    def test_alpha_must_be_fractional(self):
        with pytest.raises(ConfigurationError):
            classify_meta_steps(fig5_trace(), alpha=1.0)


class TestMonotoneMedianCheck:
    def test_single_monotone_move(self):
        trace = fig5_trace()
        assert monotone_median_check(trace)
        assert trace_is_monotone(trace)

    def test_appendix_a_trace_median_moves(self):
        # the scripted cross-median moves shift the median 0 -> 1 -> 5
        sc = appendix_a_scenario()
        trace = run_dynamics(
            sc, Scheduler.scripted([4, 1, 2, 3, 0, 4]), appendix_a_policies(), max_steps=20
        )
        assert [r.median_after for r in trace.records] == [0.0, 1.0, 5.0, 5.0, 5.0, 5.0]
        assert not monotone_median_check(trace)
        assert not trace_is_monotone(trace)

    def test_cross_median_weight_shift_detected(self):
        sc = Scenario((-13.0, 12.0), (5.0, 1.0, 0.0))
        assert true_median(sc) == 1.0
        pols = [PolicySpec(PolicyKind.SCRIPTED, positions=(9.0,)), PolicySpec(PolicyKind.SCRIPTED)]
        trace = run_dynamics(sc, Scheduler.scripted([0]), pols, max_steps=1)
        assert len(trace.records) == 1
        assert trace.records[0].median_after == 5.0
        assert not monotone_median_check(trace)
