import pytest

from sta_designer.errors import DomainError
from sta_designer.models import ConstantU, DesignReport, PhysicalParams, Scheme, Segment, TrapProtocol
from sta_designer.schemes import design, design_bang_bang, design_inverse_engineering, design_two_jump
from sta_designer.verification import shooting_time, verify_protocol


def test_two_jump_linear_passes(linear_params):
    summary = verify_protocol(design_two_jump(linear_params))
    assert summary.passed
    assert summary.endpoint_residual_a < 1e-8
    assert summary.endpoint_residual_a_dot < 1e-8
    assert summary.a_target == pytest.approx(10.0)


@pytest.mark.parametrize("scheme,params", [
    (Scheme.TWO_JUMP, PhysicalParams(g_n=0.0, gamma=10.0)),
    (Scheme.TWO_JUMP, PhysicalParams(g_n=0.01, gamma=10.0)),
    (Scheme.BANG_BANG, PhysicalParams(g_n=-0.01, gamma=10.0, delta=1.0)),
    (Scheme.BANG_BANG, PhysicalParams(g_n=0.0, gamma=10.0, delta=2.0)),
    (Scheme.BANG_BANG, PhysicalParams(g_n=0.01, gamma=10.0, delta=4.0)),
    (Scheme.BANG_BANG_TF, PhysicalParams(gamma=10.0, delta=1.0)),
    (Scheme.BANG_BANG_CLOSED_FORM, PhysicalParams(gamma=10.0, delta=1.0)),
])
def test_designed_plateau_protocols_pass(scheme, params):
    report = design(scheme, params)
    summary = verify_protocol(report)
    assert summary.passed
    assert summary.endpoint_residual_a < 1e-5
    assert summary.endpoint_residual_a_dot < 1e-5
    assert len(summary.first_integral_drift) == len(report.protocol.segments)
    assert all(d < 1e-8 for d in summary.first_integral_drift)


def test_inverse_engineering_passes_without_drift_entries(repulsive_params):
    summary = verify_protocol(design_inverse_engineering(repulsive_params, t_f=5.45))
    assert summary.passed
    assert summary.first_integral_drift == [None]


def test_corrupted_switch_time_fails(linear_params):
    report = design_bang_bang(linear_params)
    t1, t2 = report.aux['t1'], report.aux['t2']
    corrupted = DesignReport(
        scheme=report.scheme,
        params=report.params,
        protocol=TrapProtocol([
            Segment(1.01 * t1, ConstantU(-1.0)),
            Segment(t2, ConstantU(1.0)),
        ]),
        t_f=1.01 * t1 + t2,
    )
    summary = verify_protocol(corrupted)
    assert not summary.passed
    assert max(summary.endpoint_residual_a, summary.endpoint_residual_a_dot) > 1e-3


def test_summary_serializes(linear_params):
    data = verify_protocol(design_two_jump(linear_params)).to_dict()
    assert data['status'] == 'PASS'
    assert data['tolerance'] == 1e-5


@pytest.mark.parametrize("params", [
    PhysicalParams(g_n=0.0, gamma=10.0),
    PhysicalParams(g_n=0.01, gamma=10.0),
    PhysicalParams(g_n=-0.01, gamma=5.0),
])
def test_two_jump_shooting_agrees(params):
    report = design_two_jump(params)
    assert shooting_time(report) == pytest.approx(report.t_f, rel=1e-7)


@pytest.mark.parametrize("params", [
    PhysicalParams(g_n=0.0, gamma=10.0, delta=1.0),
    PhysicalParams(g_n=0.01, gamma=10.0, delta=4.0),
    PhysicalParams(g_n=0.0, gamma=0.5, delta=16.0),
])
def test_bang_bang_shooting_agrees(params):
    report = design_bang_bang(params)
    assert shooting_time(report) == pytest.approx(report.t_f, rel=1e-7)


def test_shooting_needs_plateaus(linear_params):
    with pytest.raises(DomainError):
        shooting_time(design_inverse_engineering(linear_params))
