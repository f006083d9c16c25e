import pytest

import nskwave as nw
from nskwave.rarefaction import RarefactionWave


@pytest.fixture(scope="session")
def model14():
    return nw.GasModel(1.4)


@pytest.fixture(scope="session")
def right_state():
    return nw.EndState(v=1.0, u=0.0)


def make_pattern(model, v_m, delta_R, right=None):
    right = right or nw.EndState(v=1.0, u=0.0)
    u_m, _ = (right.u, None) if v_m >= right.v else nw.shock_curve(v_m, right, model)
    mid = nw.EndState(min(v_m, right.v), u_m)
    v_minus = nw.rarefaction_volume_for_strength(mid, delta_R, model) if delta_R > 0 else None
    return nw.pattern_from_intermediate(v_m, right, model, v_minus=v_minus)


@pytest.fixture(scope="session")
def pattern_std(model14):
    # moderate shock plus moderate fan, the workhorse configuration
    return make_pattern(model14, 0.9, 0.1)


@pytest.fixture(scope="session")
def profile_std(pattern_std, model14):
    return nw.solve_profile(pattern_std, model14)


@pytest.fixture(scope="session")
def composite_std(pattern_std, profile_std, model14):
    return nw.CompositeWave(RarefactionWave(pattern_std, model14), profile_std,
                            pattern_std, model14)


@pytest.fixture(scope="session")
def profile_sweep(model14, right_state):
    """Profiles for the three standard strengths, solved once per session."""
    out = {}
    for delta_S in (0.025, 0.05, 0.1):
        pat = nw.pattern_from_intermediate(1.0 - delta_S, right_state, model14)
        out[delta_S] = (pat, nw.solve_profile(pat, model14))
    return out
