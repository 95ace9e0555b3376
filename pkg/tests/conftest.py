import pytest

from jumpctl import (
    McConfig,
    ModelParams,
    build_table,
    calibrate_constants,
    discrete_law,
    gaussian_mixture_law,
    make_bank,
)

ILLUSTRATION_SEED = 1234


@pytest.fixture(scope="session")
def illustration_params():
    law = gaussian_mixture_law([(0.5, -3.0, 2.0), (0.5, 6.0, 2.0)])
    return ModelParams(p_tilde=-10.0, r=1.0, lam=0.5, c0=-12.0, law=law)


@pytest.fixture(scope="session")
def mc_small():
    return McConfig(n_samples=20_000, seed=ILLUSTRATION_SEED)


@pytest.fixture(scope="session")
def bank_small(illustration_params, mc_small):
    return make_bank(illustration_params, mc_small)


@pytest.fixture(scope="session")
def consts_small(illustration_params, mc_small, bank_small):
    return calibrate_constants(illustration_params, mc_small, bank_small)


@pytest.fixture(scope="session")
def tables_small(illustration_params, mc_small, bank_small, consts_small):
    return {
        eta: build_table(
            illustration_params, eta, consts_small, mc_small, bank_small, n_points=80
        )
        for eta in (0.0, 3.0, float("inf"))
    }


@pytest.fixture(scope="session")
def unit_params():
    """Deterministic +1 marks with lam = r = 1: closed-form oracles."""
    return ModelParams(
        p_tilde=0.0, r=1.0, lam=1.0, c0=0.0, law=discrete_law([(1.0, 1.0)])
    )


@pytest.fixture(scope="session")
def down_params():
    """Deterministic -1 marks: the nonneg-sum time is never reached."""
    return ModelParams(
        p_tilde=0.0, r=1.0, lam=1.0, c0=0.0, law=discrete_law([(-1.0, 1.0)])
    )
