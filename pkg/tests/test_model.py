import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paretorecords import (
    Comonotone,
    Dirichlet,
    DimensionMismatchError,
    ExperimentConfig,
    ExponentialScaleMixture,
    IidExponential,
    InvalidParameterError,
    MarginalDirichlet,
    Mixture,
    as_observation,
    dominates,
    validate,
)


class TestSpecValidation:
    def test_valid_specs(self):
        for spec in (
            IidExponential(1),
            MarginalDirichlet(2, 1.0),
            ExponentialScaleMixture(3, 0.5),
            Dirichlet((1.0, 1.0, 2.0)),
            Comonotone(4),
            Mixture(0.3, MarginalDirichlet(2, 1.0), Dirichlet((1.0, 1.0))),
        ):
            validate(spec)  # no error

    @pytest.mark.parametrize(
        "build",
        [
            lambda: IidExponential(0),
            lambda: MarginalDirichlet(1, 1.0),  # construction needs d >= 2
            lambda: MarginalDirichlet(2, 0.0),  # a > 0 strictly
            lambda: MarginalDirichlet(2, -1.0),
            lambda: MarginalDirichlet(2, float("nan")),
            lambda: ExponentialScaleMixture(3, 0.0),
            lambda: ExponentialScaleMixture(1, 1.0),
            lambda: Dirichlet(()),
            lambda: Dirichlet((1.0,)),
            lambda: Dirichlet((1.0, 0.0)),
            lambda: Dirichlet((1.0, -2.0)),
            lambda: Comonotone(0),
            lambda: Mixture(-1e-9, IidExponential(2), IidExponential(2)),
            lambda: Mixture(1.0 + 1e-9, IidExponential(2), IidExponential(2)),
            lambda: Mixture(0.5, IidExponential(2), IidExponential(3)),  # d mismatch
            lambda: Mixture(0.5, IidExponential(2), "nope"),
        ],
    )
    def test_invalid_specs(self, build):
        with pytest.raises(InvalidParameterError):
            build()

    def test_boundary_values_accepted(self):
        Mixture(0.0, IidExponential(2), IidExponential(2))
        Mixture(1.0, IidExponential(2), IidExponential(2))
        MarginalDirichlet(2, 1e-12)

    def test_mixture_depth_cap(self):
        spec = IidExponential(2)
        for _ in range(4):
            spec = Mixture(0.5, spec, IidExponential(2))
        with pytest.raises(InvalidParameterError):
            Mixture(0.5, spec, IidExponential(2))

    def test_dim_property(self):
        assert IidExponential(3).dim == 3
        assert Dirichlet((1.0, 2.0, 3.0)).dim == 3
        assert Mixture(0.5, IidExponential(2), Comonotone(2)).dim == 2

    def test_experiment_config(self):
        cfg = ExperimentConfig(IidExponential(2), n=5, reps=10, seed=1, workers=2)
        assert cfg.n == 5
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(IidExponential(2), n=0, reps=10)
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(IidExponential(2), n=1, reps=0)
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(IidExponential(2), n=1, reps=1, seed=-1)


class TestDominates:
    def test_examples(self):
        assert dominates((1, 2), (1, 3))
        assert not dominates((1, 3), (2, 2))
        assert dominates((0, 0), (0, 0))  # reflexive on equal points

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            dominates((1, 2), (1, 2, 3))

    vectors = st.lists(st.integers(-3, 3), min_size=1, max_size=4)

    @given(vectors)
    def test_reflexive(self, v):
        assert dominates(v, v)

    @given(st.data())
    def test_transitive_and_antisymmetric(self, data):
        dim = data.draw(st.integers(1, 4))
        coord = st.lists(st.integers(-3, 3), min_size=dim, max_size=dim)
        x, y, z = data.draw(coord), data.draw(coord), data.draw(coord)
        if dominates(x, y) and dominates(y, z):
            assert dominates(x, z)
        if dominates(x, y) and dominates(y, x):
            assert x == y


class TestObservation:
    def test_as_observation(self):
        x = as_observation([1, 2, 3])
        assert x.dtype == np.float64 and x.shape == (3,)

    @pytest.mark.parametrize("bad", [[], [[1, 2]], [1.0, float("inf")], [float("nan")]])
    def test_rejects(self, bad):
        with pytest.raises(InvalidParameterError):
            as_observation(bad)
