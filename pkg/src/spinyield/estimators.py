"""scikit-learn style facade over the yield engines.

There is nothing to learn from data here: ``fit`` validates the physical
parameters and prepares the solver, ``transform`` maps field angles to the
``(phi_s, phi_p, phi_c)`` yields and ``predict`` returns ``phi_s`` alone.
The facade makes the engines usable inside pipelines, parameter grids and
``clone``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .config import ConfigError, ScenarioConfig
from .runner import point_solver
from .units import K_DEFAULT, LAMBDA


class SingletYieldModel(TransformerMixin, BaseEstimator):
    """Radical-pair singlet yield as a function of the field polar angle.

    Parameters
    ----------
    n_nuclei : int, default=1
        Number of identical spin-1/2 nuclei coupled to electron 1.
    hyperfine : tuple of float, default=(3, 3, 5)
        ``(ax, ay, az)`` in units of ``LAMBDA``.
    b0 : float, default=46e-6
        Field magnitude in Tesla.
    k : float, default=1e4
        Recombination rate in s^-1.
    initial_state : {"singlet", "triplet0", "dark_incoherent"}, default="singlet"
    noise : {None, "vertical", "parallel", "hyperfine"}, default=None
    noise_rate : float, default=0.0
        White-noise strength in s^-1.
    route : {"auto", "spectral", "quadrature", "resolvent"}, default="auto"
    engine : {"auto", "full", "collective"}, default="auto"

    Attributes
    ----------
    engine_ : str
        Engine selected by ``fit``.
    route_ : str
        Yield route selected by ``fit``.
    n_features_in_ : int
        Always 1 (the angle in radians).

    Examples
    --------
    >>> import numpy as np
    >>> model = SingletYieldModel().fit(np.zeros((1, 1)))
    >>> model.transform([[0.0], [np.pi / 2]]).shape
    (2, 3)
    """

    def __init__(
        self,
        n_nuclei=1,
        hyperfine=(3.0, 3.0, 5.0),
        b0=46e-6,
        k=K_DEFAULT,
        initial_state="singlet",
        noise=None,
        noise_rate=0.0,
        route="auto",
        engine="auto",
    ):
        self.n_nuclei = n_nuclei
        self.hyperfine = hyperfine
        self.b0 = b0
        self.k = k
        self.initial_state = initial_state
        self.noise = noise
        self.noise_rate = noise_rate
        self.route = route
        self.engine = engine

    def _mapping(self) -> dict[str, str]:
        try:
            ax, ay, az = (float(v) for v in self.hyperfine)
        except (TypeError, ValueError):
            raise ConfigError("hyperfine", f"expected three numbers, got {self.hyperfine!r}") from None
        raw = {
            "schema": "1",
            "system.n_nuclei": str(self.n_nuclei),
            "system.tensor": f"{ax * LAMBDA!r}, {ay * LAMBDA!r}, {az * LAMBDA!r}",
            "field.b0": repr(float(self.b0)),
            "field.theta.values": "0",
            "k": repr(float(self.k)),
            "initial_state": str(self.initial_state),
            "route": str(self.route),
            "engine": str(self.engine),
        }
        if self.noise is not None:
            raw["noise.model.kind"] = str(self.noise)
            raw["noise.model.rate"] = repr(float(self.noise_rate))
        return raw

    def fit(self, X=None, y=None):
        """Validate parameters; ``X`` (angles) is only checked for shape."""
        if X is not None:
            check_array(X, ensure_2d=True)
        config = ScenarioConfig.from_mapping(self._mapping())
        self.engine_, self.route_, self._solve = point_solver(config)
        self.n_features_in_ = 1
        return self

    def _angles(self, X) -> np.ndarray:
        check_is_fitted(self, "engine_")
        X = check_array(X, ensure_2d=True, dtype=float)
        if X.shape[1] != 1:
            raise ValueError(f"expected one feature (theta in radians), got {X.shape[1]}")
        return X[:, 0]

    def transform(self, X) -> np.ndarray:
        """Yields ``(phi_s, phi_p, phi_c)`` for each angle; shape ``(n_samples, 3)``."""
        out = [self._solve(float(t)) for t in self._angles(X)]
        return np.array([[r.phi_s, r.phi_p, r.phi_c] for r in out])

    def predict(self, X) -> np.ndarray:
        """Singlet yield ``phi_s`` for each angle."""
        return self.transform(X)[:, 0]

    def anisotropy(self, X) -> float:
        """``max - min`` of the singlet yield over the given angles."""
        phi = self.predict(X)
        return float(phi.max() - phi.min())
