"""Flow-matching restoration sampler lab (C++ core bindings)."""

from ._core import (
    GmmSpec,
    SeededRng,
    frequency_filter,
    gmm_velocity,
    guidance_step,
    make_time_grid,
    masked_mse,
    posterior_mean,
    posterior_noise,
    restore,
    schedule,
    sigma_t,
    sliced_wasserstein,
    train_velocity_model,
)

__all__ = [
    "GmmSpec",
    "SeededRng",
    "frequency_filter",
    "gmm_velocity",
    "guidance_step",
    "make_time_grid",
    "masked_mse",
    "posterior_mean",
    "posterior_noise",
    "restore",
    "schedule",
    "sigma_t",
    "sliced_wasserstein",
    "train_velocity_model",
]
