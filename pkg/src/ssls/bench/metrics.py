"""Reconstruction quality metrics reported by the experiment tables."""

import math

import numpy as np


def rsnr(x_star, x_hat) -> float:
    """Reconstruction SNR 10 log10(||x*||^2 / ||x* - x_hat||^2) in dB.

    Returns +inf for an exact reconstruction.  Experiment drivers average
    per-run values over seeds.
    """
    x_star = np.asarray(x_star, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if x_star.shape != x_hat.shape:
        raise ValueError("x_star and x_hat must have equal length")
    err = x_star - x_hat
    err_sq = float(err @ err)
    if err_sq == 0.0:
        return math.inf
    return 10.0 * math.log10(float(x_star @ x_star) / err_sq)


def rres(d, x_hat) -> float:
    """Stationarity residual ||d' X - d'|| / ||d|| of a transition matrix."""
    d = np.asarray(d, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if d.ndim != 1 or x_hat.shape != (d.shape[0], d.shape[0]):
        raise ValueError("need a vector d and a square matrix of matching size")
    return float(np.linalg.norm(d @ x_hat - d)) / float(np.linalg.norm(d))
