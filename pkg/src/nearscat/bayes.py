"""Hierarchical Bayesian estimation of the constant contrast gamma ~ n(x0) - 1
on a reconstructed support, via Gaussian random-walk Metropolis-Hastings.

Model: readings u_i ~ N(mu_i, delta^2) circularly in the complex plane with
mu_i = k^2 sum_p w_p eta(z_p) Phi(x_i, z_p) Phi(z_p, y_i), eta_p ~ N(gamma, h^2),
and gamma given the wide normal prior N(0, prior_sd^2) standing in for a
flat prior.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ChainError, DomainError
from .geometry import QuadratureRule, gauss_quadrature
from .specfun import fundamental_solution_many


@dataclass(frozen=True)
class Readings:
    points_x: np.ndarray  # (R, 2) receivers on C
    points_y: np.ndarray  # (R, 2) sources on C
    values: np.ndarray  # (R,) complex scattered-field readings
    delta: float  # noise standard deviation (per real component)


def synthesize_readings(scatterers, sensors, k, noise_frac, seed, rule_order=16):
    """One backscatter reading per sensor with additive complex noise.

    The data set pairs each receiver with the co-located source (the i-th
    entry of the sensor array serves as both), giving count(sensors)
    readings.  noise_frac scales the per-component noise std against the
    RMS magnitude of the noiseless data (15% noise -> noise_frac = 0.15).
    """
    from .born import assemble_multistatic

    m = assemble_multistatic(scatterers, sensors, k, rule_order).data
    px = sensors.points
    py = sensors.points
    u = np.diag(m).copy()
    rms = float(np.sqrt(np.mean(np.abs(u) ** 2)))
    delta = noise_frac * rms
    if delta > 0.0:
        rng = np.random.default_rng(seed)
        u = u + delta * (rng.standard_normal(u.size) + 1j * rng.standard_normal(u.size))
    return Readings(points_x=px, points_y=py, values=u, delta=float(delta))


@dataclass(frozen=True)
class BayesModel:
    rhat: QuadratureRule  # rule over the reconstructed support
    support_shape: object  # the reconstructed shape itself (containment checks)
    k: float
    h: float  # Taylor spread of eta about gamma
    prior_sd: float = 1e5
    proposal_sd_gamma: float | None = None
    proposal_sd_eta: float | None = None
    iterations: int = 20000
    burn_in: int = 5000
    thinning: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.h <= 0.0:
            raise DomainError(f"h must be positive, got {self.h}")
        if self.iterations <= self.burn_in:
            raise DomainError("iterations must exceed burn_in")


def support_diameter(shape):
    """Default h = |D|: the diameter of the reconstructed support."""
    from .geometry import Disk, Ellipse, Rectangle

    if isinstance(shape, Disk):
        return 2.0 * shape.radius
    if isinstance(shape, Ellipse):
        return 2.0 * max(shape.a, shape.b)
    if isinstance(shape, Rectangle):
        return float(
            np.hypot(
                shape.corner_max[0] - shape.corner_min[0],
                shape.corner_max[1] - shape.corner_min[1],
            )
        )
    raise DomainError(f"unsupported shape {type(shape).__name__}")


def make_bayes_model(shape, k, rule_order=3, h=None, **kwargs):
    rule = gauss_quadrature(shape, rule_order)
    if h is None:
        h = support_diameter(shape)
    return BayesModel(rhat=rule, support_shape=shape, k=k, h=float(h), **kwargs)


def design_matrix(model, readings):
    """B with mu = B @ eta: B[i, p] = k^2 w_p Phi(x_i, z_p) Phi(z_p, y_i)."""
    k = model.k
    px = fundamental_solution_many(k, readings.points_x, model.rhat.nodes)
    py = fundamental_solution_many(k, model.rhat.nodes, readings.points_y)
    return k**2 * model.rhat.weights[None, :] * px * py.T


def predicted_mean(model, gamma_field, x, y):
    """mu(x, y) for node values eta(z_p) = gamma_field."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if model.support_shape.contains(x) or model.support_shape.contains(y):
        raise DomainError("evaluation point lies inside the reconstructed support")
    k = model.k
    px = fundamental_solution_many(k, x[None, :], model.rhat.nodes)[0]
    py = fundamental_solution_many(k, model.rhat.nodes, y[None, :])[:, 0]
    return complex(
        k**2 * np.sum(model.rhat.weights * np.asarray(gamma_field, dtype=complex) * px * py)
    )


def log_posterior(model, readings, gamma, eta):
    """Unnormalized log posterior (additive constants dropped)."""
    if readings.delta <= 0.0:
        raise DomainError("readings.delta must be positive for the likelihood")
    b = design_matrix(model, readings)
    mu = b @ np.asarray(eta, dtype=float)
    return _log_posterior_from_mu(model, readings, float(gamma), np.asarray(eta, float), mu)


def _log_posterior_from_mu(model, readings, gamma, eta, mu):
    resid = readings.values - mu
    loglike = -float(np.sum(resid.real**2 + resid.imag**2)) / (2.0 * readings.delta**2)
    logp_eta = -float(np.sum((eta - gamma) ** 2)) / (2.0 * model.h**2)
    logp_gamma = -(gamma**2) / (2.0 * model.prior_sd**2)
    return loglike + logp_eta + logp_gamma


@dataclass(frozen=True)
class PosteriorSummary:
    samples: np.ndarray  # retained gamma draws
    mean: float
    sd: float
    map_estimate: float  # histogram mode
    acceptance_rate: float
    chain_gamma: np.ndarray = field(repr=False, default=None)  # every iteration
    chain_logpost: np.ndarray = field(repr=False, default=None)


def _histogram_mode(samples, bins=60):
    counts, edges = np.histogram(samples, bins=bins)
    i = int(np.argmax(counts))
    return float((edges[i] + edges[i + 1]) / 2.0)


def run_mh(model, readings):
    """Joint random-walk MH over (gamma, eta); deterministic given the seed."""
    if readings.delta <= 0.0:
        raise DomainError("readings.delta must be positive for the likelihood")
    b = design_matrix(model, readings)
    p = b.shape[1]
    dim = p + 1
    sd_eta = model.proposal_sd_eta
    if sd_eta is None:
        sd_eta = 2.4 * model.h / np.sqrt(dim)
    sd_gamma = model.proposal_sd_gamma
    if sd_gamma is None:
        sd_gamma = sd_eta

    rng = np.random.default_rng(model.seed)
    gamma = 0.0
    eta = np.zeros(p)
    mu = b @ eta
    logp = _log_posterior_from_mu(model, readings, gamma, eta, mu)

    chain_gamma = np.empty(model.iterations)
    chain_logpost = np.empty(model.iterations)
    accepted = 0
    # global proposal scale, Robbins-Monro adapted toward 23% acceptance
    # during burn-in only (frozen afterwards, preserving detailed balance)
    log_scale = 0.0
    batch_acc = 0
    batch_len = 50
    for it in range(model.iterations):
        s = np.exp(log_scale)
        d_eta = s * sd_eta * rng.standard_normal(p)
        d_gamma = s * sd_gamma * rng.standard_normal()
        eta_new = eta + d_eta
        gamma_new = gamma + d_gamma
        mu_new = mu + b @ d_eta
        logp_new = _log_posterior_from_mu(model, readings, gamma_new, eta_new, mu_new)
        if np.log(rng.uniform()) < logp_new - logp:
            gamma, eta, mu, logp = gamma_new, eta_new, mu_new, logp_new
            accepted += 1
            batch_acc += 1
        chain_gamma[it] = gamma
        chain_logpost[it] = logp
        if it < model.burn_in and (it + 1) % batch_len == 0:
            log_scale += 0.5 * (batch_acc / batch_len - 0.234)
            batch_acc = 0

    post = model.iterations - model.burn_in
    rate = (
        np.count_nonzero(np.diff(chain_gamma[model.burn_in :]) != 0.0) / max(post - 1, 1)
    )
    if rate < 0.01:
        raise ChainError(
            f"acceptance rate {rate:.3%} below 1%; proposal badly scaled"
        )
    samples = chain_gamma[model.burn_in :: model.thinning]
    return PosteriorSummary(
        samples=samples,
        mean=float(np.mean(samples)),
        sd=float(np.std(samples, ddof=1)),
        map_estimate=_histogram_mode(samples),
        acceptance_rate=rate,
        chain_gamma=chain_gamma,
        chain_logpost=chain_logpost,
    )


# ---------------------------------------------------------------------------
# 1-D reduction (eta collapsed to gamma): conjugate-normal closed form


def conjugate_posterior(model, readings):
    """Exact posterior (mean, sd) of gamma when eta is pinned to gamma.

    With mu = gamma * s, s = B @ 1, the Gaussian likelihood is conjugate to
    the N(0, prior_sd^2) prior.
    """
    b = design_matrix(model, readings)
    s = b @ np.ones(b.shape[1])
    d2 = readings.delta**2
    precision = float(np.sum(s.real**2 + s.imag**2)) / d2 + 1.0 / model.prior_sd**2
    lin = float(np.sum(readings.values.real * s.real + readings.values.imag * s.imag)) / d2
    return lin / precision, 1.0 / np.sqrt(precision)


def run_mh_collapsed(model, readings, proposal_sd=None):
    """MH on the 1-D reduction; used to validate detailed balance."""
    b = design_matrix(model, readings)
    s = b @ np.ones(b.shape[1])
    d2 = readings.delta**2

    def logp_of(g):
        resid = readings.values - g * s
        return (
            -float(np.sum(resid.real**2 + resid.imag**2)) / (2.0 * d2)
            - g**2 / (2.0 * model.prior_sd**2)
        )

    if proposal_sd is None:
        _, post_sd = conjugate_posterior(model, readings)
        proposal_sd = 2.4 * post_sd
    rng = np.random.default_rng(model.seed)
    gamma = 0.0
    logp = logp_of(gamma)
    chain = np.empty(model.iterations)
    accepted = 0
    for it in range(model.iterations):
        g_new = gamma + proposal_sd * rng.standard_normal()
        lp_new = logp_of(g_new)
        if np.log(rng.uniform()) < lp_new - logp:
            gamma, logp = g_new, lp_new
            accepted += 1
        chain[it] = gamma
    rate = accepted / model.iterations
    if rate < 0.01:
        raise ChainError(f"acceptance rate {rate:.3%} below 1%")
    samples = chain[model.burn_in :: model.thinning]
    return PosteriorSummary(
        samples=samples,
        mean=float(np.mean(samples)),
        sd=float(np.std(samples, ddof=1)),
        map_estimate=_histogram_mode(samples),
        acceptance_rate=rate,
        chain_gamma=chain,
        chain_logpost=None,
    )
