"""Born-approximation near-field data for small isotropic scatterers.

Assembles the multi-static response matrix over coincident source/receiver
arrays and injects spectrally normalized multiplicative noise.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError
from .geometry import SensorArray, make_sensor_array, scatterer_contains, scatterer_quadrature
from .specfun import fundamental_solution_many

DEFAULT_RULE_ORDER = 16


@dataclass(frozen=True)
class MultistaticMatrix:
    data: np.ndarray  # (N, N) complex
    sensors: SensorArray
    wavenumber: float
    noise_delta: float = 0.0
    noise_seed: int | None = None


def _gather_nodes(scatterers, rule_order):
    """Stack quadrature nodes and contrast-weighted weights of all scatterers."""
    nodes = []
    cw = []  # (n(z_p) - 1) * omega_p
    for spec in scatterers:
        rule = scatterer_quadrature(spec, rule_order)
        nvals = np.asarray(
            spec.index_fn(rule.nodes[:, 0], rule.nodes[:, 1]), dtype=complex
        )
        nodes.append(rule.nodes)
        cw.append((nvals - 1.0) * rule.weights)
    return np.vstack(nodes), np.concatenate(cw)


def born_scattered_field(scatterers, rule_order, k, x, y):
    """u_B^s(x, y) = k^2 sum_p w_p (n(z_p) - 1) Phi(x, z_p) Phi(z_p, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for spec in scatterers:
        if scatterer_contains(spec, x) or scatterer_contains(spec, y):
            raise DomainError("source/receiver point lies inside a scatterer")
    nodes, cw = _gather_nodes(scatterers, rule_order)
    px = fundamental_solution_many(k, x[None, :], nodes)[0]
    py = fundamental_solution_many(k, nodes, y[None, :])[:, 0]
    return complex(k**2 * np.sum(cw * px * py))


def assemble_multistatic(scatterers, sensors, k, rule_order=DEFAULT_RULE_ORDER):
    """Matrix of Born fields over all source/receiver pairs of the array."""
    for spec in scatterers:
        if np.any(scatterer_contains(spec, sensors.points)):
            raise DomainError("a sensor lies inside a scatterer")
    nodes, cw = _gather_nodes(scatterers, rule_order)
    a = fundamental_solution_many(k, sensors.points, nodes)  # (N, P)
    data = k**2 * ((a * cw[None, :]) @ a.T)
    return MultistaticMatrix(data=data, sensors=sensors, wavenumber=float(k))


def add_noise(matrix, delta, seed):
    """Entry-wise multiplicative noise u(1 + delta*E) with ||E||_2 = 1.

    E has i.i.d. complex standard-normal entries rescaled by its spectral
    norm; deterministic for a given seed.
    """
    if delta < 0.0:
        raise DomainError(f"noise level must be nonnegative, got {delta}")
    if delta == 0.0:
        return matrix
    rng = np.random.default_rng(seed)
    n = matrix.data.shape[0]
    e = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    e /= np.linalg.norm(e, 2)
    return MultistaticMatrix(
        data=matrix.data * (1.0 + delta * e),
        sensors=matrix.sensors,
        wavenumber=matrix.wavenumber,
        noise_delta=float(delta),
        noise_seed=int(seed),
    )


# ---------------------------------------------------------------------------
# CSV + JSON sidecar interchange format (shared with the disk forward model)


def save_matrix(matrix, csv_path, sidecar_path=None):
    csv_path = Path(csv_path)
    if sidecar_path is None:
        sidecar_path = csv_path.with_suffix(".json")
    n = matrix.data.shape[0]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for i in range(n):
            for j in range(n):
                v = matrix.data[i, j]
                writer.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])
    meta = {
        "n": n,
        "wavenumber": matrix.wavenumber,
        "sensor_radius": matrix.sensors.radius,
        "noise_delta": matrix.noise_delta,
        "noise_seed": matrix.noise_seed,
    }
    with open(sidecar_path, "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_matrix(csv_path, sidecar_path=None):
    csv_path = Path(csv_path)
    if sidecar_path is None:
        sidecar_path = csv_path.with_suffix(".json")
    with open(sidecar_path) as fh:
        meta = json.load(fh)
    n = int(meta["n"])
    data = np.zeros((n, n), dtype=complex)
    with open(csv_path, newline="") as fh:
        for row in csv.reader(fh):
            i, j = int(row[0]), int(row[1])
            data[i, j] = float(row[2]) + 1j * float(row[3])
    sensors = make_sensor_array(n, float(meta["sensor_radius"]))
    return MultistaticMatrix(
        data=data,
        sensors=sensors,
        wavenumber=float(meta["wavenumber"]),
        noise_delta=float(meta.get("noise_delta") or 0.0),
        noise_seed=meta.get("noise_seed"),
    )
