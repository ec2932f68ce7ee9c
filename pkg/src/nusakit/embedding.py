"""Embedding matrix extension by mean initialization and 2-component PCA export.

New vocabulary rows are initialized to the mean of all existing rows, which
keeps the output distribution of the extended model close to the original.
PCA uses a deterministic cyclic Jacobi eigensolver on the small covariance
matrix so projections are bit-stable across runs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError

JACOBI_TOLERANCE = 1e-12
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class EmbeddingMatrix:
    rows: np.ndarray  # (V, d) float64
    token_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows.ndim != 2:
            raise DataError("embedding rows must be a 2-D matrix")
        if len(self.token_ids) != self.rows.shape[0]:
            raise DataError("token_ids length must match the number of rows")
        if len(set(self.token_ids)) != len(self.token_ids):
            raise DataError("token_ids must be unique")
        if not np.all(np.isfinite(self.rows)):
            raise DataError("embedding matrix contains non-finite values")

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class ProjectionResult:
    coords: np.ndarray  # (V', 2)
    components: np.ndarray  # (2, d), orthonormal rows
    explained_variance: tuple[float, float]  # descending
    labels: tuple[str, ...]


def extend_embeddings(matrix: EmbeddingMatrix, new_token_ids: Sequence[int]) -> EmbeddingMatrix:
    """Append one mean-of-all-original-rows vector per new id; originals untouched."""
    if len(matrix) == 0:
        raise DataError("cannot extend an empty embedding matrix")
    collisions = set(new_token_ids) & set(matrix.token_ids)
    if collisions:
        raise DataError(f"token ids already present: {sorted(collisions)[:5]}")
    if len(set(new_token_ids)) != len(new_token_ids):
        raise DataError("new token ids contain duplicates")
    if not new_token_ids:
        return matrix
    mean_row = matrix.rows.mean(axis=0)
    appended = np.tile(mean_row, (len(new_token_ids), 1))
    return EmbeddingMatrix(
        rows=np.vstack([matrix.rows, appended]),
        token_ids=matrix.token_ids + tuple(new_token_ids),
    )


def jacobi_eigh(matrix: np.ndarray, tolerance: float = JACOBI_TOLERANCE
                ) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a symmetric matrix by cyclic Jacobi rotation.

    Returns (eigenvalues descending, eigenvectors as columns). Deterministic:
    fixed sweep order, no randomization. Rotations update only the two
    affected rows/columns, so one sweep costs O(n^3).
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    v = np.eye(n)
    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tolerance:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= tolerance * 1e-3:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = a[q, p] = 0.0  # annihilated by construction
                v_p, v_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * v_p - s * v_q
                v[:, q] = s * v_p + c * v_q
    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues)[::-1]
    return eigenvalues[order], v[:, order]


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Flip each component so its first coordinate of nontrivial magnitude is positive."""
    fixed = components.copy()
    for i in range(fixed.shape[0]):
        for value in fixed[i]:
            if abs(value) > 1e-12:
                if value < 0:
                    fixed[i] = -fixed[i]
                break
    return fixed


def _orthonormal_completion(first: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to ``first`` (used when the second eigenvalue is 0)."""
    candidate = np.zeros_like(first)
    candidate[int(np.argmin(np.abs(first)))] = 1.0
    candidate -= first * (first @ candidate)
    return candidate / np.linalg.norm(candidate)


def _top2_eigenpairs(centered: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Top-2 (eigenvalues, component rows) of the selection's sample covariance.

    Small selections from wide matrices go through the n x n Gram matrix,
    which shares the covariance's nonzero spectrum; covariance eigenvectors
    are recovered as X^T u / sqrt((n-1) * lambda).
    """
    n, d = centered.shape
    if d <= n:
        cov = centered.T @ centered / (n - 1)
        eigenvalues, eigenvectors = jacobi_eigh(cov)
        return eigenvalues[:2], eigenvectors[:, :2].T
    gram = centered @ centered.T / (n - 1)
    eigenvalues, eigenvectors = jacobi_eigh(gram)
    threshold = max(float(np.trace(gram)), 0.0) * 1e-13
    components = np.zeros((2, d))
    for i in range(2):
        lam = eigenvalues[i]
        if lam > threshold:
            components[i] = centered.T @ eigenvectors[:, i] / np.sqrt((n - 1) * lam)
        else:  # rank-deficient selection: any orthonormal completion is valid
            components[i] = _orthonormal_completion(components[0])
    return eigenvalues[:2], components


def pca2(matrix: EmbeddingMatrix, selection: Sequence[int],
         labels: Sequence[str]) -> ProjectionResult:
    """Project selected rows onto the top-2 principal axes of their covariance."""
    if len(selection) < 3:
        raise DataError("pca2 needs at least 3 selected rows")
    if matrix.d < 2:
        raise DataError("pca2 needs at least 2 embedding dimensions")
    if len(labels) != len(selection):
        raise DataError("labels must align with the selection")
    index = {tid: i for i, tid in enumerate(matrix.token_ids)}
    missing = [tid for tid in selection if tid not in index]
    if missing:
        raise DataError(f"selection ids not in matrix: {missing[:5]}")
    data = matrix.rows[[index[tid] for tid in selection], :]
    centered = data - data.mean(axis=0)
    if np.allclose(centered, 0.0, atol=1e-15):
        raise DataError("degenerate selection: all selected rows are identical (rank 0)")
    eigenvalues, raw_components = _top2_eigenpairs(centered)
    components = _fix_signs(raw_components)
    coords = centered @ components.T
    ev = (max(float(eigenvalues[0]), 0.0), max(float(eigenvalues[1]), 0.0))
    return ProjectionResult(
        coords=coords,
        components=components,
        explained_variance=ev,
        labels=tuple(labels),
    )


_MAGIC = "nusakit-embedding"


def save_matrix(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """One JSON header line, then row-major little-endian float64; ids in a jsonl sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"format": _MAGIC, "version": "1", "rows": len(matrix), "dim": matrix.d}
    with open(path, "wb") as fh:
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        fh.write(np.ascontiguousarray(matrix.rows, dtype="<f8").tobytes())
    with open(ids_sidecar_path(path), "w", encoding="utf-8") as fh:
        for tid in matrix.token_ids:
            fh.write(json.dumps(tid) + "\n")


def ids_sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".ids.jsonl")


def load_matrix(path: str | Path) -> EmbeddingMatrix:
    path = Path(path)
    if not path.exists():
        raise DataError(f"embedding matrix file not found: {path}")
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise DataError(f"bad embedding matrix header: {exc.msg}") from exc
        if not isinstance(header, dict) or header.get("format") != _MAGIC:
            raise DataError("bad embedding matrix header: wrong format marker")
        rows, dim = int(header["rows"]), int(header["dim"])
        payload = fh.read()
    expected = rows * dim * 8
    if len(payload) != expected:
        raise DataError(f"embedding payload is {len(payload)} bytes, expected {expected}")
    data = np.frombuffer(payload, dtype="<f8").reshape(rows, dim).astype(np.float64)
    sidecar = ids_sidecar_path(path)
    if not sidecar.exists():
        raise DataError(f"embedding id sidecar not found: {sidecar}")
    token_ids = []
    with open(sidecar, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                token_ids.append(int(json.loads(line)))
    return EmbeddingMatrix(rows=data, token_ids=tuple(token_ids))


def save_projection_csv(result: ProjectionResult, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label", "x", "y"])
        for label, (x, y) in zip(result.labels, result.coords):
            writer.writerow([label, f"{x:.10g}", f"{y:.10g}"])
