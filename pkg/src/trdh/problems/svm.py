"""Nonlinear support vector machine on two image classes (MNIST digits 1 and 7).

With samples in the rows of ``A`` and labels ``b`` in ``{-1, +1}``,

    f(x) = 1/2 ||1 - tanh(b * (A x))||^2,   h = lam ||x||_1.
"""

from __future__ import annotations

import hashlib
import os
import urllib.request

import numpy as np

from ..prox import BoxedSeparableRegularizer, Norm
from .base import RegularizedProblem
from .idx import IMAGES_MAGIC, LABELS_MAGIC, find_file, read_idx

MNIST_DIR_ENV = "TRDH_MNIST_DIR"
DIGITS = (1, 7)
TRAIN_FILES = ("train-images-idx3-ubyte", "train-labels-idx1-ubyte")
TEST_FILES = ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte")


def residual(A, b, x):
    return 1.0 - np.tanh(b * (A @ x))


def accuracy(A, b, x) -> float:
    """Percentage of residual components below 1, i.e. samples with ``b_i (Ax)_i > 0``."""
    return 100.0 * float(np.mean(residual(A, b, x) < 1.0))


def prepare(images, labels, digits=DIGITS):
    """Keep two classes, flatten to ``samples x pixels`` in ``[0, 1]`` and map labels to ``+-1``."""
    images = np.asarray(images)
    labels = np.asarray(labels)
    keep = np.isin(labels, digits)
    A = images[keep].reshape(int(keep.sum()), -1).astype(float) / 255.0
    b = np.where(labels[keep] == digits[0], 1.0, -1.0)
    return A, b


def svm_problem(A, b, lam: float = 0.1, name: str = "svm") -> RegularizedProblem:
    A = np.ascontiguousarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.shape[0] != b.size:
        raise ValueError("A must have one row per label")
    n = A.shape[1]

    def f(x):
        r = residual(A, b, x)
        return 0.5 * float(r @ r)

    def grad(x):
        t = np.tanh(b * (A @ x))
        return -(A.T @ (b * (1.0 - t) * (1.0 - t * t)))

    reg = BoxedSeparableRegularizer(Norm.ONE, lam, np.full(n, -np.inf), np.full(n, np.inf))
    meta = dict(family="svm", samples=int(A.shape[0]), n=n, lam=lam)
    return RegularizedProblem(f, grad, reg, np.ones(n), name=name, meta=meta)


def load_mnist_svm(train_path=None, test_path=None, lam: float = 0.1):
    """Build the training problem and a test-accuracy evaluator from IDX files.

    Each path is either a directory holding the standard MNIST file names
    (optionally gzipped) or an ``(images, labels)`` pair of file paths.  With
    no paths the directory is read from ``$TRDH_MNIST_DIR``.

    Returns
    -------
    problem : RegularizedProblem
    evaluate : callable
        ``evaluate(x) -> (train_accuracy, test_accuracy)`` in percent.
    """
    if train_path is None:
        train_path = os.environ.get(MNIST_DIR_ENV)
        if not train_path:
            raise FileNotFoundError(f"no MNIST path given and ${MNIST_DIR_ENV} is unset")
    if test_path is None:
        test_path = train_path
    A, b = prepare(*_read_pair(train_path, TRAIN_FILES))
    At, bt = prepare(*_read_pair(test_path, TEST_FILES))
    problem = svm_problem(A, b, lam, name="svm-mnist")
    problem.meta["test_samples"] = int(At.shape[0])

    def evaluate(x):
        return accuracy(A, b, x), accuracy(At, bt, x)

    return problem, evaluate


def _read_pair(path, stems):
    if isinstance(path, (tuple, list)):
        img_path, lab_path = path
    else:
        img_path, lab_path = (find_file(path, s) for s in stems)
    images = read_idx(img_path, IMAGES_MAGIC)
    labels = read_idx(lab_path, LABELS_MAGIC)
    if images.shape[0] != labels.shape[0]:
        raise ValueError(f"{images.shape[0]} images but {labels.shape[0]} labels")
    return images, labels


def synthetic_digits(n_samples: int = 500, side: int = 8, seed=0, noise: float = 0.15):
    """Two-class ``uint8`` images with MNIST-style labels 1 and 7.

    Class 1 is a vertical bar, class 7 a top bar with a diagonal stroke; each
    sample is shifted by at most one pixel and perturbed by noise.
    """
    rng = np.random.default_rng(seed)
    one = np.zeros((side, side))
    one[1:-1, side // 2] = 1.0
    seven = np.zeros((side, side))
    seven[1, 1:-1] = 1.0
    for i in range(2, side - 1):
        seven[i, side - 1 - i] = 1.0
    labels = rng.choice(np.array(DIGITS, dtype=np.uint8), size=n_samples)
    images = np.empty((n_samples, side, side), dtype=np.uint8)
    for i, lab in enumerate(labels):
        proto = one if lab == DIGITS[0] else seven
        img = np.roll(proto, rng.integers(-1, 2, size=2), axis=(0, 1))
        img = np.clip(img + noise * rng.standard_normal(img.shape), 0.0, 1.0)
        images[i] = np.round(255 * img).astype(np.uint8)
    return images, labels


def synthetic_svm(n_samples: int = 500, side: int = 8, seed: int = 0, lam: float = 0.1, n_test: int = 200):
    """Offline stand-in for the MNIST problem; returns ``(problem, evaluate)``.

    The test set is drawn from an independent stream of the same seed.
    """
    A, b = prepare(*synthetic_digits(n_samples, side, seed))
    At, bt = prepare(*synthetic_digits(n_test, side, [seed, 1]))
    problem = svm_problem(A, b, lam, name="svm-synthetic")
    problem.meta.update(seed=seed, side=side, test_samples=n_test)

    def evaluate(x):
        return accuracy(A, b, x), accuracy(At, bt, x)

    return problem, evaluate


def fetch_mnist(base_url: str, dest: str, checksums: dict[str, str]) -> None:
    """Download the four MNIST files into ``dest``, verifying each sha256 digest.

    Nothing is fetched implicitly; a file whose digest differs is deleted and
    an error is raised.
    """
    os.makedirs(dest, exist_ok=True)
    for stem in TRAIN_FILES + TEST_FILES:
        name = stem + ".gz"
        if name not in checksums:
            raise KeyError(f"no checksum for {name}")
        target = os.path.join(dest, name)
        urllib.request.urlretrieve(base_url.rstrip("/") + "/" + name, target)
        with open(target, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        if digest != checksums[name]:
            os.remove(target)
            raise ValueError(f"checksum mismatch for {name}")
