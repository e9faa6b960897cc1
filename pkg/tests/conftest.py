from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from hypertorus.exactmath import Mat
from hypertorus.group import generate
from hypertorus.lattice import Lattice, add_generator
from hypertorus.torus import AffineTorusMap, TorusSpec, descend, from_complex

OMEGA = (F(1, 2), 0, F(1, 2), 0, 0, 0)
R_C = Mat([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])
S_C = Mat([[0, 1, 0], [1, 0, 0], [0, 0, -1]])
T_R = (0, 0, 0, 0, F(1, 4), 0)
# b1 = 1/2 + tau/2 in block 1, b2 = tau/2 in block 2
T_S = (F(1, 2), F(1, 2), 0, F(1, 2), 0, 0)


class D4:
    """The order-8 example on A = E x E x E' / <omega> and its cover A'."""

    def __init__(self):
        self.A1 = TorusSpec.product(["tau", "tau", "tau'"])
        self.LA = add_generator(self.A1.lattice, OMEGA)
        self.A = self.A1.with_lattice(self.LA)
        self.r1 = from_complex(self.A1, R_C, T_R)
        self.s1 = from_complex(self.A1, S_C, T_S)
        self.r = descend(self.r1, self.LA)
        self.s = descend(self.s1, self.LA)
        self.G = generate({"r": self.r, "s": self.s})
        self.G1 = generate({"r": self.r1, "s": self.s1})
        self.R = self.r.linear
        self.S = self.s.linear


@pytest.fixture(scope="session")
def d4() -> D4:
    return D4()


def random_unimodular(rng: random.Random, n: int) -> list[list[int]]:
    """Signed permutation times a few elementary operations."""
    perm = list(range(n))
    rng.shuffle(perm)
    M = [[(rng.choice((-1, 1)) if perm[i] == j else 0) for j in range(n)] for i in range(n)]
    for _ in range(rng.choice((0, 0, 1, 2))):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice((-1, 1))
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def random_affine_map(rng: random.Random, g: int | None = None, max_den: int = 3) -> AffineTorusMap:
    """Affine map on a random torus of real rank 2 or 4, given in lattice coordinates."""
    g = g or rng.choice((1, 2))
    n = 2 * g
    spec = TorusSpec.product(["tau"] * g)
    if rng.random() < 0.3:
        v = [F(rng.randint(0, 2), rng.randint(1, 3)) for _ in range(n)]
        spec = spec.with_lattice(add_generator(spec.lattice, v))
    L = spec.lattice
    ML = Mat(random_unimodular(rng, n))
    M = L.basis @ ML @ L.basis.inv()
    t_lat = [F(rng.randint(0, 5), rng.randint(1, max_den)) for _ in range(n)]
    return AffineTorusMap(spec, M, L.from_coords(t_lat))


def random_int_matrix(rng: random.Random, rows: int, cols: int, lo: int = -6, hi: int = 6) -> Mat:
    return Mat([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols=cols)


def standard(n: int) -> Lattice:
    return Lattice.standard(n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok = RESULTS[number]
        terminalreporter.write_line(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}")
