"""The spin cover SL(2,C) -> SO(3,C) and exact membership in SO3(Z[i]).

Coordinates on SO(3,C) come from the basis ``X1 = [[0,1],[1,0]]``,
``X2 = [[0,i],[-i,0]]``, ``Y = [[1,0],[0,-1]]`` of sl2, orthonormal for the
half-trace form ``B(X, Y) = tr(XY) / 2``.
"""
from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError
from .gaussian import I, OMEGA8, OMEGA8_INV, CycloNum, GaussianInt, unit
from .hecke import in_xi12
from .matrices import Mat2, Mat3

_ZERO = CycloNum(0)
_ONE = CycloNum(1)
_I = CycloNum(I)

BASIS_BETA = (
    Mat2(0, 1, 1, 0),
    Mat2(0, I, -I, 0),
    Mat2(1, 0, 0, -1),
)


def half_trace(x: Mat2, y: Mat2) -> CycloNum:
    return (x.a * y.a + x.b * y.c + x.c * y.b + x.d * y.d).half()


def conj_in_basis(g: Mat2, basis, gram_diag) -> Mat3:
    """Matrix of ``X -> g X g^-1`` in a B-orthogonal basis with diagonal Gram matrix."""
    if not g.is_sl2():
        raise DomainError("conjugation matrix needs determinant one")
    g_inv = g.inverse()
    cols = []
    for e in basis:
        image = g * e * g_inv
        cols.append([half_trace(f, image) * s for f, s in zip(basis, gram_diag)])
    return Mat3([[cols[j][i] for j in range(3)] for i in range(3)])


def conj3(g: Mat2) -> Mat3:
    """The image of g in SO(3,C), computed by conjugating the basis matrices."""
    return conj_in_basis(g, BASIS_BETA, (1, 1, 1))


def conj3_closed_form(g: Mat2, printed_sign: bool = False) -> Mat3:
    """Polynomial formula for conj3.

    With ``printed_sign=True`` entry (3,2) is ``i(ac+bd)``; that variant is
    kept only to show it breaks orthogonality.  The default uses
    ``-i(ac+bd)``, which agrees with :func:`conj3`.
    """
    if not g.is_sl2():
        raise DomainError("conj3 needs determinant one")
    a, b, c, d = g.entries()
    a2, b2, c2, d2 = a * a, b * b, c * c, d * d
    e32 = _I * (a * c + b * d)
    if not printed_sign:
        e32 = -e32
    return Mat3([
        [(a2 - c2 + d2 - b2).half(), (_I * (a2 - c2 + b2 - d2)).half(), c * d - a * b],
        [(_I * (b2 + d2 - a2 - c2)).half(), (a2 + c2 + b2 + d2).half(), _I * (a * b + c * d)],
        [b * d - a * c, e32, a * d + b * c],
    ])


def is_so3_gaussian(M: Mat3) -> bool:
    return M.is_gaussian() and M.is_special_orthogonal()


class Family(enum.Enum):
    Diagonal = "Diagonal"
    Inversion = "Inversion"


@dataclass(frozen=True)
class CosetLabel:
    family: Family
    delta: int
    epsilon: int = 0

    def __str__(self):
        if self.family is Family.Diagonal:
            return f"Diagonal,δ={self.delta}"
        return f"Inversion,δ={self.delta},ε={self.epsilon}"


def coset_rep(label: CosetLabel) -> Mat2:
    """Representative of the right coset ``Xi12 * rep`` carrying ``label``."""
    w_inv = OMEGA8_INV ** label.delta
    if label.family is Family.Diagonal:
        return Mat2(unit(label.delta), 0, 0, 1) * w_inv
    s = unit(1 + label.delta)
    t = unit(label.epsilon)
    return Mat2(s, t, s, t + 2) * w_inv.div_one_plus_i()


COSET_LABELS = (
    CosetLabel(Family.Diagonal, 0),
    CosetLabel(Family.Diagonal, 1),
    CosetLabel(Family.Inversion, 0, 0),
    CosetLabel(Family.Inversion, 0, 1),
    CosetLabel(Family.Inversion, 1, 0),
    CosetLabel(Family.Inversion, 1, 1),
)


def coset_reps() -> list[tuple[CosetLabel, Mat2]]:
    return [(lab, _REPS[lab]) for lab in COSET_LABELS]


_REPS = {lab: coset_rep(lab) for lab in COSET_LABELS}
_REP_INVERSES = {lab: rep.inverse() for lab, rep in _REPS.items()}

for _lab, _rep in _REPS.items():
    assert _rep.is_sl2() and is_so3_gaussian(conj3(_rep)), _lab


def gamma_membership(g: Mat2) -> Optional[CosetLabel]:
    """Coset label of g in the preimage of SO3(Z[i]), or None if g is not in it."""
    if not g.is_sl2():
        raise DomainError("membership test needs determinant one")
    for lab in COSET_LABELS:
        if in_xi12(g * _REP_INVERSES[lab]):
            return lab
    return None


# Generators used throughout
T_1 = Mat2(1, 1, 0, 1)
T_I = Mat2(1, I, 0, 1)
S = Mat2(0, -1, 1, 0)
T_1PI = Mat2(1, GaussianInt(1, 1), 0, 1)
T_1MI = Mat2(1, GaussianInt(1, -1), 0, 1)
R_HALF_PI = Mat2(OMEGA8, 0, 0, OMEGA8_INV)
ROT_ABOUT_1 = T_1MI * R_HALF_PI
GAMMA_INV = Mat2(I, GaussianInt(-2, -1), I, GaussianInt(0, -1)) * CycloNum(1, 0, 1)

assert GAMMA_INV == _REPS[CosetLabel(Family.Inversion, 0, 0)] * Mat2(1, GaussianInt(-1, 3), 0, 1)


def translation(b) -> Mat2:
    return Mat2(1, b, 0, 1)


def gamma_phi1_membership(g: Mat2) -> bool:
    """Whether g lies in the stabilizer of the height coordinate inside the group."""
    if not g.is_sl2():
        raise DomainError("membership test needs determinant one")
    return not g.c and gamma_membership(g) is not None


def random_sl2_word(rng: random.Random, length: int) -> Mat2:
    """Random element of SL2(Z[i]) as a word in S, T_1, T_i and their inverses."""
    gens = (S, S.inverse(), T_1, T_1.inverse(), T_I, T_I.inverse())
    g = Mat2.identity()
    for _ in range(length):
        g = g * rng.choice(gens)
    return g


def random_xi12_word(rng: random.Random, length: int) -> Mat2:
    """Random element of Xi12 as a word in S, T_{1+i}, T_{1-i}, T_2 and inverses."""
    gens = (S, S.inverse(), T_1PI, T_1PI.inverse(), T_1MI, T_1MI.inverse(),
            translation(2), translation(-2))
    g = Mat2.identity()
    for _ in range(length):
        g = g * rng.choice(gens)
    return g


def random_group_element(rng: random.Random, length: int) -> Mat2:
    """Random element of the preimage of SO3(Z[i]) as a word of coset reps and Xi12 generators."""
    gens = [S, T_1PI, T_1MI, T_1PI.inverse(), T_1MI.inverse(), R_HALF_PI,
            R_HALF_PI.inverse(), GAMMA_INV, GAMMA_INV.inverse()]
    gens += [rep for _, rep in coset_reps()[1:]]
    g = Mat2.identity()
    for _ in range(length):
        g = g * rng.choice(gens)
    return g


@dataclass
class ClosureReport:
    pairs: int = 0
    failures: list = field(default_factory=list)
    families: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures


def closure_check(samples: int, rng: random.Random, word_length: int = 4) -> ClosureReport:
    """Multiply random coset members pairwise and check each product stays in the group.

    Members are drawn as ``xi * rep`` with xi a random Xi12 word, so each
    sample also checks that its own coset label is recovered.
    """
    report = ClosureReport()
    reps = coset_reps()
    for _ in range(samples):
        (l1, r1), (l2, r2) = rng.choice(reps), rng.choice(reps)
        x = random_xi12_word(rng, rng.randint(0, word_length)) * r1
        y = random_xi12_word(rng, rng.randint(0, word_length)) * r2
        report.pairs += 1
        if gamma_membership(x) != l1 or gamma_membership(y) != l2:
            report.failures.append({"x": x.to_json(), "y": y.to_json(), "reason": "label"})
            continue
        lab = gamma_membership(x * y)
        if lab is None:
            report.failures.append({"x": x.to_json(), "y": y.to_json(), "reason": "product"})
            continue
        report.families[(l1.family.value, l2.family.value, lab.family.value)] += 1
    return report
