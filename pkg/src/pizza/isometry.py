"""Exact affine isometries x -> M x + t with provenance labels."""
from __future__ import annotations

from typing import Optional, Sequence

from .errors import DomainError
from .field import FieldSpec, embed_cos, embed_sin, from_json
from .linalg import dot, identity, matmul, matvec, transpose, vadd, vsub


def _mat_eq(A, B) -> bool:
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


class AffineIsometry:
    """x -> linear @ x + translation.

    ``provenance`` is a dict with ``kind`` in {rotation, reflection,
    translation, isometry, identity} and the data needed to re-derive the
    map (center and angle, or a point and direction of the mirror line).
    """

    def __init__(self, linear: Sequence[Sequence], translation: Sequence, provenance: Optional[dict] = None,
                 label: str = ""):
        self.linear = [list(r) for r in linear]
        self.translation = tuple(translation)
        self.provenance = provenance or {"kind": "isometry"}
        self.label = label
        self.dim = len(self.translation)

    def __repr__(self) -> str:
        return f"AffineIsometry({self.label or self.provenance['kind']})"

    def __call__(self, x: Sequence) -> tuple:
        return vadd(matvec(self.linear, x), self.translation)

    def apply_region(self, R):
        return R.transform(self.linear, self.translation)

    def inverse(self) -> "AffineIsometry":
        Mt = transpose(self.linear)
        t = tuple(-x for x in matvec(Mt, self.translation))
        prov = dict(self.provenance)
        if prov.get("kind") == "rotation":
            prov["k"] = -prov["k"]
        elif prov.get("kind") == "translation":
            prov["vector"] = tuple(-x for x in prov["vector"])
        label = self.label if prov.get("kind") in ("reflection", "identity") else f"inverse of {self.label}"
        return AffineIsometry(Mt, t, prov, label)

    def __matmul__(self, other: "AffineIsometry") -> "AffineIsometry":
        """self o other."""
        M = matmul(self.linear, other.linear)
        t = vadd(matvec(self.linear, other.translation), self.translation)
        return AffineIsometry(M, t, {"kind": "isometry"}, f"{self.label}*{other.label}")

    def is_orthogonal(self) -> bool:
        n = self.dim
        F = self.translation[0].field
        return _mat_eq(matmul(transpose(self.linear), self.linear), identity(n, F.one))

    def is_translation(self) -> bool:
        F = self.translation[0].field
        return _mat_eq(self.linear, identity(self.dim, F.one))

    def fixes(self, p: Sequence) -> bool:
        return self(p) == tuple(p)

    def conjugate(self, M: Sequence[Sequence]) -> "AffineIsometry":
        """w o self o w^-1 for an orthogonal linear map w = M."""
        Mt = transpose(M)
        lin = matmul(matmul(M, self.linear), Mt)
        t = matvec(M, self.translation)
        prov = dict(self.provenance)
        kind = prov.get("kind")
        from .linalg import det as _det

        d = _det(M)
        if kind == "rotation":
            prov["center"] = matvec(M, prov["center"])
            if d.sign() < 0:
                prov["k"] = -prov["k"]
        elif kind == "reflection":
            prov["point"] = matvec(M, prov["point"])
            prov["direction"] = matvec(M, prov["direction"])
        elif kind == "translation":
            prov["vector"] = matvec(M, prov["vector"])
        return AffineIsometry(lin, t, prov, self.label)

    def provenance_ok(self) -> tuple:
        """Check the matrix against its provenance; returns (ok, message)."""
        if not self.is_orthogonal():
            return False, "linear part is not orthogonal"
        p = self.provenance
        kind = p.get("kind")
        F = self.translation[0].field
        if kind == "identity":
            return (self.is_translation() and not any(self.translation)), "identity"
        if kind == "translation":
            ok = self.is_translation() and self.translation == tuple(p["vector"])
            return ok, "translation"
        if kind == "rotation":
            if self.dim != 2:
                return False, "rotation provenance needs dimension 2"
            R = rotation_matrix(F, p["k"], p["den"])
            if not _mat_eq(self.linear, R):
                return False, f"linear part is not a rotation by {p['k']}pi/{p['den']}"
            if not self.fixes(p["center"]):
                return False, "rotation does not fix its center"
            return True, "rotation"
        if kind == "reflection":
            d = p["direction"]
            if dot(d, d) != F.one:
                return False, "mirror direction is not a unit vector"
            R = line_reflection_matrix(d)
            if not _mat_eq(self.linear, R):
                return False, "linear part is not the reflection in the given line"
            if not self.fixes(p["point"]):
                return False, "reflection does not fix its mirror point"
            return True, "reflection"
        if kind == "isometry":
            return True, "isometry"
        return False, f"unknown provenance {kind!r}"

    def to_json(self) -> dict:
        prov = {}
        for k, v in self.provenance.items():
            if isinstance(v, (tuple, list)):
                prov[k] = [x.to_json() for x in v]
            else:
                prov[k] = v
        return {"linear": [[x.to_json() for x in r] for r in self.linear],
                "translation": [x.to_json() for x in self.translation],
                "provenance": prov, "label": self.label}

    @classmethod
    def from_json(cls, data: dict, F: FieldSpec) -> "AffineIsometry":
        lin = [[F(from_json(x)) for x in r] for r in data["linear"]]
        t = tuple(F(from_json(x)) for x in data["translation"])
        prov = {}
        for k, v in data["provenance"].items():
            if isinstance(v, list):
                prov[k] = tuple(F(from_json(x)) for x in v)
            else:
                prov[k] = v
        return cls(lin, t, prov, data.get("label", ""))


def rotation_matrix(F: FieldSpec, k: int, den: int) -> list:
    """Rotation by k*pi/den counter-clockwise."""
    c = embed_cos(F, k, den)
    s = embed_sin(F, k, den)
    return [[c, -s], [s, c]]


def line_reflection_matrix(d: Sequence) -> list:
    """Reflection fixing the line spanned by the unit vector d: 2dd^T - I."""
    n = len(d)
    one = d[0].field.one
    return [[2 * d[i] * d[j] - (one if i == j else one - one) for j in range(n)] for i in range(n)]


def rotation(center: Sequence, k: int, den: int, F: FieldSpec, label: str = "") -> AffineIsometry:
    """Rotation about ``center`` by k*pi/den."""
    center = tuple(F(x) for x in center)
    R = rotation_matrix(F, k, den)
    t = vsub(center, matvec(R, center))
    return AffineIsometry(R, t, {"kind": "rotation", "center": center, "k": k, "den": den},
                          label or f"rotation center a angle {k}pi/{den}")


def reflection_in_line(point: Sequence, direction: Sequence, label: str = "") -> AffineIsometry:
    """Reflection in the affine line point + R*direction (direction a unit vector)."""
    direction = tuple(direction)
    R = line_reflection_matrix(direction)
    t = vsub(tuple(point), matvec(R, point))
    return AffineIsometry(R, t, {"kind": "reflection", "point": tuple(point), "direction": direction},
                          label or "reflection")


def translation(v: Sequence, label: str = "") -> AffineIsometry:
    v = tuple(v)
    F = v[0].field
    return AffineIsometry(identity(len(v), F.one), v, {"kind": "translation", "vector": v},
                          label or "translation")


def identity_map(n: int, F: FieldSpec) -> AffineIsometry:
    return AffineIsometry(identity(n, F.one), (F.zero,) * n, {"kind": "identity"}, "identity")


def from_point_pairs(src: Sequence, dst: Sequence, label: str = "") -> AffineIsometry:
    """The planar isometry with src[i] -> dst[i] for three affinely independent points."""
    from .linalg import inverse

    p0, p1, p2 = src
    q0, q1, q2 = dst
    A = transpose([list(vsub(p1, p0)), list(vsub(p2, p0))])
    B = transpose([list(vsub(q1, q0)), list(vsub(q2, q0))])
    M = matmul(B, inverse(A))
    t = vsub(q0, matvec(M, p0))
    g = AffineIsometry(M, t, {"kind": "isometry"}, label or "three-point isometry")
    if not g.is_orthogonal():
        raise DomainError("point pairs are not congruent")
    return g
