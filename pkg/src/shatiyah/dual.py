"""Dual numbers ``a + b h`` with ``h^2 = 0`` over the rationals."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class DualScalar:
    __slots__ = ("body", "soul")

    def __init__(self, body=0, soul=0):
        self.body = Fraction(body)
        self.soul = Fraction(soul)

    @staticmethod
    def lift(x) -> "DualScalar":
        if isinstance(x, DualScalar):
            return x
        if isinstance(x, (int, Rational)):
            return DualScalar(x, 0)
        raise TypeError("cannot lift %r to a dual number" % (x,))

    def __add__(self, other):
        try:
            o = DualScalar.lift(other)
        except TypeError:
            return NotImplemented
        return DualScalar(self.body + o.body, self.soul + o.soul)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.body, -self.soul)

    def __sub__(self, other):
        try:
            return self + (-DualScalar.lift(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = DualScalar.lift(other)
        except TypeError:
            return NotImplemented
        return DualScalar(self.body * o.body, self.body * o.soul + self.soul * o.body)

    __rmul__ = __mul__

    def inverse(self) -> "DualScalar":
        if not self.body:
            raise ZeroDivisionError("dual number with zero body is not invertible")
        return DualScalar(1 / self.body, -self.soul / self.body ** 2)

    def __truediv__(self, other):
        try:
            o = DualScalar.lift(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return DualScalar.lift(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = DualScalar.lift(other)
        except TypeError:
            return NotImplemented
        return self.body == o.body and self.soul == o.soul

    def __hash__(self):
        if not self.soul:
            return hash(self.body)
        return hash((self.body, self.soul))

    def __bool__(self):
        return bool(self.body) or bool(self.soul)

    def __repr__(self):
        return "DualScalar(%s, %s)" % (self.body, self.soul)

    def __str__(self):
        if not self.soul:
            return str(self.body)
        if not self.body:
            return "%s*h" % self.soul
        return "%s%s%s*h" % (self.body, "+" if self.soul > 0 else "-", abs(self.soul))


H = DualScalar(0, 1)


def split(x: dict) -> tuple[dict, dict]:
    """Body and soul parts of a dict with scalar values."""
    body, soul = {}, {}
    for k, v in x.items():
        v = DualScalar.lift(v)
        if v.body:
            body[k] = v.body
        if v.soul:
            soul[k] = v.soul
    return body, soul


def combine(body: dict, soul: dict) -> dict:
    out = {k: DualScalar(v, 0) for k, v in body.items() if v}
    for k, v in soul.items():
        if v:
            out[k] = out.get(k, DualScalar()) + DualScalar(0, v)
    return out
