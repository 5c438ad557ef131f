"""Exact scalar arithmetic for the annular TQFT engine.

Two coefficient rings appear throughout:

  * ``Laurent``    -- Z[q, q^-1], stored as a sparse map exponent -> integer.
  * ``Cyclotomic`` -- k_r = Z[q]/(q^r - 1), stored on exponents 0..r-1.

Both are immutable value types.  ``Laurent`` is the engine's working ring
(the modulus r = 0 convention means "no reduction"); reduction to k_r happens
only at module boundaries via :func:`Laurent.reduce`.  Reduction is a ring
homomorphism: it maps each exponent e to e mod r and adds coefficients.
"""

from __future__ import annotations

from typing import Dict, Iterator, Tuple


class Laurent:
    """An element of Z[q, q^-1] with normalized sparse storage.

    No zero coefficients are ever stored, so ``==`` and ``hash`` are
    structural.  All arithmetic returns new objects.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Dict[int, int] | None = None):
        c = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    c[int(e)] = int(a)
        self._c = c

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "Laurent":
        return _ZERO

    @staticmethod
    def one() -> "Laurent":
        return _ONE

    @staticmethod
    def q(e: int = 1) -> "Laurent":
        """The monomial q^e."""
        return Laurent({e: 1})

    @staticmethod
    def const(a: int) -> "Laurent":
        return Laurent({0: a})

    # -- structure --------------------------------------------------------

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._c.items()))

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def monomial(self) -> Tuple[int, int]:
        """Return (exponent, coefficient); requires a monomial."""
        ((e, a),) = self._c.items()
        return e, a

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._c))

    # -- ring ops ---------------------------------------------------------

    def __add__(self, other: "Laurent") -> "Laurent":
        c = dict(self._c)
        for e, a in other._c.items():
            s = c.get(e, 0) + a
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        out = Laurent.__new__(Laurent)
        out._c = c
        return out

    def __neg__(self) -> "Laurent":
        out = Laurent.__new__(Laurent)
        out._c = {e: -a for e, a in self._c.items()}
        return out

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        c: Dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                s = c.get(e, 0) + a1 * a2
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        out = Laurent.__new__(Laurent)
        out._c = c
        return out

    def scale(self, a: int) -> "Laurent":
        if a == 0:
            return _ZERO
        out = Laurent.__new__(Laurent)
        out._c = {e: a * b for e, b in self._c.items()}
        return out

    def shift(self, e: int) -> "Laurent":
        """Multiply by q^e."""
        if not e:
            return self
        out = Laurent.__new__(Laurent)
        out._c = {e0 + e: a for e0, a in self._c.items()}
        return out

    # -- specializations --------------------------------------------------

    def at_one(self) -> int:
        """Evaluate at q = 1."""
        return sum(self._c.values())

    def reduce(self, r: int) -> "Laurent":
        """Canonical representative mod q^r - 1 (r = 0: identity)."""
        if r == 0:
            return self
        c: Dict[int, int] = {}
        for e, a in self._c.items():
            e %= r
            s = c.get(e, 0) + a
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        out = Laurent.__new__(Laurent)
        out._c = c
        return out

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Laurent) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, a in sorted(self._c.items()):
            if e == 0:
                parts.append(f"{a}")
            elif e == 1:
                parts.append(f"{a}*q" if a != 1 else "q")
            else:
                parts.append(f"{a}*q^{e}" if a != 1 else f"q^{e}")
        return " + ".join(parts)


_ZERO = Laurent()
_ONE = Laurent({0: 1})


class Cyclotomic:
    """An element of k_r = Z[q]/(q^r - 1), r >= 1.

    Thin wrapper pairing a canonical ``Laurent`` representative (support in
    0..r-1) with its modulus, so mixed-modulus arithmetic is a hard error
    instead of a silent bug.
    """

    __slots__ = ("r", "rep")

    def __init__(self, r: int, rep: Laurent):
        if r < 1:
            raise ValueError("modulus must be >= 1")
        self.r = r
        self.rep = rep.reduce(r)

    @staticmethod
    def from_laurent(x: Laurent, r: int) -> "Cyclotomic":
        return Cyclotomic(r, x)

    def _chk(self, other: "Cyclotomic") -> None:
        if self.r != other.r:
            raise ValueError(f"modulus mismatch: {self.r} vs {other.r}")

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._chk(other)
        return Cyclotomic(self.r, self.rep + other.rep)

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.r, -self.rep)

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._chk(other)
        return Cyclotomic(self.r, self.rep - other.rep)

    def __mul__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._chk(other)
        return Cyclotomic(self.r, self.rep * other.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cyclotomic)
            and self.r == other.r
            and self.rep == other.rep
        )

    def __hash__(self) -> int:
        return hash((self.r, self.rep))

    def __repr__(self) -> str:
        return f"({self.rep!r} mod q^{self.r}-1)"
