"""Degree laws, their size-biased companions, and generating functions.

Four degree families are supported: Poisson(c), Dirac(d), Geometric(p) on
{0,1,2,...}, and explicit finite pmfs. Size-biasing maps each family to a
closed form (Poisson is its own size-bias; Dirac(d) drops to Dirac(d-1);
Geometric(p) becomes the negative-binomial law with two successes), so
generating functions are always evaluated exactly, never via truncated
series. Truncation appears only inside samplers, where the cumulative
table is carried until the remaining tail is below 1e-17, i.e. below the
resolution of a 53-bit uniform.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ChildrenCapExceeded, DomainError, InvalidPmf, ParseError, ZeroMean
from .rng import RngStream

CHILDREN_CAP = 10**6
_TAIL = 1e-17


def _check_z(z):
    """Validate and clip a generating-function argument to [0, 1]."""
    if type(z) is float or type(z) is int:
        # scalar fast path: fixed-point loops evaluate this millions of times
        if -1e-9 <= z <= 1.0 + 1e-9:
            return min(1.0, max(0.0, float(z)))
        raise DomainError(f"generating functions are defined on [0, 1], got {z!r}")
    arr = np.asarray(z, dtype=np.float64)
    if np.any(arr < -1e-9) or np.any(arr > 1.0 + 1e-9):
        raise DomainError(f"generating functions are defined on [0, 1], got {z!r}")
    out = np.clip(arr, 0.0, 1.0)
    return out if arr.ndim else float(out)


def _poly(w: np.ndarray, z):
    return np.polynomial.polynomial.polyval(z, w)


class _Law:
    """Shared behaviour of degree and offspring laws.

    kind/param/weights is a closed dispatch table rather than a class
    hierarchy; the arithmetic per family is two lines each and keeping it
    in one place makes the closed forms easy to audit side by side.
    """

    __slots__ = ("kind", "param", "weights", "_mean", "_cdf")

    def __init__(self, kind: str, param: float | None = None,
                 weights: np.ndarray | None = None):
        self.kind = kind
        self.param = param
        self.weights = weights
        self._mean = None
        self._cdf = None

    # -- pointwise mass ------------------------------------------------

    def pmf(self, k: int) -> float:
        if k < 0:
            raise DomainError("pmf index must be a natural number")
        kind, a = self.kind, self.param
        if kind == "poisson":
            if a == 0.0:
                return 1.0 if k == 0 else 0.0
            return math.exp(k * math.log(a) - a - math.lgamma(k + 1))
        if kind == "dirac":
            return 1.0 if k == int(a) else 0.0
        if kind == "geometric":
            return a * (1.0 - a) ** k
        if kind == "nb2":
            return (k + 1) * a * a * (1.0 - a) ** k
        w = self.weights
        return float(w[k]) if k < len(w) else 0.0

    def mean(self) -> float:
        if self._mean is None:
            kind, a = self.kind, self.param
            if kind == "poisson":
                m = float(a)
            elif kind == "dirac":
                m = float(a)
            elif kind == "geometric":
                m = (1.0 - a) / a
            elif kind == "nb2":
                m = 2.0 * (1.0 - a) / a
            else:
                m = float(np.arange(len(self.weights)) @ self.weights)
            self._mean = m
        return self._mean

    # -- generating function and derivatives ---------------------------

    def phi(self, z):
        z = _check_z(z)
        kind, a = self.kind, self.param
        if kind == "poisson":
            if isinstance(z, float):
                return math.exp(a * (z - 1.0))
            return np.exp(a * (z - 1.0))
        if kind == "dirac":
            if isinstance(z, float):
                return z ** int(a)  # 0.0 ** 0 == 1.0, the right phi(0)
            # np.power(0.0, 0) == 1.0, the right convention for phi at z = 0
            return np.power(z, int(a))
        if kind == "geometric":
            return a / (1.0 - (1.0 - a) * z)
        if kind == "nb2":
            return (a / (1.0 - (1.0 - a) * z)) ** 2
        return _poly(self.weights, z)

    def phi_prime(self, z):
        z = _check_z(z)
        kind, a = self.kind, self.param
        if kind == "poisson":
            if isinstance(z, float):
                return a * math.exp(a * (z - 1.0))
            return a * np.exp(a * (z - 1.0))
        if kind == "dirac":
            d = int(a)
            if d == 0:
                return np.zeros_like(np.asarray(z, dtype=float)) if np.ndim(z) else 0.0
            if isinstance(z, float):
                return d * z ** (d - 1)
            return d * np.power(z, d - 1)
        if kind == "geometric":
            return a * (1.0 - a) / (1.0 - (1.0 - a) * z) ** 2
        if kind == "nb2":
            return 2.0 * a * a * (1.0 - a) / (1.0 - (1.0 - a) * z) ** 3
        w = self.weights
        if len(w) < 2:
            return np.zeros_like(np.asarray(z, dtype=float)) if np.ndim(z) else 0.0
        return _poly(w[1:] * np.arange(1, len(w)), z)

    def phi_second(self, z):
        z = _check_z(z)
        kind, a = self.kind, self.param
        if kind == "poisson":
            return a * a * np.exp(a * (z - 1.0))
        if kind == "dirac":
            d = int(a)
            if d < 2:
                return np.zeros_like(np.asarray(z, dtype=float)) if np.ndim(z) else 0.0
            return d * (d - 1) * np.power(z, d - 2)
        if kind == "geometric":
            return 2.0 * a * (1.0 - a) ** 2 / (1.0 - (1.0 - a) * z) ** 3
        if kind == "nb2":
            return 6.0 * a * a * (1.0 - a) ** 2 / (1.0 - (1.0 - a) * z) ** 4
        w = self.weights
        if len(w) < 3:
            return np.zeros_like(np.asarray(z, dtype=float)) if np.ndim(z) else 0.0
        ks = np.arange(2, len(w))
        return _poly(w[2:] * ks * (ks - 1), z)

    # -- sampling -------------------------------------------------------

    def cdf_table(self) -> np.ndarray:
        """Cumulative table for inversion sampling, tail below 1e-17.

        The table is built once per law and shared by every backend, so the
        scalar scan and the vectorised searchsorted act on identical floats.
        The final entry of a bounded law is clamped up to 1.0 so a uniform
        can never step past the support.
        """
        if self._cdf is not None:
            return self._cdf
        kind, a = self.kind, self.param
        if kind == "dirac":
            d = int(a)
            cdf = np.concatenate([np.zeros(d), [1.0]])
        elif kind == "pmf":
            cdf = np.cumsum(self.weights)
            cdf[-1] = max(cdf[-1], 1.0)
        else:
            terms = []
            if kind == "poisson":
                term = math.exp(-a)
                ratio = lambda k, t: t * a / (k + 1)
            elif kind == "geometric":
                term = a
                ratio = lambda k, t: t * (1.0 - a)
            else:  # nb2
                term = a * a
                ratio = lambda k, t: t * (1.0 - a) * (k + 2) / (k + 1)
            # stop once terms are decreasing and below the tail cut; testing
            # the cumulative sum against 1 - 1e-17 would be vacuous, that
            # expression rounds to 1.0 and float saturation sits just under
            cum = 0.0
            k = 0
            while True:
                cum += term
                terms.append(cum)
                nxt = ratio(k, term)
                k += 1
                if nxt == 0.0 or (nxt < term and nxt < _TAIL):
                    break
                term = nxt
                if k > CHILDREN_CAP:
                    raise ChildrenCapExceeded(
                        f"cumulative table for {self.describe()} exceeded {CHILDREN_CAP} entries"
                    )
            cdf = np.asarray(terms)
        self._cdf = np.ascontiguousarray(cdf, dtype=np.float64)
        return self._cdf

    def sample(self, stream: RngStream, index: int = 0, draw: int = 0) -> int:
        cdf = self.cdf_table()
        u = stream.uniform(index, draw)
        return int(np.searchsorted(cdf, u, side="right"))

    def sample_many(self, stream: RngStream, n: int, draw: int = 0) -> np.ndarray:
        cdf = self.cdf_table()
        u = stream.uniforms(np.arange(n, dtype=np.uint64), draw)
        return np.searchsorted(cdf, u, side="right")

    # -- misc -----------------------------------------------------------

    def describe(self) -> str:
        if self.kind == "pmf":
            inner = ",".join(f"{k}={w:g}" for k, w in enumerate(self.weights) if w > 0)
            return f"pmf:{inner}"
        if self.kind == "dirac":
            return f"{self.kind}:{int(self.param)}"
        return f"{self.kind}:{self.param:g}"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()!r})"


class OffspringDistribution(_Law):
    """Law of the number of children away from the root."""


class DegreeDistribution(_Law):
    """Law of the root degree; construct via the factory classmethods."""

    __slots__ = ("_sb",)

    def __init__(self, kind, param=None, weights=None):
        super().__init__(kind, param, weights)
        self._sb = None

    @classmethod
    def poisson(cls, c: float) -> "DegreeDistribution":
        if not (c >= 0) or not math.isfinite(c):
            raise DomainError(f"poisson mean must be a finite nonnegative real, got {c}")
        return cls("poisson", float(c))

    @classmethod
    def dirac(cls, d: int) -> "DegreeDistribution":
        if d != int(d) or d < 0:
            raise DomainError(f"dirac degree must be a nonnegative integer, got {d}")
        return cls("dirac", int(d))

    @classmethod
    def geometric(cls, p: float) -> "DegreeDistribution":
        if not (0.0 < p < 1.0):
            raise DomainError(f"geometric success parameter must lie in (0, 1), got {p}")
        return cls("geometric", float(p))

    @classmethod
    def finite_pmf(cls, weights) -> "DegreeDistribution":
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0:
            raise InvalidPmf("weights must be a nonempty 1-d sequence")
        if np.any(w < 0):
            raise InvalidPmf("pmf weights must be nonnegative")
        s = float(w.sum())
        if abs(s - 1.0) > 1e-9:
            raise InvalidPmf(f"pmf weights sum to {s}, outside the 1e-9 tolerance")
        return cls("pmf", None, w / s)

    @classmethod
    def parse(cls, text: str) -> "DegreeDistribution":
        """Parse the CLI grammar, e.g. "poisson:2.0" or "pmf:0=0.5,1=0.5"."""
        if ":" not in text:
            raise ParseError(f"expected '<kind>:<params>', got {text!r}")
        kind, _, rest = text.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "poisson":
                return cls.poisson(float(rest))
            if kind == "dirac":
                return cls.dirac(int(rest))
            if kind == "geometric":
                return cls.geometric(float(rest))
            if kind == "pmf":
                entries = {}
                for tok in rest.split(","):
                    if "=" not in tok:
                        raise ParseError(f"bad pmf entry {tok!r}, expected '<k>=<weight>'")
                    kk, _, vv = tok.partition("=")
                    entries[int(kk)] = float(vv)
                w = np.zeros(max(entries) + 1)
                for kk, vv in entries.items():
                    if kk < 0:
                        raise ParseError(f"bad pmf entry {tok!r}: negative degree")
                    w[kk] = vv
                return cls.finite_pmf(w)
        except (ParseError, InvalidPmf, DomainError):
            raise
        except ValueError as exc:
            raise ParseError(f"bad parameter {rest!r} for kind {kind!r}: {exc}") from exc
        raise ParseError(f"unrecognised distribution kind {kind!r}")

    @property
    def degenerate(self) -> bool:
        """True when all mass sits on degrees 0 and 1."""
        return self.pmf(0) + self.pmf(1) >= 1.0 - 1e-12

    def size_biased(self) -> OffspringDistribution:
        if self._sb is not None:
            return self._sb
        m = self.mean()
        if m <= 0.0:
            raise ZeroMean(f"{self.describe()} has mean zero; size-biasing undefined")
        if self.kind == "poisson":
            sb = OffspringDistribution("poisson", self.param)
        elif self.kind == "dirac":
            sb = OffspringDistribution("dirac", int(self.param) - 1)
        elif self.kind == "geometric":
            sb = OffspringDistribution("nb2", self.param)
        else:
            w = self.weights
            hat = np.arange(1, len(w)) * w[1:] / m
            sb = OffspringDistribution("pmf", None, hat)
        self._sb = sb
        return sb


# Operation-style wrappers; thin aliases over the methods above.

def pmf(dist: _Law, k: int) -> float:
    return dist.pmf(k)


def phi(dist: _Law, z):
    return dist.phi(z)


def phi_prime(dist: _Law, z):
    return dist.phi_prime(z)


def size_biased(dist: DegreeDistribution) -> OffspringDistribution:
    return dist.size_biased()


def sample(dist: _Law, stream: RngStream, index: int = 0, draw: int = 0) -> int:
    return dist.sample(stream, index, draw)
