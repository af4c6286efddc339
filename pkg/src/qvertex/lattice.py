"""The sl_n weight lattice, its pairing, and the twisted group algebra.

Weights are tuples of Fractions in the fundamental-weight basis
(Lbar_1, ..., Lbar_{n-1}).  Group-algebra elements are stored over the free
basis (alpha_2, ..., alpha_{n-1}, Lbar_{n-1}) in which every weight that
occurs in a Fock module has integer coordinates.
"""

from fractions import Fraction
from functools import lru_cache


class LatticeError(ValueError):
    pass


def _inverse(mat):
    """Exact inverse of a square Fraction matrix by Gauss-Jordan elimination."""
    m = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)]
         for i, row in enumerate(mat)]
    for col in range(m):
        piv = next(r for r in range(col, m) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[m:] for row in a]


class Lattice:
    """Weight lattice of sl_n with pairing and cocycle data."""

    def __init__(self, n):
        if n < 2:
            raise LatticeError("n must be at least 2")
        self.n = n
        r = n - 1
        self.rank = r
        self.cartan = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                        for j in range(r)] for i in range(r)]
        # (Lbar_i, Lbar_j) is the inverse Cartan matrix
        self.gram = [[Fraction(min(i, j) * (n - max(i, j)), n)
                      for j in range(1, n)] for i in range(1, n)]
        free = [self.alpha(i) for i in range(2, n)] + [self.lbar(n - 1)]
        self._free_rows = free
        self._to_free = _inverse([list(v) for v in free])
        # swap exponents C_ab between free generators, a, b = 0..r-1
        C = [[0] * r for _ in range(r)]
        for a in range(r):
            for b in range(r):
                C[a][b] = int(self.pairing(free[a], free[b])) % 2 if a < r - 1 and b < r - 1 else 0
        last = r - 1
        for a in range(r - 1):
            # alpha_{a+2} against Lbar_{n-1}
            C[a][last] = C[last][a] = 1 if a + 2 == n - 1 else 0
        self.swap = C

    # weights -----------------------------------------------------------

    def zero(self):
        return (Fraction(0),) * self.rank

    def lbar(self, i):
        """Lbar_i, with Lbar_0 = Lbar_n = 0."""
        i %= self.n
        return tuple(Fraction(int(j == i)) for j in range(1, self.n))

    def alpha(self, i):
        if not 1 <= i <= self.rank:
            raise LatticeError(f"alpha_{i} out of range for n={self.n}")
        return tuple(Fraction(x) for x in self.cartan[i - 1])

    def pairing(self, u, v):
        g = self.gram
        s = Fraction(0)
        for i, ui in enumerate(u):
            if ui:
                row = g[i]
                for j, vj in enumerate(v):
                    if vj:
                        s += ui * row[j] * vj
        return s

    def covector(self, u):
        """Row vector w with pairing(u, from_free(m)) = w . m."""
        return tuple(self.pairing(u, f) for f in self._free_rows)

    # free basis --------------------------------------------------------

    def to_free_basis(self, beta):
        m = []
        for col in range(self.rank):
            x = sum(beta[i] * self._to_free[i][col] for i in range(self.rank))
            if Fraction(x).denominator != 1:
                raise LatticeError(f"{beta} is not in the span of the free basis")
            m.append(int(x))
        return tuple(m)

    def from_free_basis(self, m):
        out = [Fraction(0)] * self.rank
        for c, row in zip(m, self._free_rows):
            if c:
                for i in range(self.rank):
                    out[i] += c * row[i]
        return tuple(out)

    def sector(self, m):
        """The i with from_free_basis(m) in Qbar + Lbar_i."""
        return (-m[-1]) % self.n

    def cocycle(self, u, v):
        """Exponent B(u, v) mod 2: e^u e^v = (-1)^B e^{u+v} in normal form."""
        C = self.swap
        s = 0
        for a in range(1, self.rank):
            ua = u[a]
            if ua:
                row = C[a]
                for b in range(a):
                    if v[b] and row[b]:
                        s += ua * v[b]
        return s & 1

    def word_sign(self, word):
        """Sign of bubble-sorting a word of generator indices into normal order.

        Independent of ``cocycle``; used to cross-check it.
        """
        w = list(word)
        s = 0
        changed = True
        while changed:
            changed = False
            for t in range(len(w) - 1):
                if w[t] > w[t + 1]:
                    s += self.swap[w[t]][w[t + 1]]
                    w[t], w[t + 1] = w[t + 1], w[t]
                    changed = True
        return -1 if s % 2 else 1


@lru_cache(maxsize=None)
def get_lattice(n):
    return Lattice(n)


def pairing(beta, gamma, n):
    return get_lattice(n).pairing(beta, gamma)


def to_free_basis(beta, n):
    return get_lattice(n).to_free_basis(beta)


class LatticeElt:
    """The signed normal-form monomial +-e^{m_2 alpha_2} ... e^{m_n Lbar_{n-1}}."""

    __slots__ = ("n", "exps", "sign")

    def __init__(self, n, exps, sign=1):
        self.n = n
        self.exps = tuple(int(x) for x in exps)
        self.sign = sign

    @classmethod
    def of_weight(cls, n, beta):
        return cls(n, get_lattice(n).to_free_basis(beta))

    @classmethod
    def identity(cls, n):
        return cls(n, (0,) * (n - 1))

    def weight(self):
        return get_lattice(self.n).from_free_basis(self.exps)

    def __mul__(self, other):
        lat = get_lattice(self.n)
        s = self.sign * other.sign
        if lat.cocycle(self.exps, other.exps):
            s = -s
        return LatticeElt(self.n, tuple(a + b for a, b in zip(self.exps, other.exps)), s)

    def __eq__(self, other):
        return (isinstance(other, LatticeElt) and self.n == other.n
                and self.exps == other.exps and self.sign == other.sign)

    def __hash__(self):
        return hash((self.n, self.exps, self.sign))

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + "[" + ",".join(map(str, self.exps)) + "]"

    __repr__ = __str__


def mul_lattice(a, b):
    return a * b
