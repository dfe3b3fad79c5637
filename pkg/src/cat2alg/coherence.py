"""Evaluation of constraint composites in a skeletal 2-group.

A *term* is a formal tensor word describing an object:

    ('v', name, g)   a letter called ``name`` with value ``g`` in pi0
    ('I',)           the unit object
    ('s', t)         the chosen inverse sigma(t)
    ('t', a, b)      the tensor product a (x) b

Letters are compared by name, never by value, so a composite built here is
always the image of a formal diagram.  A :class:`Path` starts at a term and
applies primitive constraints at positions inside it; every step contributes
a pi1 label, transported to the root through the tensor action and through
sigma.  Only three kinds of primitive are used (associator, unit, and the
evaluation ``e``: sigma(t) t -> I); everything else, including the
coevaluation ``i``, is a macro assembled from these.
"""

from __future__ import annotations


I = ("I",)


def letter(name: str, g: int):
    return ("v", name, g)


def sig(t):
    return ("s", t)


def ten(a, b):
    return ("t", a, b)


def word(*factors):
    """Left-normal product ((f1 f2) f3) ... of the given terms."""
    out = factors[0]
    for f in factors[1:]:
        out = ten(out, f)
    return out


def subterm(t, pos):
    for p in pos:
        t = t[1 + p]
    return t


def replace(t, pos, new):
    if not pos:
        return new
    p = pos[0]
    if t[0] == "t":
        return ten(replace(t[1], pos[1:], new), t[2]) if p == 0 \
            else ten(t[1], replace(t[2], pos[1:], new))
    if t[0] == "s" and p == 0:
        return sig(replace(t[1], pos[1:], new))
    raise ValueError(f"invalid position {pos} in {t}")


def show(t) -> str:
    kind = t[0]
    if kind == "v":
        return t[1]
    if kind == "I":
        return "I"
    if kind == "s":
        return f"s({show(t[1])})"
    return f"({show(t[1])}{show(t[2])})"


class CoherenceError(AssertionError):
    """Two composites that coherence forces to agree did not."""


class Path:
    """A composite of constraints, tracked by its running pi1 label."""

    def __init__(self, G, term):
        self.G = G
        self.start = term
        self.term = term
        self.steps = []
        self.label = getattr(G, "zero", 0)

    # -- evaluation helpers -------------------------------------------------
    def val(self, t) -> int:
        return self.G._term_value(t)

    def _transport(self, pos, u: int) -> int:
        """Move a label living on ``subterm(term, pos)`` up to the root."""
        G = self.G
        chain = []
        t = self.term
        for p in pos:
            chain.append((t, p))
            t = t[1 + p]
        for parent, p in reversed(chain):
            if parent[0] == "t":
                if p == 1:
                    u = G.act_idx(self.val(parent[1]), u)
            else:
                g = self.val(parent[1])
                u = G.neg_idx(G.act_idx(G.inv0(g), u))
        return u

    # -- primitives ---------------------------------------------------------
    def apply(self, name: str, pos=(), arg=None) -> "Path":
        pos = tuple(pos)
        s = subterm(self.term, pos)
        G = self.G
        Z = getattr(G, "zero", 0)
        if name == "assoc":
            if not (s[0] == "t" and s[1][0] == "t"):
                raise ValueError(f"assoc needs (ab)c, got {show(s)}")
            a, b, c = s[1][1], s[1][2], s[2]
            new = ten(a, ten(b, c))
            u = G.alpha_idx(self.val(a), self.val(b), self.val(c))
        elif name == "assoc_inv":
            if not (s[0] == "t" and s[2][0] == "t"):
                raise ValueError(f"assoc_inv needs a(bc), got {show(s)}")
            a, b, c = s[1], s[2][1], s[2][2]
            new = ten(ten(a, b), c)
            u = G.neg_idx(G.alpha_idx(self.val(a), self.val(b), self.val(c)))
        elif name == "lunit":
            if not (s[0] == "t" and s[1] == I):
                raise ValueError(f"lunit needs I a, got {show(s)}")
            new, u = s[2], Z
        elif name == "lunit_inv":
            new, u = ten(I, s), Z
        elif name == "runit":
            if not (s[0] == "t" and s[2] == I):
                raise ValueError(f"runit needs a I, got {show(s)}")
            new, u = s[1], Z
        elif name == "runit_inv":
            new, u = ten(s, I), Z
        elif name == "ev":
            if not (s[0] == "t" and s[1] == sig(s[2])):
                raise ValueError(f"ev needs s(a) a, got {show(s)}")
            new, u = I, Z
        elif name == "ev_inv":
            if s != I or arg is None:
                raise ValueError("ev_inv needs I and an argument term")
            new, u = ten(sig(arg), arg), Z
        else:
            raise ValueError(f"unknown constraint {name!r}")
        self.label = G.add_idx(self.label, self._transport(pos, u))
        self.steps.append((name, pos, arg, s))
        self.term = replace(self.term, pos, new)
        return self

    def splice(self, other: "Path", pos=()) -> "Path":
        """Run the steps of ``other`` on the subterm at ``pos``."""
        pos = tuple(pos)
        if subterm(self.term, pos) != other.start:
            raise ValueError("spliced path does not start at the subterm")
        for name, p, arg, _ in other.steps:
            self.apply(name, pos + p, arg)
        return self

    def inverse(self) -> "Path":
        inv = {"assoc": "assoc_inv", "assoc_inv": "assoc",
               "lunit": "lunit_inv", "lunit_inv": "lunit",
               "runit": "runit_inv", "runit_inv": "runit",
               "ev": "ev_inv", "ev_inv": "ev"}
        out = Path(self.G, self.term)
        for name, pos, arg, before in reversed(self.steps):
            out.apply(inv[name], pos, before[2] if name == "ev" else None)
        return out

    def then(self, other: "Path") -> "Path":
        return self.splice(other, ())

    # -- macros -------------------------------------------------------------
    def dbl(self, pos=()) -> "Path":
        """t -> I t -> (ss(t) s(t)) t -> ss(t) (s(t) t) -> ss(t) I -> ss(t)."""
        pos = tuple(pos)
        t = subterm(self.term, pos)
        self.apply("lunit_inv", pos)
        self.apply("ev_inv", pos + (0,), sig(t))
        self.apply("assoc", pos)
        self.apply("ev", pos + (1,))
        self.apply("runit", pos)
        return self

    def coev(self, pos=()) -> "Path":
        """t s(t) -> ss(t) s(t) -> I, the constraint i_t."""
        pos = tuple(pos)
        self.dbl(pos + (0,))
        self.apply("ev", pos)
        return self

    def coev_inv(self, pos, t) -> "Path":
        return self.splice(Path(self.G, ten(t, sig(t))).coev().inverse(), pos)

    def sigma_unit(self, pos=()) -> "Path":
        """s(I) -> s(I) I -> I."""
        pos = tuple(pos)
        self.apply("runit_inv", pos)
        self.apply("ev", pos)
        return self

    def sigma_tensor(self, pos=()) -> "Path":
        """s(ab) -> s(b) s(a), the inverse of the composite built below.

        s(b)s(a) -> I(s(b)s(a)) -> (s(ab)(ab))(s(b)s(a)) -> s(ab)((ab)(s(b)s(a)))
        -> s(ab)(a(b(s(b)s(a)))) -> s(ab)(a((b s(b))s(a))) -> s(ab)(a(I s(a)))
        -> s(ab)(a s(a)) -> s(ab) I -> s(ab)
        """
        pos = tuple(pos)
        t = subterm(self.term, pos)
        if not (t[0] == "s" and t[1][0] == "t"):
            raise ValueError(f"sigma_tensor needs s(ab), got {show(t)}")
        a, b = t[1][1], t[1][2]
        p = Path(self.G, ten(sig(b), sig(a)))
        p.apply("lunit_inv")
        p.apply("ev_inv", (0,), ten(a, b))
        p.apply("assoc")
        p.apply("assoc", (1,))
        p.apply("assoc_inv", (1, 1))
        p.coev((1, 1, 0))
        p.apply("lunit", (1, 1))
        p.coev((1,))
        p.apply("runit")
        return self.splice(p.inverse(), pos)


# ---------------------------------------------------------------------------
# free-group normalization of words

def _letter_power(t):
    """Return (name, k) when t is s^k(letter), else None."""
    k = 0
    while t[0] == "s":
        t = t[1]
        k += 1
    if t[0] == "v":
        return t[1], k
    return None


def _find(t, pred, pos=(), innermost=False):
    """Preorder (or postorder with ``innermost``) search for a position."""
    if not innermost and pred(t):
        return pos
    if t[0] == "t":
        for i in (0, 1):
            r = _find(t[1 + i], pred, pos + (i,), innermost)
            if r is not None:
                return r
    elif t[0] == "s":
        r = _find(t[1], pred, pos + (0,), innermost)
        if r is not None:
            return r
    if innermost and pred(t):
        return pos
    return None


def push_sigma(path: Path, innermost: bool) -> None:
    """Distribute every sigma down to letters, removing s(I)."""
    def pred(t):
        return t[0] == "s" and t[1][0] in ("t", "I")
    while True:
        pos = _find(path.term, pred, innermost=innermost)
        if pos is None:
            return
        if subterm(path.term, pos)[1] == I:
            path.sigma_unit(pos)
        else:
            path.sigma_tensor(pos)


def strip_units(path: Path) -> None:
    while True:
        pos = _find(path.term, lambda t: t[0] == "t" and (t[1] == I or t[2] == I))
        if pos is None:
            return
        t = subterm(path.term, pos)
        path.apply("lunit" if t[1] == I else "runit", pos)


def normalize(path: Path, left: bool) -> None:
    """Reassociate to left-normal ((ab)c)d or right-normal a(b(cd))."""
    strip_units(path)
    if left:
        pred = lambda t: t[0] == "t" and t[2][0] == "t"
        step = "assoc_inv"
    else:
        pred = lambda t: t[0] == "t" and t[1][0] == "t"
        step = "assoc"
    while True:
        pos = _find(path.term, pred)
        if pos is None:
            return
        path.apply(step, pos)


def flat(t) -> list:
    if t[0] == "t":
        return flat(t[1]) + flat(t[2])
    if t == I:
        return []
    return [t]


def _letter_pos(n: int, i: int, left: bool):
    """Position of letter i in a normal-form word of n letters."""
    if left:
        if n == 1:
            return ()
        return (0,) * (n - 1 - i) + ((1,) if i > 0 else ())
    if n == 1:
        return ()
    return (1,) * i + ((0,) if i < n - 1 else ())


def cancel_pair(path: Path, i: int, left: bool) -> None:
    """Cancel letters i, i+1 of a normal-form word that are mutually inverse."""
    letters = flat(path.term)
    n = len(letters)
    (na, ka), (nb, kb) = _letter_power(letters[i]), _letter_power(letters[i + 1])
    assert na == nb and (ka - kb) % 2
    # raise the smaller power with the e-isomorphism until they differ by one
    while abs(ka - kb) > 1:
        j = i if ka < kb else i + 1
        path.dbl(_letter_pos(n, j, left))
        if j == i:
            ka += 2
        else:
            kb += 2
    if left:
        if i == 0:
            base = (0,) * (n - 2)
        else:
            base = (0,) * (n - 2 - i)
            path.apply("assoc", base)
            base = base + (1,)
        kill = "ev" if ka == kb + 1 else "coev"
        if kill == "ev":
            path.apply("ev", base)
        else:
            path.coev(base)
        strip_units(path)
    else:
        if i == n - 2:
            base = (1,) * i
        else:
            base = (1,) * i
            path.apply("assoc_inv", base)
            base = base + (0,)
        if ka == kb + 1:
            path.apply("ev", base)
        else:
            path.coev(base)
        strip_units(path)


def _pairs(letters):
    out = []
    for i in range(len(letters) - 1):
        a, b = _letter_power(letters[i]), _letter_power(letters[i + 1])
        if a[0] == b[0] and (a[1] - b[1]) % 2:
            out.append(i)
    return out


def reduce_to_unit(G, term, strategy: str = "left-first") -> Path:
    """Canonical isomorphism from a word that is trivial in the free group to I.

    ``strategy`` selects an independent route: which normal form is used and
    which cancellable pair is removed first.
    """
    left = strategy in ("left-first", "left-last")
    innermost = strategy == "left-last"
    p = Path(G, term)
    push_sigma(p, innermost)
    normalize(p, left)
    while p.term != I:
        letters = flat(p.term)
        pairs = _pairs(letters)
        if not pairs:
            raise ValueError(f"word {show(p.term)} does not reduce to the unit")
        i = pairs[-1] if strategy == "left-last" else pairs[0]
        cancel_pair(p, i, left)
        if p.term != I:
            normalize(p, left)
    return p


STRATEGIES = ("left-first", "left-last", "right-first")


# ---------------------------------------------------------------------------
# formal evaluation: compile a composite once, evaluate it on many groups

def _reduce_word(w):
    out = []
    for a in w:
        if out and out[-1][0] == a[0] and out[-1][1] == -a[1]:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def _inv_word(w):
    return tuple((n, -e) for n, e in reversed(w))


class FormalGroup:
    """Stand-in for a skeletal 2-group whose values are free-group words.

    Labels become formal sums of terms ``(sign, g, a, b, c)`` meaning
    ``sign * g.alpha(a, b, c)``; running a :class:`Path` over this object
    records the composite as such a sum.
    """

    zero = ()

    def _term_value(self, t):
        kind = t[0]
        if kind == "v":
            return ((t[1], 1),)
        if kind == "I":
            return ()
        if kind == "s":
            return _inv_word(self._term_value(t[1]))
        return _reduce_word(self._term_value(t[1]) + self._term_value(t[2]))

    def inv0(self, g):
        return _inv_word(g)

    def alpha_idx(self, a, b, c):
        if not a or not b or not c:
            return ()
        return ((1, (), a, b, c),)

    def neg_idx(self, u):
        return tuple((-s, g, a, b, c) for s, g, a, b, c in u)

    def act_idx(self, h, u):
        return tuple((s, _reduce_word(h + g), a, b, c) for s, g, a, b, c in u)

    def add_idx(self, u, v):
        return u + v


class Formula:
    """A compiled label: evaluate with ``evaluate(G, {name: values})``."""

    def __init__(self, terms):
        self.terms = tuple(terms)

    def __neg__(self):
        return Formula(FormalGroup().neg_idx(self.terms))

    def __add__(self, other):
        return Formula(self.terms + other.terms)

    def evaluate(self, G, values: dict):
        """``values`` maps letter names to ints or broadcastable int arrays."""
        import numpy as np
        T, inv = G.pi0.table, G.pi0.inv
        cache = {(): 0}

        def word(w):
            if w not in cache:
                acc = word(w[:-1])
                n, e = w[-1]
                v = np.asarray(values[n])
                cache[w] = T[acc, v if e > 0 else inv[v]]
            return cache[w]

        total = 0
        for s, g, a, b, c in self.terms:
            u = G.alpha[word(a), word(b), word(c)]
            u = G.action[word(g), u]
            if s < 0:
                u = G.neg_table[u]
            total = G.add_table[total, u]
        return total


def term_value_grid(G, term, values: dict):
    """Value of a term in pi0 with letters bound to (arrays of) elements."""
    import numpy as np
    kind = term[0]
    if kind == "v":
        return np.asarray(values[term[1]])
    if kind == "I":
        return np.asarray(0)
    if kind == "s":
        return G.pi0.inv[term_value_grid(G, term[1], values)]
    return G.pi0.table[term_value_grid(G, term[1], values), term_value_grid(G, term[2], values)]


def compile_path(path: Path) -> Formula:
    if not isinstance(path.G, FormalGroup):
        raise TypeError("compile_path needs a path built over FormalGroup")
    return Formula(path.label)
