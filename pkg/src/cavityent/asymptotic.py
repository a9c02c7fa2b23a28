"""Ideal-limit bookkeeping for protocol states built from block products.

In the asymptotic regime (interaction angle large, alpha much larger)
every protocol state is a superposition of operator chains acting on
|alpha>, where each chain applies at most one u21/u22 block per distinct
interaction time.  The calculus below encodes the exact limiting rules:

  - blocks at different times commute and produce orthogonal branches;
  - each block multiplies the norm by 1/sqrt(2);
  - same-time products reduce:
        u22(t) u22(t) -> (1 + u22(2t)) / 2
        u21(t) u21(t) -> (-1 + u22(2t)) / 2
        u22(t) u21(t) = u21(t) u22(t) -> u21(2t) / 2
  - u11 acts as u22 and u12 as u21;
  - <alpha| annihilates every non-empty chain.

States carry a tuple of atomic qubit labels alongside the two field
chains, which is enough to walk any of the protocols symbolically and
read off ideal branch probabilities, for comparison against the full
numerical simulation.
"""
from __future__ import annotations

import math
from collections import defaultdict

# a chain is a sorted tuple of (time, block) with block in {"21", "22"};
# a state maps (atoms, chain_a, chain_b) -> complex coefficient, where
# atoms is a tuple of "e"/"g" letters for the live atomic qubits.

_REDUCE = {
    ("22", "22"): (0.5, 0.5),     # scalar part, u22(2t) part
    ("21", "21"): (-0.5, 0.5),
    ("22", "21"): (None, None),   # handled separately: u21(2t)/2
    ("21", "22"): (None, None),
}


def _insert(chain: tuple, block: str, time: float) -> list[tuple[complex, tuple]]:
    """Compose one block onto a chain, applying same-time reductions."""
    existing = {t: b for t, b in chain}
    if time not in existing:
        new = tuple(sorted(chain + ((time, block),)))
        return [(1.0, new)]
    other = existing[time]
    base = tuple(x for x in chain if x[0] != time)
    out = []
    if block == other:
        scalar = 0.5 if block == "22" else -0.5
        out.append((scalar, base))
        for c, ch in _insert(base, "22", 2 * time):
            out.append((0.5 * c, ch))
    else:
        for c, ch in _insert(base, "21", 2 * time):
            out.append((0.5 * c, ch))
    return out


class IdealState:
    """Unnormalized ideal protocol state over atoms and two field chains."""

    def __init__(self, terms=None):
        self.terms = defaultdict(complex)
        if terms:
            for k, v in terms.items():
                self.terms[k] += v

    @staticmethod
    def vacuum() -> "IdealState":
        return IdealState({((), (), ()): 1.0})

    def norm2(self) -> float:
        n = 0.0
        for (atoms, ca, cb), c in self.terms.items():
            n += abs(c) ** 2 * 2.0 ** (-(len(ca) + len(cb)))
        return n

    def add_atom(self, amp_e: complex, amp_g: complex) -> "IdealState":
        """Append a fresh atomic qubit amp_e|e> + amp_g|g>."""
        out = IdealState()
        for (atoms, ca, cb), c in self.terms.items():
            if amp_e != 0:
                out.terms[(atoms + ("e",), ca, cb)] += c * amp_e
            if amp_g != 0:
                out.terms[(atoms + ("g",), ca, cb)] += c * amp_g
        return out

    def add_pair(self, w_eg: complex, w_ge: complex) -> "IdealState":
        """Append an atomic pair w_eg|e,g> + w_ge|g,e>."""
        out = IdealState()
        for (atoms, ca, cb), c in self.terms.items():
            out.terms[(atoms + ("e", "g"), ca, cb)] += c * w_eg
            out.terms[(atoms + ("g", "e"), ca, cb)] += c * w_ge
        return out

    def pass_atom(self, index: int, field: str, time: float) -> "IdealState":
        """One JC passage of atom ``index`` through field 'A' or 'B'."""
        if field not in ("A", "B"):
            raise ValueError("field must be 'A' or 'B'")
        out = IdealState()
        for (atoms, ca, cb), c in self.terms.items():
            letter = atoms[index]
            # (final letter, block picked up by the field)
            moves = [("e", "22" if letter == "e" else "21"),
                     ("g", "21" if letter == "e" else "22")]
            for final, block in moves:
                chain = ca if field == "A" else cb
                for factor, new_chain in _insert(chain, block, time):
                    new_atoms = atoms[:index] + (final,) + atoms[index + 1:]
                    key = ((new_atoms, new_chain, cb) if field == "A"
                           else (new_atoms, ca, new_chain))
                    out.terms[key] += c * factor
        return out

    def project_atom(self, index: int, letter: str) -> tuple["IdealState", float]:
        """Condition atom ``index`` on |letter> and drop it; returns probability."""
        if letter not in ("e", "g"):
            raise ValueError("letter must be 'e' or 'g'")
        before = self.norm2()
        out = IdealState()
        for (atoms, ca, cb), c in self.terms.items():
            if atoms[index] == letter:
                out.terms[(atoms[:index] + atoms[index + 1:], ca, cb)] += c
        return out, out.norm2() / before

    def project_alpha(self, field: str) -> tuple["IdealState", float]:
        """Condition one field on |alpha>: only empty chains survive."""
        before = self.norm2()
        out = IdealState()
        for (atoms, ca, cb), c in self.terms.items():
            chain = ca if field == "A" else cb
            if chain == ():
                out.terms[(atoms, ca, cb)] += c
        return out, out.norm2() / before


def ideal_partial_teleport_probabilities(a: complex, b: complex, lam: float,
                                         gam: float) -> dict[str, float]:
    """Ideal displaced-vacuum probabilities along the e0 teleport branch.

    Walks the two-pair resource accumulation, Alice's passage and (e, |alpha>)
    post-selection, and Bob's excited-atom retrieval, all in the limiting
    calculus, and returns each |alpha>-conditioning probability.
    """
    lamp = math.sqrt(1 - lam**2)
    gamp = math.sqrt(1 - gam**2)
    st = IdealState.vacuum()
    for (w_eg, w_ge), theta in (((lam, lamp), 1.0), ((gam, gamp), 2.0)):
        st = st.add_pair(w_eg, w_ge)
        st = st.pass_atom(0, "A", theta)
        st = st.pass_atom(1, "B", theta)
        st, _ = st.project_atom(0, "g")
        st, _ = st.project_atom(0, "g")
    # Alice's input atom a|g> + b|e>
    st = st.add_atom(b, a)
    st = st.pass_atom(0, "A", 1.0)
    st, _ = st.project_atom(0, "e")
    st, p_alice_alpha = st.project_alpha("A")
    # Bob's fresh excited atom, passage t1, |alpha> conditioning
    st = st.add_atom(1.0, 0.0)
    st = st.pass_atom(0, "B", 1.0)
    st, p_bob_alpha = st.project_alpha("B")
    return {"alice_field_alpha": p_alice_alpha, "bob_field_alpha": p_bob_alpha}
