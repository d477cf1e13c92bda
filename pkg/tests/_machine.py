"""Independent enumerator for the BB84 protocol state space.

Walks the documented seven-phase round structure directly over abstract
tuples (phase, alice, channel photon, eve record, bob result, index, flag)
with a hand-written successor function. Shares no code with the language
front end or the explicit-state builder, so agreement on reachable-state
counts is a genuine crosscheck.
"""

from collections import deque

ZERO = (0, 0)


def _measurements(photon: tuple[int, int]) -> list[tuple[int, int]]:
    bas, bit = photon
    # matching basis keeps the bit; the other basis yields either bit
    return [(bas, bit), (1 - bas, 0), (1 - bas, 1)]


def reachable_states(
    photons: int,
    channel: tuple[float, float, float, float] = (1.0, 0.0, 0.0, 0.0),
    q: float = 1.0,
    bias: float = 0.5,
    passthrough: str = "channel",
) -> set[tuple]:
    flips = [(0, 0), (1, 0), (0, 1), (1, 1)]
    initial = (0, ZERO, ZERO, ZERO, ZERO, 0, 0)

    def successors(state: tuple) -> list[tuple]:
        phase, al, ch, eve, bob, i, flag = state
        if phase == 0:
            weights = ((0, 1.0 - bias), (1, bias))
            return [
                (1, (bas, bit), ch, eve, bob, i, flag)
                for bas in (0, 1)
                for bit, w in weights
                if w > 0.0
            ]
        if phase == 1:
            return [
                (2, al, (al[0] ^ fb, al[1] ^ fd), eve, bob, i, flag)
                for (fb, fd), w in zip(flips, channel)
                if w > 0.0
            ]
        if phase == 2:
            # the listener always measures; q only gates what gets resent
            return [(3, al, ch, rec, bob, i, flag) for rec in _measurements(ch)]
        if phase == 3:
            out = []
            if q > 0.0:
                out.append((4, al, eve, eve, bob, i, flag))
            if q < 1.0:
                fwd = ch if passthrough == "channel" else al
                out.append((4, al, fwd, eve, bob, i, flag))
            return out
        if phase == 4:
            return [(5, al, ch, eve, res, i, flag) for res in _measurements(ch)]
        if phase == 5:
            if bob[0] == al[0] and bob[1] != al[1]:
                return [(6, ZERO, ZERO, ZERO, ZERO, 0, 1)]
            if i < photons - 1:
                return [(0, ZERO, ZERO, ZERO, ZERO, i + 1, flag)]
            return [(6, ZERO, ZERO, ZERO, ZERO, 0, flag)]
        return []  # phase 6 is absorbing

    seen = {initial}
    frontier = deque([initial])
    while frontier:
        for nxt in successors(frontier.popleft()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def reachable_count(photons: int, **kwargs) -> int:
    return len(reachable_states(photons, **kwargs))
