"""State space of the three-player ring game.

Two of three players fight each round; the loser swaps out for the
bystander, and the game ends once all six ordered "a beats b" relations
have been seen at least once.

Conventions:
  - Players are 1, 2, 3.
  - The six relation bits are stored as a bitmask. Bit index k (0-based)
    corresponds to position k+1 in the fixed listing

        1: 1 beats 2    2: 2 beats 1    3: 1 beats 3
        4: 3 beats 1    5: 2 beats 3    6: 3 beats 2

    and to character k of the text form.
  - Text form is ``BBBBBB|i,j``: six bits in listing order, then the
    ring pair. ``render_state`` always emits the ring sorted.
  - The ring is kept as a sorted 2-tuple; states are immutable values
    with structural equality.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import permutations

PLAYERS = (1, 2, 3)

#: Ordered pairs (winner, loser) in bit-index order.
RELATION_PAIRS = ((1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2))

#: (winner, loser) -> 0-based bit index.
RELATION_INDEX = {pair: k for k, pair in enumerate(RELATION_PAIRS)}

RINGS = ((1, 2), (1, 3), (2, 3))

FULL_MASK = 0b111111

_STATE_RE = re.compile(r"^([01]{6})\|([1-3]),([1-3])$")


class StateParseError(ValueError):
    """Raised when a state text is malformed or violates an invariant."""


@dataclass(frozen=True, slots=True)
class GameState:
    """One game situation: which relations have occurred, who is in the ring.

    ``bits`` holds the six relation indicators as a mask (bit k set means
    relation k+1 of the listing has occurred); ``ring`` is the sorted pair
    of players currently in the ring.
    """

    bits: int
    ring: tuple[int, int]

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= FULL_MASK:
            raise ValueError(f"bits mask out of range: {self.bits}")
        if self.ring not in RINGS:
            raise ValueError(f"ring must be a sorted pair of distinct players: {self.ring}")

    def bit(self, index: int) -> bool:
        """Value of relation bit ``index`` (1-based, per the listing)."""
        return bool(self.bits >> (index - 1) & 1)

    @property
    def relations(self) -> tuple[bool, ...]:
        """The six relation indicators in listing order."""
        return tuple(bool(self.bits >> k & 1) for k in range(6))

    @property
    def bystander(self) -> int:
        """The player currently outside the ring."""
        return 6 - self.ring[0] - self.ring[1]

    def __str__(self) -> str:
        return render_state(self)


def make_state(bits: int, a: int, b: int) -> GameState:
    """Build a state from a bitmask and an unordered ring pair."""
    if a == b:
        raise StateParseError(f"ring members must be distinct, got {a},{b}")
    if a not in PLAYERS or b not in PLAYERS:
        raise StateParseError(f"ring members must be players 1..3, got {a},{b}")
    return GameState(bits, (a, b) if a < b else (b, a))


def parse_state(text: str) -> GameState:
    """Parse ``BBBBBB|i,j`` into a GameState.

    Accepts the ring pair in either order; rejects equal members,
    out-of-range players and anything not matching the format.
    """
    m = _STATE_RE.match(text)
    if m is None:
        raise StateParseError(
            f"malformed state {text!r}: expected six bits then |i,j, e.g. 000000|1,2"
        )
    bits_text, a, b = m.group(1), int(m.group(2)), int(m.group(3))
    if a == b:
        raise StateParseError(f"ring members must be distinct in {text!r}")
    mask = 0
    for k, ch in enumerate(bits_text):
        if ch == "1":
            mask |= 1 << k
    return make_state(mask, a, b)


def render_state(s: GameState) -> str:
    """Text form of a state; exact inverse of parse_state on sorted input."""
    bits_text = "".join("1" if s.bits >> k & 1 else "0" for k in range(6))
    return f"{bits_text}|{s.ring[0]},{s.ring[1]}"


ROOT = parse_state("000000|1,2")


# ---------------------------------------------------------------------------
# Rounds
# ---------------------------------------------------------------------------

def order(s: GameState) -> int:
    """Number of relations not yet observed (zero bits)."""
    return 6 - bin(s.bits).count("1")


def is_terminal(s: GameState) -> bool:
    """True once every relation has been observed."""
    return s.bits == FULL_MASK


def transition(s: GameState, winner: int) -> GameState:
    """One round: ``winner`` beats the other ring member, who swaps out.

    Sets the winner-beats-loser bit and moves the bystander into the ring.
    """
    if is_terminal(s):
        raise ValueError(f"no transition from terminal state {render_state(s)}")
    if winner not in s.ring:
        raise ValueError(f"winner {winner} not in ring {s.ring}")
    loser = s.ring[0] if s.ring[1] == winner else s.ring[1]
    mask = s.bits | 1 << RELATION_INDEX[(winner, loser)]
    return make_state(mask, winner, s.bystander)


def successors(s: GameState) -> tuple[GameState, GameState]:
    """The two outcomes of the next round, lower-indexed winner first."""
    return transition(s, s.ring[0]), transition(s, s.ring[1])


# ---------------------------------------------------------------------------
# Player permutations and the induced action on relation bits
# ---------------------------------------------------------------------------

def induced_bit_perm(player_map: tuple[int, int, int]) -> tuple[int, ...]:
    """Bit permutation induced by relabelling players.

    ``player_map[i-1]`` is the new name of player i. Returns a 6-tuple
    whose entry k-1 is the 1-based image of bit k: the bit for
    "a beats b" maps to the bit for "map(a) beats map(b)".
    """
    if sorted(player_map) != [1, 2, 3]:
        raise ValueError(f"not a bijection on players: {player_map}")
    image = [0] * 6
    for k, (a, b) in enumerate(RELATION_PAIRS):
        image[k] = RELATION_INDEX[(player_map[a - 1], player_map[b - 1])] + 1
    return tuple(image)


@dataclass(frozen=True, slots=True)
class PlayerPerm:
    """A relabelling of the players together with its action on relation bits.

    ``player_map[i-1]`` is the image of player i; ``bit_map[k-1]`` is the
    1-based image of relation bit k and is always the permutation induced
    by ``player_map``.
    """

    player_map: tuple[int, int, int]
    bit_map: tuple[int, ...]

    @classmethod
    def from_players(cls, player_map: tuple[int, int, int]) -> "PlayerPerm":
        return cls(tuple(player_map), induced_bit_perm(tuple(player_map)))

    @classmethod
    def identity(cls) -> "PlayerPerm":
        return cls.from_players((1, 2, 3))

    def __call__(self, player: int) -> int:
        return self.player_map[player - 1]

    def compose(self, other: "PlayerPerm") -> "PlayerPerm":
        """The permutation "self after other"."""
        return PlayerPerm.from_players(
            tuple(self.player_map[other.player_map[i] - 1] for i in range(3))
        )

    def inverse(self) -> "PlayerPerm":
        inv = [0, 0, 0]
        for i, img in enumerate(self.player_map):
            inv[img - 1] = i + 1
        return PlayerPerm.from_players(tuple(inv))


#: All six relabellings, in lexicographic order of player_map; identity first.
ALL_PERMS = tuple(PlayerPerm.from_players(p) for p in permutations(PLAYERS))


def apply_perm(p: PlayerPerm, s: GameState) -> GameState:
    """Relabel a state: bit k moves to bit_map[k], the ring maps elementwise."""
    mask = 0
    bits = s.bits
    while bits:
        k = (bits & -bits).bit_length() - 1
        mask |= 1 << (p.bit_map[k] - 1)
        bits &= bits - 1
    return make_state(mask, p(s.ring[0]), p(s.ring[1]))


def _sort_key(s: GameState) -> tuple[str, tuple[int, int]]:
    # bits as the b1..b6 string, then the sorted ring pair
    return (render_state(s)[:6], s.ring)


def canonicalize(s: GameState) -> tuple[GameState, PlayerPerm]:
    """Orbit-minimal representative of ``s`` under player relabelling.

    Minimal by (bit string, sorted ring) compared lexicographically, over
    all six relabellings. Also returns one witness permutation ``p`` with
    ``apply_perm(p, s)`` equal to the representative.
    """
    best: GameState | None = None
    witness = ALL_PERMS[0]
    for p in ALL_PERMS:
        image = apply_perm(p, s)
        if best is None or _sort_key(image) < _sort_key(best):
            best, witness = image, p
    assert best is not None
    return best, witness


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_states() -> list[GameState]:
    """All 64 x 3 = 192 states, in (bits, ring) order."""
    return [GameState(mask, ring) for mask in range(64) for ring in RINGS]


def enumerate_reachable(root: GameState) -> set[GameState]:
    """Closure of ``root`` under transitions (breadth-first), including root."""
    seen = {root}
    queue = deque([root])
    while queue:
        s = queue.popleft()
        if is_terminal(s):
            continue
        for nxt in successors(s):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def symmetry_classes(states) -> dict[GameState, list[GameState]]:
    """Partition ``states`` into orbits, keyed by canonical representative."""
    classes: dict[GameState, list[GameState]] = {}
    for s in states:
        rep, _ = canonicalize(s)
        classes.setdefault(rep, []).append(s)
    return classes


def class_census(states) -> dict[int, int]:
    """Number of symmetry classes among ``states``, grouped by order."""
    census: dict[int, int] = {}
    for rep in symmetry_classes(states):
        census[order(rep)] = census.get(order(rep), 0) + 1
    return dict(sorted(census.items()))
