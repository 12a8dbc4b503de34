"""RNG layer: reference vectors, dice ranges, tape and override sources."""

import pytest

from airace.rng import (
    GameRng,
    OverridableDice,
    RngDice,
    TapeDice,
    splitmix64,
    splitmix64_next,
)

# Published splitmix64 outputs for seed 0.
SPLITMIX64_SEED0 = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

# Frozen first-run d6 sequence for seed 42 (regression pin).
SEED42_D6 = [1, 1, 6, 6, 5, 1, 5, 4, 5, 6, 2, 2]


def test_splitmix64_reference_vectors():
    state = 0
    outs = []
    for _ in range(3):
        state, out = splitmix64_next(state)
        outs.append(out)
    assert outs == SPLITMIX64_SEED0


def test_splitmix64_single():
    assert splitmix64(0) == SPLITMIX64_SEED0[0]


def test_seed_expansion_deterministic():
    assert GameRng.from_seed(42).s == GameRng.from_seed(42).s
    assert GameRng.from_seed(1).s != GameRng.from_seed(2).s


def test_d6_range():
    dice = RngDice(GameRng.from_seed(7))
    for _ in range(1000):
        assert 1 <= dice.roll_d6() <= 6


def test_2d6_is_two_sequential_draws():
    a = RngDice(GameRng.from_seed(5))
    b = RngDice(GameRng.from_seed(5))
    total = a.roll_2d6()
    assert total == b.roll_d6() + b.roll_d6()
    assert a.tape == b.tape


def test_seed42_golden_sequence():
    dice = RngDice(GameRng.from_seed(42))
    assert [dice.roll_d6() for _ in range(12)] == SEED42_D6


def test_d6_empirical_uniformity():
    # each face within +/-0.01 of 1/6 over 1e5 draws
    dice = RngDice(GameRng.from_seed(123))
    counts = [0] * 6
    n = 100_000
    for _ in range(n):
        counts[dice.roll_d6() - 1] += 1
    for c in counts:
        assert abs(c / n - 1 / 6) < 0.01


def test_rng_state_roundtrip():
    rng = GameRng.from_seed(99)
    rng.next_u64()
    restored = GameRng.from_dict(rng.to_dict())
    assert restored.next_u64() == rng.next_u64()


def test_rng_from_dict_rejects_unknown_algo():
    with pytest.raises(ValueError):
        GameRng.from_dict({"algo": "mt19937", "s": [1, 2, 3, 4]})


def test_tape_dice_replays_and_exhausts():
    tape = TapeDice([3, 4, 5])
    assert tape.roll_2d6() == 7
    assert tape.roll_d6() == 5
    assert tape.exhausted
    with pytest.raises(IndexError):
        tape.roll_d6()


def test_override_substitutes_and_still_advances_rng():
    plain = RngDice(GameRng.from_seed(11))
    wrapped = OverridableDice(RngDice(GameRng.from_seed(11)))
    wrapped.queue_2d6(12)
    assert wrapped.roll_2d6() == 12
    plain.roll_2d6()  # the underlying draws are burned either way
    assert wrapped.result_rng().s == plain.result_rng().s
    # subsequent rolls identical: the override did not desync the stream
    assert wrapped.roll_d6() == plain.roll_d6()


def test_override_rewrites_tape_for_replay():
    wrapped = OverridableDice(RngDice(GameRng.from_seed(11)))
    wrapped.queue_2d6(12)
    total = wrapped.roll_2d6()
    assert total == 12
    assert sum(wrapped.tape[-2:]) == 12
    replayed = TapeDice(list(wrapped.tape))
    assert replayed.roll_2d6() == 12
