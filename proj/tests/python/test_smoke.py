import hashlib
import itertools
import json
import os

import pytest

import porstore

SALT = hashlib.sha256(b"salt").digest()
SEED = hashlib.sha256(b"seed").digest()


def blocks(n, size=64):
    return [os.urandom(size) for _ in range(n)]


def test_hash_matches_hashlib():
    for data in (b"", b"abc", os.urandom(1000)):
        assert porstore.hash_bytes(data) == hashlib.sha256(data).digest()


def test_merkle_round_trip_and_tamper():
    data = blocks(11)
    tree = porstore.MerkleTree(data)
    assert tree.leaf_count == 11
    for i, b in enumerate(data):
        path = tree.prove(i)
        assert porstore.verify_leaf(tree.root, i, b, path)
        assert not porstore.verify_leaf(tree.root, i, b + b"\x00", path)
    assert [s for _, s in tree.prove(5).siblings][:1] == [porstore.Side.LEFT]


def test_erasure_any_k_shards():
    data = blocks(3, 100)
    shards = porstore.encode(data, 3, 5)
    for subset in itertools.combinations(range(5), 3):
        assert porstore.decode({i: shards[i] for i in subset}, 3, 5, 100) == data
    with pytest.raises(porstore.PorstoreError) as err:
        porstore.decode({0: shards[0], 4: shards[4]}, 3, 5, 100)
    assert err.value.code == "InsufficientShards"


def test_audit_detects_missing_blocks():
    data = blocks(64)
    assert porstore.audit(data, [True] * 64, SEED, 0, 10)
    challenged = porstore.sampling_challenge(SEED, 0, 64, 10)
    present = [i not in challenged for i in range(64)]
    assert not porstore.audit(data, present, SEED, 0, 10)


def test_seal_and_post():
    data = blocks(32)
    sealed, root = porstore.seal(data, b"node-a", SALT, 50)
    assert all(s != d for s, d in zip(sealed, data))
    ks = porstore.keystream(b"node-a", SALT, 3, 50, 64)
    assert bytes(a ^ b for a, b in zip(sealed[3], ks)) == data[3]
    accepted, reason, cost, transcript = porstore.post_roundtrip(data, b"node-a", SALT, 50, 7, 12, 20)
    assert accepted and reason == "none"
    assert len(json.loads(transcript)["proofs"]) == 12
    assert cost > 0


def test_secret_sharing():
    secret = os.urandom(300)
    shares = porstore.split_secret(secret, 3, 5, SEED)
    for subset in itertools.combinations(shares, 3):
        assert porstore.reconstruct(list(subset), 3, 5, len(secret)) == secret
    p = (1 << 61) - 1
    assert porstore.reconstruction_coefficients([1, 2, 3]) == [3, p - 3, 1]
    with pytest.raises(porstore.PorstoreError):
        porstore.reconstruct(shares[:2], 3, 5, len(secret))


def test_experiment_is_deterministic():
    config = {
        "protocol": "pos",
        "k": 128,
        "k_prime": [5, 10],
        "block_size": 16,
        "behaviors": [{"type": "honest"}, {"type": "dropper", "drop_fraction": 0.5}],
        "trials": 200,
        "rng_seed_hex": SEED.hex(),
    }
    a = porstore.run_experiment(config)
    assert a == porstore.run_experiment(json.dumps(config))
    honest = [r for r in a["rows"] if r["behavior"] == "honest"]
    assert len(honest) == 2
    assert all(r["accept_rate"] == 1.0 for r in honest)
