"""Python access to the porstore core."""

import json as _json

from ._core import (  # noqa: F401
    MerklePath,
    MerkleTree,
    PorstoreError,
    Side,
    audit,
    decode,
    encode,
    hash_bytes,
    keystream,
    leaf_digest,
    post_roundtrip,
    reconstruct,
    reconstruction_coefficients,
    run_experiment as _run_experiment,
    sampling_challenge,
    seal,
    split_secret,
    verify_leaf,
)

__version__ = "0.1.0"


def run_experiment(config):
    """Accepts a config dict (or JSON string) and returns the report as a dict."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_run_experiment(text))
