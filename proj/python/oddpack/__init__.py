"""Maximum packings of odd T-walks and odd T-trails with exact certificates.

Every function takes and returns JSON strings; the *_d variants decode the
result to a dict for convenience.
"""

import json as _json

from ._oddpack import (
    InputError,
    InvariantError,
    certify,
    export_dot,
    generate,
    min_barrier,
    multiflow,
    oracle_min_barrier,
    oracle_multiflow,
    oracle_pack_trails,
    pack_trails,
    pack_walks,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "InvariantError",
    "certify",
    "certify_d",
    "export_dot",
    "generate",
    "min_barrier",
    "min_barrier_d",
    "multiflow",
    "multiflow_d",
    "oracle_min_barrier",
    "oracle_multiflow",
    "oracle_pack_trails",
    "pack_trails",
    "pack_trails_d",
    "pack_walks",
    "pack_walks_d",
    "verify",
    "verify_d",
]


def pack_walks_d(instance):
    return _json.loads(pack_walks(instance))


def pack_trails_d(instance, trace=False):
    return _json.loads(pack_trails(instance, trace))


def min_barrier_d(instance):
    return _json.loads(min_barrier(instance))


def multiflow_d(instance):
    return _json.loads(multiflow(instance))


def verify_d(instance, packing, barrier=""):
    return _json.loads(verify(instance, packing, barrier))


def certify_d(instance, packing, barrier):
    return _json.loads(certify(instance, packing, barrier))
