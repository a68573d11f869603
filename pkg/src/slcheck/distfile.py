"""Reading and writing subset distributions as JSON documents.

The on-disk shape is

    {
      "n": 3,
      "coefficients": {
        "": "2/11",
        "1": "3/22",
        "1,2": "3/22",
        "mask:6": "3/22"
      }
    }

Keys are strictly increasing comma-separated 1-based indices ("" is the
empty set); the alternative "mask:<int>" spelling gives the subset bitmask
directly.  Values are exact rationals written as strings: "3/22", "5", or a
decimal literal like "0.15".  Unlisted subsets are zero.  Weights must be
nonnegative, and the writer always emits index-list keys with num/den
values, so a document round-trips exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .poly import MAX_VARS, SubsetPoly, as_fraction, indices_from_mask


class DistributionFormatError(ValueError):
    """Raised for any malformed distribution document."""


def parse_subset_key(key: str, n: int) -> int:
    key = key.strip()
    if key.startswith("mask:"):
        body = key[len("mask:") :].strip()
        try:
            mask = int(body)
        except ValueError:
            raise DistributionFormatError(f"bad bitmask key {key!r}") from None
        if not 0 <= mask < (1 << n):
            raise DistributionFormatError(f"bitmask {mask} out of range for n={n}")
        return mask
    if key == "":
        return 0
    mask = 0
    last = 0
    for piece in key.split(","):
        try:
            idx = int(piece.strip())
        except ValueError:
            raise DistributionFormatError(f"bad subset key {key!r}") from None
        if idx <= last:
            raise DistributionFormatError(
                f"subset key {key!r} must list strictly increasing indices"
            )
        if idx > n:
            raise DistributionFormatError(f"index {idx} exceeds n={n} in key {key!r}")
        mask |= 1 << (idx - 1)
        last = idx
    return mask


def format_subset_key(mask: int) -> str:
    return ",".join(str(i) for i in indices_from_mask(mask))


def loads_distribution(text: str) -> SubsetPoly:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DistributionFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DistributionFormatError("top level must be a JSON object")
    if "n" not in doc:
        raise DistributionFormatError("missing integer field 'n'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise DistributionFormatError(f"'n' must be an integer, got {n!r}")
    if not 1 <= n <= MAX_VARS:
        raise DistributionFormatError(f"'n' must be in 1..{MAX_VARS}, got {n}")
    raw = doc.get("coefficients", {})
    if not isinstance(raw, dict):
        raise DistributionFormatError("'coefficients' must be an object")
    weights: dict[int, Fraction] = {}
    for key, value in raw.items():
        mask = parse_subset_key(key, n)
        if mask in weights:
            raise DistributionFormatError(
                f"subset {format_subset_key(mask) or 'empty set'} given twice"
            )
        if not isinstance(value, str):
            raise DistributionFormatError(
                f"value for key {key!r} must be a rational string, got {value!r}"
            )
        try:
            weight = as_fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DistributionFormatError(f"bad rational {value!r}: {exc}") from None
        if weight < 0:
            raise DistributionFormatError(f"negative weight {value!r} for key {key!r}")
        weights[mask] = weight
    return SubsetPoly.from_weights(n, weights)


def load_distribution(path: str) -> SubsetPoly:
    with open(path, "r") as fh:
        return loads_distribution(fh.read())


def dumps_distribution(p: SubsetPoly) -> str:
    coeffs: dict[str, str] = {}
    for mask in p.nonzero_masks():
        coeffs[format_subset_key(mask)] = str(p.coeff(mask))
    return json.dumps({"n": p.n, "coefficients": coeffs}, indent=2) + "\n"


def save_distribution(p: SubsetPoly, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_distribution(p))
