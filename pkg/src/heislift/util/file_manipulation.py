# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Functions dealing with documents: the JSON files heislift reads and writes.
"""

import hashlib
import io
import json
import logging
from pathlib import Path

import fasteners
import numpy as np

LOG = logging.getLogger("heislift")


def _plain(value):
    """Convert numpy scalars and arrays that json cannot serialize on its own.

    Args:
        value (object): Value json.dumps gave up on

    Returns:
        object: A json-serializable equivalent

    Raises:
        TypeError: If the value has no plain equivalent
    """
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def canonical_dump(doc):
    """Serialize a document with sorted keys, two-space indent and a trailing newline.

    Args:
        doc (dict): Document

    Returns:
        str: Canonical JSON text
    """
    return json.dumps(doc, sort_keys=True, indent=2, default=_plain) + "\n"


def document_digest(doc):
    """Short digest of the canonical form of a document.

    Args:
        doc (dict): Document

    Returns:
        str: First 12 hex digits of the sha512 of the canonical dump
    """
    return hashlib.sha512(canonical_dump(doc).encode("utf-8")).hexdigest()[:12]


def read_document(path):
    """Read a JSON document.

    Args:
        path (Path): File to read

    Returns:
        dict: The parsed document
    """
    path = Path(path)
    with io.open(str(path), "r", encoding="utf-8") as f:
        doc = json.load(f)
    LOG.debug("Read document %s (digest %s)", path, document_digest(doc))
    return doc


def write_document(path, doc):
    """Write a document in canonical form, holding an inter-process lock next to the target.

    Args:
        path (Path): File to write
        doc (dict): Document

    Returns:
        Path: The written file
    """
    path = Path(path)
    lock_path = path.with_name(f".{path.name}.lock")
    with fasteners.InterProcessLock(str(lock_path)):
        with io.open(str(path), "w", encoding="utf-8", newline="\n") as f:
            f.write(canonical_dump(doc))
    try:
        lock_path.unlink()
    except OSError:
        pass  # another writer may hold it by now
    LOG.debug("Wrote document %s", path)
    return path
