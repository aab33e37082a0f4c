# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Functions dealing with the file system layout of heislift outputs.
"""

from pathlib import Path


def make_numbered_dir(base_dir, prefix):
    """Create <prefix><number> directory, incrementing the number if one is already found.

    Args:
        base_dir (Path): Base directory to create the numbered directories in
        prefix (str): Directory name prefix

    Returns:
        Path: Full path to the numbered directory
    """
    assert isinstance(base_dir, Path)
    assert prefix

    i = 1
    while True:
        full_dir = base_dir / f"{prefix}{i}"
        try:
            full_dir.mkdir()  # To avoid race conditions, we use try/except instead of exists/create
            break
        except OSError:
            i += 1

    return full_dir
