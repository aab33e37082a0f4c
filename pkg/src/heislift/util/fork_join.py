# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Functions dealing with multiple processes.
"""

import heapq
import logging
import multiprocessing

LOG = logging.getLogger("heislift")


# |fun| must be a top-level function (not a closure) so it can be pickled.
def fork_join(num_processes, fun, partitions):
    """Call |fun| on every partition, in separate processes when more than one is requested.

    Args:
        num_processes (int): Number of worker processes, 1 runs everything in this process
        fun (function): Top-level function taking one partition
        partitions (list): Picklable partition descriptions

    Returns:
        list: Results in partition order, whatever the number of processes
    """
    partitions = list(partitions)
    if num_processes <= 1 or len(partitions) <= 1:
        return [fun(part) for part in partitions]
    LOG.debug("Forking %d children for %d partitions...", num_processes, len(partitions))
    with multiprocessing.Pool(processes=min(num_processes, len(partitions))) as pool:
        return pool.map(fun, partitions)


def merge_sorted(results):
    """Merge per-partition sorted lists into one sorted list.

    Args:
        results (list): Sorted lists

    Returns:
        list: The merged list
    """
    return list(heapq.merge(*results))
