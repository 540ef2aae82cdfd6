# Copyright 2024 The cubiclab developers
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at
#       http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.
# pylint: disable=C0111
import multiprocessing as mp
import traceback


class MultiProcess(object):
    """ Spreads independent tasks over a process pool.

    Tasks must be picklable and functions module level. ``Pool.map``
    returns results in task order, so the outcome does not depend on
    the number of processes.
    """

    def __init__(self, processes):
        self.processes = processes
        self.pool = mp.Pool(processes)

    def map(self, function, tasks, chunksize=None):
        tasks = list(tasks)
        if chunksize is None:
            chunksize = max(1, len(tasks) // (4 * self.processes))
        try:
            return self.pool.map(function, tasks, chunksize)
        except Exception:
            traceback.print_exc()
            raise

    def close(self):
        self.pool.close()
        self.pool.join()

    def __enter__(self):
        return self

    def __exit__(self, *_):
        self.close()
