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
from itertools import chain


def flatten(list_of_lists):
    return list(chain.from_iterable(list_of_lists))


class SingleProcess(object):
    """ Runs every task in the calling process. Same interface as
    :class:`MultiProcess`, so callers do not care which one they hold.
    """
    processes = 1

    def map(self, function, tasks):
        return [function(task) for task in tasks]

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *_):
        self.close()
