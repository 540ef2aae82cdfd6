""" Task runners. Both keep the order of the tasks in their results. """
from .singleprocess import SingleProcess, flatten
from .multiprocess import MultiProcess


def scheduler_for(processes: int):
    """ SingleProcess for processes <= 1, else a MultiProcess pool """
    if processes is None or processes <= 1:
        return SingleProcess()
    return MultiProcess(processes)
