import os


def foo(path):
    return os.path.isfile(path)


def bar():
    return 1
