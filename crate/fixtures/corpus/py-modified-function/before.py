import os


def foo(path):
    return os.path.exists(path)


def bar():
    return 1
