def foo():
    return 1


def obsolete(a, b):
    return a + b
