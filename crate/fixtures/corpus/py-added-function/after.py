def foo():
    return 1


def helper(value):
    return value * 2
