def helper(count):
    total = count * 2
    return total


def main():
    return helper(0)
