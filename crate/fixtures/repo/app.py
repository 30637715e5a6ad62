from util import helper


def main(args):
    result = helper(len(args))
    print(result)
    return result
