# utilities
def clamp(v, lo, hi):
    return max(lo, min(v, hi))
