# utilities for numbers

def clamp(v, lo, hi):
    # keep v within bounds
    return max(lo, min(v, hi))
