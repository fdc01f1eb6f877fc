"""Compare the constructed lift spectrum with the {d-2 +/- lambda} u {-2} rule.

Also reports how far the alternative 2d-2 centred formula lands, for reference.
"""

import numpy as np

from hl2lab import hl2_lift, make_complete, make_cycle, make_petersen, make_random_regular
from hl2lab.spectral import full_spectrum, predict_lift_spectrum


def deviation(pred, actual):
    """Multiset distance when sizes agree, else the worst nearest-value gap."""
    if pred.size == actual.size:
        return float(np.max(np.abs(np.sort(pred) - np.sort(actual))))
    return float(np.max(np.min(np.abs(pred[:, None] - actual[None, :]), axis=1)))


def main():
    bases = [make_complete(4), make_complete(5), make_cycle(5), make_cycle(6), make_petersen()]
    bases += [make_random_regular(16, 3, s) for s in range(3)]
    print(f"{'graph':<16}{'corrected':>12}{'2d-2 centred':>16}")
    for g in bases:
        spec = full_spectrum(g).values
        actual = full_spectrum(hl2_lift(g)).values
        d = g.regular_degree()
        good = deviation(predict_lift_spectrum(spec, d, g.n, g.m), actual)
        alt = deviation(predict_lift_spectrum(spec, d, g.n, g.m, variant="displayed"), actual)
        print(f"{g.label:<16}{good:>12.2e}{alt:>16.2e}")


if __name__ == "__main__":
    main()
