"""Print LRA curves for a one-sided and a two-sided Gaussian event, plus the
pointwise-max and path-level mixtures of two tilts."""
import numpy as np

from ldis.distributions import Gaussian
from ldis.events import EventSet
from ldis.limits import lra_curve, mixture_lra

p = Gaussian(0.0, 1.0)
r = np.round(np.linspace(0.1, 3.0, 30), 3)

one = lra_curve(p, p.tilt(0.8), EventSet.above(0.8), r)
A = EventSet.two_sided(1.0, 1.2)
two = lra_curve(p, p.tilt(1.0), A, r)
qs = [p.tilt(1.0), p.tilt(-1.2)]
mx = mixture_lra(qs, p, A, r)
joint = mixture_lra(qs, p, A, r, method="joint")

print(f"{'r':>6} {'one-sided':>10} {'two-sided':>10} {'max':>10} {'joint':>10}")
for k, rv in enumerate(r):
    print(f"{rv:6.2f} {one.values[k]:10.5f} {two.values[k]:10.5f} {mx.values[k]:10.5f} {joint.values[k]:10.5f}")
print("two-sided breakpoints:", ", ".join(f"{b:.6f}" for b in two.breakpoints))
