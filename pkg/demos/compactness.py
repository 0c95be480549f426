"""Sampled precompactness diagnostics: uniform tail decay and equicontinuity
of translations, on a family that is precompact (one Gaussian) and one that
is not (unit-norm bumps marching off to infinity), and the image of the
latter under the operator f -> u . H(v f).

    python demos/compactness.py          (under a minute)
"""
import warnings

from halfline import BESSEL_FN, LAGUERRE_FN, DiagnosticsConfig, HankelParams, verdict
from halfline.compactness import compact_operator_demo, gaussian_family, shifted_bump_family
from halfline.spaces import exp_decay

warnings.simplefilter("ignore")
cfg = DiagnosticsConfig()
for setting in (LAGUERRE_FN, BESSEL_FN):
    single = verdict(gaussian_family([1.0], setting, 0.5), cfg)
    bumps = verdict(shifted_bump_family(range(1, 11), setting, 0.5), cfg)
    print(f"{setting}")
    print(f"  one Gaussian:   {single.verdicts}")
    print(f"  shifted bumps:  {bumps.verdicts}")
    print(f"  tail radius needed by the first n bumps: {bumps.data['conditions']['tail']['prefix_radius']}")

family = shifted_bump_family(range(1, 11), BESSEL_FN, 0.5)
rec = compact_operator_demo(exp_decay(1.0), exp_decay(1.0), family, HankelParams(0.5, x_max=24.0))
print("\nf -> e^{-y} H(e^{-x} f) on the shifted bumps")
print(f"  input tail: {rec['input']['conditions']['tail']['verdict']}")
print(f"  image: tail {rec['image']['conditions']['tail']['verdict']}, "
      f"equicontinuity {rec['image']['conditions']['equicontinuity']['verdict']}")
print("  omega(delta): " + ", ".join(f"{d:g}: {w:.2e}" for d, w in
                                      zip(rec["image"]["conditions"]["equicontinuity"]["delta"],
                                          rec["image"]["conditions"]["equicontinuity"]["omega"])))
