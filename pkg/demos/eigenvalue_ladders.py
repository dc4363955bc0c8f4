"""Eigenvalue recursions, their closed forms, and ladder actions on modes.

The coarsening step a -> 2a^2 - 1 doubles an angle (or a hyperbolic
angle), so iterates have cosine and hyperbolic-cosine closed forms.  The
raising/lowering pair moves exponential modes between these eigenvalues.

Run with: python3 demos/eigenvalue_ladders.py
"""

import math

from waveq import (
    a2half_step,
    fig1_report,
    haar_closed_form,
    iterate_spectrum,
    ladder_check,
)


def main():
    print("== recursion vs closed form ==")
    for a0 in (0.3, 1.2):
        trace = iterate_spectrum(a0, n=5)
        tag = trace.closed_form_tag
        print(f"  a0 = {a0} ({tag})")
        for n, a_n in trace.values:
            closed = haar_closed_form(a0, n)
            print(f"    n={n}: iterated {a_n:+.12g}  closed {closed:+.12g}")

    print()
    print("== hyperbolic-sine doubling, exact at dyadic rationals ==")
    print(f"  3/4 -> {a2half_step(0.75)} (exactly 15/8: {a2half_step(0.75) == 1.875})")
    t = 1.5
    print(f"  sinh({t}) -> {a2half_step(math.sinh(t)):.12g} "
          f"vs sinh({2 * t}) = {math.sinh(2 * t):.12g}")

    print()
    print("== ladder actions at rate log 2 ==")
    rep = ladder_check(math.log(2.0), range(0, 4))
    print("   n   eigenvalue a_n   lowering coeff   next a")
    for r in rep["ladder_rows"]:
        print(f"   {r['n']}   {r['a_n']:<14.10g}   "
              f"{complex(r['minus_coeff']).real:<14.10g}   {r['minus_target_a']:.10g}")
    print(f"  first coefficient is exactly 3/4: "
          f"{complex(rep['ladder_rows'][0]['minus_coeff']).real == 0.75}")

    print()
    print("== oscillating modes ==")
    for r in rep["mode_rows"]:
        k = r["k"]
        print(f"  k={k}: eigenvalue error {r['eigenvalue_error']:.1e}, "
              f"ladder coeff errors {r['minus_coeff_error']:.1e} / "
              f"{r['plus_coeff_error']:.1e}")

    print()
    print("== oscillation counts double per two steps of the curve order ==")
    fig = fig1_report([2, 4, 6], grid_size=512)
    for n, c in fig["zero_crossings"].items():
        print(f"  n={n}: {c} zero crossings on [0, 1]")
    c = fig["zero_crossings"]
    print(f"  ratio n=6 over n=2: {c[6] // c[2]}")


if __name__ == "__main__":
    main()
