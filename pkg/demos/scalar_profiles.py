"""Terminal-slope profiles of the scalar decay model V' = -delta V / C(t)
over the (ell, delta) grid with T = 1 and V0 = 15.

For C(t) = (T - t)^ell the ratio V(s)/C(s) as s -> T is classified
analytically (infinite slope, a nonzero constant, or zero) and the
numeric trajectory is checked against the closed form.

Run:  python3 demos/scalar_profiles.py
"""

import numpy as np

import ptsync as pt


def main():
    print(f"{'ell':>4} {'delta':>6} {'class':>18} {'V(T-1e-3)':>12} {'max rel err':>12}")
    for ell in (1.0, 2.0, 3.0):
        for delta in (0.5, 1.0, 2.0):
            m = pt.ScalarModel(
                kind="lemma2",
                regulator=pt.Regulator("power", T=1.0, ell=ell),
                v0=15.0,
                delta=delta,
            )
            traj = pt.simulate_scalar(m, stop_gap=1e-3, samples=100)
            exact = np.array([pt.closed_form(m, t) for t in traj.times])
            rel = np.max(np.abs(traj.values - exact) / np.maximum(np.abs(exact), 1e-300))
            phi = pt.classify_phi(m)
            label = phi.value.value
            if phi.constant is not None:
                label += f" ({phi.constant:g})"
            print(f"{ell:>4.1f} {delta:>6.2f} {label:>18} {traj.values[-1]:>12.3e} {rel:>12.2e}")


if __name__ == "__main__":
    main()
