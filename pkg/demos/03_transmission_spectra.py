#!/usr/bin/env python3
"""Bus transmission spectra and the collective linewidth.

The weakly driven bus waveguide reads the atoms out in transmission. The
power the atoms radiate into the bus, |t - t_empty|^2, is Lorentzian in the
co-scanned detuning. For one atom its width is (1 + C1)*Gamma0: the bare
linewidth plus the cavity channel. For N uniformly coupled atoms the bright
collective mode widens as 1 + N*C1 when the free-space dipole-dipole
coupling is switched off; switching it on mixes subradiant character into
the bright mode and pulls the fitted width down.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ringqed.cavity import CavityParams
from ringqed.experiments import compute_spectrum
from ringqed.geometry import CloudParams

OUT = __import__("pathlib").Path(__file__).parent / "output"


def main():
    OUT.mkdir(exist_ok=True)
    params = CavityParams()
    c1 = params.c_ref

    one = compute_spectrum(CloudParams(n_atoms=1), params, trials=1, seed=3,
                           no_stochastic=True)
    print(f"single atom: fitted FWHM = {one.fit.fwhm:.4f} Gamma0 "
          f"(expected {1 + c1:.2f})")

    ns = np.array([1, 5, 10, 20, 30, 40, 50, 60])
    widths = []
    for n in ns:
        spec = compute_spectrum(CloudParams(n_atoms=int(n)), params, trials=1,
                                seed=3, no_freespace=True, no_stochastic=True)
        widths.append(spec.fit.fwhm)
    widths = np.asarray(widths)
    slope, intercept = np.polyfit(ns, widths, 1)
    print(f"dipole-dipole off: FWHM = {intercept:.3f} + {slope:.4f} N "
          f"(slope vs C1 = {c1})")

    with_dd = compute_spectrum(CloudParams(n_atoms=60), params, trials=60,
                               seed=4, no_stochastic=True)
    print(f"N = 60 with dipole-dipole on: FWHM = {with_dd.fit.fwhm:.3f} "
          f"vs {widths[-1]:.3f} off")

    n40_off = compute_spectrum(CloudParams(n_atoms=40), params, trials=1,
                               seed=5, no_freespace=True, no_stochastic=True)
    n40_on = compute_spectrum(CloudParams(n_atoms=40), params, trials=60,
                              seed=5, no_stochastic=True)

    fig, axes = plt.subplots(1, 2, figsize=(8.2, 3.4))
    for spec, label in ((one, "N = 1"), (n40_off, "N = 40, no dipole-dipole"),
                        (n40_on, "N = 40")):
        y = spec.atomic_power / spec.atomic_power.max()
        axes[0].plot(spec.detunings, y, label=label)
    axes[0].set_xlabel(r"detuning $\delta\ /\ \Gamma_0$")
    axes[0].set_ylabel("atomic power (normalized)")
    axes[0].set_xlim(-15, 15)
    axes[0].legend(frameon=False, fontsize=8)
    axes[1].plot(ns, widths, "o", ms=4, label="fitted, dipole-dipole off")
    axes[1].plot(ns, 1.0 + c1 * ns, "k-", lw=1, label=r"$1 + N C_1$")
    axes[1].plot([60], [with_dd.fit.fwhm], "r*", ms=10,
                 label="N = 60, dipole-dipole on")
    axes[1].set_xlabel("atom number N")
    axes[1].set_ylabel(r"FWHM $/\ \Gamma_0$")
    axes[1].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(OUT / "transmission_linewidth.png", dpi=150)
    print(f"wrote {OUT / 'transmission_linewidth.png'}")


if __name__ == "__main__":
    main()
