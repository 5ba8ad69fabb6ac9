#!/usr/bin/env python3
"""Reference integrations of the mean-field polarization equations with an
independent integrator (scipy DOP853) used to freeze regression values."""
import numpy as np
from scipy.integrate import solve_ivp


def rhs(t, y, c, n1=1.0, n2=1.0):
    sp = y[0] + 1j * y[1]; s3 = y[2]; tp = y[3] + 1j * y[4]; t3 = y[5]
    sm = np.conj(sp); tm = np.conj(tp); s2 = 1 - c * c
    dsp = -1j * n2 * s3 * (s2 + tp * (1 + c) ** 2 - tm * (1 - c) ** 2)
    ds3 = -2j * n2 * (s2 * (sp - sm) - (sp * tp - sm * tm) * (1 - c) ** 2 + (sp * tm - sm * tp) * (1 + c) ** 2)
    dtp = -1j * n1 * t3 * (s2 + sp * (1 + c) ** 2 - sm * (1 - c) ** 2)
    dt3 = -2j * n1 * (s2 * (tp - tm) - (sp * tp - sm * tm) * (1 - c) ** 2 - (sp * tm - sm * tp) * (1 + c) ** 2)
    return [dsp.real, dsp.imag, ds3.real, dtp.real, dtp.imag, dt3.real]


def first_crossing(one_minus_cos, t_end=10.0):
    c = 1 - one_minus_cos
    ev = lambda t, y, c: y[2]
    sol = solve_ivp(rhs, [0, t_end], [0, 0, 1, 0, 0, -1], args=(c,), method="DOP853",
                    rtol=1e-13, atol=1e-15, events=ev)
    return sol.t_events[0][0]


if __name__ == "__main__":
    for omc in [1e-1, 1e-3, 1e-5, 1e-7]:
        print("%g %.12f" % (omc, first_crossing(omc)))
