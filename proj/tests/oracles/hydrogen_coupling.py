#!/usr/bin/env python3
"""Standalone evaluation of the hydrogen two-photon coupling R and the n_gamma*R
cross-check, using CODATA constants from scipy and 50-digit arithmetic.

R = 2529 pi^2 e^4 omega^2 n_e / (8 m_e^2 Ry^5) in Heaviside-Lorentz natural units
(hbar = c = 1, e^2 = 4 pi alpha); converted to eV cm^3 with (hbar c)^3.

The printed numbers are frozen into tests/test_coupling.cpp.
"""
from mpmath import mp, mpf, pi
from scipy import constants as C

mp.dps = 50

alpha = mpf(C.fine_structure)
hbar_c_eV_cm = mpf(C.physical_constants["reduced Planck constant times c in MeV fm"][0]) * mpf("1e6") * mpf("1e-13")
m_e_eV = mpf(C.physical_constants["electron mass energy equivalent in MeV"][0]) * mpf("1e6")
ry_eV = mpf(C.physical_constants["Rydberg constant times hc in eV"][0])
m_H_g = mpf(C.physical_constants["proton mass"][0] + C.physical_constants["electron mass"][0]) * 1000
eV_J = mpf(C.electron_volt)
c_cm_s = mpf(C.c) * 100


def hydrogen_R(omega_eV, n_e_cm3):
    e2 = 4 * pi * alpha
    n_e_nat = mpf(n_e_cm3) * hbar_c_eV_cm ** 3          # eV^3
    r_nat = 2529 * pi ** 2 * e2 ** 2 * mpf(omega_eV) ** 2 * n_e_nat / (8 * m_e_eV ** 2 * ry_eV ** 5)  # eV^-2
    return r_nat * hbar_c_eV_cm ** 3                    # eV cm^3


if __name__ == "__main__":
    print("hbar_c [eV cm]     ", mp.nstr(hbar_c_eV_cm, 20))
    print("m_e [eV]           ", mp.nstr(m_e_eV, 20))
    print("Ry [eV]            ", mp.nstr(ry_eV, 20))
    print("alpha              ", mp.nstr(alpha, 20))
    print("m_H [g]            ", mp.nstr(m_H_g, 20))
    r = hydrogen_R(1, "2.69e19")
    print("R(1 eV, 2.69e19)   ", mp.nstr(r, 17), "eV cm^3")
    # cross-check: 1 eV photons, 1 W/cm^2 per beam, rho = 1 g/cm^3 atomic hydrogen
    n_e = 1 / m_H_g
    n_gamma = eV_J ** -1 / (1 * c_cm_s)                  # photons per cm^3 at 1 W/cm^2, 1 eV
    inv_len = n_gamma * hydrogen_R(1, n_e) / hbar_c_eV_cm
    print("n_e(rho=1)         ", mp.nstr(n_e, 17))
    print("n_gamma(1 W/cm^2)  ", mp.nstr(n_gamma, 17))
    print("n_gamma R / hbar c ", mp.nstr(inv_len, 17), "cm^-1")
    print("ratio to 1.8e-7    ", mp.nstr(inv_len / mpf("1.8e-7"), 10))
