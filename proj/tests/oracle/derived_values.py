"""Independent high-precision evaluation of the reference numbers frozen in the tests."""
from mpmath import mp, mpf, pi, sqrt, cos, log, exp

mp.dps = 40

h = mpf("6.62607015e-34")
hbar = h / (2 * pi)
k = mpf("8.9875517923e9")
mp_kg = mpf("1.67262192369e-27")
e = mpf("1.602176634e-19")


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


ell = mpf("1e-6")
eps0 = hbar**2 / (mp_kg * ell**2)
show("energy_scale", eps0)
show("time_scale", hbar / eps0)
show("lambda", k * e * e * mp_kg * ell / hbar**2)


def f_total(x1, x2, q1, q2, L, kk):
    return kk * q1**2 / (4 * x1**2) + kk * q2**2 / (4 * x2**2) + kk * q1**2 / (4 * (L - x1) ** 2) + kk * q2**2 / (4 * (L - x2) ** 2)


def f_max(d, q1, q2, L, kk):
    return kk * q1**2 / (L - d) ** 2 + kk * q1**2 / (L + d) ** 2 + 2 * kk * q2**2 / L**2


show("f_total_unit_3_7", f_total(3, 7, 1, 1, 10, 1))
show("f_max_unit_7", f_max(7, 1, 1, 10, 1))
show("f_max_unit_6", f_max(6, 1, 1, 10, 1))
show("f_total_si_midpoint", f_total(mpf("1e-6"), mpf("1e-6"), e, e, mpf("2e-6"), k))
show("coulomb_1um", k * e * e / sqrt(mpf("1e-12") + mpf("1e-30")))
show("box_energy_1um", 2 * pi**2 * hbar**2 / (2 * mp_kg * mpf("1e-6") ** 2))


def discrete_box(L, N, m):
    hh = L / (N + 1)
    return 2 * (hbar**2 / (2 * m)) * (2 / hh**2) * (1 - cos(pi * hh / L))


show("discrete_box_1um_N64", discrete_box(mpf("1e-6"), 64, mp_kg))
show("expected_time", 1 / (mpf("1e11") * mpf("0.1734")))
Q = 2 * h * mpf("1e7") * mpf("1e12")
show("qze_power", Q)
show("expected_energy", Q / (mpf("1e11") * mpf("0.1734")))
show("survival_1e-6_1e4", exp(mpf("1e4") * log(1 - mpf("1e-6"))))
show("classical_delta_e", k * e * e / mpf("9.92e-7") - k * e * e / mpf("1e-6"))
show("t_advantage_quoted_power", (mpf("2.63e-24") - mpf("7.61e-25")) / mpf("1.3252e-14"))
show("t_advantage_exact_q", (mpf("2.63e-24") - mpf("7.61e-25")) / Q)


def renewal(P, L, r, e_tick):
    s = 1 - L
    sr = s**r
    block = (1 - sr) / L if L > 0 else r
    q = sr * (1 - P)
    ticks = block / (1 - q)
    reach = sr * P / (1 - q)
    return ticks * e_tick / reach


show("renewal_energy_P0.2_L1e-3_r10", renewal(mpf("0.2"), mpf("1e-3"), 10, 2 * h * mpf("1e7")))
