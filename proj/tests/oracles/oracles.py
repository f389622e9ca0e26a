"""Reference values for the unit tests, evaluated in 50-digit arithmetic.

Run with `python3 tests/oracles/oracles.py`; the printed numbers are frozen
into tests/unit/oracle_values.hpp.
"""
from mpmath import mp, mpf, asinh, atan, sinh, tan, cos, sin, pi, matrix, lu_solve

mp.dps = 50

M, L, I, N, KAPPA, C, G, GRAV = mpf("1.5"), 1, 1, 1, 1, 1, 1, 1
A_POLE, ALPHA, RHO = mpf("0.5"), 1, 2


def omega(beta):
    return asinh(tan(beta))


def beta(Om):
    return atan(sinh(Om))


def psi(b):
    return M * I - L**2 * cos(b) ** 2


def psi_dot(b, bd):
    return L**2 * sin(2 * b) * bd


def accel(r, rd, b, bd, u, D):
    A = matrix([[M, L * cos(b)], [L * cos(b), I]])
    rhs = matrix([G * u + D - N * rd + L * bd**2 * sin(b),
                  -C * bd - KAPPA * rd * cos(b) + L * GRAV * sin(b)])
    x = lu_solve(A, rhs)
    return x[0], x[1]


def to_reduced(r, rd, b, bd):
    Om = omega(b)
    s = r + RHO * Om
    Omd = bd / cos(b)
    sd = rd + RHO * Omd
    return s, psi(b) * (sd + ALPHA * s), Om, Omd


def gamma_rate(r, rd, b, bd, u):
    """d/dt of gamma along the plant with D = 0."""
    rdd, bdd = accel(r, rd, b, bd, u, 0)
    Om = omega(b)
    s = r + RHO * Om
    Omd = bd / cos(b)
    sd = rd + RHO * Omd
    Omdd = bdd / cos(b) + bd**2 * sin(b) / cos(b) ** 2
    sdd = rdd + RHO * Omdd
    return psi_dot(b, bd) * (sd + ALPHA * s) + psi(b) * (sdd + ALPHA * sd)


def stabilizing_u(r, rd, b, bd):
    """u solving gamma' + a gamma = 0; gamma' is affine in u."""
    g0 = gamma_rate(r, rd, b, bd, 0)
    g1 = gamma_rate(r, rd, b, bd, 1)
    gamma = to_reduced(r, rd, b, bd)[1]
    return -(A_POLE * gamma + g0) / (g1 - g0)


def reduced_rhs(s, gamma, Om, Omd, d=(1, 1, 1), A=0, B=0, du=0, D=0):
    b = beta(Om)
    ps = psi(b)
    bd = Omd * cos(b)
    sd = gamma / ps - ALPHA * s
    gd = -A_POLE * gamma - A * du - B * D
    span = RHO * L - I
    forcing = (L * (gd * ps - gamma * psi_dot(b, bd)) / ps**2 + (KAPPA - ALPHA * L) * sd) / span
    Omdd = -d[0] * Omd - d[1] * tan(b) - d[2] * Omd**2 * sin(b) + forcing
    return sd, gd, Omd, Omdd


def angle_lyapunov(Om, Omd, q, r):
    b = beta(Om)
    return Omd**2 / cos(b) ** (q - 2) + r / cos(b) ** (q - 1) - r


def show(name, v):
    print(f"inline constexpr double {name} = {mp.nstr(v, 17)};")


show("kOmegaOfPiOver3", omega(pi / 3))
show("kBetaOfOne", beta(1))
show("kPsiAtBetaOfOne", psi(beta(1)))
show("kAngleLyapunovOneZero", angle_lyapunov(1, 0, 4, mpf(2) / 3))
show("kAngleLyapunovHalfHalf", angle_lyapunov(mpf("0.5"), mpf("0.5"), 4, mpf(2) / 3))

for i, v in enumerate(reduced_rhs(mpf("-0.7"), mpf("0.7"), 1, mpf("0.5"))):
    show(f"kFreeDecayRhs{i}", v)
for i, v in enumerate(reduced_rhs(mpf("-0.7"), mpf("0.7"), 1, mpf("0.5"), A=mpf("0.03"), du=1)):
    show(f"kRelayRhs{i}", v)

state = (mpf("0.3"), mpf("-0.2"), mpf("0.4"), mpf("0.1"))
rdd, bdd = accel(*state, mpf("0.3"), mpf("0.1"))
show("kAccelR", rdd)
show("kAccelBeta", bdd)
for i, v in enumerate(to_reduced(*state)):
    show(f"kReduced{i}", v)
show("kStabilizingU", stabilizing_u(*state))
state2 = (mpf("-1.1"), mpf("0.7"), mpf("-0.9"), mpf("-0.6"))
show("kStabilizingU2", stabilizing_u(*state2))
