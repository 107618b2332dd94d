"""Pure-Python reference implementation of the evolution kernel.

Mirrors ``_kernels.pyx`` step for step so the two backends agree to
rounding; used when the compiled extension is unavailable.
"""
import math

import numpy as np

E_CONST = math.e

# status codes shared with the compiled kernel
OK = 0
TOO_MANY_STEPS = 1
STEP_TOO_SMALL = 2

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)


def schedule_value(kind, param, t):
    if kind == 0:
        return math.exp(-param * t)
    if kind == 1:
        return 1.0 / math.log(t + E_CONST)
    if kind == 2:
        return 1.0 - 0.5 * (math.atan(t - 0.5 * param) / abs(math.atan(-0.5 * param)) + 1.0)
    return param


def evolve_dopri5(H0, H1, psi0, kind, param, t_out, rtol, atol, h_init, max_steps):
    """Integrate i dpsi/dt = ((1 - g(t)) H0 + g(t) H1) psi, returning states at ``t_out``.

    Returns ``(states, accepted, rejected, status)``.
    """
    y = np.array(psi0, dtype=np.complex128)
    out = np.empty((len(t_out), y.size), dtype=np.complex128)

    def rhs(t, v):
        g = schedule_value(kind, param, t)
        return -1j * ((1.0 - g) * (H0 @ v) + g * (H1 @ v))

    t = float(t_out[0])
    h = h_init
    k1 = rhs(t, y)
    accepted = rejected = 0
    out[0] = y
    for idx in range(1, len(t_out)):
        target = float(t_out[idx])
        while t < target:
            if accepted + rejected >= max_steps:
                return out, accepted, rejected, TOO_MANY_STEPS
            if h < 1e-13 * max(1.0, abs(t)):
                return out, accepted, rejected, STEP_TOO_SMALL
            last = h >= target - t
            hs = target - t if last else h
            k2 = rhs(t + C2 * hs, y + hs * (A21 * k1))
            k3 = rhs(t + C3 * hs, y + hs * (A31 * k1 + A32 * k2))
            k4 = rhs(t + C4 * hs, y + hs * (A41 * k1 + A42 * k2 + A43 * k3))
            k5 = rhs(t + C5 * hs, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
            k6 = rhs(t + hs, y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
            y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
            t_new = target if last else t + hs
            k7 = rhs(t_new, y_new)
            err_vec = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = math.sqrt(float(np.mean((np.abs(err_vec) / scale) ** 2)))
            if err <= 1.0:
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
                if not last:
                    h = hs * fac
                elif fac < 1.0:
                    h = min(h, hs * fac)
                t, y, k1 = t_new, y_new, k7
                accepted += 1
            else:
                h = hs * max(0.2, 0.9 * err ** -0.2)
                rejected += 1
        out[idx] = y
    return out, accepted, rejected, OK
