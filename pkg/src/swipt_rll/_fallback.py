"""Pure-Python simulation engine.

Same contract as the compiled ``_kernels`` module: consume one column of
uniforms per slot (code, channel, usage) and update ``state = [c, u, b]``
in place. It delegates each slot to the reference step functions, so it is
slow but is the definition the compiled engine is checked against.
"""
from .link_models import battery_step, channel_step, usage_step

NAME = "python"


def _code_step(c, mode, ext, adv, p_x, u):
    if mode == 0:
        return (1 if u < p_x else 0), 0
    if u < adv[c]:
        return ext, c + 1
    return 1 - ext, 0


def advance(uniforms, adv, mode, ext, p_x, p10, q0, q1, b_max, state, counts):
    uc, uh, uz = (row.tolist() for row in uniforms)
    adv = adv.tolist()
    c, s, b = (int(v) for v in state)
    n_of = n_uf = 0
    for a, h, g in zip(uc, uh, uz):
        x, c = _code_step(c, mode, ext, adv, p_x, a)
        y = channel_step(x, p10, h)
        z, s = usage_step(s, q0, q1, g)
        b, of, uf = battery_step(b, y, z, b_max)
        n_of += of
        n_uf += uf
    state[0], state[1], state[2] = c, s, b
    counts[0] += n_of
    counts[1] += n_uf


def trace(uniforms, adv, mode, ext, p_x, p10, q0, q1, b_max, state, out):
    """Like ``advance`` but records rows ``c, x, y, z, b, overflow, underflow``.

    ``c`` and ``b`` are the values at the start of each slot.
    """
    uc, uh, uz = (row.tolist() for row in uniforms)
    adv = adv.tolist()
    c, s, b = (int(v) for v in state)
    for t, (a, h, g) in enumerate(zip(uc, uh, uz)):
        out[0, t] = c
        out[4, t] = b
        x, c = _code_step(c, mode, ext, adv, p_x, a)
        y = channel_step(x, p10, h)
        z, s = usage_step(s, q0, q1, g)
        b, of, uf = battery_step(b, y, z, b_max)
        out[1, t], out[2, t], out[3, t], out[5, t], out[6, t] = x, y, z, of, uf
    state[0], state[1], state[2] = c, s, b
