"""Pure-Python RK4 kernel, used when the compiled extension is unavailable.

The ODE is ``y'' = g(t) - a(t) y' - b(t) y`` on nodes ``t_i = i*h``.
Coefficient arrays are sampled on the half-step grid: entry ``2*i`` holds
the value at ``t_i`` and entry ``2*i + 1`` the value at ``t_i + h/2``.

Return codes of :func:`integrate_linear2`:

* ``-1``: reached the last node;
* ``-2``: ``|y|`` exceeded the overflow guard;
* ``k >= 1``: first node with ``y <= 0`` (only when ``stop_on_zero``).
"""

OVERFLOW = 1e12


def integrate_linear2(a, b, g, h, i0, y0, dy0, y_out, dy_out, stop_on_zero):
    n_nodes = y_out.shape[0]
    al = a.tolist()
    bl = b.tolist()
    gl = g.tolist()
    hh = 0.5 * h
    h6 = h / 6.0
    y = y0
    z = dy0
    ys = [0.0] * n_nodes
    zs = [0.0] * n_nodes
    ys[i0] = y
    zs[i0] = z
    code = -1
    last = n_nodes - 1
    for i in range(i0, n_nodes - 1):
        k = 2 * i
        a0, am, a1 = al[k], al[k + 1], al[k + 2]
        b0, bm, b1 = bl[k], bl[k + 1], bl[k + 2]
        g0, gm, g1 = gl[k], gl[k + 1], gl[k + 2]

        k1y = z
        k1z = g0 - a0 * z - b0 * y
        k2y = z + hh * k1z
        k2z = gm - am * k2y - bm * (y + hh * k1y)
        k3y = z + hh * k2z
        k3z = gm - am * k3y - bm * (y + hh * k2y)
        k4y = z + h * k3z
        k4z = g1 - a1 * k4y - b1 * (y + h * k3y)

        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = z + h6 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        ys[i + 1] = y
        zs[i + 1] = z
        if abs(y) > OVERFLOW:
            code = -2
            last = i + 1
            break
        if stop_on_zero and y <= 0.0:
            code = i + 1
            last = i + 1
            break
    y_out[i0:last + 1] = ys[i0:last + 1]
    dy_out[i0:last + 1] = zs[i0:last + 1]
    return code
