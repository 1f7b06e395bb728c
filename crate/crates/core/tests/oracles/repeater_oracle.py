"""Independent repeater-protocol oracle (numpy, dense vectors).

Entanglement: first-order (single-photon) enumeration through an explicit
mode-transfer matrix. Parity: explicit coherent amplitudes per branch and
closed-form coherent-state overlaps.
"""
import itertools
import numpy as np

THZ = 1e12


def node_amps(gamma, kappa, g, tau, delta, dw):
    """Solve the 2x2 steady state for unit a_in; returns (through, drop, loss_cav, loss_dip)."""
    m = np.array([[-1j * dw + gamma + kappa / 2, 1j * g], [1j * g, -1j * (dw - delta) + tau / 2]])
    b, s = np.linalg.solve(m, np.array([-np.sqrt(gamma), 0]))
    return 1 + np.sqrt(gamma) * b, np.sqrt(gamma) * b, np.sqrt(kappa) * b, np.sqrt(tau) * s


def label_amps(p, label, dw=0.0):
    q = dict(p)
    if label == "m":
        q["g"] = 0.0
    return node_amps(dw=dw, **q)


BS = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)


def entangle(pa, pb, nbar, dw=0.0):
    """Modes: 0 f, 1 g, 2 h, 3 i, 4.. losses. Returns per herald-port (prob, state)."""
    alpha = np.sqrt(nbar)
    out = {}
    basis = list(itertools.product("gm", repeat=2))
    amps = {port: np.zeros(4, complex) for port in ("g", "i")}
    for k, (x, y) in enumerate(basis):
        arm_a, arm_b = BS @ np.array([alpha, 0])
        ta, da, *_ = label_amps(pa, x, dw)
        tb, db, *_ = label_amps(pb, y, dw)
        thru = BS @ np.array([ta * arm_a, tb * arm_b])  # [g-port, f-port]
        drop = BS @ np.array([da * arm_a, db * arm_b])  # [i-port, h-port]
        amps["g"][k] = 0.5 * thru[0]
        amps["i"][k] = 0.5 * drop[0]
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    for port, v in amps.items():
        prob = np.vdot(v, v).real
        fid = abs(np.vdot(singlet, v)) ** 2 / prob if prob > 0 else 0.0
        out[port] = (prob, fid, v)
    return out


def overlap(a, b):
    """<b|a> for coherent states."""
    return np.exp(-abs(a) ** 2 / 2 - abs(b) ** 2 / 2 + np.conj(b) * a)


def parity_branches(pa, pb, nbar, dw=0.0):
    alpha = np.sqrt(nbar)
    rec = []
    for x, y in itertools.product("gm", repeat=2):
        ta, da, ca, sa = label_amps(pa, x, dw)
        tb, db, cb, sb = label_amps(pb, y, dw)
        w1, w2 = ta * alpha, da * alpha
        even = tb * w1 + db * w2
        odd = db * w1 + tb * w2
        # node B loss amplitudes are linear in the summed input
        rec.append(np.array([even, odd, ca * alpha, sa * alpha, cb * (w1 + w2), sb * (w1 + w2)]))
    return rec


def parity_post(rho, rec, event):
    """event: (even_click, odd_click) booleans. Returns (prob, rho_post)."""
    n = 4
    out = np.zeros((n, n), complex)
    for s in range(n):
        for t in range(n):
            f = 1.0 + 0j
            for mode in range(6):
                a, b = rec[s][mode], rec[t][mode]
                vac = np.exp(-(abs(a) ** 2 + abs(b) ** 2) / 2)
                if mode < 2:
                    click = event[mode]
                    f *= (overlap(a, b) - vac) if click else vac
                else:
                    f *= overlap(a, b)
            out[s, t] = rho[s, t] * f
    p = np.trace(out).real
    return p, (out / p if p > 0 else out)


def false_even(pa, pb, dw=0.0):
    rec = parity_branches(pa, pb, 1.0, dw)
    e = (abs(rec[1][0]) ** 2 + abs(rec[2][0]) ** 2) / 2
    o = (abs(rec[1][1]) ** 2 + abs(rec[2][1]) ** 2) / 2
    return e / (e + o)


def reference(gamma=1.0, **kw):
    p = dict(gamma=gamma * THZ, kappa=0.1 * THZ, g=0.33 * THZ, tau=0.001 * THZ, delta=0.0)
    p.update({k: v * THZ for k, v in kw.items()})
    return p


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    for name, pa, pb in [
        ("reference/reference", reference(), reference()),
        ("reference/asym", reference(), reference(g=0.2, delta=0.05)),
    ]:
        r = entangle(pa, pb, 0.05)
        tot = r["g"][0] + r["i"][0]
        fid = (r["g"][0] * r["g"][1] + r["i"][0] * r["i"][1]) / tot
        print(name, "herald", repr(tot), "fid", repr(fid))
        for port in ("g", "i"):
            print("  ", port, repr(r[port][0]), repr(r[port][1]))
            v = r[port][2] / np.sqrt(r[port][0])
            rho = np.outer(v, v.conj())
            print("     rho_gm_gm", repr(rho[1, 1].real), "rho_gm_mg", repr(rho[1, 2].real), repr(rho[1, 2].imag))
    gammas = np.linspace(0.5, 8, 50)
    fe = [false_even(reference(gm), reference(gm)) for gm in gammas]
    k = int(np.argmin(fe))
    print("false-even min", fe[k], "at", gammas[k])
    print("false-even at 3", false_even(reference(3), reference(3)))
    phi_plus = np.array([1, 0, 0, 1]) / np.sqrt(2)
    phi_minus = np.array([1, 0, 0, -1]) / np.sqrt(2)
    for psi in (phi_plus, phi_minus):
        for nbar in (0.5, 1, 2, 3, 5):
            rec = parity_branches(reference(4), reference(4), nbar)
            rho = np.outer(psi, psi.conj())
            p, post = parity_post(rho, rec, (True, False))
            fid = np.vdot(psi, post @ psi).real
            nothing = sum(rho[s, s].real * np.exp(-abs(rec[s][0]) ** 2 - abs(rec[s][1]) ** 2) for s in range(4))
            # unconditional (all field modes traced)
            unc = np.zeros((4, 4), complex)
            for s in range(4):
                for t in range(4):
                    unc[s, t] = rho[s, t] * np.prod([overlap(rec[s][m], rec[t][m]) for m in range(6)])
            print(f"nbar {nbar}: even-herald p={p:.6f} fid={fid!r} success={1-nothing!r} uncond_fid={np.vdot(psi, unc @ psi).real!r}")
