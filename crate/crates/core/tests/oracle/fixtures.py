"""Independent 50-digit reference values for the frozen test fixtures.

Run with `python3 fixtures.py`; the printed values are pasted into the Rust
tests. Nothing here imports or calls the Rust code.
"""
from mpmath import mp, mpf, erfc, sqrt, log, ln

mp.dps = 50


def q(x):
    return erfc(mpf(x) / sqrt(2)) / 2


def per(gamma, n, d):
    gamma = mpf(gamma)
    if gamma == 0:
        return mpf(1) if d > 0 else mpf(0)
    v = 1 - 1 / (1 + gamma) ** 2
    c = log(1 + gamma, 2)
    return q(sqrt(n / v) * (c - mpf(d) / n) * ln(2))


def link(z, pm, pk, n, dm, dk, s2=1):
    z, pm, pk, s2 = map(mpf, (z, pm, pk, s2))
    gm = z * pm / (z * pk + s2)
    gk = z * pk / s2
    gd = z * pk / (z * pm + s2)
    em = per(gm, n, dm)
    if dk == 0:
        return em, mpf(0), mpf(0)
    ek = per(gk, n, dk)
    ekd = per(gd, n, dk)
    exact = (1 - em) * ek + em * ekd
    approx = min(mpf(1), ek + em)
    return em, exact, approx


def u(em, ek):
    return (1 - em) * (1 - 2 * ek)


if __name__ == "__main__":
    for x in ["1", "2", "5", "-1", "0.5", "3.7", "10", "-6.25", "20"]:
        print(f"Q({x}) = {mp.nstr(q(x), 20)}")
    print("per(4.5, 64, 16) =", mp.nstr(per("4.5", 64, 16), 20))
    print("per(0.1, 64, 60) =", mp.nstr(per("0.1", 64, 60), 20))
    em, ex, ap = link(1, 8, 2, 64, 16, 30)
    print("link bob z=1 pm=8 pk=2 dm=16 dk=30:", mp.nstr(em, 20), mp.nstr(ex, 20), mp.nstr(ap, 20))
    ze = mpf(10) ** (mpf(-10) / 10)
    emb, exb, apb = link(1, 8, 2, 64, 16, 30)
    eme, exe, ape = link(ze, 8, 2, 64, 16, 30)
    print("ufp approx fig3 pm=8 dk=30:", mp.nstr(u(emb, apb) - u(eme, ape), 20))
    print("ufp exact  fig3 pm=8 dk=30:", mp.nstr(u(emb, exb) - u(eme, exe), 20))
    print("eve link:", mp.nstr(eme, 20), mp.nstr(exe, 20), mp.nstr(ape, 20))
    for dk in (30, 31):
        b = link(1, "8.2", "1.8", 64, 16, dk)
        e = link(ze, "8.2", "1.8", 64, 16, dk)
        print(f"ufp approx pm=8.2 dk={dk}:", mp.nstr(u(b[0], b[2]) - u(e[0], e[2]), 20))

    # No-key baseline at P = 3 mW, z_E = -10 dB: maximize (1 - eps_B) eps_E.
    def rs(p):
        return (1 - per(p, 64, 16)) * per(ze * p, 64, 16)

    grid = [mpf(3) * i / 3000 for i in range(3001)]
    p0 = max(grid, key=rs)
    p_opt = mp.findroot(lambda p: mp.diff(rs, p), p0)
    print("baseline P=3 ze=-10dB: p_m", mp.nstr(p_opt, 20), "r_s", mp.nstr(rs(p_opt), 20))
