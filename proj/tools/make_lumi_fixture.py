#!/usr/bin/env python3
"""Generate the bundled parton-luminosity table from an LHAPDF6 grid file.

Usage:
    python3 tools/make_lumi_fixture.py PATH/NNPDF31_lo_as_0118_0000.dat \
        --sqrt-s 13000 --mu 173 --out data/lumi_13tev.csv

The table holds dL/dM for the qqbar (five light flavours, both beam
orderings) and gg initial states:

    dL/dM = (2M/s) * int_tau^1 dx/x f_a(x, mu) f_b(tau/x, mu),  tau = M^2/s

in units of 1/GeV. The factorisation scale is fixed to mu (default m_t).
Only numpy and scipy are needed; the library never evaluates PDFs itself.
"""
import argparse
import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import RectBivariateSpline


def read_lhagrid1(path):
    with open(path) as fh:
        text = fh.read()
    blocks = [b.strip() for b in text.split("---")]
    subgrids = []
    for block in blocks[1:]:
        lines = block.splitlines()
        if len(lines) < 4:
            continue
        xs = np.array(lines[0].split(), dtype=float)
        qs = np.array(lines[1].split(), dtype=float)
        pids = [int(p) for p in lines[2].split()]
        vals = np.array(" ".join(lines[3:]).split(), dtype=float)
        vals = vals.reshape(len(xs), len(qs), len(pids))
        subgrids.append((xs, qs, pids, vals))
    return subgrids


class GridPdf:
    def __init__(self, path, mu):
        for xs, qs, pids, vals in read_lhagrid1(path):
            if qs[0] <= mu <= qs[-1]:
                break
        else:
            raise SystemExit(f"scale {mu} outside grid")
        self.source_q = (qs[0], qs[-1])
        lx, lq = np.log(xs), np.log(qs * qs)
        ky = min(3, len(qs) - 1)
        self.xmin = xs[0]
        self.splines = {
            pid: RectBivariateSpline(lx, lq, vals[:, :, i], kx=3, ky=ky)
            for i, pid in enumerate(pids)
        }
        self.lmu2 = math.log(mu * mu)

    def f(self, pid, x):
        """Number density f(x) (grid stores x f)."""
        if x >= 1.0:
            return 0.0
        xf = float(self.splines[pid](math.log(x), self.lmu2)[0, 0])
        return max(xf, 0.0) / x


def luminosities(pdf, m, s):
    tau = m * m / s
    lt = math.log(tau)

    def gg(y):
        x = math.exp(y)
        return pdf.f(21, x) * pdf.f(21, tau / x)

    def qq(y):
        x = math.exp(y)
        tot = 0.0
        for q in range(1, 6):
            tot += pdf.f(q, x) * pdf.f(-q, tau / x) + pdf.f(-q, x) * pdf.f(q, tau / x)
        return tot

    jac = 2.0 * m / s
    opts = dict(epsrel=1e-9, epsabs=0.0, limit=400)
    l_gg = jac * quad(gg, lt, 0.0, **opts)[0]
    l_qq = jac * quad(qq, lt, 0.0, **opts)[0]
    return l_qq, l_gg


def mass_grid():
    low = np.arange(340.0, 1000.0, 1.0)
    mid = np.arange(1000.0, 2000.0, 5.0)
    high = np.arange(2000.0, 6000.0 + 1e-9, 20.0)
    return np.concatenate([low, mid, high])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("grid")
    ap.add_argument("--sqrt-s", type=float, default=13000.0)
    ap.add_argument("--mu", type=float, default=173.0)
    ap.add_argument("--out", default="data/lumi_13tev.csv")
    args = ap.parse_args()

    pdf = GridPdf(args.grid, args.mu)
    s = args.sqrt_s ** 2
    name = args.grid.rsplit("/", 1)[-1].replace("_0000.dat", "")
    with open(args.out, "w") as out:
        out.write(f"# sqrt_s={args.sqrt_s:g} source={name}_mu{args.mu:g}\n")
        out.write("# generated by tools/make_lumi_fixture.py "
                  f"<grid> --sqrt-s {args.sqrt_s:g} --mu {args.mu:g}\n")
        out.write("# columns: dL/dM in 1/GeV; qqbar sums u,d,s,c,b and both orderings\n")
        out.write("M_GeV,L_qqbar,L_gg\n")
        for m in mass_grid():
            l_qq, l_gg = luminosities(pdf, m, s)
            out.write(f"{m:.1f},{l_qq:.10e},{l_gg:.10e}\n")


if __name__ == "__main__":
    main()
