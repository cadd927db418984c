#!/usr/bin/env python3
"""Direct quadrature vs contour main terms across heights.

For each height the second-moment (derivative weight) and fourth-moment
(|zeta|^2 |zeta'|^2 weight) integrals are computed both ways; ratios near 1
confirm the main-term formulas at desk scale.
"""

import argparse

from zetalab.dirpoly import DirichletPoly
from zetalab.twisted import (
    CutoffFn,
    ShiftConfig,
    contour_fourth_moment,
    contour_second_moment,
    fourth_moment_scale,
    twisted_direct,
    write_comparison_csv,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--heights", default="2e3,1e4,1e5")
    ap.add_argument("--poly", default="one", choices=("one", "one_plus_2"))
    ap.add_argument("--nodes", type=int, default=64)
    ap.add_argument("--out", default="contour_compare.csv")
    args = ap.parse_args()

    poly = (
        DirichletPoly.one()
        if args.poly == "one"
        else DirichletPoly.from_coeffs({1: 1.0, 2: 1.0})
    )
    phi = CutoffFn()
    rows = []
    for T in (float(x) for x in args.heights.split(",")):
        d2 = twisted_direct(poly, T, "dzeta2", phi)
        c2 = contour_second_moment(poly, T, ShiftConfig.for_height(T, args.nodes), phi)
        print(f"T={T:g} second: direct={d2:.6g} contour={c2:.6g} ratio={d2 / c2:.4f}")
        rows.append(dict(T=repr(T), polynomial_id=args.poly, method="direct",
                         weight="dzeta2", value=repr(d2), nodes="", mesh="", ratio=""))
        rows.append(dict(T=repr(T), polynomial_id=args.poly, method="contour",
                         weight="dzeta2", value=repr(c2), nodes=args.nodes, mesh="",
                         ratio=repr(d2 / c2)))
        if args.poly == "one":
            d4 = twisted_direct(poly, T, "zeta2dzeta2", phi)
            cfg = ShiftConfig.for_height(T, max(32, args.nodes // 2), fourth_moment_scale(T))
            c4 = contour_fourth_moment(poly, T, cfg, phi)
            print(f"T={T:g} fourth: direct={d4:.6g} contour={c4:.6g} ratio={d4 / c4:.4f}")
            rows.append(dict(T=repr(T), polynomial_id=args.poly, method="direct",
                             weight="zeta2dzeta2", value=repr(d4), nodes="", mesh="",
                             ratio=""))
            rows.append(dict(T=repr(T), polynomial_id=args.poly, method="contour",
                             weight="zeta2dzeta2", value=repr(c4),
                             nodes=cfg.nodes_per_circle, mesh="", ratio=repr(d4 / c4)))
    write_comparison_csv(rows, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
