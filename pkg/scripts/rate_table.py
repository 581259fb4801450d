#!/usr/bin/env python3
"""Print the lossless rate-comparison table with the enhancement ratio.

The last column is virtual_cavity / re_ell: how much smaller the
renormalized emission enhancement is than the virtual-cavity form.
"""

from lfbloch.medium import rate_comparison


def main() -> None:
    print(f"{'n':>4} {'re_ell':>12} {'virtual_cavity':>15} "
          f"{'onsager':>12} {'vc/re_ell':>10}")
    for k in range(11):
        row = rate_comparison(1.0 + k / 10.0)
        print(f"{row.n:>4.1f} {row.re_ell:>12.6f} "
              f"{row.virtual_cavity:>15.6f} {row.onsager:>12.6f} "
              f"{row.virtual_cavity / row.re_ell:>10.6f}")


if __name__ == "__main__":
    main()
