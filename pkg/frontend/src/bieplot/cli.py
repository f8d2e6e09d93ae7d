import argparse
import sys

from .fields import ParseError
from .render import KINDS, PlotSpec, render


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="plot", description="Render a figure from an error-field CSV."
    )
    ap.add_argument("--kind", required=True, choices=KINDS)
    ap.add_argument("--in", dest="input", required=True, metavar="CSV")
    ap.add_argument("--out", required=True, metavar="PNG")
    ap.add_argument("--vmin", type=float, default=-16.0,
                    help="log10 color/floor bound (default -16)")
    ap.add_argument("--vmax", type=float, default=1.0,
                    help="log10 color bound (default 1)")
    args = ap.parse_args(argv)
    try:
        spec = PlotSpec(args.input, args.kind, args.out,
                        vmin=args.vmin, vmax=args.vmax)
        render(spec)
    except (ParseError, ValueError) as e:
        print("plot error: %s" % e, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
