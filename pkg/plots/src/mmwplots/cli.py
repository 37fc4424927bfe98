"""Command line: `plots --kind <sweep|reqsnr|linkdist> --in <csv...> --out <file>`.

Exit codes: 0 success, 2 schema/configuration error, 3 runtime error.
"""

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .schema import SchemaError

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_RUNTIME = 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render result CSVs into figures"
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="input result CSV file(s)")
    parser.add_argument("--out", required=True, help="output image (.svg or .png)")
    parser.add_argument("--labels", nargs="*", default=[],
                        help="series labels, one per input (sweep figures)")
    parser.add_argument("--metric", default="bler", choices=("ber", "ser", "bler"),
                        help="y-axis metric for sweep figures")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        inputs=args.inputs,
        output=args.out,
        labels=args.labels,
        metric=args.metric,
        title=args.title,
    )
    try:
        render(spec)
    except (SchemaError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
