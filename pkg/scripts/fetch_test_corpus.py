#!/usr/bin/env python3
"""Fetch the standard photographic test images used for full-scale runs.

The bundled synthetic images (checkerboard, gradient, noise) cover the
test suite; this pulls the classic public test photographs for realistic
benchmarks. Needs network access; already-downloaded files are kept, and
failures are reported per file without aborting the rest.

    python3 scripts/fetch_test_corpus.py --dest assets/corpus
"""

from __future__ import annotations

import argparse
import os
import sys
import urllib.error
import urllib.request

# Classic grayscale test photographs from the USC-SIPI image database.
CORPUS = {
    "boat.tiff": "https://sipi.usc.edu/database/download.php?vol=misc&img=boat.512",
    "peppers.tiff": "https://sipi.usc.edu/database/download.php?vol=misc&img=4.2.07",
    "baboon.tiff": "https://sipi.usc.edu/database/download.php?vol=misc&img=4.2.03",
    "airplane.tiff": "https://sipi.usc.edu/database/download.php?vol=misc&img=5.1.11",
}


def fetch(url: str, dest: str, timeout: float) -> None:
    request = urllib.request.Request(url, headers={"User-Agent": "holobench-corpus-fetch"})
    with urllib.request.urlopen(request, timeout=timeout) as response:
        payload = response.read()
    if not payload:
        raise OSError("empty response")
    with open(dest, "wb") as fh:
        fh.write(payload)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default="assets/corpus", help="download directory")
    ap.add_argument("--timeout", type=float, default=30.0)
    ap.add_argument("--strict", action="store_true",
                    help="exit non-zero if any file could not be fetched")
    args = ap.parse_args(argv)

    os.makedirs(args.dest, exist_ok=True)
    missing = []
    for name, url in CORPUS.items():
        path = os.path.join(args.dest, name)
        if os.path.isfile(path) and os.path.getsize(path) > 0:
            print(f"kept    {path}")
            continue
        try:
            fetch(url, path, args.timeout)
            print(f"fetched {path}")
        except (urllib.error.URLError, OSError, ValueError) as exc:
            missing.append(name)
            print(f"skipped {name}: {exc}", file=sys.stderr)

    if missing:
        print(f"{len(missing)} of {len(CORPUS)} files unavailable "
              "(offline?); synthetic images still work everywhere.", file=sys.stderr)
        return 1 if args.strict else 0
    print(f"corpus complete in {args.dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
