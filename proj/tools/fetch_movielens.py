#!/usr/bin/env python3
"""Materialize the MovieLens-100K files (u.user, u.item, u.data) in a directory.

Tries the GroupLens archive first. When that host is unreachable, falls back
to the copy of ML-100K bundled in the RecBole wheel on PyPI and rewrites it in
the original pipe/tab-delimited layout. The fallback keeps every user
attribute, rating, genre flag and release year; exact release days are not
part of that copy, so dates are written as 01-Jan-<year>.
"""

import argparse
import glob
import io
import os
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

GROUPLENS_URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
FILES = ("u.user", "u.item", "u.data")
GENRES = [
    "unknown", "Action", "Adventure", "Animation", "Children's", "Comedy",
    "Crime", "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror",
    "Musical", "Mystery", "Romance", "Sci-Fi", "Thriller", "War", "Western",
]
# Release years the RecBole copy lost while stripping titles.
YEAR_FIXUPS = {"1412": "1995"}


def have_files(out_dir):
    return all(os.path.isfile(os.path.join(out_dir, f)) for f in FILES)


def from_grouplens(out_dir):
    with urllib.request.urlopen(GROUPLENS_URL, timeout=20) as resp:
        blob = resp.read()
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        for name in FILES:
            with open(os.path.join(out_dir, name), "wb") as fh:
                fh.write(z.read("ml-100k/" + name))


def _rows(text):
    lines = text.decode("utf-8").splitlines()
    return [line.split("\t") for line in lines[1:] if line]


def from_recbole(out_dir):
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
             "recbole", "-d", tmp],
            check=True)
        wheel = glob.glob(os.path.join(tmp, "recbole-*.whl"))[0]
        prefix = "recbole/dataset_example/ml-100k/ml-100k."
        with zipfile.ZipFile(wheel) as z:
            users = _rows(z.read(prefix + "user"))
            items = _rows(z.read(prefix + "item"))
            inter = _rows(z.read(prefix + "inter"))

    users.sort(key=lambda r: int(r[0]))
    with open(os.path.join(out_dir, "u.user"), "w", encoding="latin-1") as fh:
        for uid, age, gender, occ, zipcode in users:
            fh.write(f"{uid}|{age}|{gender}|{occ}|{zipcode}\n")

    items.sort(key=lambda r: int(r[0]))
    with open(os.path.join(out_dir, "u.item"), "w", encoding="latin-1",
              errors="replace") as fh:
        for iid, title, year, classes in items:
            year = YEAR_FIXUPS.get(iid, year)
            tokens = set(classes.split())
            flags = "|".join("1" if g in tokens else "0" for g in GENRES)
            if year.isdigit():
                fh.write(f"{iid}|{title} ({year})|01-Jan-{year}||http://us.imdb.com/|{flags}\n")
            else:
                fh.write(f"{iid}|unknown||||{flags}\n")

    with open(os.path.join(out_dir, "u.data"), "w") as fh:
        for uid, iid, rating, ts in inter:
            fh.write(f"{uid}\t{iid}\t{int(float(rating))}\t{int(float(ts))}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir", nargs="?", default=os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "data", "ml-100k"))
    parser.add_argument("--force", action="store_true")
    args = parser.parse_args()

    out_dir = os.path.abspath(args.out_dir)
    os.makedirs(out_dir, exist_ok=True)
    if have_files(out_dir) and not args.force:
        print(f"ML-100K already present in {out_dir}")
        return 0
    try:
        from_grouplens(out_dir)
        print(f"downloaded ML-100K from GroupLens into {out_dir}")
    except Exception as exc:  # noqa: BLE001
        print(f"GroupLens unavailable ({exc}); using the PyPI RecBole copy",
              file=sys.stderr)
        from_recbole(out_dir)
        print(f"reconstructed ML-100K into {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
