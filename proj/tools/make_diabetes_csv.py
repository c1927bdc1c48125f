"""Write the canonical diabetes data (442 cases, 10 predictors) as CSV.

The raw, unstandardized values ship with scikit-learn; this script only
re-serializes them with the column names used throughout the project.
"""
import argparse
import gzip
import os

import sklearn

COLUMNS = ["AGE", "SEX", "BMI", "BP", "S1", "S2", "S3", "S4", "S5", "S6", "Y"]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("out", nargs="?", default="data/diabetes.csv")
    args = parser.parse_args()

    root = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data")
    with gzip.open(os.path.join(root, "diabetes_data_raw.csv.gz"), "rt") as fh:
        rows = [line.split() for line in fh if line.strip()]
    with gzip.open(os.path.join(root, "diabetes_target.csv.gz"), "rt") as fh:
        target = [line.strip() for line in fh if line.strip()]
    assert len(rows) == len(target) == 442

    with open(args.out, "w", encoding="utf-8", newline="\n") as out:
        out.write(",".join(COLUMNS) + "\n")
        for fields, y in zip(rows, target):
            out.write(",".join(fields + ["%g" % float(y)]) + "\n")


if __name__ == "__main__":
    main()
