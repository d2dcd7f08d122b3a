#!/usr/bin/env python3
# Copyright 2026 The LaPLACE Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts a BIF network file into the laplace JSON network format.

Usage: bif_to_json.py in.bif out.json [--rename old=new,...]

Rows of each CPT are emitted in mixed-radix order over the node's parents,
first parent varying fastest. The parent order is the order of the node's
incoming edges in the "edges" array.
"""
import argparse
import json
import re
import sys


def parse_bif(text):
    variables = {}
    order = []
    for m in re.finditer(
        r"variable\s+(\S+)\s*\{\s*type\s+discrete\s*\[\s*\d+\s*\]\s*\{([^}]*)\}",
        text,
    ):
        name = m.group(1)
        states = [s.strip() for s in m.group(2).split(",")]
        variables[name] = states
        order.append(name)
    cpts = {}
    for m in re.finditer(r"probability\s*\(\s*([^)]*)\)\s*\{([^}]*)\}", text):
        head = m.group(1)
        body = m.group(2)
        if "|" in head:
            child, parents = head.split("|")
            parents = [p.strip() for p in parents.split(",")]
        else:
            child, parents = head, []
        child = child.strip()
        rows = {}
        for line in body.split(";"):
            line = line.strip()
            if not line:
                continue
            if line.startswith("table"):
                rows[()] = [float(v) for v in line[len("table"):].split(",")]
            else:
                cfg, probs = line.split(")")
                cfg = tuple(s.strip() for s in cfg.strip("( ").split(","))
                rows[cfg] = [float(v) for v in probs.split(",")]
        cpts[child] = (parents, rows)
    return order, variables, cpts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("input")
    ap.add_argument("output")
    ap.add_argument("--rename", default="")
    args = ap.parse_args()
    rename = dict(kv.split("=") for kv in args.rename.split(",") if kv)

    order, variables, cpts = parse_bif(open(args.input).read())
    nm = lambda n: rename.get(n, n)

    out_vars = [{"name": nm(n), "states": variables[n]} for n in order]
    edges = []
    out_cpts = {}
    for n in order:
        parents, rows = cpts[n]
        for p in parents:
            edges.append([nm(p), nm(n)])
        radix = [len(variables[p]) for p in parents]
        total = 1
        for r in radix:
            total *= r
        table = []
        for idx in range(total):
            cfg = []
            rem = idx
            for p, r in zip(parents, radix):
                cfg.append(variables[p][rem % r])
                rem //= r
            row = rows[tuple(cfg)]
            s = sum(row)
            table.append([round(v / s, 12) for v in row])
        out_cpts[nm(n)] = table
    json.dump(
        {"variables": out_vars, "edges": edges, "cpts": out_cpts},
        open(args.output, "w"),
        indent=1,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
