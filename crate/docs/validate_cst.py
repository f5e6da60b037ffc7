#!/usr/bin/env python3
"""Validate `pcover build` JSON output against cst.schema.json.

Usage: validate_cst.py FILE [FILE ...]   (use - for standard input)

Besides the schema, checks that the nodes form a tree rooted at the single
node without a parent and that depths grow along edges.
"""
import json
import pathlib
import sys

import jsonschema

SCHEMA = pathlib.Path(__file__).with_name("cst.schema.json")


def check(doc):
    jsonschema.validate(doc, json.loads(SCHEMA.read_text()))
    nodes = {v["id"]: v for v in doc["nodes"]}
    if len(nodes) != len(doc["nodes"]):
        raise ValueError("duplicate node ids")
    roots = [v for v in doc["nodes"] if v["parent"] is None]
    if len(roots) != 1 or roots[0]["depth"] != 0:
        raise ValueError("expected exactly one root of depth 0")
    for v in doc["nodes"]:
        p = v["parent"]
        if p is None:
            continue
        if p not in nodes:
            raise ValueError(f"node {v['id']}: unknown parent {p}")
        if nodes[p]["depth"] > v["depth"]:
            raise ValueError(f"node {v['id']}: shallower than its parent")
        if v["depth"] > doc["n"]:
            raise ValueError(f"node {v['id']}: deeper than the input")


def main(paths):
    if not paths:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    status = 0
    for path in paths:
        text = sys.stdin.read() if path == "-" else pathlib.Path(path).read_text()
        try:
            check(json.loads(text))
        except (ValueError, jsonschema.ValidationError) as e:
            print(f"{path}: invalid: {e}", file=sys.stderr)
            status = 1
        else:
            print(f"{path}: ok")
    return status


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
