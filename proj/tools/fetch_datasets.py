#!/usr/bin/env python3
# Copyright 2026 The ddos-embed Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Download the four benchmark graphs and write them as edge lists.

Output files (in --out, default ./data): books.edges, football.edges,
email-eu.edges, facebook.edges. Nodes are relabeled to 0..n-1 in sorted order
of their original ids; edges are undirected, without self-loops or duplicates.

With --source-dir the raw archives are read from that directory instead of
being downloaded (file names as in SOURCES).
"""

import argparse
import gzip
import io
import pathlib
import sys
import urllib.request
import zipfile

import networkx as nx

SOURCES = {
    "books": ("http://www-personal.umich.edu/~mejn/netdata/polbooks.zip", "polbooks.zip"),
    "football": ("http://www-personal.umich.edu/~mejn/netdata/football.zip", "football.zip"),
    "email-eu": ("https://snap.stanford.edu/data/email-Eu-core.txt.gz", "email-Eu-core.txt.gz"),
    "facebook": ("https://snap.stanford.edu/data/facebook_combined.txt.gz",
                 "facebook_combined.txt.gz"),
}

# Node and edge counts after conversion.
EXPECTED = {
    "books": (105, 441),
    "football": (115, 613),
    "email-eu": (1005, 16064),
    "facebook": (4039, 88234),
}


def fetch(name, source_dir):
    url, filename = SOURCES[name]
    if source_dir is not None:
        return (pathlib.Path(source_dir) / filename).read_bytes()
    with urllib.request.urlopen(url, timeout=60) as response:
        return response.read()


def graph_from_gml_zip(raw, member):
    with zipfile.ZipFile(io.BytesIO(raw)) as zf:
        text = zf.read(member).decode("utf-8", errors="replace")
    # Newman's files carry a free-text header before "graph [" that
    # networkx rejects.
    start = text.find("graph")
    graph = nx.parse_gml(text[start:], label="id")
    return nx.Graph(graph)


def graph_from_snap_gz(raw):
    graph = nx.Graph()
    for line in gzip.decompress(raw).decode().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        u, v = line.split()[:2]
        graph.add_edge(int(u), int(v))
    return graph


def convert(name, raw):
    if name == "books":
        graph = graph_from_gml_zip(raw, "polbooks.gml")
    elif name == "football":
        graph = graph_from_gml_zip(raw, "football.gml")
    else:
        graph = graph_from_snap_gz(raw)
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    index = {node: k for k, node in enumerate(sorted(graph.nodes()))}
    return len(index), sorted(tuple(sorted((index[u], index[v]))) for u, v in graph.edges())


def write_edges(path, edges):
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w") as out:
        for u, v in edges:
            out.write(f"{u} {v}\n")
    tmp.replace(path)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data", help="output directory")
    parser.add_argument("--source-dir", help="read raw archives from here")
    parser.add_argument("datasets", nargs="*", metavar="DATASET",
                        help="any of " + ", ".join(SOURCES) + " (default: all)")
    args = parser.parse_args(argv)
    unknown = [d for d in args.datasets if d not in SOURCES]
    if unknown:
        parser.error("unknown dataset(s): " + ", ".join(unknown))
    args.datasets = args.datasets or list(SOURCES)

    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in args.datasets:
        try:
            n, edges = convert(name, fetch(name, args.source_dir))
        except Exception as exc:  # network, archive or parse failure
            print(f"{name}: {exc}", file=sys.stderr)
            status = 1
            continue
        write_edges(out_dir / f"{name}.edges", edges)
        expected = EXPECTED[name]
        note = "" if (n, len(edges)) == expected else f" (expected {expected[0]} nodes, {expected[1]} edges)"
        print(f"{name}: {n} nodes, {len(edges)} edges{note}")
    return status


if __name__ == "__main__":
    sys.exit(main())
