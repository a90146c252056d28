"""CSV readers and writers for the library's value types.

Floats are written with ``repr``: the shortest decimal string that reads back
to the identical double (at most 17 significant digits), so output is
byte-stable and lossless.
"""
import csv
import io
from typing import Iterable, Sequence

import numpy as np

from .coinspace import JointDist
from .freeops import Lemma1Decomposition, StochasticMatrix
from .quoin import Povm, QuoinState


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_rows(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_rows(text: str):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, [row for row in reader if row]


def joint_to_csv(j: JointDist) -> str:
    return write_rows(["i", "j", "p"],
                      ((i, k, j.p[i, k]) for i in range(j.n_a) for k in range(j.n_b)))


def joint_from_csv(text: str) -> JointDist:
    _, rows = read_rows(text)
    idx = [(int(r[0]), int(r[1])) for r in rows]
    na = max(i for i, _ in idx) + 1
    nb = max(k for _, k in idx) + 1
    p = np.zeros((na, nb))
    for (i, k), r in zip(idx, rows):
        p[i, k] = float(r[2])
    return JointDist(p)


def stochastic_to_csv(s: StochasticMatrix) -> str:
    return write_rows(["row", "col", "value"],
                      ((r, c, s.s[r, c]) for r in range(s.n_out) for c in range(s.n_in)))


def stochastic_from_csv(text: str) -> StochasticMatrix:
    _, rows = read_rows(text)
    nr = max(int(r[0]) for r in rows) + 1
    nc = max(int(r[1]) for r in rows) + 1
    s = np.zeros((nr, nc))
    for r in rows:
        s[int(r[0]), int(r[1])] = float(r[2])
    return StochasticMatrix(s)


def decomposition_to_csv(d: Lemma1Decomposition) -> str:
    items = [("alpha", d.alpha)]
    for name, m in (("sa", d.s_a), ("sb", d.s_b)):
        for r in range(2):
            for c in range(2):
                items.append((f"{name}_{r}{c}", m.s[r, c]))
    items.append(("residual", d.residual))
    return write_rows(["key", "value"], items)


def decomposition_from_csv(text: str) -> Lemma1Decomposition:
    _, rows = read_rows(text)
    kv = {k: float(v) for k, v in rows}
    sa = [[kv["sa_00"], kv["sa_01"]], [kv["sa_10"], kv["sa_11"]]]
    sb = [[kv["sb_00"], kv["sb_01"]], [kv["sb_10"], kv["sb_11"]]]
    return Lemma1Decomposition(kv["alpha"], StochasticMatrix(sa), StochasticMatrix(sb), kv["residual"])


def quoin_to_csv(rho: QuoinState) -> str:
    return write_rows(["row", "col", "re", "im"],
                      ((r, c, rho.m[r, c].real, rho.m[r, c].imag)
                       for r in range(4) for c in range(4)))


def quoin_from_csv(text: str) -> QuoinState:
    _, rows = read_rows(text)
    m = np.zeros((4, 4), dtype=np.complex128)
    for r in rows:
        m[int(r[0]), int(r[1])] = complex(float(r[2]), float(r[3]))
    return QuoinState(m)


def povm_to_csv(povm: Povm) -> str:
    return write_rows(["element", "row", "col", "re", "im"],
                      ((k, r, c, e[r, c].real, e[r, c].imag)
                       for k, e in enumerate(povm.elements) for r in range(2) for c in range(2)))


def povm_from_csv(text: str) -> Povm:
    _, rows = read_rows(text)
    n = max(int(r[0]) for r in rows) + 1
    els = np.zeros((n, 2, 2), dtype=np.complex128)
    for r in rows:
        els[int(r[0]), int(r[1]), int(r[2])] = complex(float(r[3]), float(r[4]))
    return Povm(tuple(els))


def sections(**blocks: str) -> str:
    """Concatenate named CSV blocks, each introduced by a ``# name`` line."""
    return "".join(f"# {name}\n{body}" for name, body in blocks.items())


def split_sections(text: str) -> dict:
    out, name, buf = {}, None, []
    for line in text.splitlines(keepends=True):
        if line.startswith("# "):
            if name is not None:
                out[name] = "".join(buf)
            name, buf = line[2:].strip(), []
        else:
            buf.append(line)
    if name is not None:
        out[name] = "".join(buf)
    return out
